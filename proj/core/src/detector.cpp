// SPDX-License-Identifier: Apache-2.0
//
// gfdmsim: semi-blind multiuser SIMO GFDM link simulation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "gfdmsim/detector.hpp"

#include <cmath>
#include <string>

#include "gfdmsim/linalg.hpp"

namespace gfdmsim {

namespace {

DetectionOperators assemble(const std::vector<CVector>& source, const std::vector<CVector>& image,
                            const std::vector<double>& phi, const AssignmentPlan& plan, const SystemConfig& cfg) {
    const int users = plan.users();
    const Eigen::Index cols = static_cast<Eigen::Index>(users) * plan.resources_per_user();
    DetectionOperators ops{CMatrix(cfg.received_length(), cols), CMatrix(cfg.received_length(), cols)};
    Eigen::Index offset = 0;
    for (int u = 0; u < users; ++u) {
        const Eigen::Index n = plan.resources_per_user();
        ops.D.middleCols(offset, n) = effective_matrix(source[u], phi[u], plan.psi(u), cfg.subcarriers,
                                                       cfg.channel_taps, cfg.rx_antennas, false);
        ops.F.middleCols(offset, n) = effective_matrix(image[u], phi[u], plan.psi(u), cfg.subcarriers,
                                                       cfg.channel_taps, cfg.rx_antennas, true);
        offset += n;
    }
    return ops;
}

} // namespace

DetectionOperators build_detection_operators(const EstimationResult& result, const AssignmentPlan& plan,
                                             const SystemConfig& cfg) {
    if (static_cast<int>(result.users.size()) != plan.users()) {
        throw InputError("estimation result does not cover every user");
    }
    std::vector<CVector> source;
    std::vector<CVector> image;
    std::vector<double> phi;
    for (const auto& u : result.users) {
        source.push_back(u.hI_hat);
        image.push_back(u.hQ_hat);
        phi.push_back(u.phi_hat);
    }
    return assemble(source, image, phi, plan, cfg);
}

DetectionOperators build_genie_operators(const std::vector<UserImpairment>& users, const AssignmentPlan& plan,
                                         const SystemConfig& cfg) {
    if (static_cast<int>(users.size()) != plan.users()) {
        throw InputError("need one impairment record per user");
    }
    std::vector<CVector> source;
    std::vector<CVector> image;
    std::vector<double> phi;
    for (const auto& u : users) {
        source.push_back(u.equivalent_source());
        image.push_back(u.equivalent_image());
        phi.push_back(u.phi);
    }
    return assemble(source, image, phi, plan, cfg);
}

StackedZfDetector::StackedZfDetector(const DetectionOperators& ops) : columns_(ops.D.cols()) {
    if (ops.D.rows() != ops.F.rows() || ops.D.cols() != ops.F.cols()) {
        throw InputError("D and F must have the same shape");
    }
    const Eigen::Index rows = ops.D.rows();
    CMatrix stacked(2 * rows, 2 * columns_);
    stacked << ops.D, ops.F, ops.F.conjugate(), ops.D.conjugate();
    auto pinv = pseudo_inverse(stacked);
    rank_ = pinv.rank;
    condition_ = pinv.condition;
    full_rank_ = pinv.full_column_rank(2 * columns_);
    pinv_ = std::move(pinv.matrix);
}

std::pair<CVector, CVector> StackedZfDetector::detect_branches(const CVector& y) const {
    if (!full_rank_) {
        throw NumericalError("stacked detection operator is rank deficient (rank " + std::to_string(rank_) +
                             " of " + std::to_string(2 * columns_) + ")");
    }
    if (2 * y.size() != pinv_.cols()) {
        throw InputError("received vector length does not match the detection operators");
    }
    CVector stacked(2 * y.size());
    stacked << y, y.conjugate();
    const CVector sol = pinv_ * stacked;
    return {sol.head(columns_), sol.tail(columns_)};
}

CVector StackedZfDetector::detect(const CVector& y) const {
    const auto [di, dq] = detect_branches(y);
    return (di + dq.conjugate()) / 2.0;
}

CVector detect_symbol(const CVector& y, const DetectionOperators& ops) {
    return StackedZfDetector(ops).detect(y);
}

CVector qpsk_map(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 2 != 0) {
        throw InputError("QPSK mapping needs an even bit count");
    }
    const double a = 1.0 / std::sqrt(2.0);
    CVector out(static_cast<Eigen::Index>(bits.size() / 2));
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const double re = bits[2 * i] != 0 ? -a : a;
        const double im = bits[2 * i + 1] != 0 ? -a : a;
        out[i] = cplx(re, im);
    }
    return out;
}

std::vector<std::uint8_t> qpsk_demap(const CVector& symbols) {
    std::vector<std::uint8_t> bits;
    bits.reserve(2 * static_cast<std::size_t>(symbols.size()));
    for (Eigen::Index i = 0; i < symbols.size(); ++i) {
        bits.push_back(symbols[i].real() < 0.0 ? 1 : 0);
        bits.push_back(symbols[i].imag() < 0.0 ? 1 : 0);
    }
    return bits;
}

} // namespace gfdmsim
