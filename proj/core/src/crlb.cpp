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

#include "gfdmsim/crlb.hpp"

#include <cstdio>
#include <limits>
#include <string>

namespace gfdmsim {

namespace {

constexpr double kSingularCondition = 1e13;

// (dH/dh_k) x for stacked index k = j N_r + n: row r N_r + n picks x[r + j].
CVector tap_derivative(const CVector& x, int k, int kept, int rx_antennas) {
    const int j = k / rx_antennas;
    const int n = k % rx_antennas;
    CVector out = CVector::Zero(static_cast<Eigen::Index>(kept) * rx_antennas);
    for (int r = 0; r < kept; ++r) {
        out[static_cast<Eigen::Index>(r) * rx_antennas + n] = x[r + j];
    }
    return out;
}

void check_truth(int symbol, const FrameTruth& truth, const AssignmentPlan& plan) {
    if (symbol < 0 || symbol >= static_cast<int>(truth.data.size())) {
        throw InputError("symbol index out of range");
    }
    if (static_cast<int>(truth.users.size()) != plan.users() ||
        static_cast<int>(truth.data[symbol].size()) != plan.users()) {
        throw InputError("frame truth does not cover every user");
    }
}

} // namespace

FisherLayout FisherLayout::from(const SystemConfig& cfg) {
    return {cfg.users, cfg.cir_length() - 1, cfg.data_resources()};
}

CMatrix fisher_jacobian(int symbol, const FrameTruth& truth, const AssignmentPlan& plan, const SystemConfig& cfg) {
    check_truth(symbol, truth, plan);
    const auto layout = FisherLayout::from(cfg);
    const int G = cfg.cp_symbol_length();
    const int L = cfg.channel_taps;
    const int nr = cfg.rx_antennas;
    const int kept = cfg.kept_samples();
    const int nu = plan.resources_per_user();

    CMatrix jac = CMatrix::Zero(cfg.received_length(), layout.size());
    RVector ramp_index(G);
    for (int g = 0; g < G; ++g) {
        ramp_index[g] = g;
    }
    const double scale = 2.0 * kPi / cfg.subcarriers;

    for (int u = 0; u < plan.users(); ++u) {
        const auto& imp = truth.users[u];
        const CVector& d = truth.data[symbol][u];
        const CVector hi = imp.equivalent_source();
        const CVector hq = imp.equivalent_image();
        const CVector ramp = cfo_ramp(imp.phi, G, cfg.subcarriers);
        const CMatrix& psi = plan.psi(u);

        const CVector src = ramp.cwiseProduct(psi * d);                          // E Psi d
        const CVector img = ramp.cwiseProduct(psi.conjugate() * d.conjugate());  // E Psi* d*

        const CVector p = scale * (apply_channel(hi, CVector(ramp_index.cast<cplx>().cwiseProduct(src)), L, nr) +
                                   apply_channel(hq, CVector(ramp_index.cast<cplx>().cwiseProduct(img)), L, nr));
        jac.col(layout.phi(u)) = kJ * p;

        for (int k = 0; k < layout.taps; ++k) {
            const CVector q = tap_derivative(src, k, kept, nr);
            const CVector s = tap_derivative(img, k, kept, nr);
            jac.col(layout.re_hi(u, k)) = q;
            jac.col(layout.im_hi(u, k)) = kJ * q;
            jac.col(layout.re_hq(u, k)) = s;
            jac.col(layout.im_hq(u, k)) = kJ * s;
        }

        const CMatrix gi = effective_matrix(hi, imp.phi, psi, cfg.subcarriers, L, nr, false);
        const CMatrix gq = effective_matrix(hq, imp.phi, psi, cfg.subcarriers, L, nr, true);
        jac.middleCols(layout.re_d(u * nu), nu) = gi + gq;
        jac.middleCols(layout.im_d(u * nu), nu) = kJ * (gi - gq);
    }
    return jac;
}

RMatrix fim_per_symbol(int symbol, const FrameTruth& truth, const AssignmentPlan& plan, const SystemConfig& cfg,
                       double sigma2) {
    if (!(sigma2 > 0.0)) {
        throw InputError("Fisher information needs a positive noise variance");
    }
    const CMatrix jac = fisher_jacobian(symbol, truth, plan, cfg);
    return (2.0 / sigma2) * (jac.adjoint() * jac).real();
}

RMatrix unscaled_frame_fim(const FrameTruth& truth, const AssignmentPlan& plan, const SystemConfig& cfg) {
    const auto n = FisherLayout::from(cfg).size();
    CMatrix acc = CMatrix::Zero(n, n);
    for (int i = 0; i < static_cast<int>(truth.data.size()); ++i) {
        const CMatrix jac = fisher_jacobian(i, truth, plan, cfg);
        acc.selfadjointView<Eigen::Lower>().rankUpdate(jac.adjoint());
    }
    CMatrix full = acc.selfadjointView<Eigen::Lower>();
    return 2.0 * full.real();
}

CrlbResult crlb_cfo(const FrameTruth& truth, const AssignmentPlan& plan, const SystemConfig& cfg, double sigma2) {
    if (sigma2 < 0.0) {
        throw InputError("noise variance must be non-negative");
    }
    CrlbResult out;
    out.per_user = RVector::Zero(plan.users());
    const RMatrix fim = unscaled_frame_fim(truth, plan, cfg);

    const Eigen::BDCSVD<RMatrix> svd(fim, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sv = svd.singularValues();
    out.condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
    if (!(out.condition < kSingularCondition)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", out.condition);
        throw NumericalError(std::string("Fisher information matrix is singular (condition ") + buf + ")");
    }
    if (sigma2 == 0.0) {
        return out;
    }

    const RMatrix unit = RMatrix::Identity(fim.rows(), plan.users());
    const RMatrix cols = svd.solve(unit);
    for (int u = 0; u < plan.users(); ++u) {
        out.per_user[u] = sigma2 * cols(u, u);
    }
    out.crlb = out.per_user.mean();
    return out;
}

} // namespace gfdmsim
