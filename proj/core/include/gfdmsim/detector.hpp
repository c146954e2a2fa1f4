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

#ifndef GFDMSIM_DETECTOR_HPP
#define GFDMSIM_DETECTOR_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "gfdmsim/estimator.hpp"

namespace gfdmsim {

/// D = [D_1 ... D_U] and F = [F_1 ... F_U], one column per resource element.
struct DetectionOperators {
    CMatrix D;
    CMatrix F;
};

DetectionOperators build_detection_operators(const EstimationResult& result, const AssignmentPlan& plan,
                                             const SystemConfig& cfg);

/// Operators from the true impairments: alpha_u G_I,u and beta_u G_Q,u.
DetectionOperators build_genie_operators(const std::vector<UserImpairment>& users, const AssignmentPlan& plan,
                                         const SystemConfig& cfg);

/// Zero-forcing on the stacked model [y; y*] = [[D, F], [F*, D*]] [d; d*].
/// The pseudoinverse is formed once and reused for every symbol of a frame.
class StackedZfDetector {
public:
    explicit StackedZfDetector(const DetectionOperators& ops);

    [[nodiscard]] bool full_rank() const { return full_rank_; }
    [[nodiscard]] Eigen::Index rank() const { return rank_; }
    [[nodiscard]] double condition() const { return condition_; }
    [[nodiscard]] Eigen::Index symbol_length() const { return columns_; }

    /// Both halves of the stacked solution, before combining.
    /// Throws NumericalError when the stacked operator is rank deficient.
    [[nodiscard]] std::pair<CVector, CVector> detect_branches(const CVector& y) const;

    /// (d_I + conj(d_Q)) / 2
    [[nodiscard]] CVector detect(const CVector& y) const;

private:
    CMatrix pinv_;
    Eigen::Index columns_ = 0;
    Eigen::Index rank_ = 0;
    double condition_ = 0.0;
    bool full_rank_ = false;
};

CVector detect_symbol(const CVector& y, const DetectionOperators& ops);

/// Gray QPSK: the first bit picks the sign of the real part, the second the
/// imaginary part; 0 maps to +. Bit count must be even.
CVector qpsk_map(const std::vector<std::uint8_t>& bits);

std::vector<std::uint8_t> qpsk_demap(const CVector& symbols);

} // namespace gfdmsim

#endif // GFDMSIM_DETECTOR_HPP
