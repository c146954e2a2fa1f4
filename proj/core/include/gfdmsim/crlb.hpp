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

#ifndef GFDMSIM_CRLB_HPP
#define GFDMSIM_CRLB_HPP

#include "gfdmsim/impairments.hpp"

namespace gfdmsim {

/// Offsets of the real parameter blocks:
/// [phi (U); Re h_I; Im h_I; Re h_Q; Im h_Q; Re d; Im d].
/// Each h block holds U * (N_r L - 1) entries; the last stacked element of
/// every equivalent CIR is treated as known and left out.
struct FisherLayout {
    int users = 0;
    int taps = 0; // N_r L - 1 per user and branch
    int data = 0; // M K_D

    static FisherLayout from(const SystemConfig& cfg);

    [[nodiscard]] int phi(int u) const { return u; }
    [[nodiscard]] int re_hi(int u, int k) const { return users + u * taps + k; }
    [[nodiscard]] int im_hi(int u, int k) const { return users + (users + u) * taps + k; }
    [[nodiscard]] int re_hq(int u, int k) const { return users + (2 * users + u) * taps + k; }
    [[nodiscard]] int im_hq(int u, int k) const { return users + (3 * users + u) * taps + k; }
    [[nodiscard]] int re_d(int p) const { return users + 4 * users * taps + p; }
    [[nodiscard]] int im_d(int p) const { return users + 4 * users * taps + data + p; }
    [[nodiscard]] int size() const { return users + 4 * users * taps + 2 * data; }
};

/// Complex Jacobian of the noise-free received vector of symbol i with respect
/// to the real parameters in FisherLayout order.
CMatrix fisher_jacobian(int symbol, const FrameTruth& truth, const AssignmentPlan& plan, const SystemConfig& cfg);

/// (2 / sigma2) Re(J^H J) for one symbol.
RMatrix fim_per_symbol(int symbol, const FrameTruth& truth, const AssignmentPlan& plan, const SystemConfig& cfg,
                       double sigma2);

/// Sum of the per-symbol FIMs over the frame at unit noise variance,
/// 2 Re(sum_i J_i^H J_i). The FIM at sigma2 is this matrix divided by sigma2.
RMatrix unscaled_frame_fim(const FrameTruth& truth, const AssignmentPlan& plan, const SystemConfig& cfg);

struct CrlbResult {
    double crlb = 0.0;                  // mean of the U CFO entries
    RVector per_user;                   // CFO diagonal entries of the inverse FIM
    double condition = 0.0;             // of the unscaled frame FIM
};

/// CFO bound averaged over users. Returns 0 when sigma2 is 0.
/// Throws NumericalError, quoting the condition number, if the FIM is singular.
CrlbResult crlb_cfo(const FrameTruth& truth, const AssignmentPlan& plan, const SystemConfig& cfg, double sigma2);

} // namespace gfdmsim

#endif // GFDMSIM_CRLB_HPP
