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

#ifndef GFDMSIM_IMPAIRMENTS_HPP
#define GFDMSIM_IMPAIRMENTS_HPP

#include <vector>

#include "gfdmsim/assignment.hpp"

namespace gfdmsim {

struct IqParams {
    cplx alpha;
    cplx beta;
};

/// alpha = (1 + eps e^{j theta}) / 2, beta = (1 - eps e^{j theta}) / 2.
IqParams iq_params(double epsilon, double theta);

/// Ground truth for one user.
struct UserImpairment {
    double phi = 0.0;     // CFO, fraction of the subcarrier spacing
    double epsilon = 1.0; // amplitude mismatch
    double theta = 0.0;   // phase mismatch, radians
    cplx alpha{1.0, 0.0};
    cplx beta{0.0, 0.0};
    CMatrix hbar; // N_r x L raw CIR, column l is tap l+1
    CVector h;    // CFO-included CIR stacked as [h(L); ...; h(1)], length N_r*L

    /// h * alpha
    [[nodiscard]] CVector equivalent_source() const { return h * alpha; }
    /// h * beta
    [[nodiscard]] CVector equivalent_image() const { return h * beta; }
};

/// Builds a consistent impairment record (derives alpha, beta and h).
UserImpairment make_impairment(double phi, double epsilon, double theta, CMatrix hbar, int subcarriers);

/// Exponential power-delay profile p[l] ~ exp(-l / rms), l = 0..L-1, summing to one.
RVector exponential_delay_profile(int taps, double rms_delay_spread);

/// Rayleigh taps with the exponential profile, independent per antenna.
CMatrix draw_channel(int taps, double rms_delay_spread, int rx_antennas, Rng& rng);

/// Rotates tap l (1-based) by exp(j 2 pi phi l / K) and stacks [h(L); ...; h(1)].
CVector cfo_included_cir(const CMatrix& hbar, double phi, int subcarriers);

/// Diagonal of E(phi): exp(j 2 pi phi g / K), g = 0..G-1.
CVector cfo_ramp(double phi, int length, int subcarriers);

/// Dense E(phi) for callers that need the matrix itself.
CMatrix build_cfo_matrix(double phi, int length, int subcarriers);

/// Banded N_r(G-L+1) x G matrix: row block r carries [h(L) ... h(1)] starting
/// at column r, antenna-interleaved rows.
CMatrix build_channel_matrix(const CVector& h, int length, int taps, int rx_antennas);

/// H x for a stacked CIR without forming H. x has length G.
CVector apply_channel(const CVector& h, const CVector& x, int taps, int rx_antennas);

/// H X column by column.
CMatrix apply_channel(const CVector& h, const CMatrix& x, int taps, int rx_antennas);

/// G_{I,u} = H_u E(phi_u) Psi_u (conjugate_psi = false) or G_{Q,u} = H_u E Psi_u^*.
CMatrix effective_matrix(const CVector& h, double phi, const CMatrix& psi, int subcarriers, int taps,
                         int rx_antennas, bool conjugate_psi);

struct FrameTruth {
    std::vector<UserImpairment> users;
    /// data[i][u], length N_u each
    std::vector<std::vector<CVector>> data;
    /// Mean |y|^2 per complex sample before noise.
    double signal_power = 0.0;
};

struct ReceivedFrame {
    std::vector<CVector> y; // N_s vectors of length N_r(G-L+1)
    double sigma2 = 0.0;
    FrameTruth truth;
};

/// Noise-free received vector for one symbol:
/// sum_u H_u E(phi_u) (alpha_u Psi_u d_u + beta_u (Psi_u d_u)^*).
CVector received_symbol(const SystemConfig& cfg, const AssignmentPlan& plan,
                        const std::vector<UserImpairment>& users, const std::vector<CVector>& data);

/// Builds every y_i and adds circular Gaussian noise of variance sigma2 per
/// complex entry. The truth record keeps the impairments, the data and the
/// noise-free signal power.
ReceivedFrame synthesize_received(const SystemConfig& cfg, const AssignmentPlan& plan,
                                  std::vector<UserImpairment> users, std::vector<std::vector<CVector>> data,
                                  double sigma2, Rng& rng);

/// Adds circular complex Gaussian noise of variance sigma2 to every y entry.
void add_noise(ReceivedFrame& frame, double sigma2, Rng& rng);

} // namespace gfdmsim

#endif // GFDMSIM_IMPAIRMENTS_HPP
