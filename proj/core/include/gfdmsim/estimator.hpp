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

#ifndef GFDMSIM_ESTIMATOR_HPP
#define GFDMSIM_ESTIMATOR_HPP

#include <vector>

#include "gfdmsim/impairments.hpp"
#include "gfdmsim/scalar_search.hpp"

namespace gfdmsim {

/// R_y = (1/N_s) sum_i y_i y_i^H. Throws InputError on an empty frame.
CMatrix sample_covariance(const std::vector<CVector>& y);

struct SubspaceDims {
    int n_signal = 0;
    int q = 0; // noise-subspace dimension
};

/// With IQ imbalance: N_signal = 2 M K_D - sum |I_{u,m}|; without: M K_D.
/// Q = N_r (G - L + 1) - N_signal. Throws ConfigError when Q < 1.
SubspaceDims compute_subspace_dims(const SystemConfig& cfg, const AssignmentPlan& plan, bool iq_present);

/// Q eigenvectors of the Hermitian matrix with the smallest eigenvalues,
/// ascending. Throws NumericalError if the eigensolver fails.
CMatrix noise_subspace(const CMatrix& covariance, int q);

struct SubspaceDecomposition {
    CMatrix covariance;
    RVector eigenvalues; // ascending
    SubspaceDims dims;
    CMatrix noise; // N_r(G-L+1) x Q, column q is gamma_q
};

SubspaceDecomposition decompose(const SystemConfig& cfg, const AssignmentPlan& plan,
                                const std::vector<CVector>& y, bool iq_present = true);

/// Upsilon_q (N_r L x G): row block j carries gamma_q^*(1) ... gamma_q^*(G-L+1)
/// starting at column j. gamma_q^H H = h^T Upsilon_q for any banded H.
CMatrix build_upsilon(const CVector& gamma, int length, int taps, int rx_antennas);

/// R_P(phi) = P_u P_u^H with P_u = [Upsilon_1 E(phi) Psi_u, ..., Upsilon_Q E(phi) Psi_u],
/// built column block by column block.
CMatrix cfo_correlation(double phi, int user, const SubspaceDecomposition& sub, const AssignmentPlan& plan,
                        const SystemConfig& cfg);

/// log det R_P(phi) as the sum of log-eigenvalues floored at 1e-300.
double log_det_cost(const CMatrix& correlation);

/// Direct evaluation of the blind CFO cost at one trial value.
double cfo_cost(double phi, int user, const SubspaceDecomposition& sub, const AssignmentPlan& plan,
                const SystemConfig& cfg);

/// Fast evaluator of R_P(phi) for one user.
///
/// Writing B = Psi_u Psi_u^H and Pi = sum_q gamma_q gamma_q^H, every entry of
/// R_P(phi) is a trigonometric polynomial in phi:
///   R_P(phi) = sum_{d=-(G-1)}^{G-1} exp(j 2 pi phi d / K) C_d,
/// where C_d collects B[a, a-d] against the matching blocks of Pi. The C_d
/// are computed once per frame, after which each trial value costs
/// (2G-1) (N_r L)^2 multiply-adds.
class CfoCostEvaluator {
public:
    CfoCostEvaluator(int user, const SubspaceDecomposition& sub, const AssignmentPlan& plan,
                     const SystemConfig& cfg);

    [[nodiscard]] CMatrix correlation(double phi) const;
    [[nodiscard]] double cost(double phi) const { return log_det_cost(correlation(phi)); }
    [[nodiscard]] int user() const { return user_; }

private:
    int user_;
    int length_;
    int subcarriers_;
    int dim_;
    std::vector<CMatrix> lag_terms_; // index d + G - 1
};

struct CfoEstimate {
    double phi = 0.0;
    double coarse_phi = 0.0;
    double cost = 0.0;
    int fine_evaluations = 0;
};

/// Coarse grid {-0.5 + i delta} up to and including 0.5, then golden/parabolic refinement on
/// (coarse - delta/2, coarse + delta/2) to 1e-7. Returns the best point seen.
CfoEstimate estimate_cfo(const CfoCostEvaluator& evaluator, double delta,
                         const ScalarSearchOptions& fine = {});

CfoEstimate estimate_cfo(int user, const SubspaceDecomposition& sub, const AssignmentPlan& plan,
                         const SystemConfig& cfg, double delta);

/// Conjugate of the unit-norm eigenvector of R_P(phi) with the smallest eigenvalue.
CVector blind_channel(const CMatrix& correlation);

CVector blind_channel(int user, double phi, const SubspaceDecomposition& sub, const AssignmentPlan& plan,
                      const SystemConfig& cfg);

enum class ResourceRole : unsigned char { Data, Pilot, Null };

/// Symbol-1 layout: intersection bins are nulled, the first P_pil remaining
/// positions of each user (in d_{1,u} order) carry known unit-modulus pilots.
struct PilotLayout {
    std::vector<std::vector<ResourceRole>> roles; // [user][position]
    std::vector<std::vector<int>> pilot_positions;
    std::vector<std::vector<cplx>> pilot_values;

    [[nodiscard]] int total_pilots() const;
    [[nodiscard]] int total_nulls() const;
    /// Writes nulls and pilots into symbol-1 payloads, leaving data positions alone.
    void apply(std::vector<CVector>& symbol_one) const;
};

/// Deterministic unit-modulus QPSK pilot value for (user, pilot index).
cplx pilot_value(int user, int index);

/// Throws ConfigError if a user has fewer than P_pil non-null positions.
PilotLayout plan_pilots(const AssignmentPlan& plan, int pilots_per_user);

struct AmbiguityIq {
    cplx a; // c_u alpha_u
    cplx b; // scaled image coefficient
};

/// ZF fit of the per-user scalars from symbol 1: builds Gbar from the blind
/// estimates with null columns removed, r = Gbar^+ y_1, and averages r over
/// the pilots. Throws NumericalError when Gbar loses column rank.
std::vector<AmbiguityIq> estimate_ambiguity_iq(const CVector& y1, const std::vector<double>& phi_hat,
                                               const std::vector<CVector>& h0_hat, const AssignmentPlan& plan,
                                               const PilotLayout& layout, const SystemConfig& cfg);

/// (h0 * a, h0 * b)
std::pair<CVector, CVector> assemble_equivalent_channels(const CVector& h0, cplx a, cplx b);

struct UserEstimate {
    double phi_hat = 0.0;
    double coarse_phi = 0.0;
    int fine_evaluations = 0;
    CVector h0_hat; // unit norm
    cplx a_hat;
    cplx b_hat;
    CVector hI_hat;
    CVector hQ_hat;
};

struct EstimationResult {
    std::vector<UserEstimate> users;
    SubspaceDims dims;
};

struct EstimatorOptions {
    bool iq_present = true;
    ScalarSearchOptions fine{};
};

/// Full semi-blind pipeline: subspace split, per-user CFO and blind CIR, then
/// the joint ambiguity/IQ fit on symbol 1.
EstimationResult run_jcciqe(const SystemConfig& cfg, const AssignmentPlan& plan, const PilotLayout& layout,
                            const std::vector<CVector>& y, const EstimatorOptions& options = {});

} // namespace gfdmsim

#endif // GFDMSIM_ESTIMATOR_HPP
