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

#include "gfdmsim/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <utility>

#include "gfdmsim/linalg.hpp"

namespace gfdmsim {

CMatrix sample_covariance(const std::vector<CVector>& y) {
    if (y.empty()) {
        throw InputError("sample covariance needs at least one received vector");
    }
    const auto dim = y.front().size();
    CMatrix stacked(dim, static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i].size() != dim) {
            throw InputError("received vectors differ in length");
        }
        stacked.col(static_cast<Eigen::Index>(i)) = y[i];
    }
    CMatrix r = stacked * stacked.adjoint() / static_cast<double>(y.size());
    // exact Hermitian symmetry regardless of summation order
    return 0.5 * (r + r.adjoint());
}

SubspaceDims compute_subspace_dims(const SystemConfig& cfg, const AssignmentPlan& plan, bool iq_present) {
    SubspaceDims dims;
    const int resources = cfg.data_resources();
    dims.n_signal = iq_present ? 2 * resources - plan.total_intersections() : resources;
    dims.q = cfg.received_length() - dims.n_signal;
    if (dims.q < 1) {
        throw ConfigError("infeasible configuration: N_r(G-L+1) = " + std::to_string(cfg.received_length()) +
                          " does not exceed N_signal = " + std::to_string(dims.n_signal) +
                          "; add receive antennas");
    }
    return dims;
}

CMatrix noise_subspace(const CMatrix& covariance, int q) {
    if (q < 1 || q > covariance.rows()) {
        throw InputError("noise-subspace dimension out of range");
    }
    return hermitian_eigen(covariance).vectors.leftCols(q);
}

SubspaceDecomposition decompose(const SystemConfig& cfg, const AssignmentPlan& plan,
                                const std::vector<CVector>& y, bool iq_present) {
    SubspaceDecomposition sub;
    sub.dims = compute_subspace_dims(cfg, plan, iq_present);
    sub.covariance = sample_covariance(y);
    if (sub.covariance.rows() != cfg.received_length()) {
        throw InputError("received vectors do not match N_r(G-L+1)");
    }
    auto eig = hermitian_eigen(sub.covariance);
    sub.eigenvalues = std::move(eig.values);
    sub.noise = eig.vectors.leftCols(sub.dims.q);
    return sub;
}

CMatrix build_upsilon(const CVector& gamma, int length, int taps, int rx_antennas) {
    const int kept = length - taps + 1;
    if (gamma.size() != static_cast<Eigen::Index>(kept) * rx_antennas) {
        throw InputError("noise eigenvector length does not match N_r(G-L+1)");
    }
    CMatrix ups = CMatrix::Zero(static_cast<Eigen::Index>(taps) * rx_antennas, length);
    for (int j = 0; j < taps; ++j) {
        for (int r = 0; r < kept; ++r) {
            ups.block(static_cast<Eigen::Index>(j) * rx_antennas, r + j, rx_antennas, 1) =
                gamma.segment(static_cast<Eigen::Index>(r) * rx_antennas, rx_antennas).conjugate();
        }
    }
    return ups;
}

CMatrix cfo_correlation(double phi, int user, const SubspaceDecomposition& sub, const AssignmentPlan& plan,
                        const SystemConfig& cfg) {
    const int G = cfg.cp_symbol_length();
    const CMatrix rotated = cfo_ramp(phi, G, cfg.subcarriers).asDiagonal() * plan.psi(user);
    CMatrix rp = CMatrix::Zero(cfg.cir_length(), cfg.cir_length());
    for (Eigen::Index q = 0; q < sub.noise.cols(); ++q) {
        const CMatrix p = build_upsilon(sub.noise.col(q), G, cfg.channel_taps, cfg.rx_antennas) * rotated;
        rp.noalias() += p * p.adjoint();
    }
    return rp;
}

double log_det_cost(const CMatrix& correlation) {
    const RVector ev = hermitian_eigenvalues(correlation);
    double total = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        total += std::log(std::max(ev[i], 1e-300));
    }
    return total;
}

double cfo_cost(double phi, int user, const SubspaceDecomposition& sub, const AssignmentPlan& plan,
                const SystemConfig& cfg) {
    return log_det_cost(cfo_correlation(phi, user, sub, plan, cfg));
}

CfoCostEvaluator::CfoCostEvaluator(int user, const SubspaceDecomposition& sub, const AssignmentPlan& plan,
                                   const SystemConfig& cfg)
    : user_(user), length_(cfg.cp_symbol_length()), subcarriers_(cfg.subcarriers), dim_(cfg.cir_length()) {
    const int G = length_;
    const int L = cfg.channel_taps;
    const int nr = cfg.rx_antennas;
    const int kept = cfg.kept_samples();

    const CMatrix& psi = plan.psi(user);
    const CMatrix b = psi * psi.adjoint();
    const CMatrix proj = sub.noise * sub.noise.adjoint();

    lag_terms_.assign(2 * G - 1, CMatrix::Zero(dim_, dim_));
    for (int j = 0; j < L; ++j) {
        for (int jp = 0; jp < L; ++jp) {
            for (int x = 0; x < kept; ++x) {
                for (int y = 0; y < kept; ++y) {
                    const cplx weight = b(x + j, y + jp);
                    if (weight == cplx{}) {
                        continue;
                    }
                    CMatrix& c = lag_terms_[(x + j) - (y + jp) + G - 1];
                    // entry ((j,n),(j',n')) += B[x+j, y+j'] * Pi[(y,n'), (x,n)]
                    c.block(j * nr, jp * nr, nr, nr) +=
                        weight * proj.block(static_cast<Eigen::Index>(y) * nr, static_cast<Eigen::Index>(x) * nr,
                                            nr, nr)
                                     .transpose();
                }
            }
        }
    }
}

CMatrix CfoCostEvaluator::correlation(double phi) const {
    CMatrix rp = CMatrix::Zero(dim_, dim_);
    const double omega = 2.0 * kPi * phi / subcarriers_;
    for (int d = -(length_ - 1); d <= length_ - 1; ++d) {
        rp += std::polar(1.0, omega * d) * lag_terms_[d + length_ - 1];
    }
    return 0.5 * (rp + rp.adjoint());
}

CfoEstimate estimate_cfo(const CfoCostEvaluator& evaluator, double delta, const ScalarSearchOptions& fine) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ConfigError("CFO search step must lie in (0, 1)");
    }
    CfoEstimate est;
    est.cost = std::numeric_limits<double>::infinity();
    for (int i = 0;; ++i) {
        const double phi = -0.5 + i * delta;
        // the right end is kept so that offsets just below 0.5 sit inside a fine window
        if (phi > 0.5 + 1e-12) {
            break;
        }
        const double c = evaluator.cost(phi);
        if (c < est.cost) {
            est.cost = c;
            est.coarse_phi = phi;
        }
    }
    est.phi = est.coarse_phi;

    const auto refined = minimize_scalar([&](double phi) { return evaluator.cost(phi); },
                                         est.coarse_phi - delta / 2.0, est.coarse_phi + delta / 2.0, fine);
    est.fine_evaluations = refined.evaluations;
    if (refined.fx <= est.cost) {
        est.phi = refined.x;
        est.cost = refined.fx;
    }
    return est;
}

CfoEstimate estimate_cfo(int user, const SubspaceDecomposition& sub, const AssignmentPlan& plan,
                         const SystemConfig& cfg, double delta) {
    return estimate_cfo(CfoCostEvaluator(user, sub, plan, cfg), delta);
}

CVector blind_channel(const CMatrix& correlation) {
    const auto eig = hermitian_eigen(correlation);
    CVector h = eig.vectors.col(0).conjugate();
    return h / h.norm();
}

CVector blind_channel(int user, double phi, const SubspaceDecomposition& sub, const AssignmentPlan& plan,
                      const SystemConfig& cfg) {
    return blind_channel(cfo_correlation(phi, user, sub, plan, cfg));
}

int PilotLayout::total_pilots() const {
    int total = 0;
    for (const auto& p : pilot_positions) {
        total += static_cast<int>(p.size());
    }
    return total;
}

int PilotLayout::total_nulls() const {
    int total = 0;
    for (const auto& r : roles) {
        total += static_cast<int>(std::count(r.begin(), r.end(), ResourceRole::Null));
    }
    return total;
}

void PilotLayout::apply(std::vector<CVector>& symbol_one) const {
    if (symbol_one.size() != roles.size()) {
        throw InputError("pilot layout and symbol payload disagree on the user count");
    }
    for (std::size_t u = 0; u < roles.size(); ++u) {
        if (symbol_one[u].size() != static_cast<Eigen::Index>(roles[u].size())) {
            throw InputError("pilot layout and symbol payload disagree on N_u");
        }
        for (std::size_t p = 0; p < roles[u].size(); ++p) {
            if (roles[u][p] == ResourceRole::Null) {
                symbol_one[u][static_cast<Eigen::Index>(p)] = 0.0;
            }
        }
        for (std::size_t i = 0; i < pilot_positions[u].size(); ++i) {
            symbol_one[u][pilot_positions[u][i]] = pilot_values[u][i];
        }
    }
}

cplx pilot_value(int user, int index) {
    static const cplx kPoints[4] = {{1.0, 1.0}, {-1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}};
    return kPoints[(user + index) % 4] / std::sqrt(2.0);
}

PilotLayout plan_pilots(const AssignmentPlan& plan, int pilots_per_user) {
    if (pilots_per_user < 1) {
        throw ConfigError("P_pil must be >= 1");
    }
    PilotLayout layout;
    const int nu = plan.resources_per_user();
    layout.roles.resize(plan.users());
    layout.pilot_positions.resize(plan.users());
    layout.pilot_values.resize(plan.users());
    for (int u = 0; u < plan.users(); ++u) {
        auto& roles = layout.roles[u];
        roles.assign(nu, ResourceRole::Data);
        for (int p = 0; p < nu; ++p) {
            if (plan.on_intersection(u, p)) {
                roles[p] = ResourceRole::Null;
            } else if (static_cast<int>(layout.pilot_positions[u].size()) < pilots_per_user) {
                roles[p] = ResourceRole::Pilot;
                layout.pilot_values[u].push_back(pilot_value(u, static_cast<int>(layout.pilot_positions[u].size())));
                layout.pilot_positions[u].push_back(p);
            }
        }
        if (static_cast<int>(layout.pilot_positions[u].size()) < pilots_per_user) {
            throw ConfigError("user " + std::to_string(u) + " has only " +
                              std::to_string(layout.pilot_positions[u].size()) +
                              " non-null resources in symbol 1, need P_pil = " + std::to_string(pilots_per_user));
        }
    }
    return layout;
}

std::vector<AmbiguityIq> estimate_ambiguity_iq(const CVector& y1, const std::vector<double>& phi_hat,
                                               const std::vector<CVector>& h0_hat, const AssignmentPlan& plan,
                                               const PilotLayout& layout, const SystemConfig& cfg) {
    const int users = plan.users();
    if (static_cast<int>(phi_hat.size()) != users || static_cast<int>(h0_hat.size()) != users ||
        static_cast<int>(layout.roles.size()) != users) {
        throw InputError("need one CFO, one blind CIR and one pilot layout per user");
    }

    // reduced position of every kept entry, per user
    std::vector<std::vector<int>> kept(users);
    Eigen::Index columns = 0;
    for (int u = 0; u < users; ++u) {
        for (std::size_t p = 0; p < layout.roles[u].size(); ++p) {
            if (layout.roles[u][p] != ResourceRole::Null) {
                kept[u].push_back(static_cast<int>(p));
            }
        }
        columns += 2 * static_cast<Eigen::Index>(kept[u].size());
    }

    CMatrix gbar(cfg.received_length(), columns);
    std::vector<Eigen::Index> offsets(users);
    Eigen::Index col = 0;
    for (int u = 0; u < users; ++u) {
        offsets[u] = col;
        const CMatrix gi = effective_matrix(h0_hat[u], phi_hat[u], plan.psi(u), cfg.subcarriers,
                                            cfg.channel_taps, cfg.rx_antennas, false);
        const CMatrix gq = effective_matrix(h0_hat[u], phi_hat[u], plan.psi(u), cfg.subcarriers,
                                            cfg.channel_taps, cfg.rx_antennas, true);
        const auto n = static_cast<Eigen::Index>(kept[u].size());
        for (Eigen::Index i = 0; i < n; ++i) {
            gbar.col(col + i) = gi.col(kept[u][i]);
            gbar.col(col + n + i) = gq.col(kept[u][i]);
        }
        col += 2 * n;
    }

    const auto pinv = pseudo_inverse(gbar);
    if (!pinv.full_column_rank(columns)) {
        throw NumericalError("null-reduced ZF matrix is rank deficient (rank " + std::to_string(pinv.rank) +
                             " of " + std::to_string(columns) + "); the pilot/null plan does not resolve it");
    }
    const CVector r = pinv.matrix * y1;

    std::vector<AmbiguityIq> out(users);
    for (int u = 0; u < users; ++u) {
        const auto n = static_cast<Eigen::Index>(kept[u].size());
        cplx a{};
        cplx b{};
        const auto& positions = layout.pilot_positions[u];
        for (std::size_t i = 0; i < positions.size(); ++i) {
            const auto reduced = std::lower_bound(kept[u].begin(), kept[u].end(), positions[i]) - kept[u].begin();
            const cplx pilot = layout.pilot_values[u][i];
            a += r[offsets[u] + reduced] / pilot;
            b += r[offsets[u] + n + reduced] / std::conj(pilot);
        }
        out[u].a = a / static_cast<double>(positions.size());
        out[u].b = b / static_cast<double>(positions.size());
    }
    return out;
}

std::pair<CVector, CVector> assemble_equivalent_channels(const CVector& h0, cplx a, cplx b) {
    return {h0 * a, h0 * b};
}

EstimationResult run_jcciqe(const SystemConfig& cfg, const AssignmentPlan& plan, const PilotLayout& layout,
                            const std::vector<CVector>& y, const EstimatorOptions& options) {
    const auto sub = decompose(cfg, plan, y, options.iq_present);

    EstimationResult result;
    result.dims = sub.dims;
    result.users.resize(plan.users());
    std::vector<double> phis(plan.users());
    std::vector<CVector> h0s(plan.users());
    for (int u = 0; u < plan.users(); ++u) {
        const CfoCostEvaluator evaluator(u, sub, plan, cfg);
        const auto est = estimate_cfo(evaluator, cfg.search_step, options.fine);
        auto& out = result.users[u];
        out.phi_hat = est.phi;
        out.coarse_phi = est.coarse_phi;
        out.fine_evaluations = est.fine_evaluations;
        out.h0_hat = blind_channel(evaluator.correlation(est.phi));
        phis[u] = out.phi_hat;
        h0s[u] = out.h0_hat;
    }

    const auto fits = estimate_ambiguity_iq(y.front(), phis, h0s, plan, layout, cfg);
    for (int u = 0; u < plan.users(); ++u) {
        auto& out = result.users[u];
        out.a_hat = fits[u].a;
        out.b_hat = fits[u].b;
        std::tie(out.hI_hat, out.hQ_hat) = assemble_equivalent_channels(out.h0_hat, out.a_hat, out.b_hat);
    }
    return result;
}

} // namespace gfdmsim
