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

#ifndef GFDMSIM_TEST_SUPPORT_HPP
#define GFDMSIM_TEST_SUPPORT_HPP

#ifdef GFDMSIM_CATCH2_AMALGAMATED
#include "catch_amalgamated.hpp"
#else
#include <catch2/catch_all.hpp>
#endif

#include <cmath>
#include <limits>
#include <random>

#include "gfdmsim/harness.hpp"
#include "gfdmsim/selftest.hpp"

namespace gfdmsim::test {

inline CVector random_cvector(Eigen::Index n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v[i] = cplx(re, im);
    }
    return v;
}

inline CMatrix random_cmatrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    CMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        m.col(c) = random_cvector(rows, rng);
    }
    return m;
}

inline double relative_error(const CMatrix& got, const CMatrix& want) {
    const double scale = want.norm();
    return scale == 0.0 ? got.norm() : (got - want).norm() / scale;
}

/// Noise-free or noisy frame on a campaign configuration, seeded like trial 0.
struct Instance {
    CampaignContext ctx;
    ReceivedFrame frame;

    [[nodiscard]] const SystemConfig& sys() const { return ctx.config.system; }
    [[nodiscard]] const AssignmentPlan& plan() const { return ctx.plan; }
};

inline Instance make_instance(const CampaignConfig& cfg, double snr_db, std::uint64_t seed) {
    Instance inst{prepare_campaign(cfg), {}};
    inst.frame = draw_trial_frame(inst.ctx, snr_db, seed);
    return inst;
}

inline Instance small_instance(std::uint64_t seed = 7, double snr_db = std::numeric_limits<double>::infinity()) {
    return make_instance(small_reference_config(), snr_db, seed);
}

/// Straight-line evaluation of the received model for one symbol, built from
/// dense matrices without the library's channel or CFO helpers.
inline CVector dense_received(const SystemConfig& sys, const AssignmentPlan& plan,
                              const std::vector<UserImpairment>& users, const std::vector<CVector>& data) {
    const int G = sys.cp_symbol_length();
    const int L = sys.channel_taps;
    const int nr = sys.rx_antennas;
    const int kept = G - L + 1;
    CVector y = CVector::Zero(static_cast<Eigen::Index>(kept) * nr);
    for (int u = 0; u < plan.users(); ++u) {
        const auto& imp = users[u];
        const CVector s = plan.psi(u) * data[u];
        CVector x(G);
        for (int g = 0; g < G; ++g) {
            const cplx ramp = std::exp(cplx(0.0, 2.0 * kPi * imp.phi * g / sys.subcarriers));
            x[g] = ramp * (imp.alpha * s[g] + imp.beta * std::conj(s[g]));
        }
        // linear convolution with the raw taps, keeping samples L-1 .. G-1
        for (int r = 0; r < kept; ++r) {
            const int sample = r + L - 1;
            for (int n = 0; n < nr; ++n) {
                cplx acc{};
                for (int l = 0; l < L; ++l) {
                    const cplx rot = std::exp(cplx(0.0, 2.0 * kPi * imp.phi * (l + 1) / sys.subcarriers));
                    acc += imp.hbar(n, l) * rot * x[sample - l];
                }
                y[static_cast<Eigen::Index>(r) * nr + n] += acc;
            }
        }
    }
    return y;
}

} // namespace gfdmsim::test

#endif // GFDMSIM_TEST_SUPPORT_HPP
