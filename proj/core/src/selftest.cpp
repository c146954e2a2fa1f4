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

#include "gfdmsim/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "gfdmsim/crlb.hpp"
#include "gfdmsim/harness.hpp"

namespace gfdmsim {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

template <class F>
SelftestCheck guarded(const std::string& name, F&& body) {
    SelftestCheck check{name, false, {}};
    try {
        body(check);
    } catch (const std::exception& e) {
        check.passed = false;
        check.detail = std::string("exception: ") + e.what();
    }
    return check;
}

} // namespace

CampaignConfig small_reference_config() {
    CampaignConfig cfg;
    auto& s = cfg.system;
    s.subcarriers = 8;
    s.subsymbols = 2;
    s.users = 2;
    s.data_subcarriers = 6;
    s.channel_taps = 2;
    s.cp_length = 2;
    s.rx_antennas = 3;
    s.symbols_per_frame = 50;
    cfg.snr_db = {std::numeric_limits<double>::infinity()};
    cfg.trials = 1;
    cfg.modes = {Mode::Jcciqe, Mode::Genie};
    return cfg;
}

std::vector<SelftestCheck> run_selftest() {
    std::vector<SelftestCheck> checks;

    checks.push_back(guarded("ofdm-degenerate-modulator", [](SelftestCheck& c) {
        const auto mod = build_modulation_matrix(build_prototype_filter(16, 1, 0.0, PrototypeShape::Rectangular),
                                                 16, 1, 0);
        const double err = (mod.A * mod.A.adjoint() - CMatrix::Identity(16, 16)).cwiseAbs().maxCoeff();
        c.passed = err < 1e-10;
        c.detail = fmt("max |A A^H - I| = %.3e", err);
    }));

    checks.push_back(guarded("noise-free-recovery", [](SelftestCheck& c) {
        const auto ctx = prepare_campaign(small_reference_config());
        const auto frame = draw_trial_frame(ctx, ctx.config.snr_db[0], child_seed(ctx.config.seed, 0, 0));
        const auto est = run_jcciqe(ctx.config.system, ctx.plan, ctx.pilots, frame.y);
        double worst = 0.0;
        for (int u = 0; u < ctx.plan.users(); ++u) {
            worst = std::max(worst, std::abs(est.users[u].phi_hat - frame.truth.users[u].phi));
        }
        const double mse = mse_channel_iq(est, frame.truth.users);
        const double ber =
            bit_error_rate(StackedZfDetector(build_detection_operators(est, ctx.plan, ctx.config.system)), frame);
        c.passed = worst < 1e-4 && mse < 1e-8 && ber == 0.0;
        c.detail = fmt("max |phi error| = %.3e, mse_channel_iq = %.3e", worst, mse) + fmt(", ber = %.3e", ber);
    }));

    checks.push_back(guarded("noise-subspace-orthogonality", [](SelftestCheck& c) {
        const auto ctx = prepare_campaign(small_reference_config());
        const auto& sys = ctx.config.system;
        const auto frame = draw_trial_frame(ctx, ctx.config.snr_db[0], child_seed(ctx.config.seed, 0, 0));
        const auto sub = decompose(sys, ctx.plan, frame.y);
        double worst = 0.0;
        for (int u = 0; u < ctx.plan.users(); ++u) {
            const auto& imp = frame.truth.users[u];
            const CMatrix g = effective_matrix(imp.h, imp.phi, ctx.plan.psi(u), sys.subcarriers, sys.channel_taps,
                                               sys.rx_antennas, false);
            worst = std::max(worst, (sub.noise.adjoint() * g).squaredNorm() / sub.noise.squaredNorm());
        }
        c.passed = worst < 1e-10;
        c.detail = fmt("worst relative leakage = %.3e", worst);
    }));

    checks.push_back(guarded("crlb-linear-in-noise", [](SelftestCheck& c) {
        auto cfg = small_reference_config();
        cfg.snr_db = {20.0};
        const auto ctx = prepare_campaign(cfg);
        const auto frame = draw_trial_frame(ctx, 20.0, child_seed(cfg.seed, 0, 0));
        const double full = crlb_cfo(frame.truth, ctx.plan, cfg.system, frame.sigma2).crlb;
        const double half = crlb_cfo(frame.truth, ctx.plan, cfg.system, frame.sigma2 / 2.0).crlb;
        const double rel = std::abs(half - full / 2.0) / (full / 2.0);
        c.passed = full > 0.0 && rel < 1e-9;
        c.detail = fmt("crlb = %.3e, relative linearity error = %.3e", full, rel);
    }));

    checks.push_back(guarded("campaign-determinism", [](SelftestCheck& c) {
        auto cfg = small_reference_config();
        cfg.snr_db = {15.0, 25.0};
        cfg.trials = 2;
        std::ostringstream a;
        std::ostringstream b;
        write_trials_csv(a, run_campaign(cfg));
        cfg.workers = 2;
        write_trials_csv(b, run_campaign(cfg));
        c.passed = a.str() == b.str();
        c.detail = c.passed ? "identical trial CSV with 1 and 2 workers" : "trial CSV differs between runs";
    }));

    return checks;
}

} // namespace gfdmsim
