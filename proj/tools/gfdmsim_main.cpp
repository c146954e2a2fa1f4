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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef GFDMSIM_CLI11_SINGLE_HEADER
#include "CLI11.hpp"
#else
#include <CLI/CLI.hpp>
#endif

#include "gfdmsim/crlb.hpp"
#include "gfdmsim/harness.hpp"
#include "gfdmsim/selftest.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("-c,--config", c.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", c.overrides, "override one key, e.g. --set snr_db=0,10,20");
}

gfdmsim::CampaignConfig load(const Common& c) {
    if (c.config_path.empty()) {
        std::istringstream empty;
        return gfdmsim::load_campaign(empty, c.overrides);
    }
    return gfdmsim::load_campaign_file(c.config_path, c.overrides);
}

// "-" selects stdout
template <class F>
void with_output(const std::string& path, F&& write) {
    if (path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw gfdmsim::ConfigError("cannot write '" + path + "'");
    }
    write(out);
}

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gfdmsim: uplink multiuser SIMO GFDM link simulator"};
    app.require_subcommand(1);

    Common run_opts;
    std::string trials_path = "trials.csv";
    std::string summary_path = "summary.csv";
    auto* run = app.add_subcommand("run", "run a Monte-Carlo campaign and write the trial and summary CSV files");
    add_common(run, run_opts);
    run->add_option("-o,--out", trials_path, "per-trial CSV ('-' for stdout)")->capture_default_str();
    run->add_option("--summary", summary_path, "per-SNR summary CSV ('-' for stdout)")->capture_default_str();

    Common curve_opts;
    std::size_t curve_snr = 0;
    int curve_trial = 0;
    double curve_step = 0.001;
    std::string curve_path = "-";
    auto* curve = app.add_subcommand("cost-curve", "dump the CFO cost of every user for one trial");
    add_common(curve, curve_opts);
    curve->add_option("--snr-index", curve_snr, "index into snr_db")->capture_default_str();
    curve->add_option("--trial", curve_trial, "trial index")->capture_default_str();
    curve->add_option("--step", curve_step, "CFO sampling step")->capture_default_str();
    curve->add_option("-o,--out", curve_path, "output CSV ('-' for stdout)")->capture_default_str();

    Common bound_opts;
    std::string bound_path = "-";
    auto* bound = app.add_subcommand("crlb", "CFO Cramer-Rao bound per SNR and trial, no estimation");
    add_common(bound, bound_opts);
    bound->add_option("-o,--out", bound_path, "output CSV ('-' for stdout)")->capture_default_str();

    Common show_opts;
    auto* show = app.add_subcommand("print-config", "print the effective configuration");
    add_common(show, show_opts);

    auto* selftest = app.add_subcommand("selftest", "run the built-in invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto result = gfdmsim::run_campaign(load(run_opts));
            with_output(trials_path, [&](std::ostream& o) { gfdmsim::write_trials_csv(o, result); });
            with_output(summary_path, [&](std::ostream& o) { gfdmsim::write_summary_csv(o, result); });
            if (result.failure_threshold_exceeded()) {
                std::cerr << "error: " << result.failed_trials << " of " << result.total_trials
                          << " trials failed numerically\n";
                return kExitNumerical;
            }
            if (result.failed_trials > 0) {
                std::cerr << "warning: " << result.failed_trials << " of " << result.total_trials
                          << " trials failed numerically\n";
            }
        } else if (*curve) {
            const auto ctx = gfdmsim::prepare_campaign(load(curve_opts));
            if (curve_snr >= ctx.config.snr_db.size() || curve_trial < 0) {
                throw gfdmsim::ConfigError("snr index or trial out of range");
            }
            const auto c = gfdmsim::cost_curve(ctx, curve_snr, curve_trial, curve_step);
            with_output(curve_path, [&](std::ostream& o) {
                o << "# true cfo:";
                for (double p : c.phi_true) {
                    o << ' ' << sci(p);
                }
                o << "\nphi";
                for (std::size_t u = 0; u < c.phi_true.size(); ++u) {
                    o << ",cost_u" << u;
                }
                o << '\n';
                for (const auto& p : c.points) {
                    o << sci(p.phi);
                    for (double v : p.cost) {
                        o << ',' << sci(v);
                    }
                    o << '\n';
                }
            });
        } else if (*bound) {
            const auto ctx = gfdmsim::prepare_campaign(load(bound_opts));
            const auto& cfg = ctx.config;
            int failures = 0;
            with_output(bound_path, [&](std::ostream& o) {
                o << "snr_db,trial,crlb_cfo,condition\n";
                for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
                    for (int t = 0; t < cfg.trials; ++t) {
                        const auto frame = gfdmsim::draw_trial_frame(
                            ctx, cfg.snr_db[s], gfdmsim::child_seed(cfg.seed, s, static_cast<std::size_t>(t)));
                        o << sci(cfg.snr_db[s]) << ',' << t << ',';
                        try {
                            const auto r = gfdmsim::crlb_cfo(frame.truth, ctx.plan, cfg.system, frame.sigma2);
                            o << (frame.sigma2 > 0.0 ? sci(r.crlb) : "") << ',' << sci(r.condition) << '\n';
                        } catch (const gfdmsim::NumericalError& e) {
                            ++failures;
                            o << "nan,nan\n";
                            std::cerr << "trial " << t << ": " << e.what() << '\n';
                        }
                    }
                }
            });
            if (failures * 10 > cfg.trials * static_cast<int>(cfg.snr_db.size())) {
                return kExitNumerical;
            }
        } else if (*show) {
            std::cout << gfdmsim::to_key_values(load(show_opts));
        } else if (*selftest) {
            bool ok = true;
            for (const auto& check : gfdmsim::run_selftest()) {
                std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
                ok = ok && check.passed;
            }
            return ok ? 0 : kExitNumerical;
        }
    } catch (const gfdmsim::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
