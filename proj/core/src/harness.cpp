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

#include "gfdmsim/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "gfdmsim/crlb.hpp"

namespace gfdmsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sci(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

std::vector<std::uint8_t> frame_bits(const std::vector<CVector>& symbol) {
    std::vector<std::uint8_t> bits;
    for (const auto& d : symbol) {
        const auto b = qpsk_demap(d);
        bits.insert(bits.end(), b.begin(), b.end());
    }
    return bits;
}

} // namespace

SubcarrierSets make_subcarrier_sets(const CampaignConfig& cfg) {
    if (cfg.assignment == "contiguous-block") {
        return contiguous_block_sets(cfg.system);
    }
    if (cfg.assignment == "interleaved") {
        return interleaved_sets(cfg.system);
    }
    if (cfg.assignment == "explicit") {
        return cfg.explicit_sets;
    }
    throw ConfigError("unknown assignment '" + cfg.assignment + "'");
}

CampaignContext prepare_campaign(const CampaignConfig& cfg) {
    cfg.validate();
    CampaignContext ctx;
    ctx.config = cfg;
    ctx.modulation = build_modulation_matrix(cfg.system);
    ctx.plan = build_assignment(cfg.system, ctx.modulation, make_subcarrier_sets(cfg));
    const auto aliases = find_image_aliases(ctx.plan);
    if (!aliases.empty()) {
        throw ConfigError("assignment is image aliased: the mirror of user " + std::to_string(aliases[0].second) +
                          " covers every resource of user " + std::to_string(aliases[0].first) +
                          ", so their CFOs cannot be told apart");
    }
    ctx.pilots = plan_pilots(ctx.plan, cfg.system.pilots_per_user);
    ctx.dims = compute_subspace_dims(cfg.system, ctx.plan, true);
    if (cfg.system.symbols_per_frame < ctx.dims.n_signal) {
        throw ConfigError("N_s = " + std::to_string(cfg.system.symbols_per_frame) +
                          " is below the signal-subspace dimension " + std::to_string(ctx.dims.n_signal) +
                          "; the sample covariance cannot reveal the noise subspace");
    }
    return ctx;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t child_seed(std::uint64_t master, std::size_t snr_index, std::size_t trial_index) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ static_cast<std::uint64_t>(snr_index));
    return splitmix64(s ^ (static_cast<std::uint64_t>(trial_index) << 20));
}

double noise_variance(double signal_power, double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0) {
        return 0.0;
    }
    return signal_power / std::pow(10.0, snr_db / 10.0);
}

ReceivedFrame draw_trial_frame(const CampaignContext& ctx, double snr_db, std::uint64_t seed) {
    const auto& cfg = ctx.config;
    const auto& sys = cfg.system;
    Rng rng(seed);
    std::uniform_real_distribution<double> cfo(-cfg.cfo_max, cfg.cfo_max);
    std::uniform_real_distribution<double> eps(cfg.eps_range.first, cfg.eps_range.second);
    std::uniform_real_distribution<double> theta(cfg.theta_range_deg.first, cfg.theta_range_deg.second);

    std::vector<UserImpairment> users;
    for (int u = 0; u < sys.users; ++u) {
        const double phi = cfo(rng);
        const double e = eps(rng);
        const double t = theta(rng) * kPi / 180.0;
        users.push_back(make_impairment(phi, e, t, draw_channel(sys.channel_taps, cfg.rms_delay_spread,
                                                                sys.rx_antennas, rng),
                                        sys.subcarriers));
    }

    const int nu = ctx.plan.resources_per_user();
    std::vector<std::vector<CVector>> data(sys.symbols_per_frame);
    for (auto& symbol : data) {
        for (int u = 0; u < sys.users; ++u) {
            std::vector<std::uint8_t> bits(2 * static_cast<std::size_t>(nu));
            std::uint64_t word = 0;
            for (std::size_t b = 0; b < bits.size(); ++b) {
                if (b % 64 == 0) {
                    word = rng();
                }
                bits[b] = static_cast<std::uint8_t>((word >> (b % 64)) & 1U);
            }
            symbol.push_back(qpsk_map(bits));
        }
    }
    ctx.pilots.apply(data.front());

    auto frame = synthesize_received(sys, ctx.plan, std::move(users), std::move(data), 0.0, rng);
    add_noise(frame, noise_variance(frame.truth.signal_power, snr_db), rng);
    return frame;
}

double mse_cfo(const std::vector<double>& phi_hat, const std::vector<double>& phi_true) {
    if (phi_hat.size() != phi_true.size() || phi_hat.empty()) {
        throw InputError("need matching, non-empty CFO lists");
    }
    double acc = 0.0;
    for (std::size_t u = 0; u < phi_hat.size(); ++u) {
        acc += (phi_hat[u] - phi_true[u]) * (phi_hat[u] - phi_true[u]);
    }
    return acc / static_cast<double>(phi_hat.size());
}

double mse_channel_iq(const std::vector<CVector>& hi_hat, const std::vector<CVector>& hq_hat,
                      const std::vector<UserImpairment>& truth) {
    if (hi_hat.size() != truth.size() || hq_hat.size() != truth.size() || truth.empty()) {
        throw InputError("need one equivalent CIR pair per user");
    }
    double acc = 0.0;
    for (std::size_t u = 0; u < truth.size(); ++u) {
        acc += (hi_hat[u] - truth[u].equivalent_source()).squaredNorm();
        acc += (hq_hat[u] - truth[u].equivalent_image()).squaredNorm();
    }
    return acc / (2.0 * static_cast<double>(truth.size()) * static_cast<double>(truth.front().h.size()));
}

double mse_channel_iq(const EstimationResult& result, const std::vector<UserImpairment>& truth) {
    std::vector<CVector> hi;
    std::vector<CVector> hq;
    for (const auto& u : result.users) {
        hi.push_back(u.hI_hat);
        hq.push_back(u.hQ_hat);
    }
    return mse_channel_iq(hi, hq, truth);
}

double bit_error_rate(const StackedZfDetector& detector, const ReceivedFrame& frame) {
    std::size_t errors = 0;
    std::size_t total = 0;
    for (std::size_t i = 1; i < frame.y.size(); ++i) {
        const auto sent = frame_bits(frame.truth.data[i]);
        const auto got = qpsk_demap(detector.detect(frame.y[i]));
        for (std::size_t b = 0; b < sent.size(); ++b) {
            errors += sent[b] != got[b] ? 1 : 0;
        }
        total += sent.size();
    }
    return total == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(total);
}

double outage_probability(const std::vector<TrialRecord>& records, double threshold) {
    int n = 0;
    int hits = 0;
    for (const auto& r : records) {
        if (r.failed) {
            continue;
        }
        ++n;
        hits += r.ber > threshold ? 1 : 0;
    }
    return n == 0 ? kNaN : static_cast<double>(hits) / n;
}

std::vector<TrialRecord> run_trial(const CampaignContext& ctx, std::size_t snr_index, int trial) {
    using clock = std::chrono::steady_clock;
    const auto& cfg = ctx.config;
    const double snr = cfg.snr_db.at(snr_index);
    const auto seed = child_seed(cfg.seed, snr_index, static_cast<std::size_t>(trial));

    const auto start = clock::now();
    const auto frame = draw_trial_frame(ctx, snr, seed);

    std::optional<double> bound;
    if (cfg.crlb && frame.sigma2 > 0.0) {
        try {
            bound = crlb_cfo(frame.truth, ctx.plan, cfg.system, frame.sigma2).crlb;
        } catch (const NumericalError&) {
            bound.reset();
        }
    }
    const auto shared = clock::now() - start;

    std::vector<double> phi_true;
    for (const auto& u : frame.truth.users) {
        phi_true.push_back(u.phi);
    }

    std::vector<TrialRecord> out;
    for (const Mode mode : cfg.modes) {
        const auto mode_start = clock::now();
        TrialRecord rec;
        rec.snr_db = snr;
        rec.trial = trial;
        rec.mode = mode;
        rec.seed = seed;
        rec.crlb_cfo = bound;
        try {
            DetectionOperators ops;
            if (mode == Mode::Jcciqe) {
                const auto est = run_jcciqe(cfg.system, ctx.plan, ctx.pilots, frame.y);
                std::vector<double> phi_hat;
                for (const auto& u : est.users) {
                    phi_hat.push_back(u.phi_hat);
                }
                rec.mse_cfo = mse_cfo(phi_hat, phi_true);
                rec.mse_channel_iq = mse_channel_iq(est, frame.truth.users);
                ops = build_detection_operators(est, ctx.plan, cfg.system);
            } else {
                ops = build_genie_operators(frame.truth.users, ctx.plan, cfg.system);
            }
            rec.ber = bit_error_rate(StackedZfDetector(ops), frame);
            rec.outage = rec.ber > cfg.outage_threshold;
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.error = e.what();
            rec.mse_cfo = rec.mse_channel_iq = rec.ber = kNaN;
        }
        if (cfg.record_timing) {
            rec.wall_ms = std::chrono::duration<double, std::milli>(shared + (clock::now() - mode_start)).count();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records, const CampaignConfig& cfg) {
    std::vector<SummaryRow> rows;
    for (const double snr : cfg.snr_db) {
        for (const Mode mode : cfg.modes) {
            SummaryRow row;
            row.snr_db = snr;
            row.mode = mode;
            std::vector<TrialRecord> group;
            double crlb_sum = 0.0;
            int crlb_n = 0;
            for (const auto& r : records) {
                // SNR values are compared bitwise; they come from the same list
                if (r.mode != mode || !(r.snr_db == snr)) {
                    continue;
                }
                ++row.trials;
                if (r.crlb_cfo) {
                    crlb_sum += *r.crlb_cfo;
                    ++crlb_n;
                }
                if (r.failed) {
                    ++row.failed;
                    continue;
                }
                row.mse_cfo += r.mse_cfo;
                row.mse_channel_iq += r.mse_channel_iq;
                row.ber += r.ber;
                group.push_back(r);
            }
            const auto ok = static_cast<double>(group.size());
            if (group.empty()) {
                row.mse_cfo = row.mse_channel_iq = row.ber = kNaN;
            } else {
                row.mse_cfo /= ok;
                row.mse_channel_iq /= ok;
                row.ber /= ok;
            }
            row.outage_probability = outage_probability(group, cfg.outage_threshold);
            if (crlb_n > 0) {
                row.crlb_cfo = crlb_sum / crlb_n;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

CampaignResult run_campaign(const CampaignConfig& cfg) {
    const auto ctx = prepare_campaign(cfg);
    const std::size_t tasks = cfg.snr_db.size() * static_cast<std::size_t>(cfg.trials);
    std::vector<std::vector<TrialRecord>> slots(tasks);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks; t = next++) {
            slots[t] = run_trial(ctx, t / cfg.trials, static_cast<int>(t % cfg.trials));
        }
    };
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), tasks);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < n_threads; ++i) {
            pool.emplace_back(worker);
        }
    }

    CampaignResult result;
    for (auto& slot : slots) {
        for (auto& rec : slot) {
            ++result.total_trials;
            result.failed_trials += rec.failed ? 1 : 0;
            result.records.push_back(std::move(rec));
        }
    }
    result.summary = summarize(result.records, cfg);
    return result;
}

void write_trials_csv(std::ostream& out, const CampaignResult& result) {
    out << "# snr_db = 10 log10(E_s / sigma^2), E_s = mean noise-free received power per complex sample over the "
           "frame; ber excludes the first (pilot) symbol\n";
    out << "snr_db,trial,mode,mse_cfo,mse_channel_iq,ber,outage_flag,crlb_cfo,seed,wall_ms\n";
    for (const auto& r : result.records) {
        out << sci(r.snr_db) << ',' << r.trial << ',' << mode_name(r.mode) << ',' << sci(r.mse_cfo) << ','
            << sci(r.mse_channel_iq) << ',' << sci(r.ber) << ',' << (r.failed ? "nan" : (r.outage ? "1" : "0"))
            << ',' << (r.crlb_cfo ? sci(*r.crlb_cfo) : "") << ',' << r.seed << ',' << sci(r.wall_ms) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const CampaignResult& result) {
    out << "snr_db,mode,trials,failed,mse_cfo,mse_channel_iq,ber,outage_probability,crlb_cfo\n";
    for (const auto& r : result.summary) {
        out << sci(r.snr_db) << ',' << mode_name(r.mode) << ',' << r.trials << ',' << r.failed << ','
            << sci(r.mse_cfo) << ',' << sci(r.mse_channel_iq) << ',' << sci(r.ber) << ','
            << sci(r.outage_probability) << ',' << (r.crlb_cfo ? sci(*r.crlb_cfo) : "") << '\n';
    }
}

CostCurve cost_curve(const CampaignContext& ctx, std::size_t snr_index, int trial, double step) {
    if (!(step > 0.0)) {
        throw ConfigError("cost-curve step must be positive");
    }
    const auto& cfg = ctx.config;
    const auto frame =
        draw_trial_frame(ctx, cfg.snr_db.at(snr_index), child_seed(cfg.seed, snr_index, static_cast<std::size_t>(trial)));
    const auto sub = decompose(cfg.system, ctx.plan, frame.y);
    std::vector<CfoCostEvaluator> evaluators;
    CostCurve curve;
    for (int u = 0; u < ctx.plan.users(); ++u) {
        evaluators.emplace_back(u, sub, ctx.plan, cfg.system);
        curve.phi_true.push_back(frame.truth.users[u].phi);
    }
    for (int i = 0;; ++i) {
        const double phi = -0.5 + i * step;
        if (phi > 0.5 + 1e-12) {
            break;
        }
        CostCurvePoint p;
        p.phi = phi;
        for (const auto& e : evaluators) {
            p.cost.push_back(e.cost(phi));
        }
        curve.points.push_back(std::move(p));
    }
    return curve;
}

} // namespace gfdmsim
