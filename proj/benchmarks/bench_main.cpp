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

#include <benchmark/benchmark.h>

#include <limits>

#include "gfdmsim/crlb.hpp"
#include "gfdmsim/harness.hpp"

using namespace gfdmsim;

namespace {

struct Fixture {
    CampaignContext ctx;
    ReceivedFrame frame;
};

const Fixture& default_fixture() {
    static const Fixture f = [] {
        CampaignConfig cfg;
        cfg.snr_db = {20.0};
        Fixture out{prepare_campaign(cfg), {}};
        out.frame = draw_trial_frame(out.ctx, 20.0, child_seed(cfg.seed, 0, 0));
        return out;
    }();
    return f;
}

void BM_CovarianceAndSubspace(benchmark::State& state) {
    const auto& f = default_fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(decompose(f.ctx.config.system, f.ctx.plan, f.frame.y));
    }
}
BENCHMARK(BM_CovarianceAndSubspace)->Unit(benchmark::kMillisecond);

void BM_CfoCostDirect(benchmark::State& state) {
    const auto& f = default_fixture();
    const auto sub = decompose(f.ctx.config.system, f.ctx.plan, f.frame.y);
    double phi = -0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cfo_cost(phi, 0, sub, f.ctx.plan, f.ctx.config.system));
        phi = phi > 0.5 ? -0.5 : phi + 0.01;
    }
}
BENCHMARK(BM_CfoCostDirect)->Unit(benchmark::kMicrosecond);

void BM_CfoCostEvaluatorSetup(benchmark::State& state) {
    const auto& f = default_fixture();
    const auto sub = decompose(f.ctx.config.system, f.ctx.plan, f.frame.y);
    for (auto _ : state) {
        CfoCostEvaluator eval(0, sub, f.ctx.plan, f.ctx.config.system);
        benchmark::DoNotOptimize(eval);
    }
}
BENCHMARK(BM_CfoCostEvaluatorSetup)->Unit(benchmark::kMillisecond);

void BM_CfoCostEvaluatorPoint(benchmark::State& state) {
    const auto& f = default_fixture();
    const auto sub = decompose(f.ctx.config.system, f.ctx.plan, f.frame.y);
    const CfoCostEvaluator eval(0, sub, f.ctx.plan, f.ctx.config.system);
    double phi = -0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval.cost(phi));
        phi = phi > 0.5 ? -0.5 : phi + 0.01;
    }
}
BENCHMARK(BM_CfoCostEvaluatorPoint)->Unit(benchmark::kMicrosecond);

void BM_RunJcciqe(benchmark::State& state) {
    const auto& f = default_fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_jcciqe(f.ctx.config.system, f.ctx.plan, f.ctx.pilots, f.frame.y));
    }
}
BENCHMARK(BM_RunJcciqe)->Unit(benchmark::kMillisecond);

void BM_CrlbCfo(benchmark::State& state) {
    const auto& f = default_fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(crlb_cfo(f.frame.truth, f.ctx.plan, f.ctx.config.system, f.frame.sigma2));
    }
}
BENCHMARK(BM_CrlbCfo)->Unit(benchmark::kMillisecond);

void BM_StackedZfDetect(benchmark::State& state) {
    const auto& f = default_fixture();
    const StackedZfDetector det(build_genie_operators(f.frame.truth.users, f.ctx.plan, f.ctx.config.system));
    std::size_t i = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(det.detect(f.frame.y[i]));
        i = i + 1 < f.frame.y.size() ? i + 1 : 1;
    }
}
BENCHMARK(BM_StackedZfDetect)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
