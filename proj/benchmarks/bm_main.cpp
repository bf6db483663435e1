// SPDX-License-Identifier: Apache-2.0
//
// fdrelay: multipair full-duplex massive-MIMO relay toolkit
// Copyright (C) 2026 The fdrelay Authors
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

#include "fdrelay/gp.hpp"
#include "fdrelay/linproc.hpp"
#include "fdrelay/montecarlo.hpp"
#include "fdrelay/rates.hpp"

#include "random_gp.hpp"

#include <benchmark/benchmark.h>

using namespace fdrelay;

static void BM_GramInverse(benchmark::State &state)
{
    const auto n = static_cast<arma::uword>(state.range(0));
    Rng rng(3);
    arma::cx_mat h(n, 10);
    for (auto &v : h)
        v = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    for (auto _ : state)
        benchmark::DoNotOptimize(gram_inverse(h));
}
BENCHMARK(BM_GramInverse)->Arg(64)->Arg(256)->Arg(1024);

static void BM_ClosedFormRates(benchmark::State &state)
{
    SystemConfig c;
    c.n_rx = c.n_tx = 128;
    const LargeScaleProfile p = uniform_profile(10, 1.0, 20.0, 10.0);
    const Scheme s = state.range(0) == 0 ? Scheme::ZF : Scheme::MR;
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate(c, p, s, Mode::FD).sum_se);
}
BENCHMARK(BM_ClosedFormRates)->Arg(0)->Arg(1);

static void BM_MonteCarloTrials(benchmark::State &state)
{
    SystemConfig c;
    c.n_rx = c.n_tx = static_cast<arma::uword>(state.range(0));
    const LargeScaleProfile p = uniform_profile(10, 1.0, 20.0, 10.0);
    McOptions o;
    o.plan.trials = 100;
    o.plan.workers = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(mc_rate_bounds(c, p, Scheme::ZF, o).sum_rate.value);
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_MonteCarloTrials)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_GpSolve(benchmark::State &state)
{
    Rng rng(11);
    const GpProblem p = oracle::random_gp(rng, 3, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_gp(p).objective);
}
BENCHMARK(BM_GpSolve);
BENCHMARK_MAIN();
