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

#ifndef FDRELAY_STATS_HPP
#define FDRELAY_STATS_HPP

#include "fdrelay/rng.hpp"

#include <armadillo>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace fdrelay
{

// A Monte Carlo estimate together with its standard error.
struct Estimate
{
    double value = 0.0;
    double std_error = 0.0;

    // |value - reference| measured in standard errors. A zero std_error with an exact match
    // gives 0; a zero std_error with any mismatch gives +inf.
    double sigmas_from(double reference) const;
};

// Streaming accumulator for `width` per-trial samples, grouped into a fixed number of
// contiguous trial blocks. Block membership depends only on (trials, blocks), never on
// how many workers ran the trials, which keeps every reduction bit-reproducible.
class BlockMeans
{
public:
    BlockMeans(std::size_t width, std::size_t trials, std::size_t blocks);

    std::size_t width() const { return width_; }
    std::size_t trials() const { return trials_; }
    std::size_t blocks() const { return blocks_; }

    // Half-open trial range [first, last) covered by block b.
    std::size_t block_begin(std::size_t b) const;
    std::size_t block_end(std::size_t b) const { return block_begin(b + 1); }

    std::span<double> block_sums(std::size_t b);
    std::span<const double> block_sums(std::size_t b) const;

    arma::vec mean() const;

    // Delete-one-block jackknife for a smooth function of the sample means.
    Estimate jackknife(const std::function<double(const arma::vec &)> &statistic) const;

private:
    std::size_t width_;
    std::size_t trials_;
    std::size_t blocks_;
    arma::mat sums_; // width x blocks
};

// Per-trial kernel: fill `out` (size width) from the trial's own random stream.
using TrialKernel = std::function<void(std::size_t trial, Rng &rng, std::span<double> out)>;

struct TrialPlan
{
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 0;     // 0 -> std::thread::hardware_concurrency()
    std::size_t blocks = 64;  // capped at `trials`
};

// Runs `plan.trials` independent trials, each with Rng::stream(seed, trial), and returns the
// block-summed samples. Results do not depend on plan.workers.
BlockMeans run_trials(const TrialPlan &plan, std::size_t width, const TrialKernel &kernel);

// Generic parallel-for over [0, count) with a fixed assignment-independent result contract:
// body(i) must only write to slot i of caller-owned storage.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)> &body);

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

} // namespace fdrelay

#endif
