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

#include "fdrelay/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fdrelay
{

double Estimate::sigmas_from(double reference) const
{
    const double diff = std::abs(value - reference);
    if (std_error > 0.0)
        return diff / std_error;
    return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

BlockMeans::BlockMeans(std::size_t width, std::size_t trials, std::size_t blocks)
    : width_(width), trials_(trials), blocks_(std::min(blocks, trials)), sums_(width, std::min(blocks, trials), arma::fill::zeros)
{
    if (trials == 0)
        throw std::invalid_argument("BlockMeans: trials must be >= 1");
    if (blocks == 0)
        throw std::invalid_argument("BlockMeans: blocks must be >= 1");
}

std::size_t BlockMeans::block_begin(std::size_t b) const
{
    // Equal split with the remainder spread over the leading blocks.
    const std::size_t base = trials_ / blocks_;
    const std::size_t extra = trials_ % blocks_;
    return b * base + std::min(b, extra);
}

std::span<double> BlockMeans::block_sums(std::size_t b)
{
    return {sums_.colptr(b), width_};
}

std::span<const double> BlockMeans::block_sums(std::size_t b) const
{
    return {sums_.colptr(b), width_};
}

arma::vec BlockMeans::mean() const
{
    arma::vec total(width_, arma::fill::zeros);
    for (std::size_t b = 0; b < blocks_; ++b)
        total += sums_.col(b);
    return total / static_cast<double>(trials_);
}

Estimate BlockMeans::jackknife(const std::function<double(const arma::vec &)> &statistic) const
{
    arma::vec total(width_, arma::fill::zeros);
    for (std::size_t b = 0; b < blocks_; ++b)
        total += sums_.col(b);

    const double full = statistic(total / static_cast<double>(trials_));
    if (blocks_ < 2)
        return {full, std::numeric_limits<double>::infinity()};

    arma::vec leave_out(blocks_);
    for (std::size_t b = 0; b < blocks_; ++b)
    {
        const double n_rest = static_cast<double>(trials_ - (block_end(b) - block_begin(b)));
        leave_out(b) = statistic((total - sums_.col(b)) / n_rest);
    }
    const double centre = arma::mean(leave_out);
    const double nb = static_cast<double>(blocks_);
    const double var = (nb - 1.0) / nb * arma::accu(arma::square(leave_out - centre));
    return {full, std::sqrt(var)};
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)> &body)
{
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = count;
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

BlockMeans run_trials(const TrialPlan &plan, std::size_t width, const TrialKernel &kernel)
{
    BlockMeans acc(width, plan.trials, plan.blocks);
    parallel_for(acc.blocks(), plan.workers, [&](std::size_t b) {
        auto sums = acc.block_sums(b);
        std::vector<double> sample(width);
        for (std::size_t t = acc.block_begin(b); t < acc.block_end(b); ++t)
        {
            Rng rng = Rng::stream(plan.seed, t);
            std::fill(sample.begin(), sample.end(), 0.0);
            kernel(t, rng, sample);
            for (std::size_t i = 0; i < width; ++i)
                sums[i] += sample[i];
        }
    });
    return acc;
}

double loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need at least two matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace fdrelay
