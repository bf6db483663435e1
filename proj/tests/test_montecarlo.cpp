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

#include "fdrelay/montecarlo.hpp"
#include "fdrelay/rates.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace fdrelay;

namespace
{

SystemConfig small()
{
    SystemConfig c;
    c.pairs = 3;
    c.n_rx = 16;
    c.n_tx = 12;
    c.training = 6;
    c.pilot_power = 2.0;
    c.source_power = 3.0;
    c.relay_power = 5.0;
    c.li_variance = 0.7;
    return c;
}

LargeScaleProfile small_profile(const SystemConfig &c)
{
    return make_profile({0.6, 1.0, 1.8}, {1.4, 0.4, 0.9}, static_cast<double>(c.training), c.pilot_power);
}

McOptions options(std::size_t trials, std::uint64_t seed, unsigned workers = 0)
{
    McOptions o;
    o.plan.trials = trials;
    o.plan.seed = seed;
    o.plan.workers = workers;
    return o;
}

void check_terms(const TermEstimates &t, const oracle::Terms &ref, bool with_li, double sigmas)
{
    CHECK(t.mean_gain.sigmas_from(ref.mean) < sigmas);
    CHECK(t.mean_gain_imag.sigmas_from(0.0) < sigmas);
    CHECK(t.var_gain.sigmas_from(ref.var) < sigmas);
    CHECK(t.mp.sigmas_from(ref.mp) < sigmas);
    if (with_li)
    {
        CHECK(t.li.sigmas_from(ref.li) < sigmas);
        CHECK(t.an.sigmas_from(ref.an) < sigmas);
    }
}

} // namespace

TEST_SUITE("montecarlo")
{
    TEST_CASE("maximum-ratio terms match their expectations")
    {
        const SystemConfig c = small();
        const LargeScaleProfile p = small_profile(c);
        const auto sr = mc_rate_terms(c, p, Scheme::MR, Side::SR, options(20000, 3));
        const auto rd = mc_rate_terms(c, p, Scheme::MR, Side::RD, options(20000, 3));
        for (arma::uword k = 0; k < 3; ++k)
        {
            CAPTURE(k);
            check_terms(sr[k], oracle::mr_sr_terms(c, p, k), true, 4.0);
            check_terms(rd[k], oracle::mr_rd_terms(c, p, k), false, 4.0);
        }
    }

    TEST_CASE("zero-forcing receive terms match their expectations")
    {
        const SystemConfig c = small();
        const LargeScaleProfile p = small_profile(c);
        const auto sr = mc_rate_terms(c, p, Scheme::ZF, Side::SR, options(20000, 5));
        for (arma::uword k = 0; k < 3; ++k)
        {
            CAPTURE(k);
            check_terms(sr[k], oracle::zf_sr_terms(c, p, k), true, 4.0);
        }
    }

    TEST_CASE("maximum-ratio rate bound matches the exact closed form")
    {
        const SystemConfig c = small();
        const LargeScaleProfile p = small_profile(c);
        const McRateReport r = mc_rate_bounds(c, p, Scheme::MR, options(20000, 9));
        const arma::vec ref = oracle::e2e_rate(oracle::mr_closed(c, p, c.source_power));
        for (arma::uword k = 0; k < 3; ++k)
            CHECK(r.rate_e2e[k].sigmas_from(ref(k)) < 4.0);
        CHECK(r.genie_gap.value > 0.0);
        CHECK(r.genie_sum_rate.value > r.sum_rate.value);
    }

    TEST_CASE("explicit pilot simulation agrees with the direct estimate sampler")
    {
        const SystemConfig c = small();
        const LargeScaleProfile p = small_profile(c);
        McOptions direct = options(8000, 12);
        McOptions pilots = direct;
        pilots.explicit_pilots = true;
        const auto a = mc_rate_terms(c, p, Scheme::MR, Side::SR, direct);
        const auto b = mc_rate_terms(c, p, Scheme::MR, Side::SR, pilots);
        for (arma::uword k = 0; k < 3; ++k)
        {
            const double diff = a[k].mean_gain.value - b[k].mean_gain.value;
            const double se = std::hypot(a[k].mean_gain.std_error, b[k].mean_gain.std_error);
            CHECK(std::abs(diff) < 4.0 * se);
        }
    }

    TEST_CASE("estimates are reproducible and independent of the worker count")
    {
        const SystemConfig c = small();
        const LargeScaleProfile p = small_profile(c);
        const McRateReport a = mc_rate_bounds(c, p, Scheme::ZF, options(600, 4, 1));
        const McRateReport b = mc_rate_bounds(c, p, Scheme::ZF, options(600, 4, 3));
        CHECK(a.sum_rate.value == b.sum_rate.value);
        CHECK(a.genie_gap.std_error == b.genie_gap.std_error);
        CHECK_THROWS_AS(mc_rate_bounds(c, p, Scheme::ZF, options(50, 4)), std::invalid_argument);
    }

    TEST_CASE("inverse Wishart diagonal")
    {
        TrialPlan plan;
        plan.trials = 20000;
        plan.seed = 6;
        for (auto [k, n] : {std::pair<arma::uword, arma::uword>{2, 8}, {4, 20}})
        {
            const Estimate e = wishart_oracle(k, n, 0.5, plan);
            CHECK(e.sigmas_from(1.0 / (0.5 * static_cast<double>(n - k))) < 4.0);
        }
        CHECK_THROWS_AS(wishart_oracle(4, 5, 1.0, plan), std::invalid_argument);
    }

    TEST_CASE("loop-interference approximation is low by exactly K / Ntx")
    {
        double previous_gap = 1.0;
        for (arma::uword ntx : {20u, 40u, 80u})
        {
            SystemConfig c;
            c.n_rx = 30;
            c.n_tx = ntx;
            c.relay_power = 10.0;
            const LargeScaleProfile p = uniform_profile(10, 1.0, 20.0, 10.0);
            TrialPlan plan;
            plan.trials = 4000;
            plan.seed = 8;
            const LiOracle o = li_approx_oracle(c, p, plan);
            const double gap = (o.exact(0) - o.approx(0)) / o.exact(0);
            CHECK(gap == doctest::Approx(10.0 / static_cast<double>(ntx)));
            CHECK(gap < previous_gap);
            previous_gap = gap;
            for (arma::uword k = 0; k < 10; ++k)
                CHECK(o.mc[k].sigmas_from(o.exact(k)) < 4.0);
        }
    }

    TEST_CASE("large-array probes shrink the residual terms")
    {
        SystemConfig c;
        c.pairs = 4;
        c.training = 8;
        c.n_rx = 16;
        c.n_tx = 16;
        const LargeScaleProfile p = uniform_profile(4, 1.0, 8.0, 10.0);
        TrialPlan plan;
        plan.trials = 300;
        plan.seed = 2;
        const std::vector<arma::uword> schedule{32, 128, 512};
        for (Scheme s : {Scheme::ZF, Scheme::MR})
        {
            const auto rx = convergence_probe(Proposition::LargeReceive, s, c, p, schedule, 0.0, plan);
            const auto tx = convergence_probe(Proposition::LargeTransmit, s, c, p, schedule, 10.0, plan);
            REQUIRE(rx.size() == 3);
            std::vector<double> n, r1, r2;
            for (std::size_t i = 0; i < 3; ++i)
            {
                n.push_back(static_cast<double>(schedule[i]));
                r1.push_back(rx[i].residual.value);
                r2.push_back(tx[i].residual.value);
            }
            CHECK(loglog_slope(n, r1) < -0.5);
            CHECK(loglog_slope(n, r2) < -0.5);
            CHECK(tx[2].rd_amplitude.value == doctest::Approx(tx[2].rd_limit).epsilon(0.05));
        }
    }
}
