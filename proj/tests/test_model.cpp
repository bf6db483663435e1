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

#include "fdrelay/model.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace fdrelay;

TEST_SUITE("model")
{
    TEST_CASE("estimation variance")
    {
        CHECK(estimation_variance(1.0, 20.0, 10.0) == doctest::Approx(200.0 / 201.0));
        CHECK(estimation_variance(0.5, 20.0, 0.0) == 0.0);
        // Large pilot energy recovers beta.
        CHECK(estimation_variance(0.3, 20.0, 1e9) == doctest::Approx(0.3).epsilon(1e-6));
    }

    TEST_CASE("profile invariants")
    {
        const LargeScaleProfile p = make_profile({0.2, 1.0, 3.0}, {0.5, 0.1, 2.0}, 6.0, 2.0);
        CHECK(p.pairs() == 3);
        CHECK(arma::all(p.sigma_sr_sq() <= p.beta_sr()));
        CHECK(arma::all(p.sigma_rd_sq() > 0.0));
        CHECK(arma::approx_equal(p.error_rd(), p.beta_rd() - p.sigma_rd_sq(), "absdiff", 0.0));
        CHECK(p.sigma_sr_sq()(1) == doctest::Approx(estimation_variance(1.0, 6.0, 2.0)));
        CHECK_THROWS_AS(make_profile({1.0, 2.0}, {1.0}, 4.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(make_profile({1.0, -2.0}, {1.0, 1.0}, 4.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(make_profile_with_estimates({1.0}, {1.0}, {1.5}, {0.5}), std::invalid_argument);
        const LargeScaleProfile perfect = make_profile_with_estimates({1.0}, {2.0}, {1.0}, {2.0});
        CHECK(perfect.error_sr()(0) == 0.0);
    }

    TEST_CASE("system validation")
    {
        SystemConfig c;
        CHECK_NOTHROW(c.validate(true));
        c.n_rx = 10;
        CHECK_NOTHROW(c.validate(false));
        CHECK_THROWS_AS(c.validate(true), std::invalid_argument);
        c = SystemConfig{};
        c.training = 19;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        c = SystemConfig{};
        c.training = 200;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        c = SystemConfig{};
        c.li_variance = -1.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        CHECK(SystemConfig{}.data_fraction() == doctest::Approx(0.9));
    }

    TEST_CASE("dB conversions")
    {
        CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
        CHECK(db_to_linear(-3.0) == doctest::Approx(0.501187).epsilon(1e-5));
        CHECK(linear_to_db(db_to_linear(7.25)) == doctest::Approx(7.25));
    }

    TEST_CASE("drop gain")
    {
        const DropGeometry g;
        CHECK(drop_gain(g, g.ref_distance, 0.0) == doctest::Approx(0.5));
        CHECK(drop_gain(g, 0.0, 10.0) == doctest::Approx(10.0));
        CHECK(drop_gain(g, 400.0, 0.0) == doctest::Approx(1.0 / (1.0 + std::pow(2.0, 3.8))));
        DropGeometry bad;
        bad.disk_diameter = -1.0;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    }

    TEST_CASE("urban drops are seeded and bounded by the geometry")
    {
        const DropGeometry g;
        Rng a(9), b(9), c(10);
        const LargeScaleProfile pa = draw_urban_profile(g, 10, 20.0, 10.0, a);
        const LargeScaleProfile pb = draw_urban_profile(g, 10, 20.0, 10.0, b);
        const LargeScaleProfile pc = draw_urban_profile(g, 10, 20.0, 10.0, c);
        CHECK(arma::approx_equal(pa.beta_sr(), pb.beta_sr(), "absdiff", 0.0));
        CHECK_FALSE(arma::approx_equal(pa.beta_sr(), pc.beta_sr(), "absdiff", 0.0));
        CHECK(arma::all(pa.beta_sr() > 0.0));

        // Without shadowing every gain lies between the disk edge and the centre.
        DropGeometry flat;
        flat.shadow_sigma_db = 0.0;
        Rng r(1);
        const LargeScaleProfile pf = draw_urban_profile(flat, 200, 400.0, 10.0, r);
        CHECK(pf.beta_sr().min() >= drop_gain(flat, flat.disk_diameter / 2.0, 0.0) * (1 - 1e-12));
        CHECK(pf.beta_rd().max() <= 1.0);
    }

    TEST_CASE("snapshot profile")
    {
        const LargeScaleProfile p = snapshot_profile(20.0, 10.0);
        CHECK(p.pairs() == 10);
        CHECK(p.beta_sr()(4) == doctest::Approx(4.468));
        CHECK(p.beta_rd()(9) == doctest::Approx(1.641));
        const LargeScaleProfile u = uniform_profile(4, 1.0, 8.0, 1.0);
        CHECK(arma::all(u.beta_sr() == 1.0));
    }
}
