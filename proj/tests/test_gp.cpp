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

#include "random_gp.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace fdrelay;

namespace
{

GpProblem single()
{
    GpProblem p;
    p.add_variable("x", 1e-6, 1e6);
    p.objective.terms.push_back({1.0, {{"x", 1.0}}});
    p.ineq.push_back({{{1.0, {{"x", -1.0}}}}});
    return p;
}

GpProblem product_equality()
{
    GpProblem p;
    p.add_variable("x", 1e-3, 1e3);
    p.add_variable("y", 1e-3, 1e3);
    p.objective.terms.push_back({1.0, {{"x", 1.0}}});
    p.objective.terms.push_back({1.0, {{"y", 1.0}}});
    p.mono_eq.push_back({0.25, {{"x", 1.0}, {"y", 1.0}}});
    return p;
}

void check_feasible(const GpProblem &p, const GpSolution &s)
{
    REQUIRE(s.status == GpStatus::Optimal);
    CHECK(max_violation(p, s.values) <= 1e-6);
    for (const auto &q : p.ineq)
        CHECK(evaluate(q, p, s.values) <= 1.0 + 1e-6);
    for (const auto &m : p.mono_eq)
        CHECK(std::abs(evaluate(m, p, s.values) - 1.0) <= 1e-6);
}

} // namespace

TEST_SUITE("gp")
{
    TEST_CASE("analytic instances")
    {
        const GpOptions opts;
        const GpProblem a = single();
        const GpSolution sa = solve_gp(a);
        check_feasible(a, sa);
        CHECK(sa.values(0) == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(sa.objective == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(sa.kkt_residual <= 10.0 * opts.tol);

        const GpProblem b = product_equality();
        const GpSolution sb = solve_gp(b);
        check_feasible(b, sb);
        CHECK(sb.values(0) == doctest::Approx(2.0).epsilon(1e-5));
        CHECK(sb.values(1) == doctest::Approx(2.0).epsilon(1e-5));
        CHECK(sb.objective == doctest::Approx(4.0).epsilon(1e-5));
        CHECK(sb.kkt_residual <= 10.0 * opts.tol);
    }

    TEST_CASE("maximum volume under a surface budget")
    {
        // max xyz s.t. xy + yz + zx <= 3 has x = y = z = 1.
        GpProblem p;
        for (const char *n : {"x", "y", "z"})
            p.add_variable(n, 1e-2, 1e2);
        p.objective.terms.push_back({1.0, {{"x", -1.0}, {"y", -1.0}, {"z", -1.0}}});
        p.ineq.push_back({{{1.0 / 3, {{"x", 1.0}, {"y", 1.0}}},
                           {1.0 / 3, {{"y", 1.0}, {"z", 1.0}}},
                           {1.0 / 3, {{"z", 1.0}, {"x", 1.0}}}}});
        const GpSolution s = solve_gp(p);
        check_feasible(p, s);
        CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-5));
    }

    TEST_CASE("grid oracle reproduces the analytic optima and refines monotonically")
    {
        const GpSolution a = brute_force_gp(single(), 41);
        CHECK(a.objective == doctest::Approx(1.0).epsilon(1e-3));
        const GpSolution b = brute_force_gp(product_equality(), 41);
        CHECK(b.objective == doctest::Approx(4.0).epsilon(0.01));
        Rng rng(77);
        for (int i = 0; i < 5; ++i)
        {
            const GpProblem p = oracle::random_gp(rng, 2, 2);
            const double coarse = brute_force_gp(p, 11, 0).objective;
            const double fine = brute_force_gp(p, 21, 0).objective;
            CHECK(fine <= coarse);
        }
        GpProblem big;
        for (const char *n : {"a", "b", "c", "d", "e"})
            big.add_variable(n, 1.0, 2.0);
        big.objective.terms.push_back({1.0, {{"a", 1.0}}});
        CHECK_THROWS_AS(brute_force_gp(big, 3), std::invalid_argument);
    }

    TEST_CASE("random programs agree with the grid oracle")
    {
        Rng rng(2024);
        for (int i = 0; i < 15; ++i)
        {
            const GpProblem p = oracle::random_gp(rng, 3, 3);
            const GpSolution s = solve_gp(p);
            check_feasible(p, s);
            const GpSolution g = brute_force_gp(p, 41);
            CAPTURE(i);
            CHECK(std::abs(s.objective - g.objective) <= 0.01 * g.objective);
            // The solver is never beaten by the grid beyond its tolerance.
            CHECK(s.objective <= g.objective * (1.0 + 1e-6));
            CHECK(s.kkt_residual <= 10.0 * GpOptions{}.tol);
        }
    }

    TEST_CASE("objective scaling")
    {
        Rng rng(5);
        const GpProblem p = oracle::random_gp(rng, 3, 3);
        GpProblem q = p;
        for (auto &m : q.objective.terms)
            m.coeff *= 37.5;
        const GpSolution a = solve_gp(p), b = solve_gp(q);
        CHECK(b.objective == doctest::Approx(37.5 * a.objective).epsilon(1e-6));
        CHECK(arma::approx_equal(a.values, b.values, "reldiff", 1e-4));
    }

    TEST_CASE("log transform round trip")
    {
        Rng rng(6);
        const GpProblem p = oracle::random_gp(rng, 3, 3);
        const arma::vec x{0.7, 2.5, 1.3};
        const arma::vec y = arma::log(x);
        for (const auto &q : p.ineq)
            CHECK(std::abs(std::exp(log_evaluate(q, p, y)) - evaluate(q, p, x)) <= 1e-10 * evaluate(q, p, x));
        CHECK(std::abs(std::exp(log_evaluate(p.objective, p, y)) - evaluate(p.objective, p, x)) <=
              1e-10 * evaluate(p.objective, p, x));
    }

    TEST_CASE("problem dump round trip")
    {
        Rng rng(8);
        GpProblem p = oracle::random_gp(rng, 3, 2);
        p.mono_eq.push_back({1.5, {{"x0", 0.5}, {"x2", -1.0}}});
        const std::string text = dump_gp(p);
        const GpProblem q = parse_gp(text);
        CHECK(dump_gp(q) == text);
        CHECK(solve_gp(q).objective == solve_gp(p).objective);
        CHECK_THROWS(parse_gp("gp 2\n"));
    }

    TEST_CASE("infeasibility is detected")
    {
        GpProblem p;
        p.add_variable("x", 2.0, 3.0);
        p.objective.terms.push_back({1.0, {{"x", 1.0}}});
        p.ineq.push_back({{{1.0, {{"x", 1.0}}}}}); // x <= 1
        CHECK(solve_gp(p).status == GpStatus::Infeasible);

        GpProblem e = product_equality();
        e.mono_eq.push_back({2.0, {}}); // 2 == 1
        CHECK(solve_gp(e).status == GpStatus::Infeasible);
    }

    TEST_CASE("malformed problems are rejected")
    {
        GpProblem p = single();
        p.ineq.push_back({{{1.0, {{"nope", 1.0}}}}});
        CHECK_THROWS_AS(solve_gp(p), std::invalid_argument);
        GpProblem q = single();
        q.objective.terms[0].coeff = -1.0;
        CHECK_THROWS_AS(solve_gp(q), std::invalid_argument);
        GpProblem r = single();
        r.ineq.push_back({});
        CHECK_THROWS_AS(solve_gp(r), std::invalid_argument);
        GpProblem s = single();
        s.upper(0) = s.lower(0) / 2.0;
        CHECK_THROWS_AS(solve_gp(s), std::invalid_argument);
    }
}
