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

#include "fdrelay/powalloc.hpp"

#include "fdrelay/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fdrelay
{

std::string_view to_string(AllocStatus s)
{
    switch (s)
    {
    case AllocStatus::Converged:
        return "converged";
    case AllocStatus::IterationCap:
        return "iteration_cap";
    case AllocStatus::Infeasible:
        return "infeasible";
    case AllocStatus::SolverFailure:
        return "solver_failure";
    }
    return "unknown";
}

double energy_efficiency(double sum_se, const arma::vec &source_powers, double relay_power, arma::uword coherence,
                         arma::uword training)
{
    const double total = arma::accu(source_powers) + relay_power;
    if (!(total > 0.0))
        throw std::invalid_argument("energy_efficiency: total power must be > 0");
    return sum_se / (prelog(coherence, training, Mode::FD) * total);
}

double coefficient_se(const SinrCoefficients &coeffs, const arma::vec &source_powers, double relay_power,
                      arma::uword coherence, arma::uword training)
{
    const SinrPair s = coefficient_sinr(coeffs, source_powers, relay_power);
    return prelog(coherence, training, Mode::FD) * arma::accu(arma::log2(1.0 + arma::min(s.sr, s.rd)));
}

double uniform_peak_se(const SinrCoefficients &coeffs, double p0, double p1, arma::uword coherence,
                       arma::uword training)
{
    const arma::vec p(coeffs.a.n_elem, arma::fill::value(p0));
    return coefficient_se(coeffs, p, p1, coherence, training);
}

double max_feasible_se(const SinrCoefficients &coeffs, double p0, double p1, arma::uword coherence,
                       arma::uword training)
{
    return 1.05 * uniform_peak_se(coeffs, p0, p1, coherence, training);
}

double uniform_scale(const SinrCoefficients &coeffs, double target_se, double p0, double p1, arma::uword coherence,
                     arma::uword training)
{
    const arma::uword k = coeffs.a.n_elem;
    auto se_at = [&](double t) { return coefficient_se(coeffs, arma::vec(k, arma::fill::value(t * p0)), t * p1,
                                                       coherence, training); };
    if (se_at(1.0) <= target_se)
        return 1.0;
    // The sum SE is increasing in t; bisect log t.
    double lo = -40.0, hi = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (se_at(std::exp(mid)) < target_se)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(hi);
}

arma::vec initial_gamma(const SinrCoefficients &coeffs, double target_se, double p0, double p1,
                        arma::uword coherence, arma::uword training)
{
    const double t = uniform_scale(coeffs, target_se, p0, p1, coherence, training);
    const SinrPair s = coefficient_sinr(coeffs, arma::vec(coeffs.a.n_elem, arma::fill::value(t * p0)), t * p1);
    return arma::min(s.sr, s.rd);
}

GpProblem successive_gp(const SinrCoefficients &coeffs, const arma::vec &gamma_i, double target_se, double p0,
                        double p1, double alpha, arma::uword coherence, arma::uword training)
{
    const arma::uword k = coeffs.a.n_elem;
    GpProblem gp;
    std::vector<std::string> ps(k), g(k);
    for (arma::uword j = 0; j < k; ++j)
    {
        ps[j] = "ps" + std::to_string(j);
        gp.add_variable(ps[j], 1e-9 * p0, p0);
    }
    const std::string pr = "pr";
    gp.add_variable(pr, 1e-9 * p1, p1);
    for (arma::uword j = 0; j < k; ++j)
    {
        g[j] = "g" + std::to_string(j);
        const double lo = std::max(gamma_i(j) / alpha, 1e-9);
        gp.add_variable(g[j], lo, std::max(alpha * gamma_i(j), lo * alpha * alpha));
    }

    for (arma::uword j = 0; j < k; ++j)
        gp.objective.terms.push_back({1.0, {{ps[j], 1.0}}});
    gp.objective.terms.push_back({1.0, {{pr, 1.0}}});

    for (arma::uword q = 0; q < k; ++q)
    {
        // SR: sum_j (b_j/a_q) p_j g_q / p_q + (c_q/a_q) pr g_q / p_q + (1/a_q) g_q / p_q <= 1.
        Posynomial sr;
        for (arma::uword j = 0; j < k; ++j)
        {
            Monomial m{coeffs.b(j) / coeffs.a(q), {{g[q], 1.0}}};
            if (j != q) // p_q / p_q cancels on the diagonal
            {
                m.exponents[ps[j]] = 1.0;
                m.exponents[ps[q]] = -1.0;
            }
            if (coeffs.b(j) > 0.0)
                sr.terms.push_back(m);
        }
        if (coeffs.c(q) > 0.0)
            sr.terms.push_back({coeffs.c(q) / coeffs.a(q), {{pr, 1.0}, {g[q], 1.0}, {ps[q], -1.0}}});
        sr.terms.push_back({1.0 / coeffs.a(q), {{g[q], 1.0}, {ps[q], -1.0}}});
        gp.ineq.push_back(sr);

        // RD: (e_q/d_q) g_q + (1/d_q) g_q / pr <= 1.
        Posynomial rd;
        if (coeffs.e(q) > 0.0)
            rd.terms.push_back({coeffs.e(q) / coeffs.d(q), {{g[q], 1.0}}});
        rd.terms.push_back({1.0 / coeffs.d(q), {{g[q], 1.0}, {pr, -1.0}}});
        gp.ineq.push_back(rd);
    }

    // prod_k kappa_k g_k^eta_k = 2^{S0 / prelog}, with the constant folded into the coefficient.
    Monomial eq;
    double log_coeff = -target_se / prelog(coherence, training, Mode::FD) * std::log(2.0);
    for (arma::uword j = 0; j < k; ++j)
    {
        const double gi = gamma_i(j);
        const double eta = gi / (1.0 + gi);
        log_coeff += std::log1p(gi) - eta * std::log(gi); // log kappa
        eq.exponents[g[j]] = eta;
    }
    eq.coeff = std::exp(log_coeff);
    gp.mono_eq.push_back(eq);
    return gp;
}

PowerAllocation optimize_powers(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme,
                                double target_se, double p0, double p1, const SuccessiveParams &params)
{
    if (!(target_se > 0.0))
        throw std::invalid_argument("optimize_powers: target SE must be > 0");
    if (!(p0 > 0.0) || !(p1 > 0.0))
        throw std::invalid_argument("optimize_powers: peak powers must be > 0");
    if (!(params.eps > 0.0) || params.max_iter < 1 || !(params.alpha > 1.0))
        throw std::invalid_argument("optimize_powers: need eps > 0, max_iter >= 1 and alpha > 1");

    const SinrCoefficients coeffs = sinr_coefficients(cfg, profile, scheme);
    if (arma::any(coeffs.a <= 0.0) || arma::any(coeffs.d <= 0.0))
        throw std::invalid_argument("optimize_powers: degenerate profile (zero SINR coefficients)");

    const arma::uword k = profile.pairs();
    PowerAllocation out;
    out.max_feasible_se = max_feasible_se(coeffs, p0, p1, cfg.coherence, cfg.training);
    out.target_warning = target_se > out.max_feasible_se;

    arma::vec gamma = initial_gamma(coeffs, target_se, p0, p1, cfg.coherence, cfg.training);
    bool have_solution = false;
    for (std::size_t i = 1; i <= params.max_iter; ++i)
    {
        const GpProblem gp =
            successive_gp(coeffs, gamma, target_se, p0, p1, params.alpha, cfg.coherence, cfg.training);
        const GpSolution sol = solve_gp(gp, params.gp);
        if (sol.status != GpStatus::Optimal)
        {
            out.status = !have_solution && sol.status == GpStatus::Infeasible ? AllocStatus::Infeasible
                                                                               : AllocStatus::SolverFailure;
            break;
        }
        have_solution = true;
        out.iterations = i;
        out.p_s = sol.values.head(k);
        out.p_r = sol.values(k);
        const arma::vec next = sol.values.tail(k);
        const double change = arma::abs(next - gamma).max();
        out.gamma = next;
        out.total_power.push_back(sol.objective);
        out.gamma_change.push_back(change);
        out.max_violation.push_back(max_violation(gp, sol.values));
        gamma = next;
        if (change < params.eps)
        {
            out.converged = true;
            out.status = AllocStatus::Converged;
            break;
        }
        out.status = AllocStatus::IterationCap;
    }

    if (have_solution)
    {
        out.achieved_se = coefficient_se(coeffs, out.p_s, out.p_r, cfg.coherence, cfg.training);
        out.ee = energy_efficiency(out.achieved_se, out.p_s, out.p_r, cfg.coherence, cfg.training);
    }
    return out;
}

} // namespace fdrelay
