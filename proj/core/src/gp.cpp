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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fdrelay
{

std::string_view to_string(GpStatus s)
{
    switch (s)
    {
    case GpStatus::Optimal:
        return "optimal";
    case GpStatus::Infeasible:
        return "infeasible";
    case GpStatus::MaxIter:
        return "max_iter";
    }
    return "unknown";
}

std::size_t GpProblem::add_variable(const std::string &name, double lo, double hi)
{
    variables.push_back(name);
    lower.resize(variables.size());
    upper.resize(variables.size());
    lower(variables.size() - 1) = lo;
    upper(variables.size() - 1) = hi;
    return variables.size() - 1;
}

namespace
{

std::map<std::string, std::size_t> index_of(const GpProblem &p)
{
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < p.variables.size(); ++i)
        idx[p.variables[i]] = i;
    return idx;
}

void check_monomial(const Monomial &m, const std::map<std::string, std::size_t> &idx, const char *where)
{
    if (!(m.coeff > 0.0) || !std::isfinite(m.coeff))
        throw std::invalid_argument(std::string("gp: nonpositive or non-finite coefficient in ") + where);
    for (const auto &[name, e] : m.exponents)
    {
        if (!idx.contains(name))
            throw std::invalid_argument("gp: undeclared variable '" + name + "' in " + where);
        if (!std::isfinite(e))
            throw std::invalid_argument(std::string("gp: non-finite exponent in ") + where);
    }
}

void check_posynomial(const Posynomial &p, const std::map<std::string, std::size_t> &idx, const char *where)
{
    if (p.terms.empty())
        throw std::invalid_argument(std::string("gp: empty posynomial in ") + where);
    for (const auto &m : p.terms)
        check_monomial(m, idx, where);
}

// log sum_i exp(a_i^T v + b_i).
struct Lse
{
    arma::mat a;
    arma::vec b;

    double value(const arma::vec &v) const
    {
        const arma::vec s = a * v + b;
        const double top = s.max();
        return top + std::log(arma::accu(arma::exp(s - top)));
    }

    // Value, gradient and Hessian in one pass.
    double eval(const arma::vec &v, arma::vec &grad, arma::mat &hess) const
    {
        const arma::vec s = a * v + b;
        const double top = s.max();
        const arma::vec w = arma::exp(s - top);
        const double sum = arma::accu(w);
        const arma::vec p = w / sum;
        grad = a.t() * p;
        hess = a.t() * arma::diagmat(p) * a - grad * grad.t();
        return top + std::log(sum);
    }

    // value(v + d) - value(v), accurate when the difference is tiny next to value(v).
    double delta(const arma::vec &v, const arma::vec &d) const
    {
        const arma::vec s = a * v + b;
        const arma::vec w = arma::exp(s - s.max());
        const arma::vec p = w / arma::accu(w);
        const arma::vec ad = a * d;
        double acc = 0.0;
        for (arma::uword i = 0; i < ad.n_elem; ++i)
            acc += p(i) * std::expm1(ad(i));
        return std::log1p(acc);
    }
};

Lse to_lse(const Monomial &m, const std::map<std::string, std::size_t> &idx, std::size_t n)
{
    Lse l;
    l.a.zeros(1, n);
    l.b = {std::log(m.coeff)};
    for (const auto &[name, e] : m.exponents)
        l.a(0, idx.at(name)) += e;
    return l;
}

Lse to_lse(const Posynomial &p, const std::map<std::string, std::size_t> &idx, std::size_t n)
{
    Lse l;
    l.a.zeros(p.terms.size(), n);
    l.b.set_size(p.terms.size());
    for (std::size_t t = 0; t < p.terms.size(); ++t)
    {
        l.b(t) = std::log(p.terms[t].coeff);
        for (const auto &[name, e] : p.terms[t].exponents)
            l.a(t, idx.at(name)) += e;
    }
    return l;
}

// Rewrites f(y) as a function of z where y = y0 + N z.
Lse reparam(const Lse &l, const arma::mat &n, const arma::vec &y0)
{
    return {l.a * n, l.b + l.a * y0};
}

struct BarrierResult
{
    arma::vec v;
    bool converged = false;
    bool stopped_early = false;
    double t = 0.0;
    std::size_t newton = 0;
    double stationarity = 0.0;
};

// Barrier method for min f0(v) s.t. f_i(v) < 0, all log-sum-exp. `v` must be strictly feasible.
BarrierResult barrier(const Lse &f0, const std::vector<Lse> &cons, arma::vec v, const GpOptions &opts,
                      const std::function<bool(const arma::vec &)> &stop_early)
{
    const std::size_t dim = v.n_elem;
    const double m = static_cast<double>(cons.size());
    BarrierResult res;
    double t = opts.t0;

    // phi(v + d) - phi(v) for phi = t f0 - sum log(-f_i); false when v + d leaves the domain.
    auto phi_change = [&](const arma::vec &d, double &out) {
        double total = t * f0.delta(v, d);
        for (const auto &c : cons)
        {
            const double g = c.value(v);
            const double dg = c.delta(v, d);
            if (!(g + dg < 0.0))
                return false;
            total -= std::log1p(dg / g);
        }
        out = total;
        return !std::isnan(total);
    };

    arma::vec grad(dim), gi;
    arma::mat hess(dim, dim), hi;
    enum class Centre
    {
        Done,
        Stopped,
        Capped
    };
    // Damped Newton on phi until dec2/2 <= tol; a failed line search counts as done.
    auto centre = [&](double tol, std::size_t cap) {
        for (std::size_t it = 0; it < cap; ++it)
        {
            f0.eval(v, gi, hi);
            grad = t * gi;
            hess = t * hi;
            for (const auto &c : cons)
            {
                const double g = c.eval(v, gi, hi);
                grad += gi / (-g);
                hess += hi / (-g) + gi * gi.t() / (g * g);
            }
            arma::vec step;
            if (!arma::solve(step, arma::symmatu(hess), -grad, arma::solve_opts::no_approx))
            {
                const double ridge = 1e-12 * std::max(1.0, arma::abs(hess).max());
                step = arma::solve(hess + ridge * arma::eye(dim, dim), -grad);
            }
            const double dec2 = -arma::dot(grad, step);
            ++res.newton;
            if (!(dec2 / 2.0 > tol))
                return Centre::Done;
            double alpha = 1.0;
            double change = 0.0;
            int halvings = 0;
            while (!phi_change(alpha * step, change) || change > -0.01 * alpha * dec2)
            {
                alpha *= 0.5;
                if (++halvings > 60)
                    return Centre::Done; // no measurable progress left
            }
            v += alpha * step;
            if (stop_early && stop_early(v))
                return Centre::Stopped;
        }
        return Centre::Capped;
    };

    for (std::size_t outer = 0; outer < 200; ++outer)
    {
        const Centre c = centre(opts.newton_tol, opts.max_newton);
        if (c == Centre::Stopped || (c == Centre::Done && stop_early && stop_early(v)))
        {
            res.v = v;
            res.t = t;
            res.stopped_early = true;
            return res;
        }
        if (c == Centre::Capped)
        {
            res.v = v;
            res.t = t;
            return res;
        }
        if (m / t < opts.tol)
            break;
        t *= opts.mu;
    }
    // A few extra Newton steps at the final t are cheap (quadratic phase) and tighten stationarity.
    centre(1e-24, 20);

    // Stationarity of the Lagrangian with lambda_i = -1/(t f_i).
    f0.eval(v, gi, hi);
    arma::vec lag = gi;
    for (const auto &c : cons)
    {
        arma::vec gc;
        arma::mat hc;
        const double g = c.eval(v, gc, hc);
        lag += gc * (-1.0 / (t * g));
    }
    res.v = v;
    res.t = t;
    res.converged = m / t < opts.tol || cons.empty();
    res.stationarity = lag.n_elem ? arma::abs(lag).max() : 0.0;
    return res;
}

struct Compiled
{
    std::size_t n = 0;
    Lse objective;
    std::vector<Lse> cons; // ineq then bounds, in z
    arma::mat basis;       // y = y0 + basis z
    arma::vec y0;
    bool inconsistent = false;
};

Compiled compile(const GpProblem &p)
{
    const auto idx = index_of(p);
    Compiled c;
    c.n = p.variables.size();

    // Equalities a^T y = -log c. Constant rows are a pure consistency check.
    std::vector<arma::rowvec> rows;
    std::vector<double> rhs;
    for (const auto &m : p.mono_eq)
    {
        const Lse l = to_lse(m, idx, c.n);
        if (arma::abs(l.a).max() < 1e-10)
        {
            if (std::abs(l.b(0)) > 1e-9)
                c.inconsistent = true;
            continue;
        }
        rows.push_back(l.a.row(0));
        rhs.push_back(-l.b(0));
    }
    if (rows.empty())
    {
        c.basis = arma::eye(c.n, c.n);
        c.y0.zeros(c.n);
    }
    else
    {
        arma::mat e(rows.size(), c.n);
        for (std::size_t i = 0; i < rows.size(); ++i)
            e.row(i) = rows[i];
        const arma::vec f(rhs);
        c.basis = arma::null(e);
        c.y0 = arma::pinv(e) * f;
        if (arma::norm(e * c.y0 - f, "inf") > 1e-9 * std::max(1.0, arma::norm(f, "inf")))
            c.inconsistent = true;
        if (c.basis.n_cols == 0 && c.n > 0 && c.basis.n_rows != c.n)
            c.basis.set_size(c.n, 0);
    }

    c.objective = reparam(to_lse(p.objective, idx, c.n), c.basis, c.y0);
    for (const auto &q : p.ineq)
        c.cons.push_back(reparam(to_lse(q, idx, c.n), c.basis, c.y0));
    for (std::size_t j = 0; j < c.n; ++j)
    {
        Lse up, lo;
        up.a.zeros(1, c.n);
        up.a(0, j) = 1.0;
        up.b = {-std::log(p.upper(j))};
        lo.a.zeros(1, c.n);
        lo.a(0, j) = -1.0;
        lo.b = {std::log(p.lower(j))};
        c.cons.push_back(reparam(up, c.basis, c.y0));
        c.cons.push_back(reparam(lo, c.basis, c.y0));
    }
    return c;
}

double max_constraint(const std::vector<Lse> &cons, const arma::vec &z)
{
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto &c : cons)
        worst = std::max(worst, c.value(z));
    return worst;
}

GpSolution finish(const GpProblem &p, const Compiled &c, const arma::vec &z)
{
    GpSolution s;
    const arma::vec y = c.y0 + c.basis * z;
    s.values = arma::exp(y);
    s.objective = evaluate(p.objective, p, s.values);
    return s;
}

} // namespace

void GpProblem::validate() const
{
    const auto idx = index_of(*this);
    if (idx.size() != variables.size())
        throw std::invalid_argument("gp: duplicate variable names");
    if (variables.empty())
        throw std::invalid_argument("gp: no variables");
    if (lower.n_elem != variables.size() || upper.n_elem != variables.size())
        throw std::invalid_argument("gp: every variable needs lower and upper bounds");
    for (std::size_t j = 0; j < variables.size(); ++j)
        if (!(lower(j) > 0.0) || !(upper(j) > lower(j)) || !std::isfinite(upper(j)))
            throw std::invalid_argument("gp: bounds of '" + variables[j] + "' must satisfy 0 < lower < upper < inf");
    check_posynomial(objective, idx, "objective");
    for (const auto &q : ineq)
        check_posynomial(q, idx, "inequality");
    for (const auto &m : mono_eq)
        check_monomial(m, idx, "equality");
}

double evaluate(const Monomial &m, const GpProblem &problem, const arma::vec &x)
{
    const auto idx = index_of(problem);
    double v = m.coeff;
    for (const auto &[name, e] : m.exponents)
        v *= std::pow(x(idx.at(name)), e);
    return v;
}

double evaluate(const Posynomial &p, const GpProblem &problem, const arma::vec &x)
{
    double v = 0.0;
    for (const auto &m : p.terms)
        v += evaluate(m, problem, x);
    return v;
}

double log_evaluate(const Posynomial &p, const GpProblem &problem, const arma::vec &y)
{
    return to_lse(p, index_of(problem), problem.variables.size()).value(y);
}

double max_violation(const GpProblem &problem, const arma::vec &x)
{
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto &q : problem.ineq)
        worst = std::max(worst, evaluate(q, problem, x) - 1.0);
    for (const auto &m : problem.mono_eq)
        worst = std::max(worst, std::abs(evaluate(m, problem, x) - 1.0));
    for (std::size_t j = 0; j < problem.variables.size(); ++j)
    {
        worst = std::max(worst, x(j) / problem.upper(j) - 1.0);
        worst = std::max(worst, 1.0 - x(j) / problem.lower(j));
    }
    return worst;
}

GpSolution solve_gp(const GpProblem &problem, const GpOptions &opts)
{
    problem.validate();
    if (!(opts.tol > 0.0) || !(opts.mu > 1.0) || !(opts.t0 > 0.0))
        throw std::invalid_argument("solve_gp: need tol > 0, mu > 1, t0 > 0");

    const Compiled c = compile(problem);
    GpSolution infeasible;
    infeasible.status = GpStatus::Infeasible;
    infeasible.values = arma::sqrt(problem.lower % problem.upper);
    infeasible.objective = std::numeric_limits<double>::quiet_NaN();
    if (c.inconsistent)
        return infeasible;

    const std::size_t dim = c.basis.n_cols;
    if (dim == 0)
    {
        // Every variable is pinned by the equalities.
        const arma::vec z;
        if (max_constraint(c.cons, z) > 1e-9)
            return infeasible;
        GpSolution s = finish(problem, c, z);
        s.status = GpStatus::Optimal;
        return s;
    }

    // Start from the log-box centre projected onto the equality subspace.
    const arma::vec y_mid = 0.5 * (arma::log(problem.lower) + arma::log(problem.upper));
    arma::vec z = arma::solve(c.basis, y_mid - c.y0);
    std::size_t newton = 0;

    if (max_constraint(c.cons, z) >= 0.0)
    {
        // Phase one: min s s.t. f_i(z) - s <= 0, s >= -1.
        std::vector<Lse> cons1;
        for (const auto &l : c.cons)
        {
            Lse e;
            e.a = arma::join_rows(l.a, -arma::ones(l.a.n_rows, 1));
            e.b = l.b;
            cons1.push_back(e);
        }
        Lse floor;
        floor.a.zeros(1, dim + 1);
        floor.a(0, dim) = -1.0;
        floor.b = {-1.0};
        cons1.push_back(floor);
        Lse obj;
        obj.a.zeros(1, dim + 1);
        obj.a(0, dim) = 1.0;
        obj.b = {0.0};

        arma::vec v(dim + 1);
        v.head(dim) = z;
        v(dim) = max_constraint(c.cons, z) + 1.0;
        GpOptions o1 = opts;
        o1.tol = 1e-10;
        const BarrierResult r1 =
            barrier(obj, cons1, v, o1, [dim](const arma::vec &x) { return x(dim) < -1e-3; });
        newton += r1.newton;
        z = r1.v.head(dim);
        if (!(max_constraint(c.cons, z) < 0.0))
        {
            infeasible.newton_steps = newton;
            return infeasible;
        }
    }

    const BarrierResult r = barrier(c.objective, c.cons, z, opts, {});
    GpSolution s = finish(problem, c, r.v);
    s.newton_steps = newton + r.newton;
    s.status = r.converged ? GpStatus::Optimal : GpStatus::MaxIter;
    s.kkt_residual = std::max(r.stationarity, static_cast<double>(c.cons.size()) / r.t);
    return s;
}

GpSolution brute_force_gp(const GpProblem &problem, std::size_t grid_points_per_dim, std::size_t zoom_levels)
{
    problem.validate();
    const std::size_t n = problem.variables.size();
    if (n > 4)
        throw std::invalid_argument("brute_force_gp: at most 4 variables");
    if (grid_points_per_dim < 2)
        throw std::invalid_argument("brute_force_gp: need at least 2 grid points per dimension");

    const auto idx = index_of(problem);
    const Lse obj = to_lse(problem.objective, idx, n);
    std::vector<Lse> ineq;
    for (const auto &q : problem.ineq)
        ineq.push_back(to_lse(q, idx, n));
    std::vector<Lse> eq;
    for (const auto &m : problem.mono_eq)
        eq.push_back(to_lse(m, idx, n));

    const double eq_slack = 1e-2;
    auto feasible = [&](const arma::vec &y) {
        for (const auto &l : ineq)
            if (l.value(y) > 1e-12)
                return false;
        for (const auto &l : eq)
            if (std::abs(std::exp(l.value(y)) - 1.0) > eq_slack)
                return false;
        return true;
    };

    const arma::vec log_lo = arma::log(problem.lower);
    const arma::vec log_hi = arma::log(problem.upper);
    arma::vec lo = log_lo, hi = log_hi;
    arma::vec best_y;
    double best = std::numeric_limits<double>::infinity();

    const std::size_t g = grid_points_per_dim;
    for (std::size_t level = 0; level <= zoom_levels; ++level)
    {
        std::size_t total = 1;
        for (std::size_t j = 0; j < n; ++j)
            total *= g;
        arma::vec y(n);
        for (std::size_t flat = 0; flat < total; ++flat)
        {
            std::size_t rest = flat;
            for (std::size_t j = 0; j < n; ++j)
            {
                const std::size_t i = rest % g;
                rest /= g;
                // Endpoints land exactly on the box so nested grids share their nodes.
                y(j) = i + 1 == g ? hi(j) : lo(j) + (hi(j) - lo(j)) * static_cast<double>(i) / static_cast<double>(g - 1);
            }
            if (!feasible(y))
                continue;
            const double v = obj.value(y);
            if (v < best)
            {
                best = v;
                best_y = y;
            }
        }
        if (best_y.is_empty())
            break;
        // Halve the window around the incumbent; never narrower than two coarse steps.
        const arma::vec half = arma::max(0.25 * (hi - lo), 2.0 * (hi - lo) / static_cast<double>(g - 1));
        lo = arma::max(best_y - half, log_lo);
        hi = arma::min(best_y + half, log_hi);
    }

    GpSolution s;
    if (best_y.is_empty())
    {
        s.status = GpStatus::Infeasible;
        s.values = arma::sqrt(problem.lower % problem.upper);
        s.objective = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    s.status = GpStatus::Optimal;
    s.values = arma::exp(best_y);
    s.objective = std::exp(best);
    return s;
}

namespace
{

void put(std::string &out, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void put_monomial(std::string &out, const Monomial &m, const std::vector<std::string> &vars)
{
    put(out, m.coeff);
    for (const auto &v : vars)
    {
        out += ' ';
        const auto it = m.exponents.find(v);
        put(out, it == m.exponents.end() ? 0.0 : it->second);
    }
    out += '\n';
}

} // namespace

std::string dump_gp(const GpProblem &problem)
{
    std::string out = "gp 1\nvars";
    for (const auto &v : problem.variables)
        out += ' ' + v;
    out += "\nlower";
    for (double v : problem.lower)
    {
        out += ' ';
        put(out, v);
    }
    out += "\nupper";
    for (double v : problem.upper)
    {
        out += ' ';
        put(out, v);
    }
    out += "\nobjective " + std::to_string(problem.objective.terms.size()) + '\n';
    for (const auto &m : problem.objective.terms)
        put_monomial(out, m, problem.variables);
    for (const auto &q : problem.ineq)
    {
        out += "ineq " + std::to_string(q.terms.size()) + '\n';
        for (const auto &m : q.terms)
            put_monomial(out, m, problem.variables);
    }
    for (const auto &m : problem.mono_eq)
    {
        out += "eq 1\n";
        put_monomial(out, m, problem.variables);
    }
    return out;
}

GpProblem parse_gp(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string tok;
    auto fail = [](const std::string &why) { throw std::invalid_argument("parse_gp: " + why); };
    auto number = [&]() {
        if (!(in >> tok))
            fail("unexpected end of input");
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            fail("bad number '" + tok + "'");
        return v;
    };

    std::string line;
    if (!std::getline(in, line) || line.rfind("gp 1", 0) != 0)
        fail("missing 'gp 1' header");
    if (!std::getline(in, line))
        fail("missing vars line");
    GpProblem p;
    {
        std::istringstream vs(line);
        vs >> tok;
        if (tok != "vars")
            fail("expected 'vars'");
        while (vs >> tok)
            p.variables.push_back(tok);
    }
    const std::size_t n = p.variables.size();
    auto read_vec = [&](const char *key) {
        if (!(in >> tok) || tok != key)
            fail(std::string("expected '") + key + "'");
        arma::vec v(n);
        for (std::size_t j = 0; j < n; ++j)
            v(j) = number();
        return v;
    };
    p.lower = read_vec("lower");
    p.upper = read_vec("upper");

    auto read_monomial = [&]() {
        Monomial m;
        m.coeff = number();
        for (std::size_t j = 0; j < n; ++j)
        {
            const double e = number();
            if (e != 0.0)
                m.exponents[p.variables[j]] = e;
        }
        return m;
    };
    bool have_objective = false;
    while (in >> tok)
    {
        const std::string section = tok;
        const double count = number();
        if (count < 1 || count != std::floor(count))
            fail("bad term count");
        Posynomial q;
        for (std::size_t t = 0; t < static_cast<std::size_t>(count); ++t)
            q.terms.push_back(read_monomial());
        if (section == "objective")
        {
            p.objective = q;
            have_objective = true;
        }
        else if (section == "ineq")
            p.ineq.push_back(q);
        else if (section == "eq")
        {
            if (q.terms.size() != 1)
                fail("equalities must be monomials");
            p.mono_eq.push_back(q.terms[0]);
        }
        else
            fail("unknown section '" + section + "'");
    }
    if (!have_objective)
        fail("missing objective");
    p.validate();
    return p;
}

} // namespace fdrelay
