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

#ifndef FDRELAY_GP_HPP
#define FDRELAY_GP_HPP

#include <armadillo>

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fdrelay
{

// c * prod_i x_i^{a_i}. Variables not listed have exponent 0.
struct Monomial
{
    double coeff = 1.0;
    std::map<std::string, double> exponents;
};

struct Posynomial
{
    std::vector<Monomial> terms;
};

struct GpProblem
{
    std::vector<std::string> variables;
    Posynomial objective;             // minimized
    std::vector<Posynomial> ineq;     // each <= 1
    std::vector<Monomial> mono_eq;    // each == 1
    arma::vec lower, upper;           // mandatory, 0 < lower < upper

    // Adds a variable with its bounds; returns its index.
    std::size_t add_variable(const std::string &name, double lo, double hi);

    // Throws std::invalid_argument on undeclared variables, nonpositive coefficients, empty
    // posynomials, duplicate names or bad bounds.
    void validate() const;
};

enum class GpStatus
{
    Optimal,
    Infeasible,
    MaxIter
};

std::string_view to_string(GpStatus s);

struct GpSolution
{
    arma::vec values; // in problem.variables order
    double objective = 0.0;
    GpStatus status = GpStatus::MaxIter;
    double kkt_residual = 0.0;
    std::size_t newton_steps = 0;
};

struct GpOptions
{
    double tol = 1e-7;        // duality-measure target on the log objective
    double t0 = 1.0;
    double mu = 10.0;
    double newton_tol = 1e-9; // half squared Newton decrement
    std::size_t max_newton = 200; // per centering step
};

GpSolution solve_gp(const GpProblem &problem, const GpOptions &opts = {});

// Log-space grid search over the bounds with `zoom_levels` refinements, each halving the window around the best
// feasible point. Equalities are accepted within 1e-2 relative. At most 4 variables.
GpSolution brute_force_gp(const GpProblem &problem, std::size_t grid_points_per_dim, std::size_t zoom_levels = 12);

double evaluate(const Monomial &m, const GpProblem &problem, const arma::vec &x);
double evaluate(const Posynomial &p, const GpProblem &problem, const arma::vec &x);

// log p(exp(y)) evaluated as a log-sum-exp of affine terms in y = log x.
double log_evaluate(const Posynomial &p, const GpProblem &problem, const arma::vec &y);

// Worst constraint violation at x: max over (ineq - 1), relative equality error and relative
// bound excess; <= 0 means feasible.
double max_violation(const GpProblem &problem, const arma::vec &x);

// Plain-text problem format, one monomial per line (coefficient then exponent list).
std::string dump_gp(const GpProblem &problem);
GpProblem parse_gp(std::string_view text);

} // namespace fdrelay

#endif
