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

#ifndef FDRELAY_POWALLOC_HPP
#define FDRELAY_POWALLOC_HPP

#include "fdrelay/gp.hpp"
#include "fdrelay/linproc.hpp"
#include "fdrelay/model.hpp"
#include "fdrelay/sinr.hpp"

#include <armadillo>

#include <string_view>
#include <vector>

namespace fdrelay
{

// S / ((T - tau)/T * (sum p_s + p_r)). Throws on zero total power.
double energy_efficiency(double sum_se, const arma::vec &source_powers, double relay_power, arma::uword coherence,
                         arma::uword training);

// FD sum SE at arbitrary powers from the coefficient form.
double coefficient_se(const SinrCoefficients &coeffs, const arma::vec &source_powers, double relay_power,
                      arma::uword coherence, arma::uword training);

// Sum SE with every source at p0 and the relay at p1.
double uniform_peak_se(const SinrCoefficients &coeffs, double p0, double p1, arma::uword coherence,
                       arma::uword training);

// Warning threshold for requested targets: uniform-peak SE with a 5% margin. Not a true maximum.
double max_feasible_se(const SinrCoefficients &coeffs, double p0, double p1, arma::uword coherence,
                       arma::uword training);

struct SuccessiveParams
{
    double eps = 0.01;
    std::size_t max_iter = 5; // L
    double alpha = 1.1;       // trust-region factor
    GpOptions gp;
};

enum class AllocStatus
{
    Converged,     // max_k |gamma_i - gamma*| < eps
    IterationCap,  // stopped at L
    Infeasible,    // first GP infeasible (target too high)
    SolverFailure  // a later GP did not reach optimality; last good iterate kept
};

std::string_view to_string(AllocStatus s);

struct PowerAllocation
{
    arma::vec p_s;
    double p_r = 0.0;
    arma::vec gamma;
    double achieved_se = 0.0; // true (non-approximated) sum SE at the returned powers
    double ee = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    AllocStatus status = AllocStatus::Infeasible;
    double max_feasible_se = 0.0;
    bool target_warning = false;        // target above max_feasible_se
    std::vector<double> total_power;    // per iteration
    std::vector<double> gamma_change;   // max_k |gamma_i - gamma*| per iteration
    std::vector<double> max_violation;  // worst GP constraint violation per iteration
};

// Smallest t in (0, 1] whose uniform allocation (t p0, t p1) reaches the target SE; 1 when even
// the peak allocation falls short.
double uniform_scale(const SinrCoefficients &coeffs, double target_se, double p0, double p1, arma::uword coherence,
                     arma::uword training);

// Starting SINRs: the uniform allocation (t p0, t p1) with t in (0, 1] chosen so its sum SE equals
// the target (t = 1 when the target is at or above the uniform-peak SE).
arma::vec initial_gamma(const SinrCoefficients &coeffs, double target_se, double p0, double p1,
                        arma::uword coherence, arma::uword training);

// The inner GP of one successive-approximation step around gamma_i.
GpProblem successive_gp(const SinrCoefficients &coeffs, const arma::vec &gamma_i, double target_se, double p0,
                        double p1, double alpha, arma::uword coherence, arma::uword training);

PowerAllocation optimize_powers(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme,
                                double target_se, double p0, double p1, const SuccessiveParams &params = {});

} // namespace fdrelay

#endif
