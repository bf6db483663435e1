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

#ifndef FDRELAY_MONTECARLO_HPP
#define FDRELAY_MONTECARLO_HPP

#include "fdrelay/linproc.hpp"
#include "fdrelay/model.hpp"
#include "fdrelay/stats.hpp"

#include <armadillo>

#include <vector>

namespace fdrelay
{

enum class Side
{
    SR,
    RD
};

// Expectations behind one pair's rate bound. Power factors are folded in:
// mp = Ps sum_{j!=k} E|w_k^T g_j|^2 (SR) or Pr sum_{j!=k} E|g_k^T a_j|^2 (RD),
// li = Pr E||w_k^T G_RR A||^2, an = E||w_k||^2. RD has li = 0 and an = 1.
struct TermEstimates
{
    Estimate mean_gain;          // real part of E{w_k^T g_k} or E{g_k^T a_k}
    Estimate mean_gain_imag;     // zero in expectation
    Estimate var_gain;
    Estimate mp, li, an;
    std::size_t trials = 0;
};

struct McOptions
{
    TrialPlan plan;
    bool explicit_pilots = false; // simulate the pilot phase instead of the direct sampler
};

struct McRateReport
{
    std::vector<TermEstimates> sr, rd;
    std::vector<Estimate> rate_sr, rate_rd, rate_e2e;  // statistical-CSI bounds
    std::vector<Estimate> genie_sr, genie_rd, genie_e2e;
    Estimate sum_rate;       // sum_k bound, no prelog
    Estimate genie_sum_rate; // sum_k genie, no prelog
    Estimate genie_gap;      // genie_sum_rate - sum_rate, jackknifed jointly
};

// One pass over fresh channel sets yields the bound terms of both hops and the genie rates.
// Uses uniform source power cfg.source_power.
McRateReport mc_rate_bounds(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme,
                            const McOptions &opts);

// Per-pair term estimates for one hop.
std::vector<TermEstimates> mc_rate_terms(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme,
                                         Side side, const McOptions &opts);

// Per-pair genie ergodic rates min(E log2(1+SINR_SR), E log2(1+SINR_RD)).
std::vector<Estimate> genie_rate(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme,
                                 const McOptions &opts);

enum class Proposition
{
    LargeReceive, // Nrx grows, Ntx fixed at cfg.n_tx
    LargeTransmit // Ntx grows with Pr = Er/Ntx, Nrx fixed at cfg.n_rx
};

struct ProbeRow
{
    arma::uword antennas = 0;
    Estimate residual;     // LargeReceive: residual power / Ps; LargeTransmit: receive-side LI power
    Estimate rd_amplitude; // LargeTransmit only: E{sqrt(Pr) g_k^T a_k} averaged over pairs
    double rd_limit = 0.0; // LargeTransmit only: the large-Ntx amplitude
};

// `energy` is Er for LargeTransmit and ignored otherwise.
std::vector<ProbeRow> convergence_probe(Proposition which, Scheme scheme, const SystemConfig &base,
                                        const LargeScaleProfile &profile, const std::vector<arma::uword> &schedule,
                                        double energy, const TrialPlan &plan);

// Sample mean of diag((G^H G)^{-1}) for G with i.i.d. CN(0, sigma_sq) entries; the reference
// value is 1/(sigma_sq (Nrx - K)).
Estimate wishart_oracle(arma::uword pairs, arma::uword n_rx, double sigma_sq, const TrialPlan &plan);

struct LiOracle
{
    std::vector<Estimate> mc; // Pr E||w_k^T G_RR A_ZF||^2
    arma::vec approx;         // Pr sigma_LI^2 (Ntx-K) / (sigma_SR,k^2 Ntx (Nrx-K))
    arma::vec exact;          // Pr sigma_LI^2 / (sigma_SR,k^2 (Nrx-K))
};

LiOracle li_approx_oracle(const SystemConfig &cfg, const LargeScaleProfile &profile, const TrialPlan &plan);

} // namespace fdrelay

#endif
