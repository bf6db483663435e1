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

#ifndef FDRELAY_RATES_HPP
#define FDRELAY_RATES_HPP

#include "fdrelay/linproc.hpp"
#include "fdrelay/model.hpp"
#include "fdrelay/sinr.hpp"

#include <armadillo>

#include <optional>
#include <string_view>

namespace fdrelay
{

enum class Mode
{
    FD,
    HD
};

std::string_view to_string(Mode m);

struct RateReport
{
    arma::vec sinr_sr, sinr_rd;
    arma::vec r_sr, r_rd, r_e2e; // bits/channel use
    double sum_se = 0.0;         // with the mode's prelog
    Scheme scheme = Scheme::ZF;
    Mode mode = Mode::FD;
};

// Prelog (T - tau)/T for FD and (T - tau)/(2T) for HD.
double prelog(arma::uword coherence, arma::uword training, Mode mode);

// prelog * sum(r_e2e).
double sum_se(const arma::vec &r_e2e, arma::uword coherence, arma::uword training, Mode mode);

// Per-pair rates at the given source powers and cfg.relay_power, cfg.li_variance. Mode FD.
RateReport rate_zf(const SystemConfig &cfg, const LargeScaleProfile &profile, const arma::vec &source_powers);
RateReport rate_mr(const SystemConfig &cfg, const LargeScaleProfile &profile, const arma::vec &source_powers);

// Rates from precomputed coefficients (shared by the uniform and per-source paths).
RateReport rate_from_coefficients(const SinrCoefficients &coeffs, const arma::vec &source_powers, double relay_power,
                                  arma::uword coherence, arma::uword training, Scheme scheme, Mode mode);

// Uniform source power cfg.source_power. HD doubles both powers and drops loop interference.
RateReport evaluate(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme, Mode mode);

struct HybridChoice
{
    Mode mode = Mode::FD;
    double sum_se = 0.0;
    double se_fd = 0.0;
    double se_hd = 0.0;
};

// FD wins ties.
HybridChoice hybrid_select(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme);
HybridChoice hybrid_from(double se_fd, double se_hd);

enum class PowerCase
{
    I,  // Ps = Es/Nrx, Pr = Er/Ntx, Pp fixed
    II  // Pp = Ps = Es/sqrt(Nrx), Pr = Er/sqrt(Ntx)
};

// Large-array limit of the FD sum SE (prelog included). Case I reads sigma^2 from the profile;
// Case II uses beta and kappa = Ntx/Nrx.
double asymptotic_se(PowerCase pc, Scheme scheme, const SystemConfig &cfg, const LargeScaleProfile &profile, double es,
                     double er, double kappa);

enum class PilotCoupling
{
    Fixed,       // Pp = cfg.pilot_power
    EqualsSource // Pp = Ps
};

// Smallest Ps with min_k R_k >= target under Pr = K Ps. nullopt when unreachable below 1e12.
std::optional<double> required_power(double target_rate, Scheme scheme, const SystemConfig &cfg,
                                     const arma::vec &beta_sr, const arma::vec &beta_rd, PilotCoupling coupling);

} // namespace fdrelay

#endif
