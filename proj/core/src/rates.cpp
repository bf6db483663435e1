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

#include "fdrelay/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace fdrelay
{

std::string_view to_string(Mode m) { return m == Mode::FD ? "fd" : "hd"; }

double prelog(arma::uword coherence, arma::uword training, Mode mode)
{
    if (training >= coherence)
        throw std::invalid_argument("prelog: training must be shorter than the coherence interval");
    const double f = static_cast<double>(coherence - training) / static_cast<double>(coherence);
    return mode == Mode::FD ? f : 0.5 * f;
}

double sum_se(const arma::vec &r_e2e, arma::uword coherence, arma::uword training, Mode mode)
{
    return prelog(coherence, training, mode) * arma::accu(r_e2e);
}

RateReport rate_from_coefficients(const SinrCoefficients &coeffs, const arma::vec &source_powers, double relay_power,
                                  arma::uword coherence, arma::uword training, Scheme scheme, Mode mode)
{
    const SinrPair s = coefficient_sinr(coeffs, source_powers, relay_power);
    RateReport r;
    r.scheme = scheme;
    r.mode = mode;
    r.sinr_sr = s.sr;
    r.sinr_rd = s.rd;
    r.r_sr = arma::log2(1.0 + s.sr);
    r.r_rd = arma::log2(1.0 + s.rd);
    r.r_e2e = arma::min(r.r_sr, r.r_rd);
    r.sum_se = sum_se(r.r_e2e, coherence, training, mode);
    return r;
}

namespace
{

RateReport rate_scheme(const SystemConfig &cfg, const LargeScaleProfile &profile, const arma::vec &source_powers,
                       Scheme scheme)
{
    const SinrCoefficients c = sinr_coefficients(cfg, profile, scheme);
    return rate_from_coefficients(c, source_powers, cfg.relay_power, cfg.coherence, cfg.training, scheme, Mode::FD);
}

} // namespace

RateReport rate_zf(const SystemConfig &cfg, const LargeScaleProfile &profile, const arma::vec &source_powers)
{
    return rate_scheme(cfg, profile, source_powers, Scheme::ZF);
}

RateReport rate_mr(const SystemConfig &cfg, const LargeScaleProfile &profile, const arma::vec &source_powers)
{
    return rate_scheme(cfg, profile, source_powers, Scheme::MR);
}

RateReport evaluate(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme, Mode mode)
{
    SystemConfig c = cfg;
    if (mode == Mode::HD)
    {
        c.source_power *= 2.0;
        c.relay_power *= 2.0;
        c.li_variance = 0.0;
    }
    const arma::vec p(profile.pairs(), arma::fill::value(c.source_power));
    const SinrCoefficients coeffs = sinr_coefficients(c, profile, scheme);
    return rate_from_coefficients(coeffs, p, c.relay_power, c.coherence, c.training, scheme, mode);
}

HybridChoice hybrid_from(double se_fd, double se_hd)
{
    HybridChoice h;
    h.se_fd = se_fd;
    h.se_hd = se_hd;
    h.mode = se_fd >= se_hd ? Mode::FD : Mode::HD;
    h.sum_se = h.mode == Mode::FD ? se_fd : se_hd;
    return h;
}

HybridChoice hybrid_select(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme)
{
    return hybrid_from(evaluate(cfg, profile, scheme, Mode::FD).sum_se, evaluate(cfg, profile, scheme, Mode::HD).sum_se);
}

double asymptotic_se(PowerCase pc, Scheme scheme, const SystemConfig &cfg, const LargeScaleProfile &profile, double es,
                     double er, double kappa)
{
    const double pl = prelog(cfg.coherence, cfg.training, Mode::FD);
    arma::vec sr, rd;
    if (pc == PowerCase::I)
    {
        const arma::vec &s_sr = profile.sigma_sr_sq();
        const arma::vec &s_rd = profile.sigma_rd_sq();
        sr = es * s_sr;
        if (scheme == Scheme::ZF)
            rd = arma::vec(s_rd.n_elem, arma::fill::value(er / arma::accu(1.0 / s_rd)));
        else
            rd = er * arma::square(s_rd) / arma::accu(s_rd);
    }
    else
    {
        if (!(kappa > 0.0))
            throw std::invalid_argument("asymptotic_se: case II needs kappa > 0");
        const double tau = static_cast<double>(cfg.training);
        const arma::vec &b_sr = profile.beta_sr();
        const arma::vec &b_rd = profile.beta_rd();
        sr = tau * es * es * arma::square(b_sr);
        const double scale = std::sqrt(kappa) * tau * es * er;
        if (scheme == Scheme::ZF)
            rd = arma::vec(b_rd.n_elem, arma::fill::value(scale / arma::accu(1.0 / arma::square(b_rd))));
        else
            rd = scale * arma::pow(b_rd, 4) / arma::accu(arma::square(b_rd));
    }
    return pl * arma::accu(arma::log2(1.0 + arma::min(sr, rd)));
}

std::optional<double> required_power(double target_rate, Scheme scheme, const SystemConfig &cfg,
                                     const arma::vec &beta_sr, const arma::vec &beta_rd, PilotCoupling coupling)
{
    if (!(target_rate > 0.0))
        throw std::invalid_argument("required_power: target rate must be > 0");
    const double tau = static_cast<double>(cfg.training);
    const double k = static_cast<double>(beta_sr.n_elem);

    auto worst_rate = [&](double ps) {
        SystemConfig c = cfg;
        c.source_power = ps;
        c.relay_power = k * ps;
        const double pp = coupling == PilotCoupling::EqualsSource ? ps : cfg.pilot_power;
        const LargeScaleProfile prof = make_profile(beta_sr, beta_rd, tau, pp);
        return evaluate(c, prof, scheme, Mode::FD).r_e2e.min();
    };

    double lo = 1e-6;
    double hi = 1e6;
    if (worst_rate(lo) >= target_rate)
    {
        // Already met at the bottom of the bracket; extend downward.
        while (lo > 1e-30 && worst_rate(lo) >= target_rate)
            lo *= 0.1;
        hi = lo * 10.0;
    }
    while (worst_rate(hi) < target_rate)
    {
        if (hi >= 1e12)
            return std::nullopt;
        lo = hi;
        hi *= 10.0;
    }
    // Bisect in the log domain: the rate is monotone in Ps.
    while (hi / lo - 1.0 > 1e-6)
    {
        const double mid = std::sqrt(lo * hi);
        if (worst_rate(mid) >= target_rate)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace fdrelay
