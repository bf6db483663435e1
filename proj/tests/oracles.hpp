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

// Independent reference formulas shared by the unit and acceptance tests. Written directly from
// the closed forms and per-term expectations, never through the library's coefficient tables.

#ifndef FDRELAY_TESTS_ORACLES_HPP
#define FDRELAY_TESTS_ORACLES_HPP

#include "fdrelay/model.hpp"

#include <armadillo>

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle
{

struct Sinr
{
    arma::vec sr, rd;
};

// Zero-forcing closed form (large-Ntx approximation of the loop-interference term).
inline Sinr zf_closed(const fdrelay::SystemConfig &c, const fdrelay::LargeScaleProfile &p, double ps)
{
    const double K = static_cast<double>(c.pairs), nr = static_cast<double>(c.n_rx), nt = static_cast<double>(c.n_tx);
    const double pr = c.relay_power;
    const arma::vec &bs = p.beta_sr(), &ss = p.sigma_sr_sq(), &br = p.beta_rd(), &sr = p.sigma_rd_sq();
    double inv = 0.0, err = 0.0;
    for (arma::uword j = 0; j < bs.n_elem; ++j)
    {
        inv += 1.0 / sr(j);
        err += bs(j) - ss(j);
    }
    Sinr out{arma::vec(bs.n_elem), arma::vec(bs.n_elem)};
    for (arma::uword k = 0; k < bs.n_elem; ++k)
    {
        out.sr(k) = ps * (nr - K) * ss(k) / (ps * err + pr * c.li_variance * (1.0 - K / nt) + 1.0);
        out.rd(k) = (nt - K) / inv * pr / (pr * (br(k) - sr(k)) + 1.0);
    }
    return out;
}

// Maximum-ratio closed form (exact for the statistical-CSI bound).
inline Sinr mr_closed(const fdrelay::SystemConfig &c, const fdrelay::LargeScaleProfile &p, double ps)
{
    const double nr = static_cast<double>(c.n_rx), nt = static_cast<double>(c.n_tx);
    const double pr = c.relay_power;
    const arma::vec &bs = p.beta_sr(), &ss = p.sigma_sr_sq(), &br = p.beta_rd(), &sr = p.sigma_rd_sq();
    double sum_b = 0.0, sum_s = 0.0;
    for (arma::uword j = 0; j < bs.n_elem; ++j)
    {
        sum_b += bs(j);
        sum_s += sr(j);
    }
    Sinr out{arma::vec(bs.n_elem), arma::vec(bs.n_elem)};
    for (arma::uword k = 0; k < bs.n_elem; ++k)
    {
        out.sr(k) = ps * nr * ss(k) / (ps * sum_b + pr * c.li_variance + 1.0);
        out.rd(k) = sr(k) * sr(k) / sum_s * pr * nt / (pr * br(k) + 1.0);
    }
    return out;
}

inline arma::vec e2e_rate(const Sinr &s)
{
    arma::vec r(s.sr.n_elem);
    for (arma::uword k = 0; k < r.n_elem; ++k)
        r(k) = std::log2(1.0 + std::min(s.sr(k), s.rd(k)));
    return r;
}

// Per-term expectations for one pair k, with the same power factors as TermEstimates.
struct Terms
{
    double mean, var, mp, li, an;
};

// Maximum ratio: W^T = Ghat^H, A = alpha conj(Ghat_RD), E||A||_F^2 = 1.
inline Terms mr_sr_terms(const fdrelay::SystemConfig &c, const fdrelay::LargeScaleProfile &p, arma::uword k)
{
    const double nr = static_cast<double>(c.n_rx);
    const double s = p.sigma_sr_sq()(k);
    double others = 0.0;
    for (arma::uword j = 0; j < p.pairs(); ++j)
        if (j != k)
            others += p.beta_sr()(j);
    return {nr * s, nr * s * p.beta_sr()(k), c.source_power * nr * s * others,
            c.relay_power * c.li_variance * nr * s, nr * s};
}

inline Terms mr_rd_terms(const fdrelay::SystemConfig &c, const fdrelay::LargeScaleProfile &p, arma::uword k)
{
    const double nt = static_cast<double>(c.n_tx);
    const double alpha2 = 1.0 / (nt * arma::accu(p.sigma_rd_sq()));
    const double s = p.sigma_rd_sq()(k), b = p.beta_rd()(k);
    double others = 0.0;
    for (arma::uword j = 0; j < p.pairs(); ++j)
        if (j != k)
            others += p.sigma_rd_sq()(j);
    return {std::sqrt(alpha2) * nt * s, alpha2 * nt * s * b, c.relay_power * alpha2 * nt * b * others, 0.0, 1.0};
}

// Zero forcing, receive side: E[(Ghat^H Ghat)^{-1}]_kk = 1 / ((Nrx - K) sigma_k^2).
inline Terms zf_sr_terms(const fdrelay::SystemConfig &c, const fdrelay::LargeScaleProfile &p, arma::uword k)
{
    const double K = static_cast<double>(c.pairs), nr = static_cast<double>(c.n_rx);
    const double inv_kk = 1.0 / ((nr - K) * p.sigma_sr_sq()(k));
    const arma::vec err = p.error_sr();
    double others = 0.0;
    for (arma::uword j = 0; j < p.pairs(); ++j)
        if (j != k)
            others += err(j);
    return {1.0, err(k) * inv_kk, c.source_power * others * inv_kk, c.relay_power * c.li_variance * inv_kk, inv_kk};
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size())
    {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

// Critical value at significance `alpha` for sample sizes n, m (asymptotic).
inline double ks_critical(std::size_t n, std::size_t m, double alpha)
{
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c * std::sqrt(static_cast<double>(n + m) / static_cast<double>(n * m));
}

} // namespace oracle

#endif
