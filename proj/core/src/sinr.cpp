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

#include "fdrelay/sinr.hpp"

#include <stdexcept>

namespace fdrelay
{

SinrCoefficients sinr_coefficients(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme)
{
    const arma::uword k = profile.pairs();
    if (k != cfg.pairs)
        throw std::invalid_argument("sinr_coefficients: profile size does not match config pairs");

    const double nrx = static_cast<double>(cfg.n_rx);
    const double ntx = static_cast<double>(cfg.n_tx);
    const double kk = static_cast<double>(k);
    const arma::vec &s_sr = profile.sigma_sr_sq();
    const arma::vec &s_rd = profile.sigma_rd_sq();

    SinrCoefficients c;
    if (scheme == Scheme::ZF)
    {
        if (cfg.n_rx <= k || cfg.n_tx <= k)
            throw std::invalid_argument("sinr_coefficients: zero-forcing needs n_rx > pairs and n_tx > pairs");
        c.a = (nrx - kk) * s_sr;
        c.b = profile.error_sr();
        c.c = arma::vec(k, arma::fill::value(cfg.li_variance * (1.0 - kk / ntx)));
        c.d = arma::vec(k, arma::fill::value((ntx - kk) / arma::accu(1.0 / s_rd)));
        c.e = profile.error_rd();
    }
    else
    {
        c.a = nrx * s_sr;
        c.b = profile.beta_sr();
        c.c = arma::vec(k, arma::fill::value(cfg.li_variance));
        c.d = ntx * arma::square(s_rd) / arma::accu(s_rd);
        c.e = profile.beta_rd();
    }
    return c;
}

SinrPair coefficient_sinr(const SinrCoefficients &coeffs, const arma::vec &source_powers, double relay_power)
{
    if (source_powers.n_elem != coeffs.a.n_elem)
        throw std::invalid_argument("coefficient_sinr: power vector length does not match pairs");
    const double mp = arma::dot(coeffs.b, source_powers);
    SinrPair out;
    out.sr = coeffs.a % source_powers / (mp + coeffs.c * relay_power + 1.0);
    out.rd = coeffs.d * relay_power / (coeffs.e * relay_power + 1.0);
    return out;
}

} // namespace fdrelay
