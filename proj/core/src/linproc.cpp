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

#include "fdrelay/linproc.hpp"

#include <cmath>
#include <string>

namespace fdrelay
{

std::string_view to_string(Scheme s) { return s == Scheme::ZF ? "zf" : "mr"; }

Scheme parse_scheme(std::string_view name)
{
    if (name == "zf" || name == "ZF")
        return Scheme::ZF;
    if (name == "mr" || name == "MR" || name == "mrc" || name == "mrt")
        return Scheme::MR;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (expected zf or mr)");
}

double alpha_zf(const SystemConfig &cfg, const LargeScaleProfile &profile)
{
    if (cfg.n_tx <= cfg.pairs)
        throw std::invalid_argument("alpha_zf: need n_tx > pairs");
    const double inv_sum = arma::accu(1.0 / profile.sigma_rd_sq());
    return std::sqrt(static_cast<double>(cfg.n_tx - cfg.pairs) / inv_sum);
}

double alpha_mr(const SystemConfig &cfg, const LargeScaleProfile &profile)
{
    return std::sqrt(1.0 / (static_cast<double>(cfg.n_tx) * arma::accu(profile.sigma_rd_sq())));
}

arma::cx_mat gram_inverse(const arma::cx_mat &h)
{
    const arma::cx_mat gram = h.t() * h;
    arma::cx_mat r;
    if (!arma::chol(r, gram))
        throw SingularDrawError("gram matrix is not positive definite");
    // cond(gram) ~ cond(R)^2; the triangular estimate is cheap.
    const double rc = arma::rcond(arma::trimatu(r));
    if (!(rc * rc >= 1e-12))
        throw SingularDrawError("gram matrix condition number above 1e12");
    const arma::cx_mat r_inv = arma::inv(arma::trimatu(r));
    return r_inv * r_inv.t();
}

ProcessingPair zf_pair(const ChannelSet &channels, const LargeScaleProfile &profile, const SystemConfig &cfg)
{
    const arma::uword k = profile.pairs();
    if (cfg.n_rx <= k || cfg.n_tx <= k)
        throw std::invalid_argument("zf_pair: need n_rx > pairs and n_tx > pairs");

    ProcessingPair p;
    p.scheme = Scheme::ZF;
    p.alpha = alpha_zf(cfg, profile);
    p.w_t = gram_inverse(channels.ghat_sr) * channels.ghat_sr.t();
    // G* (G^T G*)^{-1} = conj(G (G^H G)^{-1}).
    p.a = p.alpha * arma::conj(channels.ghat_rd * gram_inverse(channels.ghat_rd));
    return p;
}

ProcessingPair mr_pair(const ChannelSet &channels, const LargeScaleProfile &profile, const SystemConfig &cfg)
{
    ProcessingPair p;
    p.scheme = Scheme::MR;
    p.alpha = alpha_mr(cfg, profile);
    p.w_t = channels.ghat_sr.t();
    p.a = p.alpha * arma::conj(channels.ghat_rd);
    return p;
}

ProcessingPair make_pair(Scheme scheme, const ChannelSet &channels, const LargeScaleProfile &profile,
                         const SystemConfig &cfg)
{
    return scheme == Scheme::ZF ? zf_pair(channels, profile, cfg) : mr_pair(channels, profile, cfg);
}

} // namespace fdrelay
