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

#include "fdrelay/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fdrelay
{

namespace
{

void check_shapes(const SystemConfig &cfg, const LargeScaleProfile &profile)
{
    if (profile.pairs() != cfg.pairs)
        throw std::invalid_argument("channel: profile has " + std::to_string(profile.pairs()) +
                                    " pairs but config has " + std::to_string(cfg.pairs));
}

arma::cx_mat scale_columns(arma::cx_mat m, const arma::vec &s)
{
    for (arma::uword c = 0; c < m.n_cols; ++c)
        m.col(c) *= s(c);
    return m;
}

} // namespace

TrueChannels sample_true_channels(const SystemConfig &cfg, const LargeScaleProfile &profile, Rng &rng)
{
    check_shapes(cfg, profile);
    TrueChannels out;
    out.g_sr = rng.complex_normal_columns(cfg.n_rx, profile.beta_sr());
    out.g_rd = rng.complex_normal_columns(cfg.n_tx, profile.beta_rd());
    if (cfg.li_variance > 0.0)
        out.g_rr = rng.complex_normal(cfg.n_rx, cfg.n_tx, cfg.li_variance);
    else
        out.g_rr.zeros(cfg.n_rx, cfg.n_tx);
    return out;
}

CrossChannels sample_cross_channels(const SystemConfig &cfg, const LargeScaleProfile &profile, Rng &rng)
{
    check_shapes(cfg, profile);
    CrossChannels out;
    out.gbar_rd = rng.complex_normal_columns(cfg.n_rx, profile.beta_rd());
    out.gbar_sr = rng.complex_normal_columns(cfg.n_tx, profile.beta_sr());
    return out;
}

PilotNoise sample_pilot_noise(const SystemConfig &cfg, Rng &rng)
{
    return {rng.complex_normal(cfg.n_rx, cfg.training, 1.0), rng.complex_normal(cfg.n_tx, cfg.training, 1.0)};
}

PilotBook generate_pilots(arma::uword pairs, arma::uword tau)
{
    if (pairs < 1 || tau < 2 * pairs)
        throw std::invalid_argument("generate_pilots: need pairs >= 1 and tau >= 2 * pairs");

    const double norm = 1.0 / std::sqrt(static_cast<double>(tau));
    auto row = [&](arma::uword r) {
        arma::cx_rowvec v(tau);
        for (arma::uword n = 0; n < tau; ++n)
        {
            // Reduce r*n mod tau first so the phase stays exact for large tau.
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((r * n) % tau) / static_cast<double>(tau);
            v(n) = std::polar(norm, phase);
        }
        return v;
    };

    PilotBook book;
    book.phi_s.set_size(pairs, tau);
    book.phi_d.set_size(pairs, tau);
    for (arma::uword k = 0; k < pairs; ++k)
    {
        book.phi_s.row(k) = row(k);
        book.phi_d.row(k) = row(pairs + k);
    }
    return book;
}

ChannelSet estimate_from_pilots(const TrueChannels &truth, const CrossChannels &cross, const PilotNoise &noise,
                                const PilotBook &pilots, const SystemConfig &cfg, const LargeScaleProfile &profile)
{
    check_shapes(cfg, profile);
    if (!(cfg.pilot_power > 0.0))
        throw std::invalid_argument("estimate_via_pilots: pilot power must be > 0");
    if (pilots.phi_s.n_rows != cfg.pairs || pilots.phi_s.n_cols != cfg.training)
        throw std::invalid_argument("estimate_via_pilots: pilot book does not match (pairs, training)");

    const double tau = static_cast<double>(cfg.training);
    const double amp = std::sqrt(tau * cfg.pilot_power);

    const arma::cx_mat y_rp = amp * (truth.g_sr * pilots.phi_s + cross.gbar_rd * pilots.phi_d) + noise.n_rp;
    const arma::cx_mat y_tp = amp * (cross.gbar_sr * pilots.phi_s + truth.g_rd * pilots.phi_d) + noise.n_tp;

    // Shrinkage (D^{-1}/(tau Pp) + I)^{-1} = tau Pp beta / (tau Pp beta + 1).
    auto shrink = [&](const arma::vec &beta) {
        arma::vec d = tau * cfg.pilot_power * beta;
        return arma::vec(d / (d + 1.0));
    };

    ChannelSet cs;
    cs.g_sr = truth.g_sr;
    cs.g_rd = truth.g_rd;
    cs.g_rr = truth.g_rr;
    cs.ghat_sr = scale_columns(y_rp * pilots.phi_s.t() / amp, shrink(profile.beta_sr()));
    cs.ghat_rd = scale_columns(y_tp * pilots.phi_d.t() / amp, shrink(profile.beta_rd()));
    cs.err_sr = cs.g_sr - cs.ghat_sr;
    cs.err_rd = cs.g_rd - cs.ghat_rd;
    return cs;
}

ChannelSet estimate_via_pilots(const TrueChannels &truth, const PilotBook &pilots, const SystemConfig &cfg,
                               const LargeScaleProfile &profile, Rng &rng)
{
    const CrossChannels cross = sample_cross_channels(cfg, profile, rng);
    const PilotNoise noise = sample_pilot_noise(cfg, rng);
    return estimate_from_pilots(truth, cross, noise, pilots, cfg, profile);
}

ChannelSet sample_estimate_direct(const SystemConfig &cfg, const LargeScaleProfile &profile, Rng &rng)
{
    check_shapes(cfg, profile);
    ChannelSet cs;
    cs.ghat_sr = rng.complex_normal_columns(cfg.n_rx, profile.sigma_sr_sq());
    cs.err_sr = rng.complex_normal_columns(cfg.n_rx, profile.error_sr());
    cs.ghat_rd = rng.complex_normal_columns(cfg.n_tx, profile.sigma_rd_sq());
    cs.err_rd = rng.complex_normal_columns(cfg.n_tx, profile.error_rd());
    cs.g_sr = cs.ghat_sr + cs.err_sr;
    cs.g_rd = cs.ghat_rd + cs.err_rd;
    if (cfg.li_variance > 0.0)
        cs.g_rr = rng.complex_normal(cfg.n_rx, cfg.n_tx, cfg.li_variance);
    else
        cs.g_rr.zeros(cfg.n_rx, cfg.n_tx);
    return cs;
}

} // namespace fdrelay
