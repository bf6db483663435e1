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

#ifndef FDRELAY_CHANNEL_HPP
#define FDRELAY_CHANNEL_HPP

#include "fdrelay/model.hpp"
#include "fdrelay/rng.hpp"

#include <armadillo>

namespace fdrelay
{

struct TrueChannels
{
    arma::cx_mat g_sr; // Nrx x K
    arma::cx_mat g_rd; // Ntx x K
    arma::cx_mat g_rr; // Nrx x Ntx
};

// Channels seen only during training: destinations -> receive array and sources -> transmit array.
struct CrossChannels
{
    arma::cx_mat gbar_rd; // Nrx x K
    arma::cx_mat gbar_sr; // Ntx x K
};

struct PilotNoise
{
    arma::cx_mat n_rp; // Nrx x tau
    arma::cx_mat n_tp; // Ntx x tau
};

// One joint realization. g = ghat + err holds exactly.
struct ChannelSet
{
    arma::cx_mat g_sr, g_rd, g_rr;
    arma::cx_mat ghat_sr, ghat_rd;
    arma::cx_mat err_sr, err_rd;
};

struct PilotBook
{
    arma::cx_mat phi_s; // K x tau
    arma::cx_mat phi_d; // K x tau
};

TrueChannels sample_true_channels(const SystemConfig &cfg, const LargeScaleProfile &profile, Rng &rng);

CrossChannels sample_cross_channels(const SystemConfig &cfg, const LargeScaleProfile &profile, Rng &rng);

PilotNoise sample_pilot_noise(const SystemConfig &cfg, Rng &rng);

// Rows 0..K-1 and K..2K-1 of the normalized tau-point DFT matrix.
PilotBook generate_pilots(arma::uword pairs, arma::uword tau);

// Deterministic core of the MMSE estimator: everything random is passed in.
ChannelSet estimate_from_pilots(const TrueChannels &truth, const CrossChannels &cross, const PilotNoise &noise,
                                const PilotBook &pilots, const SystemConfig &cfg, const LargeScaleProfile &profile);

// Draws cross channels and noise from `rng`, then runs estimate_from_pilots.
ChannelSet estimate_via_pilots(const TrueChannels &truth, const PilotBook &pilots, const SystemConfig &cfg,
                               const LargeScaleProfile &profile, Rng &rng);

// Estimate ~ CN(0, sigma^2), error ~ CN(0, beta - sigma^2), independent; g is their sum.
ChannelSet sample_estimate_direct(const SystemConfig &cfg, const LargeScaleProfile &profile, Rng &rng);

} // namespace fdrelay

#endif
