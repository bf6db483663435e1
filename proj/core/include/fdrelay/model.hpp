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

#ifndef FDRELAY_MODEL_HPP
#define FDRELAY_MODEL_HPP

#include "fdrelay/rng.hpp"

#include <armadillo>

namespace fdrelay
{

// Scalar system parameters. All powers are linear (dB exists only at the config boundary).
struct SystemConfig
{
    arma::uword pairs = 10;      // K source-destination pairs
    arma::uword n_rx = 100;      // relay receive antennas
    arma::uword n_tx = 100;      // relay transmit antennas
    arma::uword coherence = 200; // T, symbols
    arma::uword training = 20;   // tau, symbols
    double pilot_power = 10.0;   // Pp
    double source_power = 10.0;  // Ps (uniform case)
    double relay_power = 100.0;  // Pr, total
    double li_variance = 1.0;    // loop-interference level sigma_LI^2
    arma::uword delay = 1;       // relay processing delay d >= 1

    // Throws std::invalid_argument. `zero_forcing` additionally requires n_rx, n_tx > pairs.
    void validate(bool zero_forcing = false) const;

    // Fraction of the coherence interval left for data, (T - tau) / T.
    double data_fraction() const;
};

// Per-pair large-scale gains and the MMSE estimate variances derived from them.
// Construct through make_profile / snapshot_profile / draw_urban_profile; immutable afterwards.
class LargeScaleProfile
{
public:
    const arma::vec &beta_sr() const { return beta_sr_; }
    const arma::vec &beta_rd() const { return beta_rd_; }
    const arma::vec &sigma_sr_sq() const { return sigma_sr_sq_; }
    const arma::vec &sigma_rd_sq() const { return sigma_rd_sq_; }
    arma::uword pairs() const { return beta_sr_.n_elem; }

    // Estimation error variances beta - sigma^2.
    arma::vec error_sr() const { return beta_sr_ - sigma_sr_sq_; }
    arma::vec error_rd() const { return beta_rd_ - sigma_rd_sq_; }

private:
    friend LargeScaleProfile make_profile(const arma::vec &, const arma::vec &, double, double);
    friend LargeScaleProfile make_profile_with_estimates(const arma::vec &, const arma::vec &, const arma::vec &,
                                                         const arma::vec &);

    arma::vec beta_sr_, beta_rd_, sigma_sr_sq_, sigma_rd_sq_;
};

// Urban drop geometry: nodes uniform on a disk centred on the relay.
struct DropGeometry
{
    double disk_diameter = 1000.0; // m
    double shadow_sigma_db = 8.0;  // log-normal shadowing std, dB
    double path_exponent = 3.8;    // nu
    double ref_distance = 200.0;   // l0, m

    void validate() const;
};

// sigma^2 = tau Pp beta^2 / (tau Pp beta + 1).
double estimation_variance(double beta, double tau, double pilot_power);

LargeScaleProfile make_profile(const arma::vec &beta_sr, const arma::vec &beta_rd, double tau, double pilot_power);

// Escape hatch for oracle tests that need to pin sigma^2 directly (e.g. perfect CSI,
// sigma^2 = beta). Requires 0 <= sigma^2 <= beta elementwise.
LargeScaleProfile make_profile_with_estimates(const arma::vec &beta_sr, const arma::vec &beta_rd,
                                              const arma::vec &sigma_sr_sq, const arma::vec &sigma_rd_sq);

// Uniform profile: every beta equal to `beta`.
LargeScaleProfile uniform_profile(arma::uword pairs, double beta, double tau, double pilot_power);

// The ten-pair snapshot used for the energy-efficiency experiment.
LargeScaleProfile snapshot_profile(double tau, double pilot_power);

// beta = z / (1 + (distance / l0)^nu) with 10 log10 z = shadow_db.
double drop_gain(const DropGeometry &geometry, double distance, double shadow_db);

LargeScaleProfile draw_urban_profile(const DropGeometry &geometry, arma::uword pairs, double tau, double pilot_power,
                                     Rng &rng);

double db_to_linear(double db);
double linear_to_db(double linear);

} // namespace fdrelay

#endif
