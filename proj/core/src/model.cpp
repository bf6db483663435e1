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

#include "fdrelay/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fdrelay
{

void SystemConfig::validate(bool zero_forcing) const
{
    if (pairs < 1)
        throw std::invalid_argument("SystemConfig: pairs must be >= 1");
    if (n_rx < 1 || n_tx < 1)
        throw std::invalid_argument("SystemConfig: antenna counts must be >= 1");
    if (zero_forcing && (n_rx <= pairs || n_tx <= pairs))
        throw std::invalid_argument("SystemConfig: zero-forcing needs n_rx > pairs and n_tx > pairs");
    if (training < 2 * pairs)
        throw std::invalid_argument("SystemConfig: training length must be >= 2 * pairs");
    if (training >= coherence)
        throw std::invalid_argument("SystemConfig: training length must be < coherence interval");
    if (!(pilot_power >= 0.0) || !(source_power >= 0.0) || !(relay_power >= 0.0))
        throw std::invalid_argument("SystemConfig: powers must be >= 0");
    if (!(li_variance >= 0.0))
        throw std::invalid_argument("SystemConfig: li_variance must be >= 0");
    if (delay < 1)
        throw std::invalid_argument("SystemConfig: delay must be >= 1");
}

double SystemConfig::data_fraction() const
{
    return static_cast<double>(coherence - training) / static_cast<double>(coherence);
}

void DropGeometry::validate() const
{
    if (!(disk_diameter > 0.0) || !(path_exponent > 0.0) || !(ref_distance > 0.0))
        throw std::invalid_argument("DropGeometry: diameter, path exponent and reference distance must be positive");
    if (!(shadow_sigma_db >= 0.0))
        throw std::invalid_argument("DropGeometry: shadow_sigma_db must be >= 0");
}

double estimation_variance(double beta, double tau, double pilot_power)
{
    const double snr = tau * pilot_power;
    return snr * beta * beta / (snr * beta + 1.0);
}

namespace
{

void check_gains(const arma::vec &beta_sr, const arma::vec &beta_rd)
{
    if (beta_sr.n_elem == 0)
        throw std::invalid_argument("profile: need at least one pair");
    if (beta_sr.n_elem != beta_rd.n_elem)
        throw std::invalid_argument("profile: beta_sr and beta_rd lengths differ (" + std::to_string(beta_sr.n_elem) +
                                    " vs " + std::to_string(beta_rd.n_elem) + ")");
    if (arma::any(beta_sr <= 0.0) || arma::any(beta_rd <= 0.0) || !beta_sr.is_finite() || !beta_rd.is_finite())
        throw std::invalid_argument("profile: large-scale gains must be positive and finite");
}

} // namespace

LargeScaleProfile make_profile(const arma::vec &beta_sr, const arma::vec &beta_rd, double tau, double pilot_power)
{
    check_gains(beta_sr, beta_rd);
    if (!(tau >= 1.0) || !(pilot_power >= 0.0))
        throw std::invalid_argument("profile: need tau >= 1 and pilot power >= 0");

    LargeScaleProfile p;
    p.beta_sr_ = beta_sr;
    p.beta_rd_ = beta_rd;
    p.sigma_sr_sq_ = beta_sr;
    p.sigma_rd_sq_ = beta_rd;
    p.sigma_sr_sq_.transform([&](double b) { return estimation_variance(b, tau, pilot_power); });
    p.sigma_rd_sq_.transform([&](double b) { return estimation_variance(b, tau, pilot_power); });
    return p;
}

LargeScaleProfile make_profile_with_estimates(const arma::vec &beta_sr, const arma::vec &beta_rd,
                                              const arma::vec &sigma_sr_sq, const arma::vec &sigma_rd_sq)
{
    check_gains(beta_sr, beta_rd);
    if (sigma_sr_sq.n_elem != beta_sr.n_elem || sigma_rd_sq.n_elem != beta_rd.n_elem)
        throw std::invalid_argument("profile: estimate variance lengths must match the gains");
    if (arma::any(sigma_sr_sq < 0.0) || arma::any(sigma_rd_sq < 0.0) || arma::any(sigma_sr_sq > beta_sr) ||
        arma::any(sigma_rd_sq > beta_rd))
        throw std::invalid_argument("profile: need 0 <= sigma^2 <= beta");

    LargeScaleProfile p;
    p.beta_sr_ = beta_sr;
    p.beta_rd_ = beta_rd;
    p.sigma_sr_sq_ = sigma_sr_sq;
    p.sigma_rd_sq_ = sigma_rd_sq;
    return p;
}

LargeScaleProfile uniform_profile(arma::uword pairs, double beta, double tau, double pilot_power)
{
    const arma::vec b(pairs, arma::fill::value(beta));
    return make_profile(b, b, tau, pilot_power);
}

LargeScaleProfile snapshot_profile(double tau, double pilot_power)
{
    const arma::vec beta_sr = {0.749, 0.246, 0.125, 0.635, 4.468, 0.031, 0.064, 0.257, 0.195, 0.315};
    const arma::vec beta_rd = {0.070, 0.121, 0.134, 0.209, 0.198, 0.184, 0.065, 0.051, 0.236, 1.641};
    return make_profile(beta_sr, beta_rd, tau, pilot_power);
}

double drop_gain(const DropGeometry &geometry, double distance, double shadow_db)
{
    const double z = db_to_linear(shadow_db);
    return z / (1.0 + std::pow(distance / geometry.ref_distance, geometry.path_exponent));
}

LargeScaleProfile draw_urban_profile(const DropGeometry &geometry, arma::uword pairs, double tau, double pilot_power,
                                     Rng &rng)
{
    geometry.validate();
    if (pairs < 1)
        throw std::invalid_argument("draw_urban_profile: pairs must be >= 1");

    const double radius = 0.5 * geometry.disk_diameter;
    auto draw = [&] {
        // Uniform on the disk: radius ~ R sqrt(U); the angle does not affect the distance.
        const double distance = radius * std::sqrt(rng.uniform());
        const double shadow_db = rng.normal(0.0, geometry.shadow_sigma_db);
        return drop_gain(geometry, distance, shadow_db);
    };

    arma::vec beta_sr(pairs), beta_rd(pairs);
    for (arma::uword k = 0; k < pairs; ++k)
    {
        beta_sr(k) = draw();
        beta_rd(k) = draw();
    }
    return make_profile(beta_sr, beta_rd, tau, pilot_power);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

} // namespace fdrelay
