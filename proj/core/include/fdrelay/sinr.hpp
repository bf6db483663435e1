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

#ifndef FDRELAY_SINR_HPP
#define FDRELAY_SINR_HPP

#include "fdrelay/linproc.hpp"
#include "fdrelay/model.hpp"

#include <armadillo>

namespace fdrelay
{

// SINR_SR,k = a_k p_k / (sum_j b_j p_j + c_k Pr + 1),  SINR_RD,k = d_k Pr / (e_k Pr + 1).
struct SinrCoefficients
{
    arma::vec a, b, c, d, e;
};

struct SinrPair
{
    arma::vec sr;
    arma::vec rd;
};

// Uses cfg.n_rx, cfg.n_tx and cfg.li_variance. ZF requires n_rx, n_tx > pairs.
SinrCoefficients sinr_coefficients(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme);

SinrPair coefficient_sinr(const SinrCoefficients &coeffs, const arma::vec &source_powers, double relay_power);

} // namespace fdrelay

#endif
