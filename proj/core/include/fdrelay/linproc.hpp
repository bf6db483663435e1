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

#ifndef FDRELAY_LINPROC_HPP
#define FDRELAY_LINPROC_HPP

#include "fdrelay/channel.hpp"
#include "fdrelay/model.hpp"

#include <armadillo>

#include <stdexcept>
#include <string_view>

namespace fdrelay
{

enum class Scheme
{
    ZF,
    MR
};

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name); // "zf" | "mr", throws std::invalid_argument

// Thrown when an estimated Gram matrix is numerically singular.
class SingularDrawError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct ProcessingPair
{
    arma::cx_mat w_t; // K x Nrx receive matrix W^T
    arma::cx_mat a;   // Ntx x K precoder
    Scheme scheme = Scheme::ZF;
    double alpha = 0.0;
};

// Long-term normalization constants; depend on (cfg, profile) only.
double alpha_zf(const SystemConfig &cfg, const LargeScaleProfile &profile);
double alpha_mr(const SystemConfig &cfg, const LargeScaleProfile &profile);

// (H^H H)^{-1} via Cholesky. Throws SingularDrawError on failure or rcond < 1e-12.
arma::cx_mat gram_inverse(const arma::cx_mat &h);

ProcessingPair zf_pair(const ChannelSet &channels, const LargeScaleProfile &profile, const SystemConfig &cfg);
ProcessingPair mr_pair(const ChannelSet &channels, const LargeScaleProfile &profile, const SystemConfig &cfg);
ProcessingPair make_pair(Scheme scheme, const ChannelSet &channels, const LargeScaleProfile &profile,
                         const SystemConfig &cfg);

} // namespace fdrelay

#endif
