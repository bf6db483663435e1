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

#include "fdrelay/rng.hpp"

#include <cmath>

namespace fdrelay
{

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

Rng Rng::stream(std::uint64_t master, std::uint64_t index)
{
    return Rng(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

double Rng::uniform() { return unif_(engine_); }

double Rng::normal() { return gauss_(engine_); }

double Rng::normal(double mean, double stddev) { return mean + stddev * gauss_(engine_); }

std::complex<double> Rng::complex_normal(double variance)
{
    const double s = std::sqrt(0.5 * variance);
    const double re = gauss_(engine_);
    const double im = gauss_(engine_);
    return {s * re, s * im};
}

arma::cx_mat Rng::complex_normal(arma::uword rows, arma::uword cols, double variance)
{
    arma::cx_mat out(rows, cols);
    const double s = std::sqrt(0.5 * variance);
    auto *p = out.memptr();
    for (arma::uword i = 0; i < out.n_elem; ++i)
    {
        const double re = gauss_(engine_);
        const double im = gauss_(engine_);
        p[i] = {s * re, s * im};
    }
    return out;
}

arma::cx_mat Rng::complex_normal_columns(arma::uword rows, const arma::vec &column_variance)
{
    arma::cx_mat out(rows, column_variance.n_elem);
    for (arma::uword c = 0; c < out.n_cols; ++c)
    {
        const double s = std::sqrt(0.5 * column_variance(c));
        auto *col = out.colptr(c);
        for (arma::uword r = 0; r < rows; ++r)
        {
            const double re = gauss_(engine_);
            const double im = gauss_(engine_);
            col[r] = {s * re, s * im};
        }
    }
    return out;
}

} // namespace fdrelay
