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

#ifndef FDRELAY_RNG_HPP
#define FDRELAY_RNG_HPP

#include <armadillo>

#include <complex>
#include <cstdint>
#include <random>

namespace fdrelay
{

// Explicit random stream. Every randomized operation takes one of these by reference;
// there is no global generator anywhere in the library.
class Rng
{
public:
    explicit Rng(std::uint64_t seed);

    // Independent stream for trial `index` of a run seeded with `master`. The mapping is
    // fixed, so a trial draws the same numbers no matter which worker executes it.
    static Rng stream(std::uint64_t master, std::uint64_t index);

    double uniform();      // [0, 1)
    double normal();       // N(0, 1)
    double normal(double mean, double stddev);

    // Circularly-symmetric CN(0, variance): real and imaginary parts each N(0, variance / 2).
    std::complex<double> complex_normal(double variance);

    // rows x cols matrix of i.i.d. CN(0, variance).
    arma::cx_mat complex_normal(arma::uword rows, arma::uword cols, double variance);

    // rows x cols matrix whose column k is i.i.d. CN(0, column_variance(k)).
    arma::cx_mat complex_normal_columns(arma::uword rows, const arma::vec &column_variance);

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

// SplitMix64 finalizer; used to derive stream seeds.
std::uint64_t mix64(std::uint64_t x);

} // namespace fdrelay

#endif
