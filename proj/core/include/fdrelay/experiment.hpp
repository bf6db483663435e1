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

#ifndef FDRELAY_EXPERIMENT_HPP
#define FDRELAY_EXPERIMENT_HPP

#include "fdrelay/model.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fdrelay
{

enum class Preset
{
    Fig2, // bound vs genie sum rate over SNR
    Fig3, // ZF closed form vs Monte Carlo over SNR, one series per array size
    Fig4, // required Ps for a per-pair rate vs antennas, fixed Pp and Pp = Ps
    Fig6, // FD / HD / hybrid sum SE vs loop-interference level
    Fig7, // FD / HD / hybrid sum SE vs antennas
    Fig8, // CDF of sum SE over urban drops
    Fig9, // energy efficiency vs target sum SE (power allocation)
    Custom
};

std::string_view to_string(Preset p);
Preset parse_preset(std::string_view name); // throws ExperimentError

// Failure with a stable machine-readable code: invalid_config, invalid_sweep, invalid_manifest,
// unwritable_output, numerical_failure.
class ExperimentError : public std::runtime_error
{
public:
    ExperimentError(std::string code, const std::string &message);
    const std::string &code() const { return code_; }

private:
    std::string code_;
};

enum class SweepScale
{
    Linear, // evenly spaced values
    Db,     // evenly spaced in dB, converted to linear
    Log2    // evenly spaced exponents e, value 2^e
};

std::string_view to_string(SweepScale s);

struct SweepAxis
{
    std::string variable; // canonical parameter name or "antennas"
    double from = 0.0;
    double to = 0.0;
    std::size_t count = 1;
    SweepScale scale = SweepScale::Linear;

    // Parameter values in linear units (integer parameters rounded).
    std::vector<double> values() const;
    // The first CSV column: dB values for Db, plain values otherwise.
    std::vector<double> labels() const;
    std::string label_column() const;
};

// "variable:from:to:count[:scale]" with scale linear|db|log2. A dB-suffixed variable
// (e.g. ps_db) implies scale db.
SweepAxis parse_sweep(std::string_view spec);

struct ExperimentConfig
{
    Preset preset = Preset::Custom;
    // Every tunable, keyed by canonical name, in linear units. Integers and 0/1 flags are
    // stored as doubles.
    std::map<std::string, double> params;
    std::vector<double> series_antennas; // fig3, fig9
    std::vector<double> series_li;       // fig4 (linear)
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    std::optional<SweepAxis> sweep;
    std::string output_dir;
    unsigned workers = 0; // not part of the manifest; results never depend on it

    double param(const std::string &name) const;
    void validate() const; // throws ExperimentError
};

// Fully resolved defaults for a preset.
ExperimentConfig preset_config(Preset p);

// One `key=value` override. Accepts every canonical parameter, dB-suffixed aliases (ps_db,
// snr_db, pp_db, pr_db, li_db, p0_db, p1_db, beta_db, <name>_db), antennas, seed, trials,
// sweep, out, series_antennas and series_li (comma lists; series_li_db in dB).
void apply_setting(ExperimentConfig &cfg, std::string_view key, std::string_view value);

// Applies a config file: one `key = value` per line, '#' starts a comment. A `preset` line
// must come first if present; it resets everything to that preset's defaults.
void apply_config_text(ExperimentConfig &cfg, std::string_view text);

std::vector<std::string> parameter_names();

struct Table
{
    std::string name; // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Header row plus one row per point, numbers in shortest round-trip form.
std::string to_csv(const Table &table);

// Runs the experiment without touching the filesystem.
std::vector<Table> compute(const ExperimentConfig &cfg);

// Resolved configuration plus the output inventory; deterministic bytes.
std::string manifest_json(const ExperimentConfig &cfg, const std::vector<Table> &tables);
ExperimentConfig config_from_manifest(std::string_view json_text);

struct RunResult
{
    std::vector<std::string> files; // CSV paths, then the manifest
    std::vector<Table> tables;
};

// compute() and write <out>/<table>.csv plus <out>/manifest.json.
RunResult run(const ExperimentConfig &cfg);

// $FDRELAY_OUT_DIR if set and non-empty, else "fdrelay-out".
std::string default_output_dir();

// {"error":{"code":...,"message":...}} on one line.
std::string error_line(const std::string &code, const std::string &message);

} // namespace fdrelay

#endif
