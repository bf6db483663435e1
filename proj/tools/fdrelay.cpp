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

// Command-line front end for the experiment runner.

#include "fdrelay/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace
{

std::string read_file(const std::string &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw fdrelay::ExperimentError("invalid_config", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int fail(const std::string &code, const std::string &message, int status)
{
    std::cerr << fdrelay::error_line(code, message) << '\n';
    return status;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"fdrelay: full-duplex massive-MIMO relay experiments"};
    app.require_subcommand(1);

    std::string preset, config_file, manifest_file, out;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    unsigned workers = 0;

    CLI::App *run = app.add_subcommand("run", "Run a preset and write CSV series plus manifest.json");
    run->add_option("--preset", preset, "fig2 fig3 fig4 fig6 fig7 fig8 fig9 custom");
    run->add_option("--config", config_file, "Flat key = value file applied after the preset");
    run->add_option("--manifest", manifest_file, "Reproduce a previous run from its manifest.json");
    run->add_option("--set", sets, "key=value override, repeatable (e.g. ps_db=5, sweep=li_db:-10:30:21)");
    auto *seed_opt = run->add_option("--seed", seed, "Master seed");
    auto *trials_opt = run->add_option("--trials", trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    run->add_option("--out", out, "Output directory (default $FDRELAY_OUT_DIR or ./fdrelay-out)");
    run->add_option("--workers", workers, "Worker threads, 0 = all cores; never changes results");

    CLI::App *list = app.add_subcommand("presets", "List presets and configuration keys");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        return fail("usage", e.what(), 64);
    }

    if (list->parsed())
    {
        std::cout << "presets: fig2 fig3 fig4 fig6 fig7 fig8 fig9 custom\nkeys:";
        for (const std::string &k : fdrelay::parameter_names())
            std::cout << ' ' << k;
        std::cout << "\nalso: antennas seed trials sweep out series_antennas series_li series_li_db <power>_db\n";
        return 0;
    }

    try
    {
        if (!manifest_file.empty() && (!preset.empty() || !config_file.empty()))
            throw fdrelay::ExperimentError("invalid_config", "--manifest excludes --preset and --config");
        fdrelay::ExperimentConfig cfg;
        if (!manifest_file.empty())
            cfg = fdrelay::config_from_manifest(read_file(manifest_file));
        else
            cfg = fdrelay::preset_config(preset.empty() ? fdrelay::Preset::Custom : fdrelay::parse_preset(preset));
        if (!config_file.empty())
            fdrelay::apply_config_text(cfg, read_file(config_file));
        for (const std::string &s : sets)
        {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw fdrelay::ExperimentError("invalid_config", "--set expects key=value, got '" + s + "'");
            if (s.substr(0, eq) == "preset")
                throw fdrelay::ExperimentError("invalid_config", "use --preset instead of --set preset=...");
            fdrelay::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        if (*seed_opt)
            cfg.seed = seed;
        if (*trials_opt)
            cfg.trials = trials;
        if (!out.empty())
            cfg.output_dir = out;
        cfg.workers = workers;

        const fdrelay::RunResult result = fdrelay::run(cfg);
        for (const std::string &f : result.files)
            std::cout << f << '\n';
        return 0;
    }
    catch (const fdrelay::ExperimentError &e)
    {
        return fail(e.code(), e.what(), 2);
    }
    catch (const std::exception &e)
    {
        return fail("internal", e.what(), 3);
    }
}
