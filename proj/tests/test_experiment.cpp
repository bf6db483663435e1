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

#include "fdrelay/experiment.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

using namespace fdrelay;
namespace fs = std::filesystem;

namespace
{

std::string code_of(const std::function<void()> &f)
{
    try
    {
        f();
    }
    catch (const ExperimentError &e)
    {
        return e.code();
    }
    return "";
}

std::string slurp(const fs::path &p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string &name)
{
    const fs::path d = fs::temp_directory_path() / ("fdrelay_test_" + name);
    fs::remove_all(d);
    return d;
}

} // namespace

TEST_SUITE("experiment")
{
    TEST_CASE("preset names round trip")
    {
        for (Preset p : {Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig6, Preset::Fig7, Preset::Fig8,
                         Preset::Fig9, Preset::Custom})
        {
            CHECK(parse_preset(to_string(p)) == p);
            CHECK_NOTHROW(preset_config(p).validate());
        }
        CHECK(code_of([] { parse_preset("fig5"); }) == "invalid_config");
    }

    TEST_CASE("settings and dB aliases")
    {
        ExperimentConfig cfg = preset_config(Preset::Custom);
        apply_setting(cfg, "ps_db", "20");
        CHECK(cfg.param("source_power") == doctest::Approx(100.0));
        apply_setting(cfg, "snr_db", "10");
        CHECK(cfg.param("source_power") == doctest::Approx(10.0));
        apply_setting(cfg, "li_db", "-10");
        CHECK(cfg.param("li_variance") == doctest::Approx(0.1));
        apply_setting(cfg, "antennas", "64");
        CHECK(cfg.param("n_rx") == 64.0);
        CHECK(cfg.param("n_tx") == 64.0);
        apply_setting(cfg, "monte_carlo", "true");
        CHECK(cfg.param("monte_carlo") == 1.0);
        apply_setting(cfg, "series_li_db", "0,10");
        REQUIRE(cfg.series_li.size() == 2);
        CHECK(cfg.series_li[1] == doctest::Approx(10.0));

        CHECK(code_of([&] { apply_setting(cfg, "bogus", "1"); }) == "invalid_config");
        CHECK(code_of([&] { apply_setting(cfg, "pairs", "2.5"); }) == "invalid_config");
        CHECK(code_of([&] { apply_setting(cfg, "monte_carlo", "2"); }) == "invalid_config");
        CHECK(code_of([&] { apply_setting(cfg, "ps", "abc"); }) == "invalid_config");
        CHECK(code_of([&] { apply_setting(cfg, "trials", "0"); }) == "invalid_config");
        CHECK(code_of([&] { apply_setting(cfg, "antennas", "0"); }) == "invalid_config");
        const auto names = parameter_names();
        CHECK(std::find(names.begin(), names.end(), "li_variance") != names.end());
    }

    TEST_CASE("sweep specifications")
    {
        const SweepAxis a = parse_sweep("n_rx:4:6:3:log2");
        CHECK(a.values() == std::vector<double>{16.0, 32.0, 64.0});
        CHECK(a.label_column() == "n_rx");

        const SweepAxis b = parse_sweep("snr_db:-10:20:4");
        CHECK(b.variable == "source_power");
        CHECK(b.scale == SweepScale::Db);
        CHECK(b.labels() == std::vector<double>{-10.0, 0.0, 10.0, 20.0});
        CHECK(b.values()[3] == doctest::Approx(100.0));
        CHECK(b.label_column() == "snr_db");

        const SweepAxis c = parse_sweep("antennas:10:40:4");
        CHECK(c.values() == std::vector<double>{10.0, 20.0, 30.0, 40.0});
        CHECK(parse_sweep("li_variance:2:2:1").values() == std::vector<double>{2.0});

        for (const char *bad : {"source_power:1:2", "nope:1:2:3", "source_power:1:2:0", "source_power:1:x:3", "source_power:1:2:3:cubic",
                                "ps_db:1:2:3:linear", "antennas:1:2:3:db", "monte_carlo:0:1:2", "source_power:1:inf:2"})
        {
            CAPTURE(bad);
            CHECK(code_of([&] { parse_sweep(bad); }) == "invalid_sweep");
        }
    }

    TEST_CASE("preset-specific sweep restrictions")
    {
        ExperimentConfig f8 = preset_config(Preset::Fig8);
        f8.sweep = parse_sweep("source_power:1:2:2");
        CHECK(code_of([&] { f8.validate(); }) == "invalid_sweep");
        ExperimentConfig f4 = preset_config(Preset::Fig4);
        f4.sweep = parse_sweep("source_power:1:2:2");
        CHECK(code_of([&] { f4.validate(); }) == "invalid_sweep");
        ExperimentConfig f3 = preset_config(Preset::Fig3);
        f3.sweep = parse_sweep("antennas:20:40:2");
        CHECK(code_of([&] { f3.validate(); }) == "invalid_sweep");
        ExperimentConfig f9 = preset_config(Preset::Fig9);
        f9.series_antennas.clear();
        CHECK(code_of([&] { f9.validate(); }) == "invalid_config");
    }

    TEST_CASE("config text")
    {
        ExperimentConfig cfg;
        apply_config_text(cfg, "# comment\npreset = fig6\n\nli_db = 5 # inline\nsweep = li_db:0:10:3\nseed = 9\n");
        CHECK(cfg.preset == Preset::Fig6);
        CHECK(cfg.param("li_variance") == doctest::Approx(db_to_linear(5.0)));
        CHECK(cfg.seed == 9);
        REQUIRE(cfg.sweep);
        CHECK(cfg.sweep->count == 3);

        ExperimentConfig other;
        CHECK(code_of([&] { apply_config_text(other, "seed = 3\npreset = fig2\n"); }) == "invalid_config");
        CHECK(code_of([&] { apply_config_text(other, "just words\n"); }) == "invalid_config");
        try
        {
            apply_config_text(other, "seed = 1\nunknown = 2\n");
            FAIL("expected an error");
        }
        catch (const ExperimentError &e)
        {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }

    TEST_CASE("csv formatting")
    {
        const Table t{"x", {"a", "b"}, {{0.1, 3.0}, {-2.5, 1e-20}}};
        CHECK(to_csv(t) == "a,b\n0.1,3\n-2.5,1e-20\n");
    }

    TEST_CASE("fig6 half duplex ignores loop interference")
    {
        ExperimentConfig cfg = preset_config(Preset::Fig6);
        const auto tables = compute(cfg);
        REQUIRE(tables.size() == 2);
        for (const Table &t : tables)
        {
            CHECK(t.columns[0] == "li_db");
            REQUIRE(t.rows.size() == 21);
            for (const auto &r : t.rows)
            {
                CHECK(r[2] == t.rows[0][2]);
                CHECK(r[3] == std::max(r[1], r[2]));
            }
            // FD degrades as loop interference grows.
            CHECK(t.rows.back()[1] < t.rows.front()[1]);
        }
    }

    TEST_CASE("fig4 tables for both pilot couplings")
    {
        ExperimentConfig cfg = preset_config(Preset::Fig4);
        cfg.sweep = parse_sweep("antennas:5:9:3:log2");
        const auto tables = compute(cfg);
        REQUIRE(tables.size() == 8);
        CHECK(tables[0].name == "fig4_zf_case1_li1");
        CHECK(tables[2].name == "fig4_zf_case2_li1");
        for (const Table &t : tables)
        {
            CHECK(t.columns == std::vector<std::string>{"antennas", "required_ps_db"});
            for (std::size_t i = 1; i < t.rows.size(); ++i)
                CHECK(t.rows[i][1] < t.rows[i - 1][1]);
        }
        // The li = 1 series is reachable everywhere on this grid.
        CHECK(tables[0].rows.size() == 3);
    }

    TEST_CASE("fig8 distributions")
    {
        ExperimentConfig cfg = preset_config(Preset::Fig8);
        cfg.params["drops"] = 300;
        const auto tables = compute(cfg);
        REQUIRE(tables.size() == 2);
        for (const Table &t : tables)
        {
            REQUIRE(t.rows.size() == 300);
            CHECK(t.rows.back()[0] == 1.0);
            for (std::size_t i = 1; i < t.rows.size(); ++i)
                for (std::size_t c = 0; c < 4; ++c)
                    CHECK(t.rows[i][c] >= t.rows[i - 1][c]);
            // Quantiles of max(fd, hd) dominate those of fd and hd.
            for (const auto &r : t.rows)
                CHECK(r[3] >= std::max(r[1], r[2]));
        }
    }

    TEST_CASE("results do not depend on worker count")
    {
        ExperimentConfig cfg = preset_config(Preset::Custom);
        apply_setting(cfg, "monte_carlo", "1");
        apply_setting(cfg, "antennas", "16");
        apply_setting(cfg, "pairs", "3");
        apply_setting(cfg, "sweep", "snr_db:0:10:2");
        cfg.trials = 200;
        cfg.workers = 1;
        const auto a = compute(cfg);
        cfg.workers = 4;
        const auto b = compute(cfg);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(to_csv(a[i]) == to_csv(b[i]));
        cfg.seed = 2;
        CHECK(to_csv(compute(cfg)[0]) != to_csv(a[0]));
    }

    TEST_CASE("manifest round trip")
    {
        ExperimentConfig cfg = preset_config(Preset::Fig7);
        apply_setting(cfg, "sweep", "antennas:20:60:3");
        apply_setting(cfg, "li_db", "7");
        cfg.seed = 123;
        const auto tables = compute(cfg);
        const std::string m = manifest_json(cfg, tables);
        const ExperimentConfig back = config_from_manifest(m);
        CHECK(back.preset == cfg.preset);
        CHECK(back.seed == 123);
        CHECK(back.params == cfg.params);
        REQUIRE(back.sweep);
        CHECK(back.sweep->count == 3);
        CHECK(manifest_json(back, compute(back)) == m);

        CHECK(code_of([] { config_from_manifest("{}"); }) == "invalid_manifest");
        CHECK(code_of([] { config_from_manifest("not json"); }) == "invalid_manifest");
    }

    TEST_CASE("run writes tables and manifest")
    {
        const fs::path dir = scratch_dir("run");
        ExperimentConfig cfg = preset_config(Preset::Fig6);
        cfg.output_dir = dir.string();
        const RunResult r = run(cfg);
        REQUIRE(r.files.size() == 3);
        CHECK(fs::exists(dir / "fig6_zf.csv"));
        CHECK(slurp(dir / "fig6_mr.csv") == to_csv(r.tables[1]));
        CHECK(slurp(dir / "manifest.json") == manifest_json(cfg, r.tables));
        fs::remove_all(dir);
    }

    TEST_CASE("unwritable output")
    {
        const fs::path dir = scratch_dir("blocked");
        {
            std::ofstream f(dir);
            f << "file in the way";
        }
        ExperimentConfig cfg = preset_config(Preset::Fig6);
        cfg.output_dir = (dir / "sub").string();
        CHECK(code_of([&] { run(cfg); }) == "unwritable_output");
        fs::remove(dir);
    }

    TEST_CASE("default output directory")
    {
        ::setenv("FDRELAY_OUT_DIR", "/tmp/somewhere", 1);
        CHECK(default_output_dir() == "/tmp/somewhere");
        ::setenv("FDRELAY_OUT_DIR", "", 1);
        CHECK(default_output_dir() == "fdrelay-out");
        ::unsetenv("FDRELAY_OUT_DIR");
        CHECK(default_output_dir() == "fdrelay-out");
    }

    TEST_CASE("error line")
    {
        CHECK(error_line("invalid_sweep", "bad \"x\"") ==
              R"({"error":{"code":"invalid_sweep","message":"bad \"x\""}})");
    }

    TEST_CASE("numerical problems surface as config errors")
    {
        ExperimentConfig cfg = preset_config(Preset::Fig7);
        apply_setting(cfg, "sweep", "antennas:5:20:4");
        CHECK(code_of([&] { compute(cfg); }) == "invalid_config");
    }
}
