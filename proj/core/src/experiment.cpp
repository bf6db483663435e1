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

#include "fdrelay/montecarlo.hpp"
#include "fdrelay/powalloc.hpp"
#include "fdrelay/rates.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fdrelay
{

namespace
{

using json = nlohmann::json;

enum class Kind
{
    Int,
    Real,
    Flag
};

struct ParamSpec
{
    std::string_view name;
    Kind kind;
    std::string_view db_alias; // short stem accepted as <alias>_db; empty if dB makes no sense
};

constexpr ParamSpec kParams[] = {
    {"pairs", Kind::Int, ""},
    {"n_rx", Kind::Int, ""},
    {"n_tx", Kind::Int, ""},
    {"coherence", Kind::Int, ""},
    {"training", Kind::Int, ""},
    {"delay", Kind::Int, ""},
    {"pilot_power", Kind::Real, "pp"},
    {"source_power", Kind::Real, "ps"},
    {"relay_power", Kind::Real, "pr"},
    {"li_variance", Kind::Real, "li"},
    {"beta", Kind::Real, "beta"},
    {"disk_diameter", Kind::Real, ""},
    {"shadow_sigma_db", Kind::Real, ""},
    {"path_exponent", Kind::Real, ""},
    {"ref_distance", Kind::Real, ""},
    {"target_rate", Kind::Real, ""},
    {"peak_source", Kind::Real, "p0"},
    {"peak_relay", Kind::Real, "p1"},
    {"s0", Kind::Real, ""},
    {"drops", Kind::Int, ""},
    {"eps", Kind::Real, ""},
    {"max_iter", Kind::Int, ""},
    {"alpha", Kind::Real, ""},
    {"pilot_follows_source", Kind::Flag, ""}, // Pp = Ps
    {"relay_follows_source", Kind::Flag, ""}, // Pr = K Ps
    {"explicit_pilots", Kind::Flag, ""},
    {"monte_carlo", Kind::Flag, ""}, // custom preset only
};

const ParamSpec *find_param(std::string_view name)
{
    for (const ParamSpec &p : kParams)
        if (p.name == name)
            return &p;
    return nullptr;
}

// ps_db -> source_power, li_variance_db -> li_variance, snr_db -> source_power.
const ParamSpec *find_db_param(std::string_view key)
{
    constexpr std::string_view suffix = "_db";
    if (key.size() <= suffix.size() || key.substr(key.size() - suffix.size()) != suffix)
        return nullptr;
    const std::string_view stem = key.substr(0, key.size() - suffix.size());
    if (stem == "snr")
        return find_param("source_power");
    for (const ParamSpec &p : kParams)
        if (!p.db_alias.empty() && (p.name == stem || p.db_alias == stem))
            return &p;
    return nullptr;
}

Kind variable_kind(std::string_view variable)
{
    if (variable == "antennas")
        return Kind::Int;
    const ParamSpec *p = find_param(variable);
    return p ? p->kind : Kind::Real;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view what)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ExperimentError("invalid_config", std::string(what) + ": not a finite number: '" + std::string(text) +
                                                    "'");
    return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what)
{
    text = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ExperimentError("invalid_config",
                              std::string(what) + ": not a non-negative integer: '" + std::string(text) + "'");
    return v;
}

std::vector<double> parse_list(std::string_view text, std::string_view what)
{
    std::vector<double> out;
    while (true)
    {
        const auto comma = text.find(',');
        out.push_back(parse_double(text.substr(0, comma), what));
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string format_number(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc())
        throw std::runtime_error("format_number: conversion failed");
    return std::string(buf, ptr);
}

bool is_integral(double v) { return std::isfinite(v) && v == std::round(v); }

void check_sweep(const SweepAxis &axis)
{
    if (axis.variable != "antennas")
    {
        const ParamSpec *p = find_param(axis.variable);
        if (!p)
            throw ExperimentError("invalid_sweep", "sweep variable '" + axis.variable + "' is not a config field");
        if (p->kind == Kind::Flag)
            throw ExperimentError("invalid_sweep", "cannot sweep the flag '" + axis.variable + "'");
        if (axis.scale == SweepScale::Db && p->db_alias.empty())
            throw ExperimentError("invalid_sweep", "dB scale is not defined for '" + axis.variable + "'");
    }
    else if (axis.scale == SweepScale::Db)
        throw ExperimentError("invalid_sweep", "dB scale is not defined for 'antennas'");
    if (axis.count < 1 || axis.count > 100000)
        throw ExperimentError("invalid_sweep", "sweep count must be in [1, 100000]");
    if (!std::isfinite(axis.from) || !std::isfinite(axis.to))
        throw ExperimentError("invalid_sweep", "sweep bounds must be finite");
}

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t table, std::uint64_t point)
{
    return mix64(seed ^ mix64((table << 32) | point));
}

std::string scheme_tag(Scheme s) { return s == Scheme::ZF ? "zf" : "mr"; }

// Parameters at one sweep point, with the coupling rules applied to the system view.
struct Point
{
    std::map<std::string, double> p;

    double get(const std::string &name) const { return p.at(name); }
    arma::uword count(const std::string &name) const { return static_cast<arma::uword>(p.at(name)); }

    SystemConfig system() const
    {
        SystemConfig s;
        s.pairs = count("pairs");
        s.n_rx = count("n_rx");
        s.n_tx = count("n_tx");
        s.coherence = count("coherence");
        s.training = count("training");
        s.delay = count("delay");
        s.pilot_power = get("pilot_power");
        s.source_power = get("source_power");
        s.relay_power = get("relay_power");
        s.li_variance = get("li_variance");
        if (get("pilot_follows_source") != 0.0)
            s.pilot_power = s.source_power;
        if (get("relay_follows_source") != 0.0)
            s.relay_power = static_cast<double>(s.pairs) * s.source_power;
        return s;
    }

    DropGeometry geometry() const
    {
        DropGeometry g;
        g.disk_diameter = get("disk_diameter");
        g.shadow_sigma_db = get("shadow_sigma_db");
        g.path_exponent = get("path_exponent");
        g.ref_distance = get("ref_distance");
        return g;
    }

    LargeScaleProfile uniform() const
    {
        const SystemConfig s = system();
        return uniform_profile(s.pairs, get("beta"), static_cast<double>(s.training), s.pilot_power);
    }
};

void set_antennas(std::map<std::string, double> &p, double n)
{
    p["n_rx"] = n;
    p["n_tx"] = n;
}

struct Grid
{
    std::vector<Point> points;
    std::vector<double> labels;
    std::string label_column;
};

Grid make_grid(const ExperimentConfig &cfg, const std::map<std::string, double> &base)
{
    Grid g;
    if (!cfg.sweep)
    {
        g.points.push_back({base});
        g.labels.push_back(0.0);
        g.label_column = "point";
        return g;
    }
    const std::vector<double> values = cfg.sweep->values();
    g.labels = cfg.sweep->labels();
    g.label_column = cfg.sweep->label_column();
    for (double v : values)
    {
        Point pt{base};
        if (cfg.sweep->variable == "antennas")
            set_antennas(pt.p, v);
        else
            pt.p[cfg.sweep->variable] = v;
        g.points.push_back(std::move(pt));
    }
    return g;
}

TrialPlan plan_for(const ExperimentConfig &cfg, std::uint64_t seed)
{
    TrialPlan plan;
    plan.trials = cfg.trials;
    plan.seed = seed;
    plan.workers = cfg.workers;
    return plan;
}

std::vector<Table> run_fig2(const ExperimentConfig &cfg)
{
    const Grid grid = make_grid(cfg, cfg.params);
    std::vector<Table> out;
    std::uint64_t table_index = 0;
    for (Scheme s : {Scheme::ZF, Scheme::MR})
    {
        const std::string t = scheme_tag(s);
        Table tab{"fig2_" + t,
                  {grid.label_column, "sum_rate_" + t + "_closed", "sum_rate_" + t + "_mc",
                   "sum_rate_" + t + "_mc_stderr", "sum_rate_" + t + "_genie", "sum_rate_" + t + "_genie_stderr",
                   "genie_gap", "genie_gap_stderr"},
                  {}};
        for (std::size_t i = 0; i < grid.points.size(); ++i)
        {
            const Point &pt = grid.points[i];
            const SystemConfig sys = pt.system();
            const LargeScaleProfile prof = pt.uniform();
            const double closed = arma::accu(evaluate(sys, prof, s, Mode::FD).r_e2e);
            McOptions opts{plan_for(cfg, point_seed(cfg.seed, table_index, i)), pt.get("explicit_pilots") != 0.0};
            const McRateReport rep = mc_rate_bounds(sys, prof, s, opts);
            tab.rows.push_back({grid.labels[i], closed, rep.sum_rate.value, rep.sum_rate.std_error,
                                rep.genie_sum_rate.value, rep.genie_sum_rate.std_error, rep.genie_gap.value,
                                rep.genie_gap.std_error});
        }
        out.push_back(std::move(tab));
        ++table_index;
    }
    return out;
}

std::vector<Table> run_fig3(const ExperimentConfig &cfg)
{
    std::vector<Table> out;
    std::uint64_t table_index = 0;
    for (double n : cfg.series_antennas)
    {
        auto base = cfg.params;
        set_antennas(base, n);
        const Grid grid = make_grid(cfg, base);
        Table tab{"fig3_n" + format_number(n),
                  {grid.label_column, "sum_rate_zf_closed", "sum_rate_zf_mc", "sum_rate_zf_mc_stderr"},
                  {}};
        for (std::size_t i = 0; i < grid.points.size(); ++i)
        {
            const Point &pt = grid.points[i];
            const SystemConfig sys = pt.system();
            const LargeScaleProfile prof = pt.uniform();
            const double closed = arma::accu(evaluate(sys, prof, Scheme::ZF, Mode::FD).r_e2e);
            McOptions opts{plan_for(cfg, point_seed(cfg.seed, table_index, i)), pt.get("explicit_pilots") != 0.0};
            const McRateReport rep = mc_rate_bounds(sys, prof, Scheme::ZF, opts);
            tab.rows.push_back({grid.labels[i], closed, rep.sum_rate.value, rep.sum_rate.std_error});
        }
        out.push_back(std::move(tab));
        ++table_index;
    }
    return out;
}

std::vector<Table> run_fig4(const ExperimentConfig &cfg)
{
    std::vector<Table> out;
    for (Scheme s : {Scheme::ZF, Scheme::MR})
        for (PilotCoupling coupling : {PilotCoupling::Fixed, PilotCoupling::EqualsSource})
            for (double li : cfg.series_li)
            {
                auto base = cfg.params;
                base["li_variance"] = li;
                const Grid grid = make_grid(cfg, base);
                const std::string name = "fig4_" + scheme_tag(s) +
                                         (coupling == PilotCoupling::Fixed ? "_case1" : "_case2") + "_li" +
                                         format_number(li);
                std::vector<std::optional<double>> ps(grid.points.size());
                parallel_for(grid.points.size(), cfg.workers, [&](std::size_t i) {
                    const Point &pt = grid.points[i];
                    const SystemConfig sys = pt.system();
                    const arma::vec beta(sys.pairs, arma::fill::value(pt.get("beta")));
                    ps[i] = required_power(pt.get("target_rate"), s, sys, beta, beta, coupling);
                });
                // Points where the target is out of reach at any power are left out.
                Table tab{name, {grid.label_column, "required_ps_db"}, {}};
                for (std::size_t i = 0; i < ps.size(); ++i)
                    if (ps[i])
                        tab.rows.push_back({grid.labels[i], linear_to_db(*ps[i])});
                out.push_back(std::move(tab));
            }
    return out;
}

// fig6, fig7 and custom: closed-form FD / HD / hybrid sum SE per point.
std::vector<Table> run_modes(const ExperimentConfig &cfg, const std::string &stem, bool monte_carlo)
{
    const Grid grid = make_grid(cfg, cfg.params);
    std::vector<Table> out;
    std::uint64_t table_index = 0;
    for (Scheme s : {Scheme::ZF, Scheme::MR})
    {
        const std::string t = scheme_tag(s);
        Table tab{stem + "_" + t,
                  {grid.label_column, "sum_se_" + t + "_fd", "sum_se_" + t + "_hd", "sum_se_" + t + "_hybrid"},
                  {}};
        if (monte_carlo)
        {
            tab.columns.push_back("sum_se_" + t + "_mc");
            tab.columns.push_back("sum_se_" + t + "_mc_stderr");
        }
        tab.rows.resize(grid.points.size());
        auto point = [&](std::size_t i) {
            const Point &pt = grid.points[i];
            const SystemConfig sys = pt.system();
            const LargeScaleProfile prof = pt.uniform();
            const double fd = evaluate(sys, prof, s, Mode::FD).sum_se;
            const double hd = evaluate(sys, prof, s, Mode::HD).sum_se;
            std::vector<double> row{grid.labels[i], fd, hd, hybrid_from(fd, hd).sum_se};
            if (monte_carlo)
            {
                McOptions opts{plan_for(cfg, point_seed(cfg.seed, table_index, i)),
                               pt.get("explicit_pilots") != 0.0};
                const McRateReport rep = mc_rate_bounds(sys, prof, s, opts);
                const double pl = prelog(sys.coherence, sys.training, Mode::FD);
                row.push_back(pl * rep.sum_rate.value);
                row.push_back(pl * rep.sum_rate.std_error);
            }
            tab.rows[i] = std::move(row);
        };
        if (monte_carlo)
            for (std::size_t i = 0; i < grid.points.size(); ++i)
                point(i);
        else
            parallel_for(grid.points.size(), cfg.workers, point);
        out.push_back(std::move(tab));
        ++table_index;
    }
    return out;
}

std::vector<Table> run_fig8(const ExperimentConfig &cfg)
{
    const Point pt{cfg.params};
    const SystemConfig sys = pt.system();
    sys.validate(true);
    const DropGeometry geom = pt.geometry();
    geom.validate();
    const std::size_t drops = pt.count("drops");
    if (drops < 1)
        throw ExperimentError("invalid_config", "drops must be >= 1");
    const std::uint64_t seed = point_seed(cfg.seed, 0, 0);

    // se[scheme][mode][drop], mode 0 = FD, 1 = HD.
    std::vector<double> se(4 * drops);
    parallel_for(drops, cfg.workers, [&](std::size_t d) {
        Rng rng = Rng::stream(seed, d);
        const LargeScaleProfile prof =
            draw_urban_profile(geom, sys.pairs, static_cast<double>(sys.training), sys.pilot_power, rng);
        std::size_t slot = 0;
        for (Scheme s : {Scheme::ZF, Scheme::MR})
            for (Mode m : {Mode::FD, Mode::HD})
                se[(slot++) * drops + d] = evaluate(sys, prof, s, m).sum_se;
    });

    std::vector<Table> out;
    std::size_t scheme_index = 0;
    for (Scheme s : {Scheme::ZF, Scheme::MR})
    {
        const std::string t = scheme_tag(s);
        std::vector<double> fd(se.begin() + static_cast<std::ptrdiff_t>((2 * scheme_index) * drops),
                               se.begin() + static_cast<std::ptrdiff_t>((2 * scheme_index + 1) * drops));
        std::vector<double> hd(se.begin() + static_cast<std::ptrdiff_t>((2 * scheme_index + 1) * drops),
                               se.begin() + static_cast<std::ptrdiff_t>((2 * scheme_index + 2) * drops));
        std::vector<double> hy(drops);
        for (std::size_t d = 0; d < drops; ++d)
            hy[d] = hybrid_from(fd[d], hd[d]).sum_se;
        std::sort(fd.begin(), fd.end());
        std::sort(hd.begin(), hd.end());
        std::sort(hy.begin(), hy.end());
        Table tab{"fig8_" + t, {"cdf", "sum_se_" + t + "_fd", "sum_se_" + t + "_hd", "sum_se_" + t + "_hybrid"}, {}};
        for (std::size_t d = 0; d < drops; ++d)
            tab.rows.push_back(
                {static_cast<double>(d + 1) / static_cast<double>(drops), fd[d], hd[d], hy[d]});
        out.push_back(std::move(tab));
        ++scheme_index;
    }
    return out;
}

std::vector<Table> run_fig9(const ExperimentConfig &cfg)
{
    std::vector<Table> out;
    for (double n : cfg.series_antennas)
        for (Scheme s : {Scheme::ZF, Scheme::MR})
        {
            auto base = cfg.params;
            set_antennas(base, n);
            const Grid grid = make_grid(cfg, base);
            Table tab{"fig9_" + scheme_tag(s) + "_n" + format_number(n),
                      {grid.label_column, "ee_opt", "ee_uniform_peak", "ee_uniform_scaled", "sum_se_achieved",
                       "total_power", "iterations", "converged", "feasible"},
                      {}};
            tab.rows.resize(grid.points.size());
            parallel_for(grid.points.size(), cfg.workers, [&](std::size_t i) {
                const Point &pt = grid.points[i];
                const SystemConfig sys = pt.system();
                if (sys.pairs != 10)
                    throw std::invalid_argument("fig9 uses the ten-pair snapshot profile; pairs must be 10");
                const LargeScaleProfile prof = snapshot_profile(static_cast<double>(sys.training), sys.pilot_power);
                const double p0 = pt.get("peak_source");
                const double p1 = pt.get("peak_relay");
                const double s0 = pt.get("s0");
                SuccessiveParams sp;
                sp.eps = pt.get("eps");
                sp.max_iter = pt.count("max_iter");
                sp.alpha = pt.get("alpha");
                const PowerAllocation alloc = optimize_powers(sys, prof, s, s0, p0, p1, sp);

                const SinrCoefficients coeffs = sinr_coefficients(sys, prof, s);
                const arma::uword k = sys.pairs;
                const double ee_peak = energy_efficiency(uniform_peak_se(coeffs, p0, p1, sys.coherence, sys.training),
                                                         arma::vec(k, arma::fill::value(p0)), p1, sys.coherence,
                                                         sys.training);
                const double t = uniform_scale(coeffs, s0, p0, p1, sys.coherence, sys.training);
                const arma::vec pu(k, arma::fill::value(t * p0));
                const double ee_scaled = energy_efficiency(
                    coefficient_se(coeffs, pu, t * p1, sys.coherence, sys.training), pu, t * p1, sys.coherence,
                    sys.training);
                const bool feasible = alloc.iterations > 0;
                tab.rows[i] = {grid.labels[i],
                               feasible ? alloc.ee : 0.0,
                               ee_peak,
                               ee_scaled,
                               feasible ? alloc.achieved_se : 0.0,
                               feasible ? arma::accu(alloc.p_s) + alloc.p_r : 0.0,
                               static_cast<double>(alloc.iterations),
                               alloc.converged ? 1.0 : 0.0,
                               feasible ? 1.0 : 0.0};
            });
            out.push_back(std::move(tab));
        }
    return out;
}

std::map<std::string, double> base_params()
{
    return {
        {"pairs", 10},
        {"n_rx", 100},
        {"n_tx", 100},
        {"coherence", 200},
        {"training", 20},
        {"delay", 1},
        {"pilot_power", 10},
        {"source_power", 10},
        {"relay_power", 10},
        {"li_variance", 1},
        {"beta", 1},
        {"disk_diameter", 1000},
        {"shadow_sigma_db", 8},
        {"path_exponent", 3.8},
        {"ref_distance", 200},
        {"target_rate", 1},
        {"peak_source", 100},
        {"peak_relay", 100},
        {"s0", 10},
        {"drops", 1000},
        {"eps", 0.01},
        {"max_iter", 5},
        {"alpha", 1.1},
        {"pilot_follows_source", 0},
        {"relay_follows_source", 0},
        {"explicit_pilots", 0},
        {"monte_carlo", 0},
    };
}

} // namespace

ExperimentError::ExperimentError(std::string code, const std::string &message)
    : std::runtime_error(message), code_(std::move(code))
{
}

std::string_view to_string(Preset p)
{
    switch (p)
    {
    case Preset::Fig2:
        return "fig2";
    case Preset::Fig3:
        return "fig3";
    case Preset::Fig4:
        return "fig4";
    case Preset::Fig6:
        return "fig6";
    case Preset::Fig7:
        return "fig7";
    case Preset::Fig8:
        return "fig8";
    case Preset::Fig9:
        return "fig9";
    case Preset::Custom:
        return "custom";
    }
    return "custom";
}

Preset parse_preset(std::string_view name)
{
    name = trim(name);
    for (Preset p : {Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig6, Preset::Fig7, Preset::Fig8,
                     Preset::Fig9, Preset::Custom})
        if (to_string(p) == name)
            return p;
    throw ExperimentError("invalid_config", "unknown preset '" + std::string(name) + "'");
}

std::string_view to_string(SweepScale s)
{
    switch (s)
    {
    case SweepScale::Linear:
        return "linear";
    case SweepScale::Db:
        return "db";
    case SweepScale::Log2:
        return "log2";
    }
    return "linear";
}

std::vector<double> SweepAxis::values() const
{
    const bool integral = variable_kind(variable) == Kind::Int;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        const double x = count == 1 ? from
                                    : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
        double v = x;
        if (scale == SweepScale::Db)
            v = db_to_linear(x);
        else if (scale == SweepScale::Log2)
            v = std::exp2(x);
        out[i] = integral ? std::round(v) : v;
    }
    return out;
}

std::vector<double> SweepAxis::labels() const
{
    if (scale != SweepScale::Db)
        return values();
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

std::string SweepAxis::label_column() const
{
    if (scale != SweepScale::Db)
        return variable;
    if (variable == "source_power")
        return "snr_db";
    const ParamSpec *p = find_param(variable);
    return std::string(p && !p->db_alias.empty() ? p->db_alias : std::string_view(variable)) + "_db";
}

SweepAxis parse_sweep(std::string_view spec)
{
    std::vector<std::string_view> parts;
    while (true)
    {
        const auto colon = spec.find(':');
        parts.push_back(trim(spec.substr(0, colon)));
        if (colon == std::string_view::npos)
            break;
        spec.remove_prefix(colon + 1);
    }
    if (parts.size() != 4 && parts.size() != 5)
        throw ExperimentError("invalid_sweep", "sweep must be variable:from:to:count[:scale]");

    SweepAxis axis;
    bool db_key = false;
    if (const ParamSpec *p = find_db_param(parts[0]); p && !find_param(parts[0]))
    {
        axis.variable = std::string(p->name);
        axis.scale = SweepScale::Db;
        db_key = true;
    }
    else
        axis.variable = std::string(parts[0]);
    try
    {
        axis.from = parse_double(parts[1], "sweep from");
        axis.to = parse_double(parts[2], "sweep to");
        axis.count = static_cast<std::size_t>(parse_u64(parts[3], "sweep count"));
    }
    catch (const ExperimentError &e)
    {
        throw ExperimentError("invalid_sweep", e.what());
    }
    if (parts.size() == 5)
    {
        SweepScale s;
        if (parts[4] == "linear")
            s = SweepScale::Linear;
        else if (parts[4] == "db")
            s = SweepScale::Db;
        else if (parts[4] == "log2")
            s = SweepScale::Log2;
        else
            throw ExperimentError("invalid_sweep", "unknown sweep scale '" + std::string(parts[4]) + "'");
        if (db_key && s != SweepScale::Db)
            throw ExperimentError("invalid_sweep", "a _db variable implies scale db");
        axis.scale = s;
    }
    check_sweep(axis);
    return axis;
}

double ExperimentConfig::param(const std::string &name) const
{
    const auto it = params.find(name);
    if (it == params.end())
        throw ExperimentError("invalid_config", "missing parameter '" + name + "'");
    return it->second;
}

void ExperimentConfig::validate() const
{
    if (trials < 1)
        throw ExperimentError("invalid_config", "trials must be >= 1");
    for (const auto &[name, value] : params)
        if (!find_param(name))
            throw ExperimentError("invalid_config", "unknown parameter '" + name + "'");
    for (const ParamSpec &p : kParams)
    {
        const double v = param(std::string(p.name));
        if (!std::isfinite(v))
            throw ExperimentError("invalid_config", std::string(p.name) + " must be finite");
        if (p.kind == Kind::Int && (!is_integral(v) || v < 0.0))
            throw ExperimentError("invalid_config", std::string(p.name) + " must be a non-negative integer");
        if (p.kind == Kind::Flag && v != 0.0 && v != 1.0)
            throw ExperimentError("invalid_config", std::string(p.name) + " must be 0 or 1");
    }
    if (sweep)
    {
        check_sweep(*sweep);
        const std::string &v = sweep->variable;
        if (preset == Preset::Fig8)
            throw ExperimentError("invalid_sweep", "fig8 has no sweep axis (it draws urban profiles)");
        if (preset == Preset::Fig4 && v == "source_power")
            throw ExperimentError("invalid_sweep", "fig4 solves for source_power; sweep another variable");
        if ((preset == Preset::Fig3 || preset == Preset::Fig9) && (v == "antennas" || v == "n_rx" || v == "n_tx"))
            throw ExperimentError("invalid_sweep", "antenna counts are the series axis of this preset");
        if (preset == Preset::Fig4 && v == "li_variance")
            throw ExperimentError("invalid_sweep", "li_variance is the series axis of fig4");
    }
    const bool needs_antennas = preset == Preset::Fig3 || preset == Preset::Fig9;
    if (needs_antennas && series_antennas.empty())
        throw ExperimentError("invalid_config", "series_antennas must not be empty");
    for (double n : series_antennas)
        if (!is_integral(n) || n < 1.0)
            throw ExperimentError("invalid_config", "series_antennas entries must be positive integers");
    if (preset == Preset::Fig4 && series_li.empty())
        throw ExperimentError("invalid_config", "series_li must not be empty");
    for (double li : series_li)
        if (!std::isfinite(li) || li < 0.0)
            throw ExperimentError("invalid_config", "series_li entries must be finite and >= 0");
}

ExperimentConfig preset_config(Preset p)
{
    ExperimentConfig cfg;
    cfg.preset = p;
    cfg.params = base_params();
    auto &q = cfg.params;
    const SweepAxis snr{"source_power", -10.0, 20.0, 7, SweepScale::Db};
    switch (p)
    {
    case Preset::Fig2:
        set_antennas(q, 50);
        q["pilot_follows_source"] = 1;
        q["relay_follows_source"] = 1;
        cfg.trials = 2000;
        cfg.sweep = snr;
        break;
    case Preset::Fig3:
        q["pilot_follows_source"] = 1;
        q["relay_follows_source"] = 1;
        cfg.series_antennas = {50, 100};
        cfg.trials = 2000;
        cfg.sweep = snr;
        break;
    case Preset::Fig4:
        cfg.series_li = {1, 10};
        cfg.sweep = SweepAxis{"antennas", 32, 512, 16, SweepScale::Linear};
        break;
    case Preset::Fig6:
        cfg.sweep = SweepAxis{"li_variance", -10.0, 30.0, 21, SweepScale::Db};
        break;
    case Preset::Fig7:
        q["li_variance"] = 10;
        cfg.sweep = SweepAxis{"antennas", 20, 500, 25, SweepScale::Linear};
        break;
    case Preset::Fig8:
        set_antennas(q, 200);
        q["li_variance"] = 10;
        break;
    case Preset::Fig9:
        q["li_variance"] = 10;
        cfg.series_antennas = {50, 200};
        cfg.sweep = SweepAxis{"s0", 2, 14, 13, SweepScale::Linear};
        break;
    case Preset::Custom:
        cfg.sweep = snr;
        break;
    }
    return cfg;
}

std::vector<std::string> parameter_names()
{
    std::vector<std::string> out;
    for (const ParamSpec &p : kParams)
        out.emplace_back(p.name);
    return out;
}

void apply_setting(ExperimentConfig &cfg, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    const std::string k(key);
    if (key == "preset")
    {
        ExperimentConfig fresh = preset_config(parse_preset(value));
        fresh.output_dir = cfg.output_dir;
        fresh.workers = cfg.workers;
        cfg = std::move(fresh);
    }
    else if (key == "seed")
        cfg.seed = parse_u64(value, k);
    else if (key == "trials")
    {
        const std::uint64_t t = parse_u64(value, k);
        if (t < 1)
            throw ExperimentError("invalid_config", "trials must be >= 1");
        cfg.trials = static_cast<std::size_t>(t);
    }
    else if (key == "sweep")
    {
        if (value == "none")
            cfg.sweep.reset();
        else
            cfg.sweep = parse_sweep(value);
    }
    else if (key == "out" || key == "output_dir")
        cfg.output_dir = std::string(value);
    else if (key == "series_antennas")
        cfg.series_antennas = parse_list(value, k);
    else if (key == "series_li")
        cfg.series_li = parse_list(value, k);
    else if (key == "series_li_db")
    {
        cfg.series_li = parse_list(value, k);
        for (double &v : cfg.series_li)
            v = db_to_linear(v);
    }
    else if (key == "antennas")
    {
        const double n = parse_double(value, k);
        if (!is_integral(n) || n < 1.0)
            throw ExperimentError("invalid_config", "antennas must be a positive integer");
        set_antennas(cfg.params, n);
    }
    else if (const ParamSpec *p = find_param(key))
    {
        double v;
        if (p->kind == Kind::Flag && (value == "true" || value == "false"))
            v = value == "true" ? 1.0 : 0.0;
        else
            v = parse_double(value, k);
        if (p->kind == Kind::Int && (!is_integral(v) || v < 0.0))
            throw ExperimentError("invalid_config", k + " must be a non-negative integer");
        if (p->kind == Kind::Flag && v != 0.0 && v != 1.0)
            throw ExperimentError("invalid_config", k + " must be 0 or 1");
        cfg.params[k] = v;
    }
    else if (const ParamSpec *p = find_db_param(key))
        cfg.params[std::string(p->name)] = db_to_linear(parse_double(value, k));
    else
        throw ExperimentError("invalid_config", "unknown key '" + k + "'");
}

void apply_config_text(ExperimentConfig &cfg, std::string_view text)
{
    std::size_t line_no = 0;
    bool seen_setting = false;
    while (!text.empty())
    {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ExperimentError("invalid_config", "line " + std::to_string(line_no) + ": expected key = value");
        const std::string_view key = trim(line.substr(0, eq));
        if (key == "preset" && seen_setting)
            throw ExperimentError("invalid_config",
                                  "line " + std::to_string(line_no) + ": preset must precede other settings");
        try
        {
            apply_setting(cfg, key, line.substr(eq + 1));
        }
        catch (const ExperimentError &e)
        {
            throw ExperimentError(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
        }
        seen_setting = true;
    }
}

std::string to_csv(const Table &table)
{
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out += (c ? "," : "") + table.columns[c];
    out += '\n';
    for (const auto &row : table.rows)
    {
        for (std::size_t c = 0; c < row.size(); ++c)
        {
            if (c)
                out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::vector<Table> compute(const ExperimentConfig &cfg)
{
    cfg.validate();
    std::vector<Table> tables;
    try
    {
        switch (cfg.preset)
        {
        case Preset::Fig2:
            tables = run_fig2(cfg);
            break;
        case Preset::Fig3:
            tables = run_fig3(cfg);
            break;
        case Preset::Fig4:
            tables = run_fig4(cfg);
            break;
        case Preset::Fig6:
            tables = run_modes(cfg, "fig6", false);
            break;
        case Preset::Fig7:
            tables = run_modes(cfg, "fig7", false);
            break;
        case Preset::Fig8:
            tables = run_fig8(cfg);
            break;
        case Preset::Fig9:
            tables = run_fig9(cfg);
            break;
        case Preset::Custom:
            tables = run_modes(cfg, "custom", cfg.param("monte_carlo") != 0.0);
            break;
        }
    }
    catch (const std::invalid_argument &e)
    {
        throw ExperimentError("invalid_config", e.what());
    }
    catch (const SingularDrawError &e)
    {
        throw ExperimentError("numerical_failure", e.what());
    }
    for (const Table &t : tables)
        for (const auto &row : t.rows)
            for (double v : row)
                if (!std::isfinite(v))
                    throw ExperimentError("numerical_failure", "non-finite value in " + t.name);
    return tables;
}

std::string manifest_json(const ExperimentConfig &cfg, const std::vector<Table> &tables)
{
    json m;
    m["format"] = "fdrelay-manifest";
    m["version"] = 1;
    m["preset"] = std::string(to_string(cfg.preset));
    m["seed"] = cfg.seed;
    m["trials"] = cfg.trials;
    m["params"] = cfg.params;
    m["series_antennas"] = cfg.series_antennas;
    m["series_li"] = cfg.series_li;
    if (cfg.sweep)
        m["sweep"] = {{"variable", cfg.sweep->variable},
                      {"from", cfg.sweep->from},
                      {"to", cfg.sweep->to},
                      {"count", cfg.sweep->count},
                      {"scale", std::string(to_string(cfg.sweep->scale))}};
    else
        m["sweep"] = nullptr;
    json outputs = json::array();
    for (const Table &t : tables)
        outputs.push_back({{"file", t.name + ".csv"}, {"columns", t.columns}, {"rows", t.rows.size()}});
    m["outputs"] = outputs;
    return m.dump(2) + "\n";
}

ExperimentConfig config_from_manifest(std::string_view json_text)
{
    ExperimentConfig cfg;
    try
    {
        const json m = json::parse(json_text);
        if (m.at("format").get<std::string>() != "fdrelay-manifest" || m.at("version").get<int>() != 1)
            throw ExperimentError("invalid_manifest", "not an fdrelay manifest (format/version)");
        cfg.preset = parse_preset(m.at("preset").get<std::string>());
        cfg.seed = m.at("seed").get<std::uint64_t>();
        cfg.trials = m.at("trials").get<std::size_t>();
        cfg.params = m.at("params").get<std::map<std::string, double>>();
        cfg.series_antennas = m.at("series_antennas").get<std::vector<double>>();
        cfg.series_li = m.at("series_li").get<std::vector<double>>();
        const json &s = m.at("sweep");
        if (!s.is_null())
        {
            SweepAxis axis;
            axis.variable = s.at("variable").get<std::string>();
            axis.from = s.at("from").get<double>();
            axis.to = s.at("to").get<double>();
            axis.count = s.at("count").get<std::size_t>();
            const std::string scale = s.at("scale").get<std::string>();
            if (scale == "linear")
                axis.scale = SweepScale::Linear;
            else if (scale == "db")
                axis.scale = SweepScale::Db;
            else if (scale == "log2")
                axis.scale = SweepScale::Log2;
            else
                throw ExperimentError("invalid_manifest", "unknown sweep scale '" + scale + "'");
            cfg.sweep = axis;
        }
    }
    catch (const json::exception &e)
    {
        throw ExperimentError("invalid_manifest", e.what());
    }
    cfg.validate();
    return cfg;
}

RunResult run(const ExperimentConfig &cfg)
{
    namespace fs = std::filesystem;
    RunResult result;
    result.tables = compute(cfg);
    const fs::path dir = cfg.output_dir.empty() ? fs::path(default_output_dir()) : fs::path(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw ExperimentError("unwritable_output", "cannot create output directory '" + dir.string() + "'");

    auto write = [&](const fs::path &path, const std::string &bytes) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << bytes;
        f.close();
        if (!f)
            throw ExperimentError("unwritable_output", "cannot write '" + path.string() + "'");
        result.files.push_back(path.string());
    };
    for (const Table &t : result.tables)
        write(dir / (t.name + ".csv"), to_csv(t));
    write(dir / "manifest.json", manifest_json(cfg, result.tables));
    return result;
}

std::string default_output_dir()
{
    const char *env = std::getenv("FDRELAY_OUT_DIR");
    return env && *env ? std::string(env) : std::string("fdrelay-out");
}

std::string error_line(const std::string &code, const std::string &message)
{
    json e;
    e["error"] = {{"code", code}, {"message", message}};
    return e.dump();
}

} // namespace fdrelay
