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

#include "fdrelay/montecarlo.hpp"

#include "fdrelay/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fdrelay
{

namespace
{

// Per-pair sample layout of the rate kernel.
enum Slot : std::size_t
{
    SR_RE,
    SR_IM,
    SR_ABS2,
    SR_MP,
    SR_LI,
    SR_AN,
    SR_GENIE,
    RD_RE,
    RD_IM,
    RD_ABS2,
    RD_MP,
    RD_GENIE,
    SLOTS
};

void check_trials(const TrialPlan &plan, std::size_t minimum, const char *who)
{
    if (plan.trials < minimum)
        throw std::invalid_argument(std::string(who) + ": need at least " + std::to_string(minimum) + " trials");
}

ChannelSet draw_channels(const SystemConfig &cfg, const LargeScaleProfile &profile, const PilotBook *pilots, Rng &rng)
{
    if (pilots == nullptr)
        return sample_estimate_direct(cfg, profile, rng);
    const TrueChannels truth = sample_true_channels(cfg, profile, rng);
    return estimate_via_pilots(truth, *pilots, cfg, profile, rng);
}

BlockMeans run_rate_kernel(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme,
                           const McOptions &opts)
{
    cfg.validate(scheme == Scheme::ZF);
    if (profile.pairs() != cfg.pairs)
        throw std::invalid_argument("montecarlo: profile size does not match config pairs");
    check_trials(opts.plan, 100, "mc_rate_bounds");

    const arma::uword k_pairs = cfg.pairs;
    const double ps = cfg.source_power;
    const double pr = cfg.relay_power;
    PilotBook pilots;
    if (opts.explicit_pilots)
        pilots = generate_pilots(cfg.pairs, cfg.training);
    const PilotBook *book = opts.explicit_pilots ? &pilots : nullptr;

    auto kernel = [&](std::size_t, Rng &rng, std::span<double> out) {
        const ChannelSet cs = draw_channels(cfg, profile, book, rng);
        const ProcessingPair pp = make_pair(scheme, cs, profile, cfg);

        const arma::cx_mat x = pp.w_t * cs.g_sr;               // x(k, j) = w_k^T g_j
        const arma::cx_mat li = (pp.w_t * cs.g_rr) * pp.a;     // row k = w_k^T G_RR A
        const arma::cx_mat y = cs.g_rd.st() * pp.a;            // y(k, j) = g_k^T a_j
        const arma::vec an = arma::sum(arma::square(arma::abs(pp.w_t)), 1);
        const arma::vec li_pow = arma::sum(arma::square(arma::abs(li)), 1);
        const arma::mat x2 = arma::square(arma::abs(x));
        const arma::mat y2 = arma::square(arma::abs(y));
        const arma::vec x_row = arma::sum(x2, 1);
        const arma::vec y_row = arma::sum(y2, 1);

        for (arma::uword k = 0; k < k_pairs; ++k)
        {
            double *o = out.data() + k * SLOTS;
            const std::complex<double> m = x(k, k);
            const double m2 = x2(k, k);
            const double mp = x_row(k) - m2;
            o[SR_RE] = m.real();
            o[SR_IM] = m.imag();
            o[SR_ABS2] = m2;
            o[SR_MP] = mp;
            o[SR_LI] = li_pow(k);
            o[SR_AN] = an(k);
            o[SR_GENIE] = std::log2(1.0 + ps * m2 / (ps * mp + pr * li_pow(k) + an(k)));

            const std::complex<double> d = y(k, k);
            const double d2 = y2(k, k);
            const double mpd = y_row(k) - d2;
            o[RD_RE] = d.real();
            o[RD_IM] = d.imag();
            o[RD_ABS2] = d2;
            o[RD_MP] = mpd;
            o[RD_GENIE] = std::log2(1.0 + pr * d2 / (pr * mpd + 1.0));
        }
    };
    return run_trials(opts.plan, k_pairs * SLOTS, kernel);
}

struct Stat
{
    double ps, pr;

    static double at(const arma::vec &m, arma::uword k, Slot s) { return m(k * SLOTS + s); }

    double sinr_sr(const arma::vec &m, arma::uword k) const
    {
        const double re = at(m, k, SR_RE), im = at(m, k, SR_IM);
        const double mean2 = re * re + im * im;
        const double var = at(m, k, SR_ABS2) - mean2;
        return ps * mean2 / (ps * var + ps * at(m, k, SR_MP) + pr * at(m, k, SR_LI) + at(m, k, SR_AN));
    }

    double sinr_rd(const arma::vec &m, arma::uword k) const
    {
        const double re = at(m, k, RD_RE), im = at(m, k, RD_IM);
        const double mean2 = re * re + im * im;
        const double var = at(m, k, RD_ABS2) - mean2;
        return pr * mean2 / (pr * var + pr * at(m, k, RD_MP) + 1.0);
    }

    double rate_sr(const arma::vec &m, arma::uword k) const { return std::log2(1.0 + sinr_sr(m, k)); }
    double rate_rd(const arma::vec &m, arma::uword k) const { return std::log2(1.0 + sinr_rd(m, k)); }
    double rate_e2e(const arma::vec &m, arma::uword k) const { return std::min(rate_sr(m, k), rate_rd(m, k)); }
    static double genie_e2e(const arma::vec &m, arma::uword k)
    {
        return std::min(at(m, k, SR_GENIE), at(m, k, RD_GENIE));
    }
};

TermEstimates terms_for(const BlockMeans &acc, arma::uword k, Side side, double ps, double pr)
{
    auto slot = [&](Slot s, double scale = 1.0) {
        return acc.jackknife([=](const arma::vec &m) { return scale * m(k * SLOTS + s); });
    };
    auto variance = [&](Slot re, Slot im, Slot abs2) {
        return acc.jackknife([=](const arma::vec &m) {
            const double a = m(k * SLOTS + re), b = m(k * SLOTS + im);
            return m(k * SLOTS + abs2) - a * a - b * b;
        });
    };

    TermEstimates t;
    t.trials = acc.trials();
    if (side == Side::SR)
    {
        t.mean_gain = slot(SR_RE);
        t.mean_gain_imag = slot(SR_IM);
        t.var_gain = variance(SR_RE, SR_IM, SR_ABS2);
        t.mp = slot(SR_MP, ps);
        t.li = slot(SR_LI, pr);
        t.an = slot(SR_AN);
    }
    else
    {
        t.mean_gain = slot(RD_RE);
        t.mean_gain_imag = slot(RD_IM);
        t.var_gain = variance(RD_RE, RD_IM, RD_ABS2);
        t.mp = slot(RD_MP, pr);
        t.li = {0.0, 0.0};
        t.an = {1.0, 0.0};
    }
    return t;
}

} // namespace

McRateReport mc_rate_bounds(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme,
                            const McOptions &opts)
{
    const BlockMeans acc = run_rate_kernel(cfg, profile, scheme, opts);
    const Stat st{cfg.source_power, cfg.relay_power};
    const arma::uword kp = cfg.pairs;

    McRateReport r;
    for (arma::uword k = 0; k < kp; ++k)
    {
        r.sr.push_back(terms_for(acc, k, Side::SR, st.ps, st.pr));
        r.rd.push_back(terms_for(acc, k, Side::RD, st.ps, st.pr));
        r.rate_sr.push_back(acc.jackknife([&](const arma::vec &m) { return st.rate_sr(m, k); }));
        r.rate_rd.push_back(acc.jackknife([&](const arma::vec &m) { return st.rate_rd(m, k); }));
        r.rate_e2e.push_back(acc.jackknife([&](const arma::vec &m) { return st.rate_e2e(m, k); }));
        r.genie_sr.push_back(acc.jackknife([&](const arma::vec &m) { return Stat::at(m, k, SR_GENIE); }));
        r.genie_rd.push_back(acc.jackknife([&](const arma::vec &m) { return Stat::at(m, k, RD_GENIE); }));
        r.genie_e2e.push_back(acc.jackknife([&](const arma::vec &m) { return Stat::genie_e2e(m, k); }));
    }
    auto bound_sum = [&](const arma::vec &m) {
        double s = 0.0;
        for (arma::uword k = 0; k < kp; ++k)
            s += st.rate_e2e(m, k);
        return s;
    };
    auto genie_sum = [&](const arma::vec &m) {
        double s = 0.0;
        for (arma::uword k = 0; k < kp; ++k)
            s += Stat::genie_e2e(m, k);
        return s;
    };
    r.sum_rate = acc.jackknife(bound_sum);
    r.genie_sum_rate = acc.jackknife(genie_sum);
    r.genie_gap = acc.jackknife([&](const arma::vec &m) { return genie_sum(m) - bound_sum(m); });
    return r;
}

std::vector<TermEstimates> mc_rate_terms(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme,
                                         Side side, const McOptions &opts)
{
    McRateReport r = mc_rate_bounds(cfg, profile, scheme, opts);
    return side == Side::SR ? r.sr : r.rd;
}

std::vector<Estimate> genie_rate(const SystemConfig &cfg, const LargeScaleProfile &profile, Scheme scheme,
                                 const McOptions &opts)
{
    return mc_rate_bounds(cfg, profile, scheme, opts).genie_e2e;
}

std::vector<ProbeRow> convergence_probe(Proposition which, Scheme scheme, const SystemConfig &base,
                                        const LargeScaleProfile &profile, const std::vector<arma::uword> &schedule,
                                        double energy, const TrialPlan &plan)
{
    check_trials(plan, 10, "convergence_probe");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1])
            throw std::invalid_argument("convergence_probe: antenna schedule must be increasing");
    if (which == Proposition::LargeTransmit && !(energy > 0.0))
        throw std::invalid_argument("convergence_probe: Er must be > 0");

    std::vector<ProbeRow> rows;
    for (const arma::uword n : schedule)
    {
        SystemConfig cfg = base;
        if (which == Proposition::LargeReceive)
            cfg.n_rx = n;
        else
        {
            cfg.n_tx = n;
            cfg.relay_power = energy / static_cast<double>(n);
        }
        cfg.validate(scheme == Scheme::ZF);
        const arma::uword kp = cfg.pairs;
        const double ps = cfg.source_power;
        const double pr = cfg.relay_power;
        const arma::vec &s_sr = profile.sigma_sr_sq();

        // Slot 0: residual (or LI) power averaged over pairs; slot 1: mean RD amplitude.
        auto kernel = [&](std::size_t, Rng &rng, std::span<double> out) {
            const ChannelSet cs = sample_estimate_direct(cfg, profile, rng);
            const ProcessingPair pp = make_pair(scheme, cs, profile, cfg);
            const arma::cx_mat x = pp.w_t * cs.g_sr;
            const arma::cx_mat li = (pp.w_t * cs.g_rr) * pp.a;
            const arma::vec li_pow = arma::sum(arma::square(arma::abs(li)), 1);
            double acc0 = 0.0, acc1 = 0.0;
            for (arma::uword k = 0; k < kp; ++k)
            {
                if (which == Proposition::LargeReceive)
                {
                    const double scale = scheme == Scheme::ZF ? 1.0 : static_cast<double>(cfg.n_rx) * s_sr(k);
                    const double s2 = scale * scale;
                    const std::complex<double> gain = x(k, k) / scale - 1.0;
                    const double mp = arma::accu(arma::square(arma::abs(x.row(k)))) - std::norm(x(k, k));
                    const double an = arma::accu(arma::square(arma::abs(pp.w_t.row(k))));
                    const double resid = ps * std::norm(gain) + (ps * mp + pr * li_pow(k) + an) / s2;
                    acc0 += resid / ps;
                }
                else
                {
                    acc0 += pr * li_pow(k);
                    const std::complex<double> d = arma::dot(cs.g_rd.col(k), pp.a.col(k));
                    acc1 += std::sqrt(pr) * d.real();
                }
            }
            out[0] = acc0 / static_cast<double>(kp);
            out[1] = acc1 / static_cast<double>(kp);
        };
        const BlockMeans acc = run_trials(plan, 2, kernel);

        ProbeRow row;
        row.antennas = n;
        row.residual = acc.jackknife([](const arma::vec &m) { return m(0); });
        if (which == Proposition::LargeTransmit)
        {
            row.rd_amplitude = acc.jackknife([](const arma::vec &m) { return m(1); });
            const arma::vec &s_rd = profile.sigma_rd_sq();
            if (scheme == Scheme::ZF)
                row.rd_limit = std::sqrt(energy / arma::accu(1.0 / s_rd));
            else
                row.rd_limit = arma::mean(arma::vec(arma::sqrt(arma::pow(s_rd, 4) * energy / arma::accu(s_rd))));
        }
        rows.push_back(row);
    }
    return rows;
}

Estimate wishart_oracle(arma::uword pairs, arma::uword n_rx, double sigma_sq, const TrialPlan &plan)
{
    if (pairs < 1 || n_rx <= pairs + 1)
        throw std::invalid_argument("wishart_oracle: need n_rx > pairs + 1");
    if (!(sigma_sq > 0.0))
        throw std::invalid_argument("wishart_oracle: sigma_sq must be > 0");
    check_trials(plan, 10, "wishart_oracle");

    auto kernel = [&](std::size_t, Rng &rng, std::span<double> out) {
        const arma::cx_mat g = rng.complex_normal(n_rx, pairs, sigma_sq);
        out[0] = arma::mean(arma::real(gram_inverse(g).diag()));
    };
    const BlockMeans acc = run_trials(plan, 1, kernel);
    return acc.jackknife([](const arma::vec &m) { return m(0); });
}

LiOracle li_approx_oracle(const SystemConfig &cfg, const LargeScaleProfile &profile, const TrialPlan &plan)
{
    cfg.validate(true);
    check_trials(plan, 10, "li_approx_oracle");
    const arma::uword kp = cfg.pairs;
    const double pr = cfg.relay_power;

    auto kernel = [&](std::size_t, Rng &rng, std::span<double> out) {
        const ChannelSet cs = sample_estimate_direct(cfg, profile, rng);
        const ProcessingPair pp = zf_pair(cs, profile, cfg);
        const arma::cx_mat li = (pp.w_t * cs.g_rr) * pp.a;
        const arma::vec li_pow = arma::sum(arma::square(arma::abs(li)), 1);
        for (arma::uword k = 0; k < kp; ++k)
            out[k] = pr * li_pow(k);
    };
    const BlockMeans acc = run_trials(plan, kp, kernel);

    LiOracle o;
    for (arma::uword k = 0; k < kp; ++k)
        o.mc.push_back(acc.jackknife([k](const arma::vec &m) { return m(k); }));
    const double nrx = static_cast<double>(cfg.n_rx);
    const double ntx = static_cast<double>(cfg.n_tx);
    const double kk = static_cast<double>(kp);
    o.exact = pr * cfg.li_variance / (profile.sigma_sr_sq() * (nrx - kk));
    o.approx = o.exact * (ntx - kk) / ntx;
    return o;
}

} // namespace fdrelay
