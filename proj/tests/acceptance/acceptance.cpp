// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "cvahedge/analytic_pricing.hpp"
#include "cvahedge/credit.hpp"
#include "cvahedge/market_models.hpp"
#include "cvahedge/sim_engine.hpp"
#include "cvahedge/variance_oracle.hpp"
#include "cvahedge/wealth_ledger.hpp"

using namespace cvahedge;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MetricSeries timed_run(const ExperimentConfig& c, double* secs = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    auto ms = run_experiment(c);
    double s = seconds_since(t0);
    if (secs) *secs = s;
    std::printf("  ran %-16s L=%zu spy=%d in %.1fs\n", c.name.c_str(), c.paths, c.steps_per_year, s);
    std::fflush(stdout);
    return ms;
}

double date_average(const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) s += v[k];
    return s / static_cast<double>(v.size() - 1);
}

// Contract CVA(t0) from a quadrature price, independent of the library pricer.
double oracle_cva_contract() {
    double v = oracle::lognormal_call(100.0, 95.0, 0.1, 0.2, 1.0);
    return 0.5 * (1.0 - std::exp(-0.2)) * v * 100.0;
}

void c1_c9a(const MetricSeries& fig1, double secs) {
    const std::size_t K = fig1.dates.size() - 1;
    const double target = -oracle_cva_contract() * std::exp(0.1);
    const double m = fig1.p2.mean_sw[K];
    const double se = standard_error(fig1.p2.vol_sw[K], fig1.paths);
    report(1, std::abs(m - target) < 3.0 * se && secs < 120.0,
           fmt("mean(S2+W2)(T)=%.3f target=%.3f 3SE=%.3f runtime=%.1fs", m, target, 3 * se, secs));
}

void c2() {
    auto c = preset("fig2");
    auto ms = timed_run(c);
    const std::size_t K = ms.dates.size() - 1;
    const double m = ms.p2.mean_sw[K];
    const double se = standard_error(ms.p2.vol_sw[K], ms.paths);
    report(2, std::abs(m) < 3.0 * se, fmt("mean(S2+W2)(T)=%.3f 3SE=%.3f", m, 3 * se));
}

void c3(const MetricSeries& fig1) {
    auto base = preset("fig5");
    const double e3 = batch_abs_epsilon(base, 1000, 40);
    const double e4 = batch_abs_epsilon(base, 10000, 10);
    const double e5 = std::abs(fig1.epsilon.mean);
    const double se5 = fig1.epsilon.std_error;
    report(3, e5 < e3 && e5 < 3.0 * se5,
           fmt("|eps| L=1e3 %.3f, L=1e4 %.3f, L=1e5 %.3f (3SE %.3f)", e3, e4, e5, 3 * se5));
}

void c4() {
    auto base = preset("fig5");
    auto t0 = std::chrono::steady_clock::now();
    auto pts = convergence_sweep(base, {50, 100, 200, 400}, {base.paths});
    std::printf("  sweep in %.1fs\n", seconds_since(t0));
    bool ok = true;
    std::string d;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        d += fmt("spy=%d mean=%.4f vol=%.4f; ", pts[i].steps_per_year, pts[i].mean_pnl_first,
                 pts[i].vol_pnl_first);
        if (i > 0) {
            ok &= std::abs(pts[i].mean_pnl_first) < std::abs(pts[i - 1].mean_pnl_first);
            ok &= pts[i].vol_pnl_first < pts[i - 1].vol_pnl_first;
        }
    }
    report(4, ok, d);
}

void c5(const ExperimentConfig& c, const MetricSeries& ms) {
    const auto& g = std::get<GbmParams>(c.market);
    const std::size_t K = ms.dates.size() - 1;
    const std::size_t last = static_cast<std::size_t>(std::floor(0.95 * K));
    const double dt = ms.dates[1] - ms.dates[0];
    const double sh = c.option.shares;
    double worst_vol = 0.0;
    std::size_t worst_k = 0, outside = 0, n = 0;
    double dev_sum = 0.0, var_sum = 0.0;
    for (std::size_t k = 1; k <= last; ++k) {
        const double tp = ms.dates[k - 1], tau = c.option.maturity - tp;
        auto m = log_return_moments(c.s0, c.option.strike, g.r, g.sigma, c.t0, tp, c.option.maturity, dt);
        const double a_mean = sh * pnl_mean_analytic(m, c.option.strike, g.r, g.sigma, tau);
        const double a_vol = sh * std::sqrt(pnl_variance_analytic(m, c.option.strike, g.r, g.sigma, tau));
        const double rel = std::abs(ms.p1.vol_pnl[k] / a_vol - 1.0);
        if (rel > worst_vol) {
            worst_vol = rel;
            worst_k = k;
        }
        const double se = standard_error(ms.p1.vol_pnl[k], ms.paths);
        outside += std::abs(ms.p1.mean_pnl[k] - a_mean) > 3.0 * se;
        dev_sum += ms.p1.mean_pnl[k] - a_mean;
        var_sum += se * se;
        ++n;
    }
    // Per-date 3 SE checks over ~190 nearly independent dates: a correct mean still
    // lands outside about 0.27% of the time, so up to 2 exceedances are allowed
    // (binomial 98% quantile). The grid-averaged deviation is reported, not tested:
    // it resolves the higher-order terms the gamma approximation drops.
    const double avg_dev = dev_sum / n, avg_se = std::sqrt(var_sum) / n;
    const std::size_t mid = K / 2;
    const double tp = ms.dates[mid - 1], tau = c.option.maturity - tp;
    auto mm = log_return_moments(c.s0, c.option.strike, g.r, g.sigma, c.t0, tp, c.option.maturity, dt);
    const double mid_a = sh * pnl_mean_analytic(mm, c.option.strike, g.r, g.sigma, tau);
    const double mid_se = standard_error(ms.p1.vol_pnl[mid], ms.paths);
    const bool ok = worst_vol < 0.10 && outside <= 2 &&
                    std::abs(ms.p1.mean_pnl[mid] - mid_a) < 3.0 * mid_se;
    report(5, ok,
           fmt("max rel vol err %.4f (k=%zu) over %zu dates; mean: mid-grid %.4f vs %.4f (3SE %.4f), "
               "grid-avg dev %.5f (3SE %.5f), %zu/%zu dates outside 3SE",
               worst_vol, worst_k, n, ms.p1.mean_pnl[mid], mid_a, 3 * mid_se, avg_dev, 3 * avg_se,
               outside, n));
}

void c6() {
    auto a = timed_run(preset("fig3"));
    auto b = timed_run(preset("fig7"));
    const double un = date_average(a.p2.vol_pnl), he = date_average(b.p2.vol_pnl);
    report(6, he < un, fmt("date-avg vol PnL (CCR book): hedged %.4f < unhedged %.4f", he, un));
}

struct PeakStats {
    double end_max, mid;
    bool peak() const { return end_max >= 3.0 * mid; }
};

PeakStats peak_stats(const std::vector<double>& mean_pnl) {
    const std::size_t K = mean_pnl.size() - 1;
    PeakStats p{-1e300, 0.0};
    for (std::size_t k = static_cast<std::size_t>(std::ceil(0.9 * K)); k <= K; ++k)
        p.end_max = std::max(p.end_max, mean_pnl[k]);
    std::size_t lo = static_cast<std::size_t>(0.45 * K), hi = static_cast<std::size_t>(0.55 * K);
    for (std::size_t k = lo; k <= hi; ++k) p.mid += mean_pnl[k];
    p.mid /= static_cast<double>(hi - lo + 1);
    return p;
}

void c7() {
    // Same seeds and the same CCR treatment for all three rungs; the risk-free book
    // isolates the hedging strategy.
    std::vector<MetricSeries> runs;
    for (const char* n : {"fig8", "fig9", "fig10"}) {
        auto c = preset(n);
        c.cva_mode = CvaMode::priced_not_hedged;
        runs.push_back(timed_run(c));
    }
    const double v_bs = date_average(runs[0].p1.vol_pnl);
    const double v_md = date_average(runs[1].p1.vol_pnl);
    const double v_jo = date_average(runs[2].p1.vol_pnl);
    const double w_bs = date_average(runs[0].p2.vol_pnl);
    const double w_md = date_average(runs[1].p2.vol_pnl);
    const double w_jo = date_average(runs[2].p2.vol_pnl);
    auto p_bs = peak_stats(runs[0].p1.mean_pnl), p_md = peak_stats(runs[1].p1.mean_pnl);
    const bool order = v_bs >= v_md && v_md >= v_jo;
    const bool peak = p_bs.peak() && !p_md.peak();
    report(7, order && peak,
           fmt("date-avg vol PnL risk-free book: bs-delta %.4f, merton-delta %.4f, +jump option %.4f "
               "(CCR book %.4f, %.4f, %.4f); end/mid mean PnL: bs-delta %.3f/%.3f, merton-delta "
               "%.3f/%.3f; ordering %s, peak %s",
               v_bs, v_md, v_jo, w_bs, w_md, w_jo, p_bs.end_max, p_bs.mid, p_md.end_max, p_md.mid,
               order ? "ok" : "violated", peak ? "ok" : "absent"));
}

void c8() {
    const EuropeanOption call{OptionKind::call, 95.0, 1.0, 1.0};
    const EuropeanOption put{OptionKind::put, 95.0, 1.0, 1.0};
    const MertonParams mp{0.1, 0.2, -0.125, 0.1, 0.1};
    double worst_reduce = 0.0, worst_greek = 0.0, worst_jump = 0.0, worst_parity = 0.0;

    MertonParams nj = mp;
    nj.xi = 0.0;
    for (double S : {70.0, 95.0, 100.0, 130.0})
        for (const auto& o : {call, put})
            worst_reduce = std::max(worst_reduce, std::abs(merton_price(o, S, nj, 0.0).value -
                                                           bs_price(o, S, 0.1, 0.2, 0.0)));

    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    for (double S : {80.0, 100.0, 120.0})
        for (const auto& o : {call, put}) {
            const double h = 1e-4 * S;
            auto bsp = [&](double s) { return bs_price(o, s, 0.1, 0.2, 0.0); };
            auto bsd = [&](double s) { return bs_delta(o, s, 0.1, 0.2, 0.0); };
            auto mpx = [&](double s) { return merton_price(o, s, mp, 0.0, 1e-15).value; };
            auto mdx = [&](double s) { return merton_delta(o, s, mp, 0.0, 1e-15); };
            auto g = merton_greeks(o, S, mp, 0.0, 1e-14, mq_all);
            worst_greek = std::max({worst_greek,
                                    rel(bs_delta(o, S, 0.1, 0.2, 0.0), oracle::central_diff(bsp, S, h)),
                                    rel(bs_gamma(o, S, 0.1, 0.2, 0.0), oracle::central_diff(bsd, S, h)),
                                    rel(g.delta, oracle::central_diff(mpx, S, h)),
                                    rel(g.gamma, oracle::central_diff(mdx, S, h))});
            const double e = 1e-5;
            auto bump = [&](double MertonParams::*f) {
                MertonParams u = mp, d = mp;
                u.*f += e;
                d.*f -= e;
                return (merton_price(o, S, u, 0.0, 1e-15).value - merton_price(o, S, d, 0.0, 1e-15).value) /
                       (2 * e);
            };
            worst_jump = std::max({worst_jump, rel(g.jump.d_mu_j, bump(&MertonParams::mu_j)),
                                   rel(g.jump.d_sigma_j, bump(&MertonParams::sigma_j)),
                                   rel(g.jump.d_xi, bump(&MertonParams::xi))});
            (void)o;
        }
    for (double S : {60.0, 100.0, 150.0}) {
        const double fwd = S - 95.0 * std::exp(-0.1);
        worst_parity = std::max(worst_parity, std::abs(bs_price(call, S, 0.1, 0.2, 0.0) -
                                                       bs_price(put, S, 0.1, 0.2, 0.0) - fwd));
        worst_parity = std::max(worst_parity, std::abs(merton_price(call, S, mp, 0.0).value -
                                                       merton_price(put, S, mp, 0.0).value - fwd));
    }

    // EPE identity on simulated paths at every tenth grid date.
    auto grid = TimeGrid::make(0.0, 1.0, 200);
    auto ps = simulate_gbm(GbmParams{0.1, 0.1, 0.2}, 100.0, grid, 100000, 42);
    Pricer bs = [](const EuropeanOption& o, double S, double t) { return bs_price(o, S, 0.1, 0.2, t); };
    const double v0 = oracle::lognormal_call(100.0, 95.0, 0.1, 0.2, 1.0);
    double worst_z = 0.0;
    for (int k = 10; k <= grid.K; k += 10) {
        auto e = estimate_epe_mc(ps, grid, call, 0.1, bs, k);
        worst_z = std::max(worst_z, std::abs(e.mean - v0) / e.std_error);
    }
    auto mps = simulate_merton(mp, 100.0, grid, 100000, 43);
    Pricer mpr = [&](const EuropeanOption& o, double S, double t) { return merton_price(o, S, mp, t).value; };
    const double mv0 = oracle::merton_call_quadrature(100.0, 95.0, 0.1, 0.2, -0.125, 0.1, 0.1, 1.0);
    double worst_zm = 0.0;
    for (int k = 10; k <= grid.K; k += 10) {
        auto e = estimate_epe_mc(mps, grid, call, 0.1, mpr, k);
        worst_zm = std::max(worst_zm, std::abs(e.mean - mv0) / e.std_error);
    }

    const bool ok = worst_reduce < 1e-12 && worst_greek < 1e-5 && worst_jump < 1e-4 &&
                    worst_parity < 1e-10 && worst_z < 3.0 && worst_zm < 3.0;
    report(8, ok,
           fmt("xi=0 reduction %.1e, S-greeks FD rel %.1e, jump FD rel %.1e, parity %.1e, "
               "EPE max |z| bs %.2f merton %.2f",
               worst_reduce, worst_greek, worst_jump, worst_parity, worst_z, worst_zm));
}

void c9(const MetricSeries& fig1) {
    // self-financing on average, risk-free book, every date
    double worst_z = 0.0;
    for (std::size_t k = 1; k < fig1.dates.size(); ++k) {
        const double se = standard_error(fig1.p1.vol_sw[k], fig1.paths);
        worst_z = std::max(worst_z, std::abs(fig1.p1.mean_sw[k]) / se);
    }

    double desk_err = 0.0, replay_err = 0.0;
    std::size_t snaps = 0;
    bool invariant = true;
    for (const char* name : {"fig7", "fig11"}) {
        auto c = preset(name);
        c.paths = 5000;
        c.two_desk = true;
        c.event_log_paths = 25;
        c.threads = 1;
        auto a = timed_run(c);
        const double notional = c.option.shares * c.s0;
        desk_err = std::max(desk_err, a.max_desk_error / notional);
        const double r = market_rate(c);
        for (const auto& s : a.log.snapshots) {
            std::vector<LedgerEvent> mine;
            for (const auto& e : a.log.events)
                if (e.path == s.path && e.portfolio == s.portfolio) mine.push_back(e);
            replay_err = std::max(replay_err,
                                  std::abs(replay_wealth(mine, r, s.date, s.date_index) - s.wealth) / notional);
            if (s.portfolio == 2)
                replay_err = std::max(replay_err, std::abs(replay_wealth(mine, r, s.date, s.date_index, 1) -
                                                           s.wealth_xva) / notional);
            ++snaps;
        }
        c.threads = 4;
        auto b = timed_run(c);
        invariant &= a.p1.mean_pnl == b.p1.mean_pnl && a.p1.vol_pnl == b.p1.vol_pnl &&
                     a.p2.mean_sw == b.p2.mean_sw && a.p2.vol_sw == b.p2.vol_sw &&
                     a.p2.mean_w_xva == b.p2.mean_w_xva && a.terminal_w2 == b.terminal_w2 &&
                     a.epsilon.mean == b.epsilon.mean;
    }
    const bool ok = worst_z < 3.0 && desk_err < 1e-9 && replay_err < 1e-9 && invariant;
    report(9, ok,
           fmt("self-financing max |z| %.2f; desk conservation %.1e*notional; replay %.1e*notional over "
               "%zu snapshots; thread invariance %s",
               worst_z, desk_err, replay_err, snaps, invariant ? "bitwise" : "BROKEN"));
}

// Pearson correlation of two integer sequences; 1 when both are constant.
double correlation(const std::vector<int>& a, const std::vector<int>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0 && sbb == 0) return 1.0;
    if (saa == 0 || sbb == 0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

void c10() {
    auto lo = truncation_study(TruncationBase{}, 1e-4);
    auto hi = truncation_study(TruncationBase{}, 1e-15);
    bool monotone = lo.size() == hi.size();
    for (std::size_t i = 0; monotone && i < lo.size(); ++i) {
        const auto &a = lo[i].counts, &b = hi[i].counts;
        monotone = a.price <= b.price && a.delta <= b.delta && a.d_mu_j <= b.d_mu_j &&
                   a.d_sigma_j <= b.d_sigma_j && a.d_xi <= b.d_xi;
    }
    // Pattern: per sweep, each quantity is either driven by the swept parameter
    // (span >= 3 terms) or flat (span <= 2), the same way as the price; driven
    // sweeps must move in step with the price (correlation >= 0.95).
    bool pattern = true;
    std::string d;
    for (const auto* rows : {&lo, &hi}) {
        std::vector<std::string> sweeps;
        for (const auto& r : *rows)
            if (std::find(sweeps.begin(), sweeps.end(), r.sweep) == sweeps.end()) sweeps.push_back(r.sweep);
        for (const auto& s : sweeps) {
            std::vector<int> q[5];
            for (const auto& r : *rows) {
                if (s != r.sweep) continue;
                q[0].push_back(r.counts.price);
                q[1].push_back(r.counts.delta);
                q[2].push_back(r.counts.d_mu_j);
                q[3].push_back(r.counts.d_sigma_j);
                q[4].push_back(r.counts.d_xi);
            }
            auto span = [](const std::vector<int>& v) {
                return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
            };
            const bool driven = span(q[0]) >= 3;
            std::string cls = driven ? "driven" : "flat";
            for (int j = 1; j < 5; ++j) {
                if ((span(q[j]) >= 3) != driven) pattern = false;
                if (driven && correlation(q[0], q[j]) < 0.95) pattern = false;
            }
            if (rows == &lo) d += s + ":" + cls + " ";
        }
    }
    report(10, monotone && pattern,
           fmt("tol 1e-4 vs 1e-15 monotone %s; pattern %s [%s]", monotone ? "yes" : "no",
               pattern ? "same" : "differs", d.c_str()));
}

}  // namespace

int main() {
    auto start = std::chrono::steady_clock::now();
    double secs = 0.0;
    auto fig1_cfg = preset("fig1");
    auto fig1 = timed_run(fig1_cfg, &secs);
    c1_c9a(fig1, secs);
    c2();
    c3(fig1);
    c4();
    c5(fig1_cfg, fig1);
    c6();
    c7();
    c8();
    c9(fig1);
    c10();
    std::printf("%d criterion(s) failed; total %.0fs\n", failures, seconds_since(start));
    return failures == 0 ? 0 : 1;
}
