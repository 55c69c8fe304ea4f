#include "cvahedge/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "cvahedge/pnl_explain.hpp"

namespace cvahedge {

const char* to_string(CvaMode m) {
    switch (m) {
        case CvaMode::none: return "none";
        case CvaMode::cash_at_inception: return "cash_at_inception";
        case CvaMode::priced_not_hedged: return "priced_not_hedged";
        case CvaMode::priced_and_hedged: return "priced_and_hedged";
    }
    return "?";
}

CvaMode parse_cva_mode(const std::string& s) {
    for (auto m : {CvaMode::none, CvaMode::cash_at_inception, CvaMode::priced_not_hedged,
                   CvaMode::priced_and_hedged})
        if (s == to_string(m)) return m;
    throw std::invalid_argument("unknown cva mode '" + s + "'");
}

const char* to_string(ExplainMethod m) {
    return m == ExplainMethod::orthogonal ? "orthogonal" : "risk_based";
}

ExplainMethod parse_explain_method(const std::string& s) {
    if (s == "orthogonal") return ExplainMethod::orthogonal;
    if (s == "risk_based") return ExplainMethod::risk_based;
    throw std::invalid_argument("unknown explain method '" + s + "'");
}

bool is_priced(CvaMode m) {
    return m == CvaMode::priced_not_hedged || m == CvaMode::priced_and_hedged;
}

double market_rate(const ExperimentConfig& c) {
    return std::visit([](const auto& p) { return p.r; }, c.market);
}

HedgeMode ccr_hedge_mode(const ExperimentConfig& c) {
    return c.cva_mode == CvaMode::priced_and_hedged ? cva_mode_of(c.hedge.mode)
                                                    : risk_free_mode(c.hedge.mode);
}

void validate(const ExperimentConfig& c) {
    std::visit([](const auto& p) { validate(p); }, c.market);
    validate(c.credit);
    validate(c.option);
    if (!(c.s0 > 0.0)) throw std::invalid_argument("config: s0 must be positive");
    if (!(c.option.maturity > c.t0)) throw std::invalid_argument("config: maturity must exceed t0");
    if (c.paths < 1) throw std::invalid_argument("config: paths must be >= 1");
    if (c.steps_per_year < 1) throw std::invalid_argument("config: steps_per_year must be >= 1");
    if (!(c.pricing_tolerance > 0.0)) throw std::invalid_argument("config: pricing tolerance must be positive");
    if (c.histogram_bins < 1) throw std::invalid_argument("config: histogram bins must be >= 1");
    if (is_cva_mode(c.hedge.mode))
        throw std::invalid_argument("config: give the risk-free hedge mode; use cva.mode=priced_and_hedged to hedge CVA");
    validate(c.hedge, c.option, c.market);
    (void)ccr_hedge_mode(c);
}

double standard_error(double vol, std::size_t n) {
    return n > 1 ? vol / std::sqrt(static_cast<double>(n - 1)) : 0.0;
}

Histogram make_histogram(const std::vector<double>& values, int bins) {
    Histogram h;
    if (values.empty() || bins < 1) return h;
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    double lo = *mn, hi = *mx;
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / bins;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

namespace {

// Quantities tracked per date and portfolio.
enum Q : int { q_sw, q_sigma, q_w, q_pnl, q_unexpl, q_w_trading, q_w_xva, q_count };

struct Moments {
    double mean = 0.0;
    double m2 = 0.0;
};

struct BlockAcc {
    std::size_t n = 0;
    std::vector<Moments> m;  // [(k * 2 + p) * q_count + q]
    Moments eps;
    std::uint64_t defaults = 0;
    std::uint64_t degenerate = 0;
    double desk_error = 0.0;
    EventLog log;
};

inline void welford(Moments& a, double x, std::size_t n) {
    double d = x - a.mean;
    a.mean += d / static_cast<double>(n);
    a.m2 += d * (x - a.mean);
}

inline void chan_merge(Moments& a, std::size_t na, const Moments& b, std::size_t nb) {
    if (nb == 0) return;
    const double n = static_cast<double>(na + nb);
    const double d = b.mean - a.mean;
    a.mean += d * static_cast<double>(nb) / n;
    a.m2 += b.m2 + d * d * static_cast<double>(na) * static_cast<double>(nb) / n;
}

struct Engine {
    const ExperimentConfig& cfg;
    TimeGrid grid;
    double r;
    ValuationModel model;
    HedgeMode mode1, mode2;
    bool jump;
    bool priced;
    std::optional<EuropeanOption> hopt;
    std::vector<double> factor;  // risky factor at each date
    double growth;
    double cva0 = 0.0;
    std::size_t stride;  // doubles per date in BlockAcc::m

    explicit Engine(const ExperimentConfig& c)
        : cfg(c),
          grid(TimeGrid::make(c.t0, c.option.maturity, c.steps_per_year)),
          r(market_rate(c)),
          model(c.market, c.hedge.mode, c.pricing_tolerance),
          mode1(risk_free_mode(c.hedge.mode)),
          mode2(ccr_hedge_mode(c)),
          jump(is_jump_option_mode(c.hedge.mode)),
          priced(is_priced(c.cva_mode)),
          hopt(c.hedge.hedge_option) {
        factor.resize(static_cast<std::size_t>(grid.size()));
        for (int k = 0; k <= grid.K; ++k)
            factor[static_cast<std::size_t>(k)] = risky_factor(c.credit, grid[k], grid.tK);
        growth = std::exp(r * grid.dt);
        stride = 2 * q_count;
    }

    double book_theta(const EuropeanOption& o, double units, double S, double t) const {
        if (units == 0.0) return 0.0;
        const double h = theta_bump_width(cfg.steps_per_year);
        return units * theta_bump([&](double u) { return model.value(o, S, u); }, t, h);
    }

    void run_path(std::uint64_t i, BlockAcc& acc, std::vector<double>& S, double& tw1,
                  double& tw2) const {
        const int K = grid.K;
        simulate_path(cfg.market, cfg.s0, grid, cfg.seed, i, S.data());
        const double tau = simulate_default_time(cfg.credit.hazard, cfg.seed, i);
        const double R = cfg.credit.recovery;
        const EuropeanOption& V = cfg.option;
        const double hshares = hopt ? hopt->shares : 1.0;

        EventLog* log = (i < cfg.event_log_paths) ? &acc.log : nullptr;
        PathLedger L1(i, 1, false, log);
        PathLedger L2(i, 2, cfg.two_desk, log);

        InstrumentSens sv = model.evaluate(V, S[0], grid[0], jump);
        InstrumentSens sh;
        if (jump) sh = model.evaluate(*hopt, S[0], grid[0], true);

        ++acc.n;
        const std::size_t n = acc.n;
        auto rec = [&](int k, int p, int q, double x) {
            welford(acc.m[(static_cast<std::size_t>(k) * 2 + static_cast<std::size_t>(p)) * q_count +
                          static_cast<std::size_t>(q)],
                    x, n);
        };

        double eps = cva0;
        bool alive = true;

        // t0
        HedgePositions h1, h2;
        {
            const double f0 = factor[0];
            h1 = hedge(mode1, sv, sh, hshares, S[0], 1.0, acc);
            h2 = (mode2 == mode1) ? h1 : hedge(mode2, sv, sh, hshares, S[0], f0, acc);
            const double v2 = priced ? f0 * sv.value : sv.value;
            const double charge = cfg.cva_mode == CvaMode::cash_at_inception ? cva0 : 0.0;
            L1.open(0, grid[0], sv.value, sv.value, 0.0);
            L1.rebalance(0, grid[0], S[0], sh.value, h1.phi1, h1.phi2.value_or(0.0), h1.phi1,
                         h1.phi2.value_or(0.0));
            L2.open(0, grid[0], v2, sv.value, charge);
            L2.rebalance(0, grid[0], S[0], sh.value, h2.phi1, h2.phi2.value_or(0.0), h1.phi1,
                         h1.phi2.value_or(0.0));
            record_date(0, sv.value, v2, S[0], sh.value, L1, L2, rec, acc);
            for (int p = 0; p < 2; ++p) {
                rec(0, p, q_pnl, 0.0);
                rec(0, p, q_unexpl, 0.0);
            }
            L1.snapshot(0, grid[0]);
            L2.snapshot(0, grid[0]);
        }

        for (int k = 1; k <= K; ++k) {
            const double tp = grid[k - 1], t = grid[k];
            const double Sp = S[static_cast<std::size_t>(k - 1)], Sk = S[static_cast<std::size_t>(k)];
            const double dS = Sk - Sp;

            // PnL with positions and valuation date frozen at t_{k-1}
            const double v_new = model.value(V, Sk, tp);
            const double h_new = jump ? model.value(*hopt, Sk, tp) : 0.0;
            const double fp = (priced && alive) ? factor[static_cast<std::size_t>(k - 1)] : 1.0;
            for (int p = 0; p < 2; ++p) {
                const PortfolioState& st = (p == 0 ? L1 : L2).state();
                const double f = p == 0 ? 1.0 : fp;
                FrozenBook fb;
                fb.trade_old = f * sv.value;
                fb.trade_new = f * v_new;
                fb.hedge_old = st.stock * Sp + st.hedge_opt * sh.value;
                fb.hedge_new = st.stock * Sk + st.hedge_opt * h_new;
                PnLRecord pr = pnl_quantities(t, fb);
                BookSensitivities bs{f * sv.delta + st.stock + st.hedge_opt * sh.delta,
                                     f * sv.gamma + st.hedge_opt * sh.gamma};
                if (cfg.explain == ExplainMethod::orthogonal) {
                    orthogonal_explain(pr, bs, dS);
                } else {
                    double theta = book_theta(V, f, Sp, tp);
                    if (jump) theta += book_theta(*hopt, st.hedge_opt, Sp, tp);
                    risk_based_explain(pr, bs, theta, grid.dt, dS);
                }
                rec(k, p, q_pnl, pr.pnl_portfolio);
                rec(k, p, q_unexpl, pr.pnl_unexplained);
            }

            L1.accrue(k, t, growth);
            L2.accrue(k, t, growth);

            const bool last = k == K;
            if (!last) {
                sv = model.evaluate(V, Sk, t, jump);
                if (jump) sh = model.evaluate(*hopt, Sk, t, true);
            }
            const double v_now = last ? V.shares * payoff(V, Sk) : sv.value;

            if (alive && tau <= t) {
                alive = false;
                ++acc.defaults;
                L2.default_closeout(k, t, tau, v_now, R);
                eps += std::exp(-r * (t - grid.t0)) * (R - 1.0) * v_now;
            }

            double v2;
            if (last) {
                double hpay = 0.0;
                if (jump)
                    hpay = hopt->maturity <= t ? hopt->shares * payoff(*hopt, Sk)
                                               : model.value(*hopt, Sk, t);
                L1.settle_maturity(k, t, v_now, Sk, hpay);
                L2.settle_maturity(k, t, v_now, Sk, hpay);
                record_final(k, L1, L2, rec, acc);
                v2 = 0.0;
            } else {
                const double f = factor[static_cast<std::size_t>(k)];
                h1 = hedge(mode1, sv, sh, hshares, Sk, 1.0, acc);
                h2 = (!alive || mode2 == mode1) ? h1 : hedge(mode2, sv, sh, hshares, Sk, f, acc);
                L1.rebalance(k, t, Sk, sh.value, h1.phi1, h1.phi2.value_or(0.0), h1.phi1,
                             h1.phi2.value_or(0.0));
                L2.rebalance(k, t, Sk, sh.value, h2.phi1, h2.phi2.value_or(0.0), h1.phi1,
                             h1.phi2.value_or(0.0));
                v2 = (priced && alive) ? f * sv.value : sv.value;
                record_date(k, sv.value, v2, Sk, sh.value, L1, L2, rec, acc);
            }
            L1.snapshot(k, t);
            L2.snapshot(k, t);
        }
        tw1 = L1.state().wealth;
        tw2 = L2.state().wealth;
        welford(acc.eps, eps, n);
    }

    HedgePositions hedge(HedgeMode m, const InstrumentSens& sv, const InstrumentSens& sh,
                         double hshares, double S, double f, BlockAcc& acc) const {
        HedgeOutcome o = hedge_positions(m, sv, jump ? &sh : nullptr, hshares, S, f);
        if (o.degenerate) ++acc.degenerate;
        return o.positions;
    }

    template <class Rec>
    void record_date(int k, double v1, double v2, double S, double H, const PathLedger& L1,
                     const PathLedger& L2, Rec& rec, BlockAcc& acc) const {
        const double vals[2] = {v1, v2};
        const PathLedger* ls[2] = {&L1, &L2};
        for (int p = 0; p < 2; ++p) {
            const PortfolioState& st = ls[p]->state();
            const double sigma = vals[p] + st.stock * S + st.hedge_opt * H;
            rec(k, p, q_sw, sigma + st.wealth);
            rec(k, p, q_sigma, sigma);
            rec(k, p, q_w, st.wealth);
            rec(k, p, q_w_trading, st.wealth_trading);
            rec(k, p, q_w_xva, st.wealth_xva);
        }
        desk_check(L2, acc);
    }

    template <class Rec>
    void record_final(int k, const PathLedger& L1, const PathLedger& L2, Rec& rec,
                      BlockAcc& acc) const {
        const PathLedger* ls[2] = {&L1, &L2};
        for (int p = 0; p < 2; ++p) {
            const PortfolioState& st = ls[p]->state();
            rec(k, p, q_sw, st.wealth);
            rec(k, p, q_sigma, 0.0);
            rec(k, p, q_w, st.wealth);
            rec(k, p, q_w_trading, st.wealth_trading);
            rec(k, p, q_w_xva, st.wealth_xva);
        }
        desk_check(L2, acc);
    }

    void desk_check(const PathLedger& L2, BlockAcc& acc) const {
        if (!cfg.two_desk) return;
        const auto& st = L2.state();
        acc.desk_error =
            std::max(acc.desk_error, std::abs(st.wealth_trading + st.wealth_xva - st.wealth));
    }
};

}  // namespace

MetricSeries run_experiment(const ExperimentConfig& config) {
    validate(config);
    Engine eng(config);
    const EuropeanOption& V = config.option;
    const double v0 = eng.model.value(V, config.s0, eng.grid.t0);
    eng.cva0 = cva_european(v0, config.credit, eng.grid.t0, eng.grid.tK);

    const std::size_t Lp = config.paths;
    const std::size_t ndates = static_cast<std::size_t>(eng.grid.size());
    const std::size_t cells = ndates * eng.stride;
    constexpr std::size_t kBlock = 512;
    const std::size_t nblocks = (Lp + kBlock - 1) / kBlock;
    unsigned nthreads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, nblocks));

    MetricSeries out;
    out.dates = eng.grid.dates;
    out.paths = Lp;
    out.v0 = v0;
    out.cva0 = eng.cva0;
    out.terminal_w1.assign(Lp, 0.0);
    out.terminal_w2.assign(Lp, 0.0);

    BlockAcc total;
    total.m.assign(cells, Moments{});

    // Blocks are merged strictly in block order, so results do not depend on the
    // number of threads. Waves bound the memory held by unmerged blocks.
    const std::size_t wave = std::max<std::size_t>(static_cast<std::size_t>(nthreads) * 4, 8);
    for (std::size_t w0 = 0; w0 < nblocks; w0 += wave) {
        const std::size_t w1 = std::min(nblocks, w0 + wave);
        std::vector<BlockAcc> blocks(w1 - w0);
        std::atomic<std::size_t> next{w0};
        std::exception_ptr err;
        std::atomic<bool> failed{false};
        auto worker = [&]() {
            std::vector<double> S(ndates);
            try {
                for (;;) {
                    std::size_t b = next.fetch_add(1);
                    if (b >= w1 || failed.load()) break;
                    BlockAcc& acc = blocks[b - w0];
                    acc.m.assign(cells, Moments{});
                    const std::size_t i1 = std::min(Lp, (b + 1) * kBlock);
                    for (std::size_t i = b * kBlock; i < i1; ++i)
                        eng.run_path(i, acc, S, out.terminal_w1[i], out.terminal_w2[i]);
                }
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
            }
        };
        if (nthreads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        if (err) std::rethrow_exception(err);
        for (auto& b : blocks) {
            for (std::size_t c = 0; c < cells; ++c) chan_merge(total.m[c], total.n, b.m[c], b.n);
            chan_merge(total.eps, total.n, b.eps, b.n);
            total.n += b.n;
            total.defaults += b.defaults;
            total.degenerate += b.degenerate;
            total.desk_error = std::max(total.desk_error, b.desk_error);
            out.log.events.insert(out.log.events.end(), b.log.events.begin(), b.log.events.end());
            out.log.snapshots.insert(out.log.snapshots.end(), b.log.snapshots.begin(),
                                     b.log.snapshots.end());
        }
    }

    const double n = static_cast<double>(total.n);
    auto fill = [&](PortfolioMetrics& pm, int p) {
        auto col = [&](int q, std::vector<double>& mean, std::vector<double>* vol) {
            mean.resize(ndates);
            if (vol) vol->resize(ndates);
            for (std::size_t k = 0; k < ndates; ++k) {
                const Moments& m = total.m[(k * 2 + static_cast<std::size_t>(p)) * q_count +
                                           static_cast<std::size_t>(q)];
                mean[k] = m.mean;
                if (vol) (*vol)[k] = std::sqrt(std::max(m.m2 / n, 0.0));
            }
        };
        col(q_sw, pm.mean_sw, &pm.vol_sw);
        col(q_sigma, pm.mean_sigma, &pm.vol_sigma);
        col(q_w, pm.mean_w, &pm.vol_w);
        col(q_pnl, pm.mean_pnl, &pm.vol_pnl);
        col(q_unexpl, pm.mean_unexpl, &pm.vol_unexpl);
        col(q_w_trading, pm.mean_w_trading, nullptr);
        col(q_w_xva, pm.mean_w_xva, nullptr);
    };
    fill(out.p1, 0);
    fill(out.p2, 1);
    out.epsilon.mean = total.eps.mean;
    out.epsilon.std_error = standard_error(std::sqrt(std::max(total.eps.m2 / n, 0.0)), total.n);
    out.defaults = total.defaults;
    out.degenerate_hedges = total.degenerate;
    out.max_desk_error = total.desk_error;
    out.terminal_hist = make_histogram(out.terminal_w2, config.histogram_bins);
    return out;
}

McEstimate error_measure_epsilon(const ExperimentConfig& config) {
    validate(config);
    const TimeGrid grid = TimeGrid::make(config.t0, config.option.maturity, config.steps_per_year);
    const double r = market_rate(config);
    ValuationModel model(config.market, config.hedge.mode, config.pricing_tolerance);
    const EuropeanOption& V = config.option;
    const double v0 = model.value(V, config.s0, grid.t0);
    const double cva0 = cva_european(v0, config.credit, grid.t0, grid.tK);
    const double R = config.credit.recovery;
    std::vector<double> S(static_cast<std::size_t>(grid.size()));
    Moments m;
    for (std::size_t i = 0; i < config.paths; ++i) {
        double e = cva0;
        const double tau = simulate_default_time(config.credit.hazard, config.seed, i);
        if (tau <= grid.tK) {
            simulate_path(config.market, config.s0, grid, config.seed, i, S.data());
            int k = static_cast<int>(std::ceil((tau - grid.t0) / grid.dt - 1e-12));
            k = std::clamp(k, 1, grid.K);
            while (k > 1 && grid[k - 1] >= tau) --k;
            while (k < grid.K && grid[k] < tau) ++k;
            const double Sk = S[static_cast<std::size_t>(k)];
            const double vd = k == grid.K ? V.shares * payoff(V, Sk) : model.value(V, Sk, grid[k]);
            e += std::exp(-r * (grid[k] - grid.t0)) * (R - 1.0) * vd;
        }
        welford(m, e, i + 1);
    }
    const double vol = std::sqrt(std::max(m.m2 / static_cast<double>(config.paths), 0.0));
    return {m.mean, standard_error(vol, config.paths)};
}

double batch_abs_epsilon(const ExperimentConfig& base, std::size_t L, int batches) {
    double sum = 0.0;
    for (int b = 0; b < batches; ++b) {
        ExperimentConfig c = base;
        c.paths = L;
        c.seed = splitmix64(base.seed + 0x1000u * static_cast<std::uint64_t>(b + 1));
        sum += std::abs(error_measure_epsilon(c).mean);
    }
    return sum / batches;
}

std::vector<SweepPoint> convergence_sweep(const ExperimentConfig& base,
                                          const std::vector<int>& steps_per_year,
                                          const std::vector<std::size_t>& path_counts) {
    std::vector<SweepPoint> out;
    for (int spy : steps_per_year) {
        for (std::size_t L : path_counts) {
            ExperimentConfig c = base;
            c.steps_per_year = spy;
            c.paths = L;
            c.event_log_paths = 0;
            MetricSeries ms = run_experiment(c);
            SweepPoint p;
            p.steps_per_year = spy;
            p.paths = L;
            p.mean_pnl_first = ms.p1.mean_pnl[1];
            p.vol_pnl_first = ms.p1.vol_pnl[1];
            p.abs_epsilon = std::abs(ms.epsilon.mean);
            p.epsilon_se = ms.epsilon.std_error;
            out.push_back(p);
        }
    }
    return out;
}

}  // namespace cvahedge
