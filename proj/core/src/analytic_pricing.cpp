#include "cvahedge/analytic_pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvahedge {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double tau_of(const EuropeanOption& o, double t) {
    double tau = o.maturity - t;
    if (!(tau > 0.0)) throw std::domain_error("pricer: valuation time must precede maturity");
    return tau;
}

void check_inputs(double S, double sigma) {
    if (!(S > 0.0)) throw std::domain_error("pricer: spot must be positive");
    if (!(sigma >= 0.0)) throw std::domain_error("pricer: volatility must be non-negative");
}

struct D12 {
    double d1, d2, sqrt_tau;
};

D12 bs_d(double S, double K, double r, double sigma, double tau) {
    double st = std::sqrt(tau);
    double d1 = (std::log(S / K) + (r + 0.5 * sigma * sigma) * tau) / (sigma * st);
    return {d1, d1 - sigma * st, st};
}

}  // namespace

void validate(const EuropeanOption& o) {
    if (!(o.strike > 0.0)) throw std::invalid_argument("option: strike must be positive");
    if (!(o.shares > 0.0)) throw std::invalid_argument("option: shares must be positive");
}

double payoff(const EuropeanOption& o, double S) {
    return o.kind == OptionKind::call ? std::max(S - o.strike, 0.0) : std::max(o.strike - S, 0.0);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }
double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double bs_price(const EuropeanOption& o, double S, double r, double sigma, double t) {
    return bs_greeks(o, S, r, sigma, t).price;
}

double bs_delta(const EuropeanOption& o, double S, double r, double sigma, double t) {
    double tau = tau_of(o, t);
    check_inputs(S, sigma);
    if (sigma == 0.0) return bs_greeks(o, S, r, sigma, t).delta;
    double nd1 = norm_cdf(bs_d(S, o.strike, r, sigma, tau).d1);
    return o.kind == OptionKind::call ? nd1 : nd1 - 1.0;
}

double bs_gamma(const EuropeanOption& o, double S, double r, double sigma, double t) {
    return bs_greeks(o, S, r, sigma, t).gamma;
}

double bs_vega(const EuropeanOption& o, double S, double r, double sigma, double t) {
    double tau = tau_of(o, t);
    check_inputs(S, sigma);
    if (sigma == 0.0) return 0.0;
    D12 d = bs_d(S, o.strike, r, sigma, tau);
    return S * norm_pdf(d.d1) * d.sqrt_tau;
}

BsGreeks bs_greeks(const EuropeanOption& o, double S, double r, double sigma, double t) {
    double tau = tau_of(o, t);
    check_inputs(S, sigma);
    const double K = o.strike;
    double df = std::exp(-r * tau);
    BsGreeks g;
    if (sigma == 0.0) {
        // deterministic forward: intrinsic value against the discounted strike
        double fwd = S - K * df;
        g.price = std::max(fwd, 0.0);
        g.delta = fwd > 0.0 ? 1.0 : fwd < 0.0 ? 0.0 : 0.5;
        if (o.kind == OptionKind::put) {
            g.price = g.price - fwd;
            g.delta -= 1.0;
        }
        return g;
    }
    D12 d = bs_d(S, K, r, sigma, tau);
    double nd1 = norm_cdf(d.d1), nd2 = norm_cdf(d.d2);
    g.price = S * nd1 - K * df * nd2;
    g.delta = nd1;
    // gamma in the K e^{-r tau} phi(d2) form
    g.gamma = K * df * norm_pdf(d.d2) / (S * S * sigma * d.sqrt_tau);
    if (o.kind == OptionKind::put) {
        g.price = g.price - S + K * df;
        g.delta = nd1 - 1.0;
    }
    return g;
}

std::optional<double> try_bs_implied_vol(double price, const EuropeanOption& o, double S,
                                         double r, double t) {
    double tau = tau_of(o, t);
    if (!(S > 0.0)) return std::nullopt;
    const double dfK = o.strike * std::exp(-r * tau);
    double lower, upper;
    if (o.kind == OptionKind::call) {
        lower = std::max(S - dfK, 0.0);
        upper = S;
    } else {
        lower = std::max(dfK - S, 0.0);
        upper = dfK;
    }
    const double slack = 1e-12 * S;
    if (!(price >= lower - slack) || !(price <= upper + slack)) return std::nullopt;

    const double target = 1e-12 * S;
    double lo = kIvLow, hi = kIvHigh;
    double f_lo = bs_price(o, S, r, lo, t) - price;
    if (f_lo >= 0.0) return lo;  // root at or below the bracket floor; price is intrinsic to 1e-12
    double f_hi = bs_price(o, S, r, hi, t) - price;
    if (f_hi < 0.0) return std::nullopt;

    // Newton from the Brenner-Subrahmanyam guess, safeguarded by the bracket
    double sigma = std::clamp(std::sqrt(2.0 * std::numbers::pi / tau) * price / S, 0.05, 1.0);
    for (int it = 0; it < 200; ++it) {
        double f = bs_price(o, S, r, sigma, t) - price;
        if (std::abs(f) < target) return sigma;
        if (f > 0.0) hi = sigma; else lo = sigma;
        double vega = bs_vega(o, S, r, sigma, t);
        double next = vega > 0.0 ? sigma - f / vega : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo < 1e-15) break;
        sigma = next;
    }
    double f = bs_price(o, S, r, sigma, t) - price;
    if (std::abs(f) < 1e-10 * S) return sigma;
    return std::nullopt;
}

double bs_implied_vol(double price, const EuropeanOption& o, double S, double r, double t) {
    auto iv = try_bs_implied_vol(price, o, S, r, t);
    if (!iv) throw std::domain_error("implied vol: price outside no-arbitrage bounds");
    return *iv;
}

// Merton series. Each term is a Black-Scholes-like value of a lognormal with
// log-mean m_n and total stdev v_n:
//   m_n = ln S + (r - xi (kappa-1) - sigma^2/2) tau + n mu_j,  v_n^2 = sigma^2 tau + n sigma_j^2
//   A_n = e^{m_n + v_n^2/2},  Vbar(n) = A_n N(d1) - K N(d2).
namespace {

struct Series {
    double S, K, lnK, tau, kappa, xt, xkt, m0, s2t, sj2, mu_j, sigma_j;

    Series(const EuropeanOption& o, double S_, const MertonParams& p, double t) {
        tau = tau_of(o, t);
        check_inputs(S_, p.sigma);
        if (p.xi < 0.0 || p.sigma_j < 0.0)
            throw std::invalid_argument("merton: bad jump parameters");
        S = S_;
        K = o.strike;
        lnK = std::log(K);
        kappa = p.kappa();
        xt = p.xi * tau;
        xkt = p.xi * kappa * tau;
        m0 = std::log(S) + (p.r - p.xi * (kappa - 1.0) - 0.5 * p.sigma * p.sigma) * tau;
        s2t = p.sigma * p.sigma * tau;
        sj2 = p.sigma_j * p.sigma_j;
        mu_j = p.mu_j;
        sigma_j = p.sigma_j;
    }

    // Upper bounds on |term n| of each series (undiscounted). w_prev is w_{n-1}.
    struct Bounds {
        double price, delta, gamma, mu_j, sigma_j, xi;
    };
    Bounds bounds(int n, double w, double w_prev) const {
        const double v = std::sqrt(s2t + n * sj2);
        const double A = std::exp(m0 + n * mu_j + 0.5 * v * v);
        const double g = std::abs(n - xkt);
        return {w * (A + K),
                w * A / S,
                w * A * kInvSqrt2Pi / (S * S * v),
                w * g * A,
                w * sigma_j * (g * A + K * n * kInvSqrt2Pi / v),
                tau * (w_prev + w) * (A + K) + w * std::abs(kappa - 1.0) * tau * A};
    }
};

}  // namespace

MertonGreeks merton_greeks(const EuropeanOption& o, double S, const MertonParams& p, double t,
                           double tolerance, unsigned q) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("merton: tolerance must be positive");
    const Series sr(o, S, p, t);
    const double K = sr.K;

    double price = 0, delta = 0, gamma = 0, dmu = 0, dsig = 0, dxi = 0;
    double w = std::exp(-sr.xt);
    double w_prev = 0.0;
    int n = 0;
    for (; n < kMaxMertonTerms; ++n) {
        const double m = sr.m0 + n * sr.mu_j;
        const double v = std::sqrt(sr.s2t + n * sr.sj2);
        const double A = std::exp(m + 0.5 * v * v);

        // stop only past the Poisson mode, once every requested series is below tolerance
        if (n > sr.xt) {
            const auto b = sr.bounds(n, w, w_prev);
            bool done = true;
            if (q & mq_price) done = done && b.price < tolerance;
            if (q & mq_delta) done = done && b.delta < tolerance;
            if (q & mq_gamma) done = done && b.gamma < tolerance;
            if (q & mq_mu_j) done = done && b.mu_j < tolerance;
            if (q & mq_sigma_j) done = done && b.sigma_j < tolerance;
            if (q & mq_xi) done = done && b.xi < tolerance;
            if (done) break;
        }

        const double d1 = (m - sr.lnK + v * v) / v;
        const double d2 = d1 - v;
        const double AN = A * norm_cdf(d1);
        const double vbar = AN - K * norm_cdf(d2);
        price += w * vbar;
        delta += w * AN;
        if (q & mq_gamma) gamma += w * A * norm_pdf(d1) / v;
        if (q & (mq_mu_j | mq_sigma_j)) {
            const double g = n - sr.xkt;
            dmu += w * g * AN;
            if (q & mq_sigma_j) dsig += w * sr.sigma_j * (g * AN + K * norm_pdf(d2) * n / v);
        }
        // d w_n / d xi = tau (w_{n-1} - w_n), which stays finite at xi = 0
        if (q & mq_xi)
            dxi += sr.tau * (w_prev - w) * vbar - w * (sr.kappa - 1.0) * sr.tau * AN;

        w_prev = w;
        w *= sr.xt / (n + 1);
    }

    const double df = std::exp(-p.r * sr.tau);
    MertonGreeks out;
    out.price = df * price;
    out.delta = df * delta / S;
    out.gamma = df * gamma / (S * S);
    out.jump = {df * dmu, df * dsig, df * dxi};
    out.terms_used = n;
    if (o.kind == OptionKind::put) {
        // put-call parity; jump sensitivities and gamma carry over unchanged
        out.price = out.price - S + K * df;
        out.delta -= 1.0;
    }
    return out;
}

MertonPrice merton_price(const EuropeanOption& o, double S, const MertonParams& p, double t,
                         double tolerance) {
    MertonGreeks g = merton_greeks(o, S, p, t, tolerance, mq_price);
    MertonPrice out;
    out.value = g.price;
    out.diagnostics.terms_used = g.terms_used;
    out.diagnostics.tolerance = tolerance;
    const double xt = p.xi * (o.maturity - t);
    double w = std::exp(-xt);
    for (int n = 0; n < g.terms_used; ++n) {
        out.diagnostics.weights.push_back(w);
        w *= xt / (n + 1);
    }
    return out;
}

double merton_delta(const EuropeanOption& o, double S, const MertonParams& p, double t,
                    double tolerance) {
    return merton_greeks(o, S, p, t, tolerance, mq_delta).delta;
}

double merton_gamma(const EuropeanOption& o, double S, const MertonParams& p, double t,
                    double tolerance) {
    return merton_greeks(o, S, p, t, tolerance, mq_gamma).gamma;
}

JumpSensitivities merton_jump_sensitivities(const EuropeanOption& o, double S,
                                            const MertonParams& p, double t, double tolerance) {
    return merton_greeks(o, S, p, t, tolerance, mq_mu_j | mq_sigma_j | mq_xi).jump;
}

std::vector<double> poisson_weights(double xi_tau, double cutoff) {
    if (xi_tau < 0.0) throw std::invalid_argument("poisson_weights: negative intensity");
    std::vector<double> out;
    double w = std::exp(-xi_tau);
    for (int n = 0; n < kMaxMertonTerms; ++n) {
        if (n > xi_tau && w < cutoff) break;
        out.push_back(w);
        w *= xi_tau / (n + 1);
    }
    return out;
}

TermCounts merton_term_counts(const EuropeanOption& o, double S, const MertonParams& p,
                              double t, double tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("merton: tolerance must be positive");
    const Series sr(o, S, p, t);
    int found[5] = {-1, -1, -1, -1, -1};
    double w = std::exp(-sr.xt), w_prev = 0.0;
    for (int n = 0; n < kMaxMertonTerms; ++n) {
        if (n > sr.xt) {
            auto b = sr.bounds(n, w, w_prev);
            const double vals[5] = {b.price, b.delta, b.mu_j, b.sigma_j, b.xi};
            bool all = true;
            for (int i = 0; i < 5; ++i) {
                if (found[i] < 0 && vals[i] < tolerance) found[i] = n;
                all = all && found[i] >= 0;
            }
            if (all) break;
        }
        w_prev = w;
        w *= sr.xt / (n + 1);
    }
    for (int& f : found)
        if (f < 0) f = kMaxMertonTerms;
    return {found[0], found[1], found[2], found[3], found[4]};
}

std::vector<TruncationRow> truncation_study(const TruncationBase& base, double tolerance) {
    if (!(tolerance > 0.0 && tolerance < 1.0))
        throw std::invalid_argument("truncation: tolerance must lie in (0,1)");
    std::vector<TruncationRow> rows;
    auto eval = [&](const char* name, double value, double T, double K, MertonParams p) {
        EuropeanOption o{OptionKind::call, K, T, 1.0};
        rows.push_back({name, value, merton_term_counts(o, base.S, p, 0.0, tolerance)});
    };
    for (double T : {0.25, 0.5, 1.0, 2.0, 5.0, 10.0}) eval("T", T, T, base.K, base.params);
    for (double K = 60.0; K <= 140.0 + 1e-9; K += 10.0) eval("K", K, base.T, K, base.params);
    for (double v : {-0.5, -0.25, -0.125, 0.0, 0.125, 0.25, 0.5}) {
        MertonParams p = base.params;
        p.mu_j = v;
        eval("mu_j", v, base.T, base.K, p);
    }
    for (double v : {0.05, 0.1, 0.2, 0.4, 0.6}) {
        MertonParams p = base.params;
        p.sigma_j = v;
        eval("sigma_j", v, base.T, base.K, p);
    }
    for (double v : {0.05, 0.1, 0.25, 0.5, 1.0, 3.0, 6.0}) {
        MertonParams p = base.params;
        p.xi = v;
        eval("xi", v, base.T, base.K, p);
    }
    return rows;
}

}  // namespace cvahedge
