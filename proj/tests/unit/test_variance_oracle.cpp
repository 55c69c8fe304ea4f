#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "cvahedge/analytic_pricing.hpp"
#include "cvahedge/variance_oracle.hpp"

using namespace cvahedge;

namespace {

// Integrates g(z) against the standard normal density.
double gauss(const std::function<double(double)>& g, int n = 4000) {
    const double lo = -10.0, hi = 10.0, h = (hi - lo) / n;
    auto f = [&](double z) { return g(z) * std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI); };
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

struct Moments {
    double mean, var;
};

// Gamma-approximated PnL 1/2 Gamma S^2 (e^X - 1)^2 with S(t_{k-1}) lognormal from t0
// and X the independent next log return; moments by quadrature.
Moments quadrature_moments(double s0, double K, double r, double sig, double T, double t_prev,
                           double dt) {
    EuropeanOption o{OptionKind::call, K, T, 1.0};
    auto gs2 = [&](double z) {
        double S = s0 * std::exp((r - 0.5 * sig * sig) * t_prev + sig * std::sqrt(t_prev) * z);
        return 0.5 * bs_gamma(o, S, r, sig, t_prev) * S * S;
    };
    auto jump = [&](double z, int p) {
        double x = (r - 0.5 * sig * sig) * dt + sig * std::sqrt(dt) * z;
        return std::pow(std::expm1(x), p);
    };
    double a1 = gauss(gs2), a2 = gauss([&](double z) { return gs2(z) * gs2(z); });
    double b2 = gauss([&](double z) { return jump(z, 2); });
    double b4 = gauss([&](double z) { return jump(z, 4); });
    return {a1 * b2, a2 * b4 - a1 * a1 * b2 * b2};
}

}  // namespace

TEST(VarianceOracle, DegenerateStep) {
    LogReturnMoments m{0.0, 0.0, 0.3, 0.5};
    EXPECT_NEAR(pnl_mean_analytic(m, 95.0, 0.1, 0.2, 0.5), 0.0, 1e-15);
    EXPECT_NEAR(pnl_variance_analytic(m, 95.0, 0.1, 0.2, 0.5), 0.0, 1e-15);
}

TEST(VarianceOracle, FirstIntervalIsPointGamma) {
    auto m = log_return_moments(100.0, 95.0, 0.1, 0.2, 0.0, 0.0, 1.0, 0.005);
    EXPECT_EQ(m.sigma_d2, 0.0);
    EuropeanOption o{OptionKind::call, 95.0, 1.0, 1.0};
    double e2 = std::expm1(2 * m.mu_x + 2 * m.sigma_x * m.sigma_x) -
                2 * std::expm1(m.mu_x + 0.5 * m.sigma_x * m.sigma_x);
    double expect = 0.5 * bs_gamma(o, 100.0, 0.1, 0.2, 0.0) * 1e4 * e2;
    EXPECT_NEAR(pnl_mean_analytic(m, 95.0, 0.1, 0.2, 1.0), expect, 1e-12);
}

TEST(VarianceOracle, MatchesQuadratureAcrossGrid) {
    const double dt = 0.005;
    for (double tp : {0.0, 0.1, 0.5, 0.9, 0.97}) {
        auto m = log_return_moments(100.0, 95.0, 0.1, 0.2, 0.0, tp, 1.0, dt);
        double tau = 1.0 - tp;
        auto q = quadrature_moments(100.0, 95.0, 0.1, 0.2, 1.0, tp, dt);
        EXPECT_NEAR(pnl_mean_analytic(m, 95.0, 0.1, 0.2, tau) / q.mean, 1.0, 1e-6) << tp;
        EXPECT_NEAR(pnl_variance_analytic(m, 95.0, 0.1, 0.2, tau) / q.var, 1.0, 1e-5) << tp;
    }
}

TEST(VarianceOracle, GammaApproximation) {
    EXPECT_EQ(pnl_gamma_approximation(0.3, 0.0), 0.0);
    EXPECT_EQ(pnl_gamma_approximation(0.0, 2.0), 0.0);
    EXPECT_EQ(pnl_gamma_approximation(0.5, 2.0), 1.0);
}

TEST(VarianceOracle, GammaApproximationOrder) {
    EuropeanOption o{OptionKind::call, 95.0, 1.0, 1.0};
    auto V = [&](double S) { return bs_price(o, S, 0.1, 0.2, 0.0); };
    double d = bs_delta(o, 100, 0.1, 0.2, 0.0), g = bs_gamma(o, 100, 0.1, 0.2, 0.0);
    double e1 = std::abs(V(102) - V(100) - 2 * d - pnl_gamma_approximation(g, 2.0));
    double e2 = std::abs(V(101) - V(100) - d - pnl_gamma_approximation(g, 1.0));
    EXPECT_GT(std::log2(e1 / e2), 2.7);
}
