#include "cvahedge/variance_oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvahedge {

LogReturnMoments log_return_moments(double s0, double K, double r, double sigma, double t0,
                                    double t_prev, double T, double dt) {
    if (!(T > t_prev)) throw std::domain_error("variance oracle: t_{k-1} must precede T");
    const double tau = T - t_prev;
    LogReturnMoments m;
    m.mu_x = (r - 0.5 * sigma * sigma) * dt;
    m.sigma_x = sigma * std::sqrt(dt);
    m.mu_d2 = (std::log(s0 / K) + (r - 0.5 * sigma * sigma) * (T - t0)) / (sigma * std::sqrt(tau));
    m.sigma_d2 = std::sqrt((t_prev - t0) / tau);
    return m;
}

namespace {

// E[(e^X - 1)^2]
double second_factor(double mu, double s2) {
    double a = std::expm1(s2) * std::exp(2.0 * mu + s2);
    double b = std::expm1(mu + 0.5 * s2);
    return a + b * b;
}

// E[(e^X - 1)^4]
double fourth_factor(double mu, double s2) {
    return std::exp(4.0 * mu + 8.0 * s2) - 4.0 * std::exp(3.0 * mu + 4.5 * s2) +
           6.0 * std::exp(2.0 * mu + 2.0 * s2) - 4.0 * std::exp(mu + 0.5 * s2) + 1.0;
}

}  // namespace

double pnl_mean_analytic(const LogReturnMoments& m, double K, double r, double sigma, double tau) {
    if (!(tau > 0.0)) throw std::domain_error("pnl_mean_analytic: tau must be positive");
    const double sd2 = m.sigma_d2 * m.sigma_d2;
    const double pdf_mean = std::exp(-m.mu_d2 * m.mu_d2 / (2.0 * (1.0 + sd2))) /
                            (std::sqrt(2.0 * std::numbers::pi) * std::sqrt(1.0 + sd2));
    const double scale = K * std::exp(-r * tau) / (2.0 * sigma * std::sqrt(tau));
    return scale * pdf_mean * second_factor(m.mu_x, m.sigma_x * m.sigma_x);
}

double pnl_variance_analytic(const LogReturnMoments& m, double K, double r, double sigma,
                             double tau) {
    if (!(tau > 0.0)) throw std::domain_error("pnl_variance_analytic: tau must be positive");
    const double s2 = m.sigma_x * m.sigma_x;
    const double sd2 = m.sigma_d2 * m.sigma_d2;
    const double mu2 = m.mu_d2 * m.mu_d2;
    const double f = fourth_factor(m.mu_x, s2);
    const double g2 = second_factor(m.mu_x, s2);
    const double g = g2 * g2;
    const double bracket = f * std::exp(-mu2 / (1.0 + 2.0 * sd2)) / std::sqrt(1.0 + 2.0 * sd2) -
                           g * std::exp(-mu2 / (1.0 + sd2)) / (1.0 + sd2);
    const double scale = K * K * std::exp(-2.0 * r * tau) / (8.0 * std::numbers::pi * sigma * sigma * tau);
    const double v = scale * bracket;
    if (v < 0.0) {
        // f and g nearly cancel for tiny steps
        const double mag = scale * (std::abs(f) + std::abs(g));
        if (v < -1e-12 * mag) throw std::runtime_error("pnl_variance_analytic: numerical cancellation");
        return 0.0;
    }
    return v;
}

double pnl_gamma_approximation(double gamma, double dS) { return 0.5 * dS * dS * gamma; }

}  // namespace cvahedge
