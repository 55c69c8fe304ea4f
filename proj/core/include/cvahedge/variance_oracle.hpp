#pragma once

namespace cvahedge {

// Moments for the interval (t_{k-1}, t_k] seen from t0.
struct LogReturnMoments {
    double mu_x = 0.0;
    double sigma_x = 0.0;
    double mu_d2 = 0.0;
    double sigma_d2 = 0.0;
};

// Log-return moments X ~ N((r - s^2/2) dt, s^2 dt) and d2 ~ N(mu_d2, sigma_d2^2) at t_{k-1}.
LogReturnMoments log_return_moments(double s0, double K, double r, double sigma, double t0,
                                    double t_prev, double T, double dt);

// Approximate mean and variance of the delta-hedged one-period PnL of a
// long Black-Scholes call, per share. tau = T - t_{k-1}.
double pnl_mean_analytic(const LogReturnMoments& m, double K, double r, double sigma, double tau);
double pnl_variance_analytic(const LogReturnMoments& m, double K, double r, double sigma,
                             double tau);

double pnl_gamma_approximation(double gamma, double dS);

}  // namespace cvahedge
