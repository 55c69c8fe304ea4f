#include "cvahedge/credit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvahedge {

void validate(const CreditCurve& c) {
    if (!(c.hazard >= 0.0)) throw std::invalid_argument("credit: hazard must be >= 0");
    if (!(c.recovery >= 0.0 && c.recovery <= 1.0))
        throw std::invalid_argument("credit: recovery must lie in [0,1]");
}

double survival_probability(const CreditCurve& c, double t, double T) {
    if (T < t) throw std::invalid_argument("survival_probability: T < t");
    return std::exp(-c.hazard * (T - t));
}

double default_probability(const CreditCurve& c, double t, double T) {
    if (T < t) throw std::invalid_argument("default_probability: T < t");
    return -std::expm1(-c.hazard * (T - t));
}

double risky_factor(const CreditCurve& c, double t, double tK) {
    return 1.0 - (1.0 - c.recovery) * default_probability(c, t, tK);
}

double cva_european(double V, const CreditCurve& c, double t, double tK) {
    if (V < 0.0) throw std::domain_error("cva: negative exposure not supported");
    return (1.0 - c.recovery) * V * default_probability(c, t, tK);
}

double risky_value(double V, const CreditCurve& c, double t, double tK) {
    if (V < 0.0) throw std::domain_error("risky_value: negative exposure not supported");
    return V * risky_factor(c, t, tK);
}

McEstimate estimate_epe_mc(const PathSet& paths, const TimeGrid& grid, const EuropeanOption& o,
                           double r, const Pricer& pricer, int k) {
    if (k < 0 || k > grid.K) throw std::out_of_range("epe: date index out of range");
    const double t = grid[k];
    const double disc = 1.0 / bank_account(r, grid.t0, t);
    const bool expiry = t >= o.maturity;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < paths.paths; ++i) {
        double S = paths.at(i, static_cast<std::size_t>(k));
        double v = expiry ? payoff(o, S) : pricer(o, S, t);
        double x = disc * std::max(v, 0.0);
        sum += x;
        sum2 += x * x;
    }
    const double n = static_cast<double>(paths.paths);
    McEstimate e;
    e.mean = sum / n;
    double var = std::max(sum2 / n - e.mean * e.mean, 0.0);
    e.std_error = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    return e;
}

}  // namespace cvahedge
