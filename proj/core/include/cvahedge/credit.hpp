#pragma once

#include <cstddef>
#include <functional>

#include "cvahedge/analytic_pricing.hpp"
#include "cvahedge/market_models.hpp"

namespace cvahedge {

struct CreditCurve {
    double hazard = 0.2;
    double recovery = 0.5;
};

void validate(const CreditCurve& c);

double survival_probability(const CreditCurve& c, double t, double T);
double default_probability(const CreditCurve& c, double t, double T);

// 1 - (1-R) PD(t, tK): the factor turning V into the risky value.
double risky_factor(const CreditCurve& c, double t, double tK);

double cva_european(double V, const CreditCurve& c, double t, double tK);
double risky_value(double V, const CreditCurve& c, double t, double tK);

// Per-share pricer (option, S, t) -> value.
using Pricer = std::function<double(const EuropeanOption&, double, double)>;

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Discounted expected positive exposure at date index k.
McEstimate estimate_epe_mc(const PathSet& paths, const TimeGrid& grid, const EuropeanOption& o,
                           double r, const Pricer& pricer, int k);

}  // namespace cvahedge
