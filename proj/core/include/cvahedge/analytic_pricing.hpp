#pragma once

#include <optional>
#include <vector>

#include "cvahedge/market_models.hpp"

namespace cvahedge {

enum class OptionKind { call, put };

struct EuropeanOption {
    OptionKind kind = OptionKind::call;
    double strike = 95.0;
    double maturity = 1.0;
    double shares = 1.0;
};

void validate(const EuropeanOption& o);
double payoff(const EuropeanOption& o, double S);  // per share

double norm_cdf(double x);
double norm_pdf(double x);

// Black-Scholes, per share. t is the valuation time, t < maturity.
double bs_price(const EuropeanOption& o, double S, double r, double sigma, double t);
double bs_delta(const EuropeanOption& o, double S, double r, double sigma, double t);
double bs_gamma(const EuropeanOption& o, double S, double r, double sigma, double t);
double bs_vega(const EuropeanOption& o, double S, double r, double sigma, double t);

struct BsGreeks {
    double price = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
};
BsGreeks bs_greeks(const EuropeanOption& o, double S, double r, double sigma, double t);

// Throws std::domain_error when price violates the no-arbitrage bounds.
double bs_implied_vol(double price, const EuropeanOption& o, double S, double r, double t);
std::optional<double> try_bs_implied_vol(double price, const EuropeanOption& o, double S,
                                         double r, double t);

inline constexpr double kIvLow = 1e-6;
inline constexpr double kIvHigh = 5.0;

struct MertonTermDiagnostics {
    int terms_used = 0;
    double tolerance = 0.0;
    std::vector<double> weights;
};

struct MertonPrice {
    double value = 0.0;
    MertonTermDiagnostics diagnostics;
};

struct JumpSensitivities {
    double d_mu_j = 0.0;
    double d_sigma_j = 0.0;
    double d_xi = 0.0;
};

// Which series to accumulate. Truncation continues until every requested
// series has passed its own cutoff.
enum MertonQuantity : unsigned {
    mq_price = 1u,
    mq_delta = 2u,
    mq_gamma = 4u,
    mq_mu_j = 8u,
    mq_sigma_j = 16u,
    mq_xi = 32u,
    mq_all = 63u,
};

struct MertonGreeks {
    double price = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    JumpSensitivities jump;
    int terms_used = 0;
};

inline constexpr double kDefaultMertonTolerance = 1e-12;
inline constexpr int kMaxMertonTerms = 2000;

MertonGreeks merton_greeks(const EuropeanOption& o, double S, const MertonParams& p, double t,
                           double tolerance = kDefaultMertonTolerance,
                           unsigned quantities = mq_price | mq_delta | mq_gamma);

MertonPrice merton_price(const EuropeanOption& o, double S, const MertonParams& p, double t,
                         double tolerance = kDefaultMertonTolerance);
double merton_delta(const EuropeanOption& o, double S, const MertonParams& p, double t,
                    double tolerance = kDefaultMertonTolerance);
double merton_gamma(const EuropeanOption& o, double S, const MertonParams& p, double t,
                    double tolerance = kDefaultMertonTolerance);
JumpSensitivities merton_jump_sensitivities(const EuropeanOption& o, double S,
                                            const MertonParams& p, double t,
                                            double tolerance = kDefaultMertonTolerance);

// Poisson weights w_n = (xi tau)^n e^{-xi tau} / n!, cut when w_n < cutoff past the mode.
std::vector<double> poisson_weights(double xi_tau, double cutoff);

// Number of terms each series needs to pass the cutoff at a given tolerance.
struct TermCounts {
    int price = 0;
    int delta = 0;
    int d_mu_j = 0;
    int d_sigma_j = 0;
    int d_xi = 0;
};
TermCounts merton_term_counts(const EuropeanOption& o, double S, const MertonParams& p,
                              double t, double tolerance);

struct TruncationRow {
    const char* sweep = "";
    double value = 0.0;
    TermCounts counts;
};

struct TruncationBase {
    double S = 100.0;
    double K = 100.0;
    double T = 1.0;
    MertonParams params{0.1, 0.2, -0.125, 0.1, 0.1};
};

// Sweeps T, K, mu_j, sigma_j and xi one at a time around the base point.
std::vector<TruncationRow> truncation_study(const TruncationBase& base, double tolerance);

}  // namespace cvahedge
