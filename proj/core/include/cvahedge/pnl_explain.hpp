#pragma once

#include <functional>

namespace cvahedge {

struct PnLRecord {
    double date = 0.0;
    double pnl_trade = 0.0;
    double pnl_hedge = 0.0;
    double pnl_portfolio = 0.0;
    double pnl_explained = 0.0;
    double pnl_unexplained = 0.0;
};

// Book revalued at the frozen date t_{k-1} with old and new market data.
struct FrozenBook {
    double trade_old = 0.0;  // phi * V(t_{k-1}, X(t_{k-1}))
    double trade_new = 0.0;  // phi * V(t_{k-1}, X(t_k))
    double hedge_old = 0.0;  // sum Phi * H(t_{k-1}, X(t_{k-1}))
    double hedge_new = 0.0;
};

// Net first and second order sensitivities of the whole book to the stock.
struct BookSensitivities {
    double delta = 0.0;
    double gamma = 0.0;
};

PnLRecord pnl_quantities(double date, const FrozenBook& book);

// Orthogonal explain: delta dS + gamma dS^2 / 2, with time frozen.
double orthogonal_explained(const BookSensitivities& s, double dS);
void orthogonal_explain(PnLRecord& rec, const BookSensitivities& s, double dS);

// Risk-based explain adds theta dt.
double risk_based_explained(const BookSensitivities& s, double theta, double dt, double dS);
void risk_based_explain(PnLRecord& rec, const BookSensitivities& s, double theta, double dt,
                        double dS);

// Central finite difference in valuation time, half-width h.
double theta_bump(const std::function<double(double)>& value_at_time, double t, double h);
inline double theta_bump_width(int steps_per_year) { return 1.0 / (2.0 * steps_per_year); }

}  // namespace cvahedge
