#include "cvahedge/pnl_explain.hpp"

namespace cvahedge {

PnLRecord pnl_quantities(double date, const FrozenBook& book) {
    PnLRecord r;
    r.date = date;
    r.pnl_trade = book.trade_new - book.trade_old;
    r.pnl_hedge = book.hedge_new - book.hedge_old;
    r.pnl_portfolio = r.pnl_trade + r.pnl_hedge;
    r.pnl_unexplained = r.pnl_portfolio;
    return r;
}

double orthogonal_explained(const BookSensitivities& s, double dS) {
    return s.delta * dS + 0.5 * s.gamma * dS * dS;
}

void orthogonal_explain(PnLRecord& rec, const BookSensitivities& s, double dS) {
    rec.pnl_explained = orthogonal_explained(s, dS);
    rec.pnl_unexplained = rec.pnl_portfolio - rec.pnl_explained;
}

double risk_based_explained(const BookSensitivities& s, double theta, double dt, double dS) {
    return theta * dt + orthogonal_explained(s, dS);
}

void risk_based_explain(PnLRecord& rec, const BookSensitivities& s, double theta, double dt,
                        double dS) {
    rec.pnl_explained = risk_based_explained(s, theta, dt, dS);
    rec.pnl_unexplained = rec.pnl_portfolio - rec.pnl_explained;
}

double theta_bump(const std::function<double(double)>& value_at_time, double t, double h) {
    return (value_at_time(t + h) - value_at_time(t - h)) / (2.0 * h);
}

}  // namespace cvahedge
