#include "cvahedge/wealth_ledger.hpp"

#include <cmath>
#include <stdexcept>

namespace cvahedge {

const char* to_string(Desk d) { return d == Desk::trading ? "trading" : "xva"; }

const char* to_string(CashFlowSource s) {
    switch (s) {
        case CashFlowSource::trade_payoff: return "trade_payoff";
        case CashFlowSource::closeout: return "closeout";
        case CashFlowSource::hedge_option_payoff: return "hedge_option_payoff";
        case CashFlowSource::cva_charge: return "cva_charge";
    }
    return "?";
}

const char* to_string(LedgerEventKind k) {
    switch (k) {
        case LedgerEventKind::buy_trade: return "buy_trade";
        case LedgerEventKind::cva_transfer: return "cva_transfer";
        case LedgerEventKind::cash_flow: return "cash_flow";
        case LedgerEventKind::reentry: return "reentry";
        case LedgerEventKind::stock_trade: return "stock_trade";
        case LedgerEventKind::option_trade: return "option_trade";
    }
    return "?";
}

double init_wealth(double strategy_value, double t0_cash_flows) {
    return -strategy_value + t0_cash_flows;
}

double step_wealth(double w_prev, double growth, std::span<const Rebalance> rebalances,
                   std::span<const double> cash_flows) {
    double w = w_prev * growth;
    for (const auto& r : rebalances) w -= r.price * r.d_units;
    for (double c : cash_flows) w += c;
    return w;
}

double replay_wealth(std::span<const LedgerEvent> events, double r, double t, int k,
                     int desk_filter) {
    double w = 0.0;
    for (const auto& e : events) {
        if (e.date_index > k) continue;
        if (desk_filter >= 0 && static_cast<int>(e.desk) != desk_filter) continue;
        w += e.amount * std::exp(r * (t - e.date));
    }
    return w;
}

PathLedger::PathLedger(std::uint64_t path, int portfolio, bool two_desk, EventLog* log)
    : path_(path), portfolio_(portfolio), two_desk_(two_desk), log_(log) {}

void PathLedger::book(int k, double t, LedgerEventKind kind, double amount, Desk desk) {
    if (amount == 0.0) return;
    st_.wealth += amount;
    if (two_desk_) (desk == Desk::trading ? st_.wealth_trading : st_.wealth_xva) += amount;
    if (log_) log_->events.push_back({path_, portfolio_, k, t, kind, amount, desk});
}

void PathLedger::open(int k, double t, double premium, double risk_free_value,
                      double cva_charge) {
    st_.phi_trade = 1.0;
    st_.date_index = k;
    // the trading desk pays the risk-free value; the difference funds the xVA desk
    book(k, t, LedgerEventKind::buy_trade, -premium, Desk::trading);
    book(k, t, LedgerEventKind::cva_transfer, premium - risk_free_value, Desk::trading);
    book(k, t, LedgerEventKind::cva_transfer, risk_free_value - premium, Desk::xva);
    book(k, t, LedgerEventKind::cash_flow, cva_charge, Desk::xva);
}

void PathLedger::accrue(int k, double, double growth) {
    if (k <= st_.date_index) throw std::invalid_argument("ledger: dates must increase");
    st_.date_index = k;
    st_.wealth *= growth;
    st_.wealth_trading *= growth;
    st_.wealth_xva *= growth;
}

void PathLedger::rebalance(int k, double t, double S, double H, double stock, double hedge_opt,
                           double stock_trading, double hedge_opt_trading) {
    if (!two_desk_) {
        book(k, t, LedgerEventKind::stock_trade, -S * (stock - st_.stock), Desk::trading);
        book(k, t, LedgerEventKind::option_trade, -H * (hedge_opt - st_.hedge_opt), Desk::trading);
    } else {
        const double x_old = st_.stock - st_.stock_trading;
        const double x_new = stock - stock_trading;
        const double xo_old = st_.hedge_opt - st_.hedge_opt_trading;
        const double xo_new = hedge_opt - hedge_opt_trading;
        book(k, t, LedgerEventKind::stock_trade, -S * (stock_trading - st_.stock_trading), Desk::trading);
        book(k, t, LedgerEventKind::stock_trade, -S * (x_new - x_old), Desk::xva);
        book(k, t, LedgerEventKind::option_trade, -H * (hedge_opt_trading - st_.hedge_opt_trading), Desk::trading);
        book(k, t, LedgerEventKind::option_trade, -H * (xo_new - xo_old), Desk::xva);
    }
    st_.stock = stock;
    st_.hedge_opt = hedge_opt;
    st_.stock_trading = stock_trading;
    st_.hedge_opt_trading = hedge_opt_trading;
}

void PathLedger::default_closeout(int k, double t, double tau, double V, double recovery) {
    if (st_.defaulted) throw std::logic_error("ledger: counterparty already defaulted");
    st_.defaulted = true;
    st_.reentered = true;
    st_.default_time = tau;
    book(k, t, LedgerEventKind::cash_flow, recovery * V, Desk::xva);
    book(k, t, LedgerEventKind::reentry, -V, Desk::xva);
}

void PathLedger::settle_maturity(int k, double t, double trade_payoff, double S,
                                 double hedge_payoff) {
    book(k, t, LedgerEventKind::cash_flow, st_.phi_trade * trade_payoff, Desk::trading);
    if (two_desk_) {
        const double xs = st_.stock - st_.stock_trading;
        const double xo = st_.hedge_opt - st_.hedge_opt_trading;
        book(k, t, LedgerEventKind::stock_trade, S * st_.stock_trading, Desk::trading);
        book(k, t, LedgerEventKind::stock_trade, S * xs, Desk::xva);
        book(k, t, LedgerEventKind::cash_flow, hedge_payoff * st_.hedge_opt_trading, Desk::trading);
        book(k, t, LedgerEventKind::cash_flow, hedge_payoff * xo, Desk::xva);
    } else {
        book(k, t, LedgerEventKind::stock_trade, S * st_.stock, Desk::trading);
        book(k, t, LedgerEventKind::cash_flow, hedge_payoff * st_.hedge_opt, Desk::trading);
    }
    st_.phi_trade = 0.0;
    st_.stock = st_.hedge_opt = st_.stock_trading = st_.hedge_opt_trading = 0.0;
}

void PathLedger::snapshot(int k, double t) {
    if (log_)
        log_->snapshots.push_back(
            {path_, portfolio_, k, t, st_.wealth, st_.wealth_trading, st_.wealth_xva});
}

}  // namespace cvahedge
