#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace cvahedge {

enum class Desk { trading, xva };
enum class CashFlowSource { trade_payoff, closeout, hedge_option_payoff, cva_charge };

const char* to_string(Desk d);
const char* to_string(CashFlowSource s);

struct CashFlowEvent {
    double date = 0.0;
    double amount = 0.0;
    CashFlowSource source = CashFlowSource::trade_payoff;
    Desk desk = Desk::trading;
};

// Every wealth movement other than interest, as seen from the booking desk.
enum class LedgerEventKind {
    buy_trade,        // premium paid for the traded option
    cva_transfer,     // internal CVA transfer between desks
    cash_flow,        // see CashFlowSource
    reentry,          // risk-free replacement bought after default
    stock_trade,
    option_trade,
};
const char* to_string(LedgerEventKind k);

struct LedgerEvent {
    std::uint64_t path = 0;
    int portfolio = 0;  // 1 or 2
    int date_index = 0;
    double date = 0.0;
    LedgerEventKind kind = LedgerEventKind::cash_flow;
    double amount = 0.0;
    Desk desk = Desk::trading;
};

// Stepwise wealth recorded after all events at a date.
struct WealthSnapshot {
    std::uint64_t path = 0;
    int portfolio = 0;
    int date_index = 0;
    double date = 0.0;
    double wealth = 0.0;
    double wealth_trading = 0.0;
    double wealth_xva = 0.0;
};

struct EventLog {
    std::vector<LedgerEvent> events;
    std::vector<WealthSnapshot> snapshots;
};

// W(t0) = -Sigma(t0) + cash-flows at t0
double init_wealth(double strategy_value, double t0_cash_flows);

struct Rebalance {
    double price = 0.0;  // instrument value after cash-flows
    double d_units = 0.0;
};

// W_k = W_{k-1} B_k/B_{k-1} - sum price * d_units + sum cash-flows
double step_wealth(double w_prev, double growth, std::span<const Rebalance> rebalances,
                   std::span<const double> cash_flows);

// Replays events of one path/portfolio: sum amount * e^{r (t - t_e)} over events with
// date index <= k. desk_filter < 0 means both desks.
double replay_wealth(std::span<const LedgerEvent> events, double r, double t, int k,
                     int desk_filter = -1);

struct PortfolioState {
    double phi_trade = 0.0;  // traded option contracts held
    double stock = 0.0;      // total stock units
    double hedge_opt = 0.0;  // total hedge option contracts
    double stock_trading = 0.0;
    double hedge_opt_trading = 0.0;
    double wealth = 0.0;
    double wealth_trading = 0.0;
    double wealth_xva = 0.0;
    bool defaulted = false;
    bool reentered = false;
    double default_time = std::numeric_limits<double>::infinity();
    int date_index = 0;
};

// Per-path ledger for one portfolio. Routes every movement to a desk; the
// single-entity wealth is always updated with the same amounts.
class PathLedger {
public:
    PathLedger(std::uint64_t path, int portfolio, bool two_desk, EventLog* log = nullptr);

    const PortfolioState& state() const { return st_; }

    // Buys one trade contract at `premium` (what the counterparty is paid),
    // while the trading desk books the risk-free value `risk_free_value`.
    // cva_charge is an extra t0 cash amount received by the xVA desk.
    void open(int k, double t, double premium, double risk_free_value, double cva_charge);

    void accrue(int k, double t, double growth);

    // Moves to new total and trading-desk hedge positions at the given prices.
    void rebalance(int k, double t, double S, double H, double stock, double hedge_opt,
                   double stock_trading, double hedge_opt_trading);

    // Risk-free closeout at default: receive R V, pay V to re-enter with a
    // risk-free counterparty. Loss lands on the xVA desk.
    void default_closeout(int k, double t, double tau, double V, double recovery);

    // Cash-settles payoffs and unwinds all hedges at tK.
    void settle_maturity(int k, double t, double trade_payoff, double S, double hedge_payoff);

    void snapshot(int k, double t);

private:
    void book(int k, double t, LedgerEventKind kind, double amount, Desk desk);

    std::uint64_t path_;
    int portfolio_;
    bool two_desk_;
    EventLog* log_;
    PortfolioState st_;
};

}  // namespace cvahedge
