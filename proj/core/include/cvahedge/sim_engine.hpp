#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvahedge/analytic_pricing.hpp"
#include "cvahedge/credit.hpp"
#include "cvahedge/hedging_strategies.hpp"
#include "cvahedge/market_models.hpp"
#include "cvahedge/wealth_ledger.hpp"

namespace cvahedge {

enum class CvaMode { none, cash_at_inception, priced_not_hedged, priced_and_hedged };
enum class ExplainMethod { orthogonal, risk_based };

const char* to_string(CvaMode m);
CvaMode parse_cva_mode(const std::string& s);
const char* to_string(ExplainMethod m);
ExplainMethod parse_explain_method(const std::string& s);

struct ExperimentConfig {
    std::string name = "custom";
    ModelParams market = GbmParams{};
    double s0 = 100.0;
    double t0 = 0.0;
    // Risk-free hedge mode. The CCR portfolio switches to its CVA variant under priced_and_hedged.
    HedgeSpec hedge;
    CvaMode cva_mode = CvaMode::none;
    CreditCurve credit;
    EuropeanOption option{OptionKind::call, 95.0, 1.0, 100.0};
    std::size_t paths = 100000;
    int steps_per_year = 200;
    std::uint64_t seed = 42;
    unsigned threads = 0;  // 0: hardware concurrency
    bool two_desk = false;
    double pricing_tolerance = 1e-10;
    ExplainMethod explain = ExplainMethod::orthogonal;
    int histogram_bins = 100;
    std::size_t event_log_paths = 0;
};

void validate(const ExperimentConfig& c);
double market_rate(const ExperimentConfig& c);
bool is_priced(CvaMode m);
HedgeMode ccr_hedge_mode(const ExperimentConfig& c);

struct PortfolioMetrics {
    std::vector<double> mean_sw, vol_sw;
    std::vector<double> mean_sigma, vol_sigma;
    std::vector<double> mean_w, vol_w;
    std::vector<double> mean_pnl, vol_pnl;
    std::vector<double> mean_unexpl, vol_unexpl;
    std::vector<double> mean_w_trading, mean_w_xva;
};

struct Histogram {
    std::vector<double> edges;  // bins + 1
    std::vector<std::uint64_t> counts;
};

Histogram make_histogram(const std::vector<double>& values, int bins);

struct MetricSeries {
    std::vector<double> dates;
    std::size_t paths = 0;
    PortfolioMetrics p1, p2;  // without and with CCR
    Histogram terminal_hist;  // terminal wealth of the CCR portfolio
    std::vector<double> terminal_w1, terminal_w2;
    McEstimate epsilon;
    double v0 = 0.0;    // contract value at t0
    double cva0 = 0.0;  // contract CVA at t0
    std::uint64_t defaults = 0;  // tau <= tK
    std::uint64_t degenerate_hedges = 0;
    double max_desk_error = 0.0;  // max |W_trading + W_xva - W|
    EventLog log;
};

// Standard error of a mean from a population volatility over n paths.
double standard_error(double vol, std::size_t n);

MetricSeries run_experiment(const ExperimentConfig& config);

// eps = mean of CVA(t0) + 1{tau <= tK} B(t0)/B(t_d) (R - 1) V(t_d), contract units,
// with t_d the first grid date at or after tau.
McEstimate error_measure_epsilon(const ExperimentConfig& config);

struct SweepPoint {
    int steps_per_year = 0;
    std::size_t paths = 0;
    double mean_pnl_first = 0.0;  // first interval, risk-free portfolio
    double vol_pnl_first = 0.0;
    double abs_epsilon = 0.0;
    double epsilon_se = 0.0;
};

std::vector<SweepPoint> convergence_sweep(const ExperimentConfig& base,
                                          const std::vector<int>& steps_per_year,
                                          const std::vector<std::size_t>& path_counts);

// Mean over `batches` independent seeds of |eps| at L paths.
double batch_abs_epsilon(const ExperimentConfig& base, std::size_t L, int batches);

std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

}  // namespace cvahedge
