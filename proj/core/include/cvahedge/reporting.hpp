#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cvahedge/analytic_pricing.hpp"
#include "cvahedge/sim_engine.hpp"

namespace cvahedge {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_number(double v);  // %.17g

std::vector<std::string> metrics_header();
void write_metrics_csv(const MetricSeries& s, std::ostream& out);
void write_metrics_csv(const MetricSeries& s, const std::string& path);

// date, p1_vol_sigma, p1_vol_w, p2_vol_sigma, p2_vol_w, p2_mean_w_trading, p2_mean_w_xva
void write_strategy_csv(const MetricSeries& s, std::ostream& out);
void write_histogram_csv(const Histogram& h, std::ostream& out);
void write_event_log_csv(const EventLog& log, std::ostream& out);
void write_sweep_csv(const std::vector<SweepPoint>& pts, std::ostream& out);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

struct RunManifest {
    std::string command;
    std::string config_text;
    std::uint64_t seed = 0;
    std::string version;
    std::string started;
    std::string finished;
    std::vector<std::string> outputs;
};
std::string manifest_json(const RunManifest& m);
std::string code_version();
std::string utc_timestamp();

// Implied vols of Merton prices over a strike grid, one column per value of the
// varied jump parameter ("mu_j", "sigma_j" or "xi").
struct SmileGrid {
    std::string param;
    std::vector<double> values;
    std::vector<double> strikes;
    std::vector<std::vector<double>> vols;  // [strike][value]; NaN when inversion fails
};
SmileGrid smile_grid(double S, double T, const MertonParams& base, const std::string& param,
                     const std::vector<double>& values, const std::vector<double>& strikes,
                     double tolerance = 1e-14);
void write_smile_csv(const SmileGrid& g, std::ostream& out);

void write_truncation_csv(const std::vector<TruncationRow>& rows, double tolerance,
                          std::ostream& out);

struct OracleRow {
    double date = 0.0;
    double analytic_mean = 0.0;
    double analytic_vol = 0.0;
    double mc_mean = 0.0;
    double mc_vol = 0.0;
    double mc_se = 0.0;
};
// Analytic PnL moments for the risk-free BS portfolio alongside MC estimates.
// Rows are interval-end dates t_1..t_K; currency in contract units.
std::vector<OracleRow> oracle_series(const ExperimentConfig& c, const MetricSeries& ms);
void write_oracle_csv(const std::vector<OracleRow>& rows, std::ostream& out);

}  // namespace cvahedge
