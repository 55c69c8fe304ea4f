#include "cvahedge/reporting.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cvahedge/variance_oracle.hpp"

#ifndef CVAHEDGE_VERSION
#define CVAHEDGE_VERSION "0.0.0"
#endif

namespace cvahedge {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

const char* const kCols[] = {"mean_sw",  "vol_sw",  "mean_sigma",  "mean_w",
                             "mean_pnl", "vol_pnl", "mean_unexpl", "vol_unexpl"};

void put_row(std::ostream& out, const std::vector<double>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << format_number(row[i]);
    }
    out << '\n';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    return f;
}

}  // namespace

std::vector<std::string> metrics_header() {
    std::vector<std::string> h{"date"};
    for (const char* p : {"p1_", "p2_"})
        for (const char* c : kCols) h.push_back(std::string(p) + c);
    return h;
}

void write_metrics_csv(const MetricSeries& s, std::ostream& out) {
    auto h = metrics_header();
    for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
    out << '\n';
    for (std::size_t k = 0; k < s.dates.size(); ++k) {
        std::vector<double> row{s.dates[k]};
        for (const PortfolioMetrics* p : {&s.p1, &s.p2}) {
            row.insert(row.end(), {p->mean_sw[k], p->vol_sw[k], p->mean_sigma[k], p->mean_w[k],
                                   p->mean_pnl[k], p->vol_pnl[k], p->mean_unexpl[k],
                                   p->vol_unexpl[k]});
        }
        put_row(out, row);
    }
}

void write_metrics_csv(const MetricSeries& s, const std::string& path) {
    auto f = open_out(path);
    write_metrics_csv(s, f);
    if (!f) throw IoError("write failed for '" + path + "'");
}

void write_strategy_csv(const MetricSeries& s, std::ostream& out) {
    out << "date,p1_vol_sigma,p1_vol_w,p2_vol_sigma,p2_vol_w,p2_mean_w_trading,p2_mean_w_xva\n";
    for (std::size_t k = 0; k < s.dates.size(); ++k)
        put_row(out, {s.dates[k], s.p1.vol_sigma[k], s.p1.vol_w[k], s.p2.vol_sigma[k],
                      s.p2.vol_w[k], s.p2.mean_w_trading[k], s.p2.mean_w_xva[k]});
}

void write_histogram_csv(const Histogram& h, std::ostream& out) {
    out << "bin_left,bin_right,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        out << format_number(h.edges[b]) << ',' << format_number(h.edges[b + 1]) << ','
            << h.counts[b] << '\n';
}

void write_event_log_csv(const EventLog& log, std::ostream& out) {
    out << "path,portfolio,date,event,amount,desk\n";
    for (const auto& e : log.events)
        out << e.path << ',' << e.portfolio << ',' << format_number(e.date) << ','
            << to_string(e.kind) << ',' << format_number(e.amount) << ',' << to_string(e.desk)
            << '\n';
}

void write_sweep_csv(const std::vector<SweepPoint>& pts, std::ostream& out) {
    out << "steps_per_year,paths,mean_pnl_first,vol_pnl_first,abs_epsilon,epsilon_se\n";
    for (const auto& p : pts)
        out << p.steps_per_year << ',' << p.paths << ',' << format_number(p.mean_pnl_first) << ','
            << format_number(p.vol_pnl_first) << ',' << format_number(p.abs_epsilon) << ','
            << format_number(p.epsilon_se) << '\n';
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) return t;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) v = std::numeric_limits<double>::quiet_NaN();
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read '" + path + "'");
    return read_csv(f);
}

std::string code_version() { return CVAHEDGE_VERSION; }

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["version"] = m.version;
    j["seed"] = m.seed;
    j["started"] = m.started;
    j["finished"] = m.finished;
    j["config"] = m.config_text;
    j["outputs"] = m.outputs;
    return j.dump(2) + "\n";
}

SmileGrid smile_grid(double S, double T, const MertonParams& base, const std::string& param,
                     const std::vector<double>& values, const std::vector<double>& strikes,
                     double tolerance) {
    if (param != "mu_j" && param != "sigma_j" && param != "xi")
        throw std::invalid_argument("smile: parameter must be mu_j, sigma_j or xi");
    SmileGrid g{param, values, strikes, {}};
    for (double K : strikes) {
        std::vector<double> row;
        for (double v : values) {
            MertonParams p = base;
            (param == "mu_j" ? p.mu_j : param == "sigma_j" ? p.sigma_j : p.xi) = v;
            EuropeanOption o{OptionKind::call, K, T, 1.0};
            double price = merton_price(o, S, p, 0.0, tolerance).value;
            row.push_back(try_bs_implied_vol(price, o, S, p.r, 0.0)
                              .value_or(std::numeric_limits<double>::quiet_NaN()));
        }
        g.vols.push_back(std::move(row));
    }
    return g;
}

void write_smile_csv(const SmileGrid& g, std::ostream& out) {
    out << "strike";
    for (double v : g.values) out << ',' << g.param << '=' << format_number(v);
    out << '\n';
    for (std::size_t i = 0; i < g.strikes.size(); ++i) {
        std::vector<double> row{g.strikes[i]};
        row.insert(row.end(), g.vols[i].begin(), g.vols[i].end());
        put_row(out, row);
    }
}

void write_truncation_csv(const std::vector<TruncationRow>& rows, double tolerance,
                          std::ostream& out) {
    out << "sweep,value,tolerance,price,delta,d_mu_j,d_sigma_j,d_xi\n";
    for (const auto& r : rows)
        out << r.sweep << ',' << format_number(r.value) << ',' << format_number(tolerance) << ','
            << r.counts.price << ',' << r.counts.delta << ',' << r.counts.d_mu_j << ','
            << r.counts.d_sigma_j << ',' << r.counts.d_xi << '\n';
}

std::vector<OracleRow> oracle_series(const ExperimentConfig& c, const MetricSeries& ms) {
    const auto* g = std::get_if<GbmParams>(&c.market);
    if (!g) throw std::invalid_argument("oracle: requires the bs model");
    if (c.option.kind != OptionKind::call) throw std::invalid_argument("oracle: requires a call");
    std::vector<OracleRow> rows;
    const double T = c.option.maturity, K = c.option.strike;
    const double dt = ms.dates.size() > 1 ? ms.dates[1] - ms.dates[0] : 0.0;
    for (std::size_t k = 1; k < ms.dates.size(); ++k) {
        const double tp = ms.dates[k - 1];
        const double tau = T - tp;
        LogReturnMoments m = log_return_moments(c.s0, K, g->r, g->sigma, c.t0, tp, T, dt);
        OracleRow r;
        r.date = ms.dates[k];
        r.analytic_mean = c.option.shares * pnl_mean_analytic(m, K, g->r, g->sigma, tau);
        r.analytic_vol = c.option.shares * std::sqrt(pnl_variance_analytic(m, K, g->r, g->sigma, tau));
        r.mc_mean = ms.p1.mean_pnl[k];
        r.mc_vol = ms.p1.vol_pnl[k];
        r.mc_se = standard_error(ms.p1.vol_pnl[k], ms.paths);
        rows.push_back(r);
    }
    return rows;
}

void write_oracle_csv(const std::vector<OracleRow>& rows, std::ostream& out) {
    out << "date,analytic_mean,analytic_vol,mc_mean,mc_vol,mc_se\n";
    for (const auto& r : rows)
        put_row(out, {r.date, r.analytic_mean, r.analytic_vol, r.mc_mean, r.mc_vol, r.mc_se});
}

}  // namespace cvahedge
