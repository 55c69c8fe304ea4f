#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvahedge/analytic_pricing.hpp"
#include "cvahedge/config.hpp"
#include "cvahedge/reporting.hpp"
#include "cvahedge/sim_engine.hpp"

namespace fs = std::filesystem;
using namespace cvahedge;

namespace {

enum Exit { ok = 0, runtime_failure = 1, usage = 2, bad_config = 3, io_failure = 4 };

std::string default_out_dir() {
    const char* env = std::getenv("CVAHEDGE_OUT_DIR");
    return env && *env ? env : "out";
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        double x = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad number: " + tok);
        v.push_back(x);
    }
    if (v.empty()) throw std::invalid_argument("empty list");
    return v;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw IoError("cannot write " + p.string());
    f.precision(17);
    return f;
}

void make_dir(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw IoError("cannot create " + p.string() + ": " + ec.message());
}

std::string joined_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

struct RunArgs {
    std::string preset, config;
    std::uint64_t seed = 0;
    std::size_t paths = 0;
    unsigned threads = 0;
    std::size_t event_log = 0;
    bool seed_set = false;
    std::string out;
};

ExperimentConfig load_config(const RunArgs& a) {
    ExperimentConfig c;
    if (a.config.empty()) {
        try {
            c = preset(a.preset);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(0, e.what());
        }
    } else {
        c = parse_config_file(a.config);
    }
    if (a.seed_set) c.seed = a.seed;
    if (a.paths) c.paths = a.paths;
    if (a.threads) c.threads = a.threads;
    if (a.event_log) c.event_log_paths = a.event_log;
    validate(c);
    return c;
}

int cmd_run(const RunArgs& a, const std::string& command) {
    ExperimentConfig c = load_config(a);
    RunManifest m;
    m.command = command;
    m.config_text = config_text(c);
    m.seed = c.seed;
    m.version = code_version();
    m.started = utc_timestamp();

    MetricSeries s = run_experiment(c);

    fs::path dir(a.out);
    make_dir(dir);
    {
        auto f = open_out(dir / "metrics.csv");
        write_metrics_csv(s, f);
        m.outputs.push_back("metrics.csv");
    }
    {
        auto f = open_out(dir / "histogram.csv");
        write_histogram_csv(s.terminal_hist, f);
        m.outputs.push_back("histogram.csv");
    }
    {
        auto f = open_out(dir / "strategy.csv");
        write_strategy_csv(s, f);
        m.outputs.push_back("strategy.csv");
    }
    if (c.event_log_paths) {
        auto f = open_out(dir / "event_log.csv");
        write_event_log_csv(s.log, f);
        m.outputs.push_back("event_log.csv");
    }
    m.finished = utc_timestamp();
    m.outputs.push_back("manifest.json");
    {
        auto f = open_out(dir / "manifest.json");
        f << manifest_json(m) << '\n';
    }
    std::cout << "paths " << s.paths << ", defaults " << s.defaults << ", V0 "
              << format_number(s.v0) << ", CVA0 " << format_number(s.cva0) << ", eps "
              << format_number(s.epsilon.mean) << " +- " << format_number(s.epsilon.std_error)
              << "\nwrote " << dir.string() << '\n';
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CVA-aware hedging simulator"};
    app.require_subcommand(1);

    RunArgs ra;
    ra.out = default_out_dir();
    auto* run = app.add_subcommand("run", "simulate an experiment and write CSV outputs");
    auto* src = run->add_option_group("source");
    src->add_option("--preset", ra.preset, "named experiment");
    src->add_option("--config", ra.config, "key = value config file")->check(CLI::ExistingFile);
    src->require_option(1);
    run->add_option("--seed", ra.seed)->each([&](const std::string&) { ra.seed_set = true; });
    run->add_option("--paths", ra.paths)->check(CLI::PositiveNumber);
    run->add_option("--threads", ra.threads);
    run->add_option("--event-log", ra.event_log, "log events for the first N paths");
    run->add_option("--out", ra.out, "output directory");

    RunArgs sa;
    sa.preset = "fig5";
    sa.out = default_out_dir();
    std::string sweep_spy = "50,100,200,400", sweep_paths;
    auto* sweep = app.add_subcommand("sweep", "convergence in steps per year and path count");
    sweep->add_option("--preset", sa.preset);
    sweep->add_option("--config", sa.config)->check(CLI::ExistingFile);
    sweep->add_option("--steps", sweep_spy, "comma list of steps per year");
    sweep->add_option("--path-counts", sweep_paths, "comma list of path counts");
    sweep->add_option("--seed", sa.seed)->each([&](const std::string&) { sa.seed_set = true; });
    sweep->add_option("--paths", sa.paths)->check(CLI::PositiveNumber);
    sweep->add_option("--threads", sa.threads);
    sweep->add_option("--out", sa.out);

    std::string model = "bs", kind = "call";
    double S = 100, K = 95, T = 1, r = 0.1, sigma = 0.2, mu_j = -0.125, sigma_j = 0.1, xi = 0.1;
    auto* price = app.add_subcommand("price", "price and Greeks of a European option");
    price->add_option("--model", model)->check(CLI::IsMember({"bs", "merton"}));
    price->add_option("--kind", kind)->check(CLI::IsMember({"call", "put"}));
    price->add_option("--spot", S);
    price->add_option("--strike", K);
    price->add_option("--maturity", T);
    price->add_option("--rate", r);
    price->add_option("--sigma", sigma);
    price->add_option("--jump-mu", mu_j);
    price->add_option("--jump-sigma", sigma_j);
    price->add_option("--jump-xi", xi);

    std::string smile_param = "xi", smile_values = "0.25,0.5,1,3,6", smile_strikes;
    std::string smile_out;
    auto* smile = app.add_subcommand("smile", "implied vol smile of Merton prices");
    smile->add_option("--model", model)->check(CLI::IsMember({"merton"}));
    smile->add_option("--param", smile_param)->check(CLI::IsMember({"mu_j", "sigma_j", "xi"}));
    smile->add_option("--values", smile_values);
    smile->add_option("--strikes", smile_strikes, "comma list, default 50..150 step 2.5");
    smile->add_option("--maturity", T);
    smile->add_option("--out", smile_out, "CSV file, default stdout");

    double trunc_tol = 1e-4;
    std::string trunc_out;
    auto* trunc = app.add_subcommand("truncation", "series term counts per sweep");
    trunc->add_option("--tol", trunc_tol)->check(CLI::PositiveNumber);
    trunc->add_option("--out", trunc_out, "CSV file, default stdout");

    RunArgs oa;
    oa.preset = "fig6";
    std::string oracle_out;
    auto* oracle = app.add_subcommand("oracle", "analytic vs Monte Carlo PnL moments");
    oracle->add_option("--preset", oa.preset);
    oracle->add_option("--seed", oa.seed)->each([&](const std::string&) { oa.seed_set = true; });
    oracle->add_option("--paths", oa.paths)->check(CLI::PositiveNumber);
    oracle->add_option("--threads", oa.threads);
    oracle->add_option("--out", oracle_out, "CSV file, default stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        if (*run) return cmd_run(ra, joined_args(argc, argv));

        if (*sweep) {
            ExperimentConfig c = load_config(sa);
            std::vector<int> spy;
            for (double v : parse_list(sweep_spy)) spy.push_back(static_cast<int>(v));
            std::vector<std::size_t> counts;
            if (sweep_paths.empty()) counts.push_back(c.paths);
            else
                for (double v : parse_list(sweep_paths)) counts.push_back(static_cast<std::size_t>(v));
            auto pts = convergence_sweep(c, spy, counts);
            make_dir(sa.out);
            auto f = open_out(fs::path(sa.out) / "sweep.csv");
            write_sweep_csv(pts, f);
            std::cout << "wrote " << (fs::path(sa.out) / "sweep.csv").string() << '\n';
            return ok;
        }

        if (*price) {
            EuropeanOption o{kind == "call" ? OptionKind::call : OptionKind::put, K, T, 1.0};
            validate(o);
            std::cout.precision(12);
            if (model == "bs") {
                auto g = bs_greeks(o, S, r, sigma, 0.0);
                std::cout << "price " << g.price << "\ndelta " << g.delta << "\ngamma " << g.gamma
                          << "\nvega " << bs_vega(o, S, r, sigma, 0.0) << '\n';
            } else {
                MertonParams p{r, sigma, mu_j, sigma_j, xi};
                auto g = merton_greeks(o, S, p, 0.0, kDefaultMertonTolerance, mq_all);
                std::cout << "price " << g.price << "\ndelta " << g.delta << "\ngamma " << g.gamma
                          << "\nd_mu_j " << g.jump.d_mu_j << "\nd_sigma_j " << g.jump.d_sigma_j
                          << "\nd_xi " << g.jump.d_xi << "\nterms " << g.terms_used << '\n';
            }
            return ok;
        }

        if (*smile) {
            std::vector<double> strikes;
            if (smile_strikes.empty())
                for (double k = 50; k <= 150 + 1e-9; k += 2.5) strikes.push_back(k);
            else
                strikes = parse_list(smile_strikes);
            MertonParams p{r, sigma, mu_j, sigma_j, xi};
            auto g = smile_grid(S, T, p, smile_param, parse_list(smile_values), strikes);
            if (smile_out.empty()) {
                write_smile_csv(g, std::cout);
            } else {
                auto f = open_out(smile_out);
                write_smile_csv(g, f);
            }
            return ok;
        }

        if (*trunc) {
            auto rows = truncation_study(TruncationBase{}, trunc_tol);
            if (trunc_out.empty()) {
                write_truncation_csv(rows, trunc_tol, std::cout);
            } else {
                auto f = open_out(trunc_out);
                write_truncation_csv(rows, trunc_tol, f);
            }
            return ok;
        }

        if (*oracle) {
            ExperimentConfig c = load_config(oa);
            auto rows = oracle_series(c, run_experiment(c));
            if (oracle_out.empty()) {
                write_oracle_csv(rows, std::cout);
            } else {
                auto f = open_out(oracle_out);
                write_oracle_csv(rows, f);
            }
            return ok;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return bad_config;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io_failure;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io_failure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return runtime_failure;
    }
    return usage;
}
