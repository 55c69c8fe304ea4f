#include "cvahedge/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace cvahedge {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Entry {
    std::string value;
    int line;
};

double as_double(const Entry& e, const std::string& key) {
    double v = 0.0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end)
        throw ConfigError(e.line, key + ": expected a number, got '" + e.value + "'");
    return v;
}

std::uint64_t as_uint(const Entry& e, const std::string& key) {
    std::uint64_t v = 0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end)
        throw ConfigError(e.line, key + ": expected a non-negative integer, got '" + e.value + "'");
    return v;
}

bool as_bool(const Entry& e, const std::string& key) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ConfigError(e.line, key + ": expected true or false");
}

OptionKind as_kind(const Entry& e, const std::string& key) {
    if (e.value == "call") return OptionKind::call;
    if (e.value == "put") return OptionKind::put;
    throw ConfigError(e.line, key + ": expected call or put");
}

}  // namespace

std::vector<std::string> config_keys() {
    return {"preset",           "model",           "hedge.mode",           "cva.mode",
            "market.s0",        "market.t0",       "market.r",             "market.sigma",
            "market.mu",        "credit.hazard",   "credit.recovery",      "jump.mu",
            "jump.sigma",       "jump.xi",         "sim.paths",            "sim.steps_per_year",
            "sim.seed",         "sim.threads",     "option.kind",          "option.strike",
            "option.maturity",  "option.shares",   "hedge_option.kind",    "hedge_option.strike",
            "hedge_option.maturity", "hedge_option.shares", "report.two_desk",
            "report.histogram_bins", "report.event_log_paths", "pricing.tolerance",
            "explain.method"};
}

ExperimentConfig parse_config(std::istream& in) {
    std::map<std::string, Entry> kv;
    const auto known = config_keys();
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(line_no, "unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(line_no, key + ": missing value");
        if (kv.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
        kv[key] = {value, line_no};
    }
    auto get = [&](const std::string& k) -> const Entry* {
        auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto num = [&](const std::string& k, double& dst) {
        if (auto* e = get(k)) dst = as_double(*e, k);
    };
    auto line_of = [&](const std::string& k) { return get(k) ? get(k)->line : 0; };

    ExperimentConfig c = preset("base");
    if (auto* e = get("preset")) {
        try {
            c = preset(e->value);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(e->line, ex.what());
        }
    } else {
        c.name = "config";
    }

    bool merton = std::holds_alternative<MertonParams>(c.market);
    if (auto* e = get("model")) {
        if (e->value == "bs") merton = false;
        else if (e->value == "merton") merton = true;
        else throw ConfigError(e->line, "model: expected bs or merton");
    }
    double r = 0.1, sigma = 0.2;
    std::visit([&](const auto& p) { r = p.r; sigma = p.sigma; }, c.market);
    double mu = r;
    if (auto* g = std::get_if<GbmParams>(&c.market)) mu = g->mu;
    MertonParams mp{r, sigma, -0.125, 0.1, 0.1};
    if (auto* m = std::get_if<MertonParams>(&c.market)) mp = *m;

    const bool mu_given = get("market.mu") != nullptr;
    num("market.r", r);
    num("market.sigma", sigma);
    if (!mu_given) mu = r;
    num("market.mu", mu);
    for (const char* k : {"jump.mu", "jump.sigma", "jump.xi"})
        if (get(k) && !merton) throw ConfigError(line_of(k), "jump parameters require merton");
    if (mu_given && merton) throw ConfigError(line_of("market.mu"), "market.mu applies to the bs model only");
    num("jump.mu", mp.mu_j);
    num("jump.sigma", mp.sigma_j);
    num("jump.xi", mp.xi);
    if (!(sigma >= 0.0) || (merton && sigma == 0.0))
        throw ConfigError(line_of("market.sigma"), merton ? "market.sigma must be positive" : "market.sigma must be non-negative");
    if (mp.sigma_j < 0.0) throw ConfigError(line_of("jump.sigma"), "jump.sigma must be non-negative");
    if (mp.xi < 0.0) throw ConfigError(line_of("jump.xi"), "jump.xi must be non-negative");
    if (merton) {
        mp.r = r;
        mp.sigma = sigma;
        c.market = mp;
    } else {
        c.market = GbmParams{mu, r, sigma};
    }

    num("market.s0", c.s0);
    num("market.t0", c.t0);
    num("credit.hazard", c.credit.hazard);
    num("credit.recovery", c.credit.recovery);
    if (c.s0 <= 0.0) throw ConfigError(line_of("market.s0"), "market.s0 must be positive");
    if (c.credit.hazard < 0.0) throw ConfigError(line_of("credit.hazard"), "credit.hazard must be >= 0");
    if (c.credit.recovery < 0.0 || c.credit.recovery > 1.0)
        throw ConfigError(line_of("credit.recovery"), "credit.recovery must lie in [0,1]");

    if (auto* e = get("option.kind")) c.option.kind = as_kind(*e, "option.kind");
    num("option.strike", c.option.strike);
    num("option.maturity", c.option.maturity);
    num("option.shares", c.option.shares);
    if (c.option.strike <= 0.0) throw ConfigError(line_of("option.strike"), "option.strike must be positive");
    if (c.option.shares <= 0.0) throw ConfigError(line_of("option.shares"), "option.shares must be positive");
    if (c.option.maturity <= c.t0) throw ConfigError(line_of("option.maturity"), "option.maturity must exceed market.t0");

    if (auto* e = get("hedge.mode")) {
        try {
            c.hedge.mode = parse_hedge_mode(e->value);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(e->line, ex.what());
        }
    } else if (!get("preset")) {
        c.hedge.mode = merton ? HedgeMode::merton_delta : HedgeMode::bs_delta;
    }
    const bool any_hopt = get("hedge_option.kind") || get("hedge_option.strike") ||
                          get("hedge_option.maturity") || get("hedge_option.shares");
    if (is_jump_option_mode(c.hedge.mode) || any_hopt) {
        EuropeanOption h = c.hedge.hedge_option.value_or(
            EuropeanOption{OptionKind::put, 90.0, c.option.maturity, c.option.shares});
        if (auto* e = get("hedge_option.kind")) h.kind = as_kind(*e, "hedge_option.kind");
        num("hedge_option.strike", h.strike);
        num("hedge_option.maturity", h.maturity);
        num("hedge_option.shares", h.shares);
        if (any_hopt && !is_jump_option_mode(c.hedge.mode))
            throw ConfigError(line_of("hedge_option.strike") ? line_of("hedge_option.strike") : line_of("hedge_option.kind"),
                              "hedge_option keys require a merton_jump_option hedge mode");
        c.hedge.hedge_option = h;
    } else {
        c.hedge.hedge_option.reset();
    }

    if (auto* e = get("cva.mode")) {
        try {
            c.cva_mode = parse_cva_mode(e->value);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(e->line, ex.what());
        }
    }
    if (auto* e = get("sim.paths")) {
        c.paths = as_uint(*e, "sim.paths");
        if (c.paths < 1) throw ConfigError(e->line, "sim.paths must be >= 1");
    }
    if (auto* e = get("sim.steps_per_year")) {
        auto v = as_uint(*e, "sim.steps_per_year");
        if (v < 1 || v > 1000000) throw ConfigError(e->line, "sim.steps_per_year out of range");
        c.steps_per_year = static_cast<int>(v);
    }
    if (auto* e = get("sim.seed")) c.seed = as_uint(*e, "sim.seed");
    if (auto* e = get("sim.threads")) c.threads = static_cast<unsigned>(as_uint(*e, "sim.threads"));
    if (auto* e = get("report.two_desk")) c.two_desk = as_bool(*e, "report.two_desk");
    if (auto* e = get("report.histogram_bins")) {
        auto v = as_uint(*e, "report.histogram_bins");
        if (v < 1 || v > 100000) throw ConfigError(e->line, "report.histogram_bins out of range");
        c.histogram_bins = static_cast<int>(v);
    }
    if (auto* e = get("report.event_log_paths")) c.event_log_paths = as_uint(*e, "report.event_log_paths");
    num("pricing.tolerance", c.pricing_tolerance);
    if (!(c.pricing_tolerance > 0.0))
        throw ConfigError(line_of("pricing.tolerance"), "pricing.tolerance must be positive");
    if (auto* e = get("explain.method")) {
        try {
            c.explain = parse_explain_method(e->value);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(e->line, ex.what());
        }
    }

    try {
        validate(c);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(0, ex.what());
    }
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::ios_base::failure("cannot open config file '" + path + "'");
    return parse_config(f);
}

ExperimentConfig parse_config_string(const std::string& text) {
    std::istringstream ss(text);
    return parse_config(ss);
}

std::vector<std::pair<std::string, std::string>> config_pairs(const ExperimentConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    const bool merton = std::holds_alternative<MertonParams>(c.market);
    out.emplace_back("model", merton ? "merton" : "bs");
    out.emplace_back("hedge.mode", to_string(c.hedge.mode));
    out.emplace_back("cva.mode", to_string(c.cva_mode));
    out.emplace_back("market.s0", fmt(c.s0));
    out.emplace_back("market.t0", fmt(c.t0));
    if (merton) {
        const auto& m = std::get<MertonParams>(c.market);
        out.emplace_back("market.r", fmt(m.r));
        out.emplace_back("market.sigma", fmt(m.sigma));
        out.emplace_back("jump.mu", fmt(m.mu_j));
        out.emplace_back("jump.sigma", fmt(m.sigma_j));
        out.emplace_back("jump.xi", fmt(m.xi));
    } else {
        const auto& g = std::get<GbmParams>(c.market);
        out.emplace_back("market.r", fmt(g.r));
        out.emplace_back("market.sigma", fmt(g.sigma));
        out.emplace_back("market.mu", fmt(g.mu));
    }
    out.emplace_back("credit.hazard", fmt(c.credit.hazard));
    out.emplace_back("credit.recovery", fmt(c.credit.recovery));
    out.emplace_back("option.kind", c.option.kind == OptionKind::call ? "call" : "put");
    out.emplace_back("option.strike", fmt(c.option.strike));
    out.emplace_back("option.maturity", fmt(c.option.maturity));
    out.emplace_back("option.shares", fmt(c.option.shares));
    if (c.hedge.hedge_option) {
        const auto& h = *c.hedge.hedge_option;
        out.emplace_back("hedge_option.kind", h.kind == OptionKind::call ? "call" : "put");
        out.emplace_back("hedge_option.strike", fmt(h.strike));
        out.emplace_back("hedge_option.maturity", fmt(h.maturity));
        out.emplace_back("hedge_option.shares", fmt(h.shares));
    }
    out.emplace_back("sim.paths", std::to_string(c.paths));
    out.emplace_back("sim.steps_per_year", std::to_string(c.steps_per_year));
    out.emplace_back("sim.seed", std::to_string(c.seed));
    out.emplace_back("sim.threads", std::to_string(c.threads));
    out.emplace_back("report.two_desk", c.two_desk ? "true" : "false");
    out.emplace_back("report.histogram_bins", std::to_string(c.histogram_bins));
    out.emplace_back("report.event_log_paths", std::to_string(c.event_log_paths));
    out.emplace_back("pricing.tolerance", fmt(c.pricing_tolerance));
    out.emplace_back("explain.method", to_string(c.explain));
    return out;
}

std::string config_text(const ExperimentConfig& c) {
    std::string s;
    for (const auto& [k, v] : config_pairs(c)) s += k + " = " + v + "\n";
    return s;
}

}  // namespace cvahedge
