#include <stdexcept>

#include "cvahedge/sim_engine.hpp"

namespace cvahedge {

namespace {

MertonParams base_merton() { return {0.1, 0.2, -0.125, 0.1, 0.1}; }

ExperimentConfig base_bs() {
    ExperimentConfig c;
    c.market = GbmParams{0.1, 0.1, 0.2};
    c.hedge.mode = HedgeMode::bs_delta;
    c.credit = {0.2, 0.5};
    c.option = {OptionKind::call, 95.0, 1.0, 100.0};
    c.paths = 100000;
    c.steps_per_year = 200;
    c.seed = 42;
    return c;
}

ExperimentConfig merton(HedgeMode mode, CvaMode cva) {
    ExperimentConfig c = base_bs();
    c.market = base_merton();
    c.hedge.mode = mode;
    c.cva_mode = cva;
    if (is_jump_option_mode(mode))
        c.hedge.hedge_option = EuropeanOption{OptionKind::put, 90.0, 1.0, 100.0};
    return c;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"base", "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7",
            "fig8", "fig9", "fig10", "fig11"};
}

ExperimentConfig preset(const std::string& full) {
    std::string name = full;
    bool stressed = false;
    const std::string suffix = "-stressed";
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
        stressed = true;
        name.resize(name.size() - suffix.size());
    }
    ExperimentConfig c;
    if (name == "base" || name == "fig1" || name == "fig5" || name == "fig6") {
        c = base_bs();
    } else if (name == "fig2") {
        c = base_bs();
        c.cva_mode = CvaMode::cash_at_inception;
    } else if (name == "fig3" || name == "fig4") {
        c = base_bs();
        c.cva_mode = CvaMode::priced_not_hedged;
    } else if (name == "fig7") {
        c = base_bs();
        c.cva_mode = CvaMode::priced_and_hedged;
    } else if (name == "fig8") {
        c = merton(HedgeMode::bs_delta_on_merton_market, CvaMode::priced_not_hedged);
    } else if (name == "fig9") {
        c = merton(HedgeMode::merton_delta, CvaMode::priced_and_hedged);
    } else if (name == "fig10") {
        c = merton(HedgeMode::merton_jump_option, CvaMode::priced_not_hedged);
    } else if (name == "fig11") {
        c = merton(HedgeMode::merton_jump_option, CvaMode::priced_and_hedged);
    } else {
        throw std::invalid_argument("unknown preset '" + full + "'");
    }
    if (stressed) {
        if (auto* g = std::get_if<GbmParams>(&c.market)) {
            g->sigma = 0.35;
        } else {
            auto& m = std::get<MertonParams>(c.market);
            m.sigma_j = 0.2;
            m.mu_j = -0.4;
            m.xi = 0.2;
        }
    }
    c.name = full;
    return c;
}

}  // namespace cvahedge
