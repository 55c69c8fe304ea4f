#include "cvahedge/hedging_strategies.hpp"

#include <cmath>
#include <stdexcept>

namespace cvahedge {

const char* to_string(HedgeMode m) {
    switch (m) {
        case HedgeMode::bs_delta: return "bs_delta";
        case HedgeMode::bs_delta_cva: return "bs_delta_cva";
        case HedgeMode::merton_delta: return "merton_delta";
        case HedgeMode::merton_delta_cva: return "merton_delta_cva";
        case HedgeMode::merton_jump_option: return "merton_jump_option";
        case HedgeMode::merton_jump_option_cva: return "merton_jump_option_cva";
        case HedgeMode::bs_delta_on_merton_market: return "bs_delta_on_merton_market";
    }
    return "?";
}

HedgeMode parse_hedge_mode(const std::string& s) {
    for (auto m : {HedgeMode::bs_delta, HedgeMode::bs_delta_cva, HedgeMode::merton_delta,
                   HedgeMode::merton_delta_cva, HedgeMode::merton_jump_option,
                   HedgeMode::merton_jump_option_cva, HedgeMode::bs_delta_on_merton_market})
        if (s == to_string(m)) return m;
    throw std::invalid_argument("unknown hedge mode '" + s + "'");
}

bool is_cva_mode(HedgeMode m) {
    return m == HedgeMode::bs_delta_cva || m == HedgeMode::merton_delta_cva ||
           m == HedgeMode::merton_jump_option_cva;
}

bool is_jump_option_mode(HedgeMode m) {
    return m == HedgeMode::merton_jump_option || m == HedgeMode::merton_jump_option_cva;
}

bool needs_merton_market(HedgeMode m) {
    return m != HedgeMode::bs_delta && m != HedgeMode::bs_delta_cva;
}

HedgeMode risk_free_mode(HedgeMode m) {
    switch (m) {
        case HedgeMode::bs_delta_cva: return HedgeMode::bs_delta;
        case HedgeMode::merton_delta_cva: return HedgeMode::merton_delta;
        case HedgeMode::merton_jump_option_cva: return HedgeMode::merton_jump_option;
        default: return m;
    }
}

HedgeMode cva_mode_of(HedgeMode m) {
    switch (risk_free_mode(m)) {
        case HedgeMode::bs_delta: return HedgeMode::bs_delta_cva;
        case HedgeMode::merton_delta: return HedgeMode::merton_delta_cva;
        case HedgeMode::merton_jump_option: return HedgeMode::merton_jump_option_cva;
        default:
            throw std::invalid_argument("bs_delta_on_merton_market has no CVA-hedged variant");
    }
}

void validate(const HedgeSpec& spec, const EuropeanOption& trade, const ModelParams& market) {
    const bool merton = std::holds_alternative<MertonParams>(market);
    if (needs_merton_market(spec.mode) && !merton)
        throw std::invalid_argument(std::string("hedge mode ") + to_string(spec.mode) +
                                    " requires a merton market");
    if (!needs_merton_market(spec.mode) && merton)
        throw std::invalid_argument(std::string("hedge mode ") + to_string(spec.mode) +
                                    " requires a bs market");
    if (is_jump_option_mode(spec.mode)) {
        if (!spec.hedge_option)
            throw std::invalid_argument("jump-option hedge requires a hedge option");
        const auto& h = *spec.hedge_option;
        validate(h);
        if (h.kind == trade.kind && h.strike == trade.strike && h.maturity == trade.maturity)
            throw std::invalid_argument("hedge option must differ from the traded option");
        if (h.maturity < trade.maturity)
            throw std::invalid_argument("hedge option must not expire before the trade");
    }
}

HedgePositions bs_delta_hedge(const InstrumentSens& v1) { return {-v1.delta, std::nullopt}; }

HedgePositions cva_adjusted_delta(const InstrumentSens& v1, const CreditCurve& c, double t,
                                  double tK) {
    return {-v1.delta * risky_factor(c, t, tK), std::nullopt};
}

HedgePositions merton_jump_option_hedge(const InstrumentSens& v1, const InstrumentSens& h2,
                                        double h2_shares, double S) {
    if (std::abs(h2.d_xi) / h2_shares < kJumpVegaThreshold * S)
        throw JumpVegaDegenerate("jump-vega degenerate");
    const double phi2 = -v1.d_xi / h2.d_xi;
    return {-v1.delta - phi2 * h2.delta, phi2};
}

ValuationModel::ValuationModel(const ModelParams& market, HedgeMode mode, double tolerance)
    : market_(market), mode_(mode), tol_(tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("valuation: tolerance must be positive");
}

double ValuationModel::rate() const {
    return std::visit([](const auto& p) { return p.r; }, market_);
}

double ValuationModel::value(const EuropeanOption& o, double S, double t) const {
    if (const auto* g = std::get_if<GbmParams>(&market_))
        return o.shares * bs_price(o, S, g->r, g->sigma, t);
    const auto& m = std::get<MertonParams>(market_);
    return o.shares * merton_greeks(o, S, m, t, tol_, mq_price).price;
}

InstrumentSens ValuationModel::evaluate(const EuropeanOption& o, double S, double t,
                                        bool need_xi) const {
    InstrumentSens s;
    if (const auto* g = std::get_if<GbmParams>(&market_)) {
        BsGreeks b = bs_greeks(o, S, g->r, g->sigma, t);
        s = {b.price, b.delta, b.gamma, 0.0};
    } else {
        const auto& m = std::get<MertonParams>(market_);
        if (mode_ == HedgeMode::bs_delta_on_merton_market) {
            double price = merton_greeks(o, S, m, t, tol_, mq_price).price;
            // prices at the no-arbitrage floor have no useful implied vol; use the bracket floor
            double iv = try_bs_implied_vol(price, o, S, m.r, t).value_or(kIvLow);
            BsGreeks b = bs_greeks(o, S, m.r, iv, t);
            s = {price, b.delta, b.gamma, 0.0};
        } else {
            unsigned q = mq_price | mq_delta | mq_gamma | (need_xi ? mq_xi : 0u);
            MertonGreeks mg = merton_greeks(o, S, m, t, tol_, q);
            s = {mg.price, mg.delta, mg.gamma, mg.jump.d_xi};
        }
    }
    s.value *= o.shares;
    s.delta *= o.shares;
    s.gamma *= o.shares;
    s.d_xi *= o.shares;
    return s;
}

HedgeOutcome hedge_positions(HedgeMode mode, const InstrumentSens& v1, const InstrumentSens* h2,
                             double h2_shares, double S, double risky_factor) {
    const double f = is_cva_mode(mode) ? risky_factor : 1.0;
    InstrumentSens book = v1;
    book.value *= f;
    book.delta *= f;
    book.gamma *= f;
    book.d_xi *= f;
    HedgeOutcome out;
    if (!is_jump_option_mode(mode)) {
        out.positions = bs_delta_hedge(book);
        return out;
    }
    if (!h2) throw std::invalid_argument("jump-option hedge requires hedge option sensitivities");
    try {
        out.positions = merton_jump_option_hedge(book, *h2, h2_shares, S);
    } catch (const JumpVegaDegenerate&) {
        out.positions = {-book.delta, 0.0};
        out.degenerate = true;
    }
    return out;
}

}  // namespace cvahedge
