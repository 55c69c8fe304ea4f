#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "cvahedge/analytic_pricing.hpp"
#include "cvahedge/credit.hpp"
#include "cvahedge/market_models.hpp"

namespace cvahedge {

enum class HedgeMode {
    bs_delta,
    bs_delta_cva,
    merton_delta,
    merton_delta_cva,
    merton_jump_option,
    merton_jump_option_cva,
    bs_delta_on_merton_market,
};

const char* to_string(HedgeMode m);
HedgeMode parse_hedge_mode(const std::string& s);

bool is_cva_mode(HedgeMode m);
bool is_jump_option_mode(HedgeMode m);
bool needs_merton_market(HedgeMode m);
HedgeMode risk_free_mode(HedgeMode m);
// Throws for bs_delta_on_merton_market, which has no CVA-hedged variant.
HedgeMode cva_mode_of(HedgeMode m);

struct HedgeSpec {
    HedgeMode mode = HedgeMode::bs_delta;
    std::optional<EuropeanOption> hedge_option;
};

void validate(const HedgeSpec& spec, const EuropeanOption& trade, const ModelParams& market);

struct HedgePositions {
    double phi1 = 0.0;                // stock units
    std::optional<double> phi2;       // hedge option contracts
};

// Contract-level value and sensitivities of one instrument (per-share figures times shares).
struct InstrumentSens {
    double value = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    double d_xi = 0.0;
};

struct JumpVegaDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kJumpVegaThreshold = 1e-12;

HedgePositions bs_delta_hedge(const InstrumentSens& v1);
HedgePositions cva_adjusted_delta(const InstrumentSens& v1, const CreditCurve& c, double t,
                                  double tK);
// v1 sensitivities already scaled to the (risky) book value. Throws JumpVegaDegenerate
// when |dH/dxi| per share falls below kJumpVegaThreshold * S.
HedgePositions merton_jump_option_hedge(const InstrumentSens& v1, const InstrumentSens& h2,
                                        double h2_shares, double S);

// Prices instruments in the market model and reports sensitivities in the
// hedging model. For bs_delta_on_merton_market values are Merton prices while
// delta and gamma are Black-Scholes at the implied vol of that price.
class ValuationModel {
public:
    ValuationModel(const ModelParams& market, HedgeMode mode,
                   double tolerance = kDefaultMertonTolerance);

    InstrumentSens evaluate(const EuropeanOption& o, double S, double t, bool need_xi) const;
    double value(const EuropeanOption& o, double S, double t) const;  // contract value
    const ModelParams& market() const { return market_; }
    HedgeMode mode() const { return mode_; }
    double rate() const;

private:
    ModelParams market_;
    HedgeMode mode_;
    double tol_;
};

struct HedgeOutcome {
    HedgePositions positions;
    bool degenerate = false;
};

// Dispatch over modes. risky_factor is 1 - (1-R) PD(t, tK) for CVA modes and is
// ignored otherwise.
HedgeOutcome hedge_positions(HedgeMode mode, const InstrumentSens& v1,
                             const InstrumentSens* h2, double h2_shares, double S,
                             double risky_factor);

}  // namespace cvahedge
