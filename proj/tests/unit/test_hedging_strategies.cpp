#include <gtest/gtest.h>

#include <cmath>

#include "cvahedge/analytic_pricing.hpp"
#include "cvahedge/credit.hpp"
#include "cvahedge/hedging_strategies.hpp"

using namespace cvahedge;

namespace {

const EuropeanOption kCall{OptionKind::call, 95.0, 1.0, 1.0};
const EuropeanOption kPut90{OptionKind::put, 90.0, 1.0, 1.0};
const MertonParams kJumps{0.1, 0.2, -0.125, 0.1, 0.1};

InstrumentSens sens_of(const ValuationModel& m, const EuropeanOption& o, double S) {
    return m.evaluate(o, S, 0.0, true);
}

}  // namespace

TEST(BsDelta, Base) {
    ValuationModel m(GbmParams{}, HedgeMode::bs_delta);
    auto v = sens_of(m, kCall, 100.0);
    auto h = bs_delta_hedge(v);
    EXPECT_NEAR(h.phi1, -bs_delta(kCall, 100.0, 0.1, 0.2, 0.0), 1e-15);
    EXPECT_NEAR(h.phi1, -0.804, 5e-4);
    EXPECT_FALSE(h.phi2.has_value());
    EXPECT_NEAR(bs_delta_hedge(sens_of(m, EuropeanOption{OptionKind::call, 500.0, 1.0, 1.0}, 50.0)).phi1,
                0.0, 1e-12);
    EXPECT_NEAR(bs_delta_hedge(sens_of(m, EuropeanOption{OptionKind::call, 5.0, 1.0, 1.0}, 100.0)).phi1,
                -1.0, 1e-12);
}

TEST(CvaDelta, ScalesBySurvivalAdjustedFactor) {
    ValuationModel m(GbmParams{}, HedgeMode::bs_delta);
    auto v = sens_of(m, kCall, 100.0);
    auto base = bs_delta_hedge(v).phi1;
    EXPECT_EQ(cva_adjusted_delta(v, CreditCurve{0.0, 0.5}, 0.0, 1.0).phi1, base);
    EXPECT_EQ(cva_adjusted_delta(v, CreditCurve{0.2, 1.0}, 0.0, 1.0).phi1, base);
    EXPECT_NEAR(cva_adjusted_delta(v, CreditCurve{0.2, 0.5}, 0.0, 1.0).phi1 / base,
                1.0 - 0.5 * (1.0 - std::exp(-0.2)), 1e-14);
}

TEST(JumpOptionHedge, PerfectOffset) {
    ValuationModel m(kJumps, HedgeMode::merton_jump_option);
    auto v = sens_of(m, kCall, 100.0);
    auto h = merton_jump_option_hedge(v, v, 1.0, 100.0);
    ASSERT_TRUE(h.phi2.has_value());
    EXPECT_NEAR(*h.phi2, -1.0, 1e-14);
    EXPECT_NEAR(h.phi1, 0.0, 1e-14);
}

TEST(JumpOptionHedge, PortfolioNeutrality) {
    ValuationModel m(kJumps, HedgeMode::merton_jump_option);
    auto v = sens_of(m, kCall, 100.0);
    auto h2 = sens_of(m, kPut90, 100.0);
    auto h = merton_jump_option_hedge(v, h2, 1.0, 100.0);
    ASSERT_TRUE(h.phi2.has_value());
    EXPECT_LT(std::abs(v.d_xi + *h.phi2 * h2.d_xi), 1e-10);

    auto book = [&](double S) {
        return merton_price(kCall, S, kJumps, 0.0, 1e-15).value + h.phi1 * S +
               *h.phi2 * merton_price(kPut90, S, kJumps, 0.0, 1e-15).value;
    };
    double bump = 1e-4 * 100.0;
    double dS = (book(100.0 + bump) - book(100.0 - bump)) / (2 * bump);
    EXPECT_LT(std::abs(dS) / std::abs(v.delta), 1e-6);
}

TEST(JumpOptionHedge, DegenerateHedgeOptionThrows) {
    InstrumentSens v{10.0, 0.5, 0.01, 1.0};
    InstrumentSens flat{1.0, -0.1, 0.0, 0.0};
    EXPECT_THROW(merton_jump_option_hedge(v, flat, 1.0, 100.0), JumpVegaDegenerate);
    auto out = hedge_positions(HedgeMode::merton_jump_option, v, &flat, 1.0, 100.0, 1.0);
    EXPECT_TRUE(out.degenerate);
    EXPECT_NEAR(out.positions.phi1, -0.5, 1e-15);
}

TEST(Dispatch, ModesMatchPrimitives) {
    ValuationModel bs(GbmParams{}, HedgeMode::bs_delta);
    auto v = sens_of(bs, kCall, 100.0);
    EXPECT_EQ(hedge_positions(HedgeMode::bs_delta, v, nullptr, 0.0, 100.0, 0.9).positions.phi1,
              bs_delta_hedge(v).phi1);

    MertonParams nojumps = kJumps;
    nojumps.xi = 0.0;
    ValuationModel mz(nojumps, HedgeMode::merton_delta);
    EXPECT_NEAR(sens_of(mz, kCall, 100.0).delta, bs_delta(kCall, 100.0, 0.1, 0.2, 0.0), 1e-12);

    ValuationModel naive(kJumps, HedgeMode::bs_delta_on_merton_market);
    ValuationModel aligned(kJumps, HedgeMode::merton_delta);
    auto a = sens_of(naive, kCall, 100.0), b = sens_of(aligned, kCall, 100.0);
    EXPECT_NEAR(a.value, b.value, 1e-12);
    double iv = bs_implied_vol(b.value, kCall, 100.0, 0.1, 0.0);
    EXPECT_NEAR(a.delta, bs_delta(kCall, 100.0, 0.1, iv, 0.0), 1e-10);
    EXPECT_NE(a.delta, b.delta);
}

TEST(Modes, NamesRoundTrip) {
    for (auto m : {HedgeMode::bs_delta, HedgeMode::bs_delta_cva, HedgeMode::merton_delta,
                   HedgeMode::merton_delta_cva, HedgeMode::merton_jump_option,
                   HedgeMode::merton_jump_option_cva, HedgeMode::bs_delta_on_merton_market})
        EXPECT_EQ(parse_hedge_mode(to_string(m)), m);
    EXPECT_THROW(parse_hedge_mode("gamma"), std::invalid_argument);
    EXPECT_EQ(cva_mode_of(HedgeMode::merton_delta), HedgeMode::merton_delta_cva);
    EXPECT_THROW(cva_mode_of(HedgeMode::bs_delta_on_merton_market), std::invalid_argument);
}

TEST(Validation, JumpModesNeedMertonAndHedgeOption) {
    HedgeSpec s{HedgeMode::merton_delta, std::nullopt};
    EXPECT_THROW(validate(s, kCall, ModelParams{GbmParams{}}), std::invalid_argument);
    HedgeSpec j{HedgeMode::merton_jump_option, std::nullopt};
    EXPECT_THROW(validate(j, kCall, ModelParams{kJumps}), std::invalid_argument);
    j.hedge_option = kPut90;
    EXPECT_NO_THROW(validate(j, kCall, ModelParams{kJumps}));
}
