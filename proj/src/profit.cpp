#include "demrisk/profit.hpp"

#include "demrisk/valuation.hpp"

#include <cmath>

namespace demrisk {

void PortfolioState::validate() const {
    if (w < 0.0 || l < 0)
        throw ContractError("portfolio state must be non-negative");
    if ((w == 0.0) != (l == 0))
        throw ContractError("portfolio state: w = 0 exactly when l = 0");
}

YearBases make_year_bases(const PolicySpec& spec, const PremiumSchedule& premiums, int t,
                          const YieldCurve& curve_t, const LifeTable& second_order) {
    if (t < 0 || t >= spec.duration)
        throw ContractError("profit year needs 0 <= t < n");
    YearBases y;
    y.t = t;
    y.kind = spec.kind;
    y.technical_rate = spec.technical_rate;
    y.one_year_spot = curve_t.spot(1);
    y.loadings = spec.loadings;
    y.gross_premium = premiums.gross_at(t);
    y.net_premium = premiums.net_at(t);
    y.reserve = local_reserve_rate(spec, premiums, t);
    y.reserve_next = local_reserve_rate(spec, premiums, t + 1);
    y.epv_next = epv_rate(spec, premiums, t + 1, second_order);
    if (t == 0) {
        y.opening_be = y.reserve;
        y.opening_epv = y.reserve;
    } else {
        y.opening_be = best_estimate_rate(spec, premiums, t, curve_t, second_order);
        y.opening_epv = epv_rate(spec, premiums, t, second_order);
    }
    if (t + 1 < spec.duration) {
        y.expected_be_next =
            best_estimate_rate(spec, premiums, t + 1, forward_implied_curve(curve_t), second_order);
    } else {
        y.expected_be_next = maturity_benefit(spec.kind);
    }
    y.sum_at_risk = death_benefit(spec.kind) - y.reserve_next;
    y.q_first = spec.first_order_table->qx(spec.age_at(t));
    y.q_second = second_order.qx(spec.age_at(t));
    y.surrender_coef = surrender_coefficient(spec, t);
    return y;
}

double technical_profit_mcv(const PortfolioState& state, const PathOutcome& outcome,
                            const YearBases& bases, const ExpenseAssumptions& expenses) {
    const double w = state.w;
    const double in_force = w - outcome.s;
    const double be = bases.opening_be;
    const Loadings& l = bases.loadings;

    const double premiums = bases.gross_premium * in_force;
    const double expenses_paid =
        (l.acquisition - expenses.d_alpha + l.collection - expenses.d_beta) * bases.gross_premium *
            in_force +
        (l.management - expenses.d_gamma) * w;
    const double surrender_paid = bases.surrender_coef * be * outcome.s;

    return (be * w + premiums - expenses_paid - surrender_paid) * (1.0 + outcome.asset_return) -
           (outcome.x + outcome.be_next * outcome.w_next);
}

double demographic_profit(const PortfolioState& state, const PathOutcome& outcome,
                          const YearBases& bases) {
    const double in_force = state.w - outcome.s;
    return (bases.opening_be + bases.net_premium) * in_force * (1.0 + bases.technical_rate) -
           (outcome.x + outcome.w_next * outcome.be_next);
}

double local_gaap_profit(const PortfolioState& state, const PathOutcome& outcome,
                         const YearBases& bases) {
    return bases.sum_at_risk * (bases.q_first * (state.w - outcome.s) - outcome.z);
}

double local_gaap_profit_direct(const PortfolioState& state, const PathOutcome& outcome,
                                const YearBases& bases) {
    const double in_force = state.w - outcome.s;
    return (bases.reserve + bases.net_premium) * in_force * (1.0 + bases.technical_rate) -
           (outcome.x + outcome.w_next * bases.reserve_next);
}

double demographic_profit_via_sum_at_risk(const PortfolioState& state, const PathOutcome& outcome,
                                          const YearBases& bases) {
    const double in_force = state.w - outcome.s;
    return local_gaap_profit(state, outcome, bases) +
           (bases.opening_be - bases.reserve) * in_force * (1.0 + bases.technical_rate) -
           outcome.w_next * (outcome.be_next - bases.reserve_next);
}

DemographicSplit demographic_split(const PortfolioState& state, const PathOutcome& outcome,
                                   const YearBases& bases) {
    const double in_force = state.w - outcome.s;
    const double acc = 1.0 + bases.technical_rate;
    const double rf_open = bases.opening_be - bases.opening_epv;
    const double rf_close = outcome.be_next - bases.epv_next;
    const double q_open = bases.opening_epv - bases.reserve;
    const double q_close = bases.epv_next - bases.reserve_next;

    DemographicSplit split;
    split.local_gaap = local_gaap_profit(state, outcome, bases);
    split.rf_gap = in_force * (rf_open * acc - rf_close) + rf_close * outcome.z;
    split.q_gap = in_force * (q_open * acc - q_close) + q_close * outcome.z;
    return split;
}

ProfitDecomposition homans_components(const PortfolioState& state, const PathOutcome& outcome,
                                      const YearBases& bases, const ExpenseAssumptions& expenses) {
    const double w = state.w;
    const double s = outcome.s;
    const double in_force = w - s;
    const double be = bases.opening_be;
    const double acc = 1.0 + bases.technical_rate;
    const double excess_return = outcome.asset_return - bases.technical_rate;
    const Loadings& l = bases.loadings;
    const double b = bases.gross_premium;
    const double g = bases.surrender_coef;

    const double expense_margin =
        (expenses.d_alpha + expenses.d_beta) * b * in_force + expenses.d_gamma * w;

    ProfitDecomposition d;
    d.demographic = demographic_profit(state, outcome, bases);
    d.financial = excess_return * (be * w + b * (1.0 - l.acquisition - l.collection) * in_force -
                                   l.management * w - g * be * s);
    d.lapse = (be - l.management - g * be) * acc * s;
    d.expense = acc * expense_margin;
    d.residual = excess_return * expense_margin;
    d.total = technical_profit_mcv(state, outcome, bases, expenses);
    return d;
}

double expected_demographic_profit(const PortfolioState& state, const YearBases& bases,
                                   double surrendered) {
    const double in_force = state.w - surrendered;
    const double q = bases.q_second;
    const double expected_claims = bases.death_benefit() * q * in_force;
    const double expected_w_next = (1.0 - q) * in_force;
    return (bases.opening_be + bases.net_premium) * in_force * (1.0 + bases.technical_rate) -
           expected_claims - expected_w_next * bases.expected_be_next;
}

DemographicSplit expected_demographic_split(const PortfolioState& state, const YearBases& bases,
                                            double surrendered) {
    const double in_force = state.w - surrendered;
    const double acc = 1.0 + bases.technical_rate;
    const double expected_z = bases.q_second * in_force;
    const double rf_close = bases.expected_be_next - bases.epv_next;
    const double q_close = bases.epv_next - bases.reserve_next;

    DemographicSplit split;
    split.local_gaap = bases.sum_at_risk * (bases.q_first * in_force - expected_z);
    split.rf_gap = in_force * ((bases.opening_be - bases.opening_epv) * acc - rf_close) +
                   rf_close * expected_z;
    split.q_gap = in_force * ((bases.opening_epv - bases.reserve) * acc - q_close) +
                  q_close * expected_z;
    return split;
}

} // namespace demrisk
