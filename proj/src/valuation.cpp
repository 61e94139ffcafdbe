#include "demrisk/valuation.hpp"

#include "epv.hpp"

#include <cmath>

namespace demrisk {

namespace {

void check_time(const PolicySpec& spec, int t) {
    if (t < 0 || t > spec.duration)
        throw ContractError("valuation time " + std::to_string(t) + " outside [0, n]");
}

} // namespace

double best_estimate_rate(const PolicySpec& spec, const PremiumSchedule& premiums, int t,
                          const YieldCurve& curve, const LifeTable& table) {
    check_time(spec, t);
    if (curve.max_maturity() < spec.duration - t)
        throw CurveError("curve too short: needs maturity " + std::to_string(spec.duration - t) +
                         ", has " + std::to_string(curve.max_maturity()));
    return detail::prospective_value(spec, premiums, table, t,
                                     [&curve](int k) { return curve.discount(k); });
}

double best_estimate_rate(const PolicySpec& spec, int t, const ValuationBasis& basis) {
    if (!basis.mortality)
        throw ContractError("valuation basis has no mortality table");
    return best_estimate_rate(spec, price(spec), t, basis.curve, *basis.mortality);
}

double epv_rate(const PolicySpec& spec, const PremiumSchedule& premiums, int t,
                const LifeTable& table) {
    check_time(spec, t);
    const double v = 1.0 / (1.0 + spec.technical_rate);
    return detail::prospective_value(spec, premiums, table, t,
                                     [v](int k) { return std::pow(v, k); });
}

double epv_rate(const PolicySpec& spec, int t, const LifeTable& table) {
    return epv_rate(spec, price(spec), t, table);
}

double recursion_residual_theorem2(const PolicySpec& spec, int t, const ValuationBasis& basis) {
    if (t < 0 || t >= spec.duration)
        throw ContractError("recursion needs 0 <= t < n");
    const PremiumSchedule premiums = price(spec);
    const LifeTable& table = *basis.mortality;
    const double be_t = best_estimate_rate(spec, premiums, t, basis.curve, table);
    const YieldCurve next = basis.curve.max_maturity() >= 2 ? forward_implied_curve(basis.curve)
                                                             : basis.curve;
    const double be_next = best_estimate_rate(spec, premiums, t + 1, next, table);
    const double q = table.qx(spec.age_at(t));
    return (be_t + premiums.net_at(t)) * (1.0 + basis.curve.spot(1)) -
           death_benefit(spec.kind) * q - be_next * (1.0 - q);
}

double epv_recursion_residual(const PolicySpec& spec, int t, const LifeTable& table) {
    if (t < 0 || t >= spec.duration)
        throw ContractError("recursion needs 0 <= t < n");
    const PremiumSchedule premiums = price(spec);
    const double q = table.qx(spec.age_at(t));
    return (premiums.net_at(t) + epv_rate(spec, premiums, t, table)) * (1.0 + spec.technical_rate) -
           epv_rate(spec, premiums, t + 1, table) * (1.0 - q) - death_benefit(spec.kind) * q;
}

double safety_loading(int t, const LifeTable& first_order, const LifeTable& second_order, int x) {
    const double q = second_order.qx(x + t);
    if (q == 0.0)
        throw LifeTableError("safety loading undefined for q = 0");
    return (first_order.qx(x + t) - q) / q;
}

} // namespace demrisk
