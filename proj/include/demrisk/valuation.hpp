#ifndef DEMRISK_VALUATION_HPP
#define DEMRISK_VALUATION_HPP

#include "demrisk/contract.hpp"
#include "demrisk/curve.hpp"
#include "demrisk/lifetable.hpp"

#include <memory>

namespace demrisk {

// Realistic (second-order) mortality plus the risk-free curve observed at the valuation date.
struct ValuationBasis {
    YieldCurve curve;
    std::shared_ptr<const LifeTable> mortality;

    static ValuationBasis flat(double rate, int max_maturity, std::shared_ptr<const LifeTable> table) {
        return {YieldCurve::flat(rate, max_maturity), std::move(table)};
    }
};

// Best estimate rate at t (before the premium due at t): benefits less net premiums, discounted on
// basis.curve read as the curve in force at t. At t = n it is the maturity benefit.
double best_estimate_rate(const PolicySpec& spec, int t, const ValuationBasis& basis);
double best_estimate_rate(const PolicySpec& spec, const PremiumSchedule& premiums, int t,
                          const YieldCurve& curve, const LifeTable& table);

// Same cash flows as the best estimate, discounted at the technical rate.
double epv_rate(const PolicySpec& spec, int t, const LifeTable& table);
double epv_rate(const PolicySpec& spec, const PremiumSchedule& premiums, int t,
                const LifeTable& table);

// (be_t + pi_t)(1 + i_t(0,1)) - c_death q_{x+t} - be_{t+1} p_{x+t}, with be_{t+1} valued on the
// forward-implied curve and the same table.
double recursion_residual_theorem2(const PolicySpec& spec, int t, const ValuationBasis& basis);

// (pi_t + epv_t)(1 + j*) - c_death q_{x+t} - epv_{t+1} p_{x+t}.
double epv_recursion_residual(const PolicySpec& spec, int t, const LifeTable& table);

// (q*_{x+t} - q_{x+t}) / q_{x+t}
double safety_loading(int t, const LifeTable& first_order, const LifeTable& second_order, int x);

} // namespace demrisk

#endif
