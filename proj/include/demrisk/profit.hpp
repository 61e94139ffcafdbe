#ifndef DEMRISK_PROFIT_HPP
#define DEMRISK_PROFIT_HPP

#include "demrisk/contract.hpp"
#include "demrisk/curve.hpp"
#include "demrisk/lifetable.hpp"

namespace demrisk {

// Sums insured and lives in force at time t.
struct PortfolioState {
    int t = 0;
    double w = 0.0;
    long l = 0;

    void validate() const;
};

// Realisation of year (t, t+1]. All amounts in currency.
struct PathOutcome {
    double z = 0.0;      // sums insured eliminated by death
    double x = 0.0;      // claims paid
    double s = 0.0;      // sums insured surrendered
    double w_next = 0.0; // sums insured in force at t+1
    double be_next = 0.0;      // best estimate rate at t+1 on the year-end curve
    double asset_return = 0.0; // realised return j~ on invested assets
};

// Per-unit-sum rates used by the profit formulas for the year (t, t+1].
// At t = 0 the opening liability is the locked reserve v_0, since the business is written then.
struct YearBases {
    int t = 0;
    BenefitKind kind = BenefitKind::endowment;
    double technical_rate = 0.0;  // j*
    double one_year_spot = 0.0;   // i_t(0,1)
    Loadings loadings;
    double gross_premium = 0.0;   // b due at t
    double net_premium = 0.0;     // pi_t = b (1 - alpha* - beta*) - gamma*
    double opening_be = 0.0;      // be_t
    double opening_epv = 0.0;     // epv_t
    double reserve = 0.0;         // v^b_t
    double reserve_next = 0.0;    // v^b_{t+1}
    double epv_next = 0.0;        // epv_{t+1}
    double expected_be_next = 0.0; // be_{t+1} on the forward-implied curve
    double sum_at_risk = 0.0;     // D^b_{t+1}
    double q_first = 0.0;         // q*_{x+t}
    double q_second = 0.0;        // q_{x+t}
    double surrender_coef = 0.0;  // g*_t

    double death_benefit() const { return demrisk::death_benefit(kind); }
};

// `curve_t` is the curve in force at t; it must cover maturities n - t.
YearBases make_year_bases(const PolicySpec& spec, const PremiumSchedule& premiums, int t,
                          const YieldCurve& curve_t, const LifeTable& second_order);

// First-order minus realistic expense rates.
struct ExpenseAssumptions {
    double d_alpha = 0.0;
    double d_beta = 0.0;
    double d_gamma = 0.0;
};

struct ProfitDecomposition {
    double demographic = 0.0; // y1
    double financial = 0.0;   // y2
    double lapse = 0.0;       // y3
    double expense = 0.0;     // y4
    double residual = 0.0;    // y5
    double total = 0.0;       // technical profit Y^MCV

    double component_sum() const { return demographic + financial + lapse + expense + residual; }
};

struct DemographicSplit {
    double local_gaap = 0.0; // y1^LG
    double rf_gap = 0.0;     // y1^{MCV Rf-j*}
    double q_gap = 0.0;      // y1^{MCV q-q*}

    double sum() const { return local_gaap + rf_gap + q_gap; }
};

// [BE_t + B - E - S](1 + j~) - [X + BE_{t+1}] with realised expenses and surrender payments.
double technical_profit_mcv(const PortfolioState& state, const PathOutcome& outcome,
                            const YearBases& bases, const ExpenseAssumptions& expenses = {});

ProfitDecomposition homans_components(const PortfolioState& state, const PathOutcome& outcome,
                                      const YearBases& bases,
                                      const ExpenseAssumptions& expenses = {});

// Demographic profit from its definition: (be_t + pi)(w - s)(1 + j*) - x - w_{t+1} be_{t+1}.
double demographic_profit(const PortfolioState& state, const PathOutcome& outcome,
                          const YearBases& bases);

// Same quantity through sum-at-risk and reserve gaps.
double demographic_profit_via_sum_at_risk(const PortfolioState& state, const PathOutcome& outcome,
                                          const YearBases& bases);

// D^b_{t+1} [q* (w - s) - z]
double local_gaap_profit(const PortfolioState& state, const PathOutcome& outcome,
                         const YearBases& bases);

// (v_t + pi)(w - s)(1 + j*) - x - w_{t+1} v_{t+1}
double local_gaap_profit_direct(const PortfolioState& state, const PathOutcome& outcome,
                                const YearBases& bases);

DemographicSplit demographic_split(const PortfolioState& state, const PathOutcome& outcome,
                                   const YearBases& bases);

// Analytic expectations given the state, a known surrender amount and E[be_{t+1}] equal to the
// forward-implied value. Deaths and year-end rates are independent.
double expected_demographic_profit(const PortfolioState& state, const YearBases& bases,
                                   double surrendered = 0.0);
DemographicSplit expected_demographic_split(const PortfolioState& state, const YearBases& bases,
                                            double surrendered = 0.0);

} // namespace demrisk

#endif
