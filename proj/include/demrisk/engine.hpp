#ifndef DEMRISK_ENGINE_HPP
#define DEMRISK_ENGINE_HPP

#include "demrisk/contract.hpp"
#include "demrisk/curve.hpp"
#include "demrisk/lifetable.hpp"
#include "demrisk/profit.hpp"
#include "demrisk/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace demrisk {

struct LogNormalParams {
    double mu = 0.0;
    double s = 0.0;
};

// Log-scale parameters reproducing the given mean and coefficient of variation.
LogNormalParams lognormal_params_from_mean_cv(double mean, double cv);

long simulate_deaths(long lives, double q, Xoshiro256& rng);

enum class RateModel {
    vasicek, // year-end curve from a simulated short rate
    forward  // deterministic forward-implied year-end curve
};

struct SimulationConfig {
    long n_sims = 100000;
    std::uint64_t seed = 20240101;
    double confidence = 0.995;
    double lapse_rate = 0.0;
    RateModel rate_model = RateModel::vasicek;
    unsigned threads = 0; // 0: hardware concurrency
    std::optional<double> asset_return; // default: the one-year spot rate
    ExpenseAssumptions expenses;

    void validate() const;
};

struct Moments {
    long n = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // n - 1 denominator
    double skewness = 0.0; // adjusted Fisher-Pearson; 0 when undefined
    bool skewness_defined = false;
    double standard_error = 0.0;
};

// Mean, standard deviation and skewness with compensated sums in sample order.
Moments compute_moments(const std::vector<double>& samples);

// -(k-th smallest sample), k = ceil((1 - confidence) n).
double scr(const std::vector<double>& samples, double confidence);

struct ProfitDistribution {
    std::vector<double> samples;
    Moments moments;
    double scr = 0.0;
    double scr_ratio = 0.0; // scr / w_t
};

struct SummaryRow {
    double mean = 0.0;
    double mean_ratio = 0.0;
    double std_dev = 0.0;
    double skewness = 0.0;
    bool skewness_defined = false;
    double scr = 0.0;
    double scr_ratio = 0.0;
};

SummaryRow summarize(const ProfitDistribution& dist, double w_t);

// Everything the per-path simulation needs for year (t, t+1].
struct YearModel {
    PolicySpec spec;
    PremiumSchedule premiums;
    std::shared_ptr<const LifeTable> second_order;
    YearBases bases;
    PortfolioState state;
    double claim_cv = 0.0;
    std::vector<double> policy_sums; // used when it lists exactly the l_t lives in force
    VasicekParams vasicek;
};

// Expected in-force position at t on the second-order table: l_t rounded, w_t = w_0 tp_x.
PortfolioState project_state(const PolicySpec& spec, const Cohort& cohort,
                             const LifeTable& second_order, int t);

YearModel make_year_model(const PolicySpec& spec, const Cohort& cohort,
                          std::shared_ptr<const LifeTable> second_order, int t,
                          const YieldCurve& curve_t, const VasicekParams& vasicek);

// One simulated year for path `index`; a path's draws depend only on (seed, index).
PathOutcome simulate_path(const YearModel& model, const SimulationConfig& config,
                          std::uint64_t index);

struct SimulationResult {
    ProfitDistribution mcv;
    ProfitDistribution local_gaap;
    double expected_mcv = 0.0; // analytic
    double expected_lg = 0.0;
    double w_t = 0.0;
    double max_conservation_error = 0.0; // max |w_t - s - z - w_{t+1}|
};

SimulationResult simulate_one_year(const YearModel& model, const SimulationConfig& config);

// Exact moments of the local-GAAP demographic profit under the claim model.
Moments local_gaap_theoretical_moments(const YearModel& model, double lapse_rate);

} // namespace demrisk

#endif
