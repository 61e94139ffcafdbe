#include "demrisk/contract.hpp"

#include "epv.hpp"

#include <cmath>
#include <numeric>

namespace demrisk {

namespace {

auto flat_discount(double rate) {
    const double v = 1.0 / (1.0 + rate);
    return [v](int k) { return std::pow(v, k); };
}

const LifeTable& first_order(const PolicySpec& spec) {
    if (!spec.first_order_table)
        throw ContractError("policy has no first-order life table");
    return *spec.first_order_table;
}

} // namespace

std::string to_string(BenefitKind kind) {
    switch (kind) {
    case BenefitKind::pure_endowment:
        return "pure_endowment";
    case BenefitKind::endowment:
        return "endowment";
    case BenefitKind::term_insurance:
        return "term_insurance";
    }
    return "unknown";
}

std::string to_string(PremiumType type) {
    return type == PremiumType::single ? "single" : "annual";
}

BenefitKind parse_benefit_kind(const std::string& text) {
    if (text == "pure_endowment")
        return BenefitKind::pure_endowment;
    if (text == "endowment")
        return BenefitKind::endowment;
    if (text == "term_insurance" || text == "term")
        return BenefitKind::term_insurance;
    throw ContractError("unknown policy kind '" + text + "'");
}

PremiumType parse_premium_type(const std::string& text) {
    if (text == "single")
        return PremiumType::single;
    if (text == "annual")
        return PremiumType::annual;
    throw ContractError("unknown premium type '" + text + "'");
}

double death_benefit(BenefitKind kind) {
    return kind == BenefitKind::pure_endowment ? 0.0 : 1.0;
}

double maturity_benefit(BenefitKind kind) {
    return kind == BenefitKind::term_insurance ? 0.0 : 1.0;
}

void PolicySpec::validate() const {
    if (duration < 1)
        throw ContractError("policy duration must be at least 1");
    if (issue_age < 0)
        throw ContractError("issue age must be non-negative");
    if (!std::isfinite(technical_rate) || technical_rate <= -1.0)
        throw ContractError("technical rate must exceed -1");
    const double ab = loadings.acquisition + loadings.collection;
    if (loadings.acquisition < 0.0 || loadings.collection < 0.0 || !(ab < 1.0))
        throw ContractError("premium loadings must satisfy 0 <= alpha* + beta* < 1");
    if (loadings.management < 0.0)
        throw ContractError("management loading gamma* must be non-negative");
    if (surrender) {
        if (surrender->tau <= 0)
            throw ContractError("surrender penalty tau must be positive");
        if (!(surrender->rate < technical_rate))
            throw ContractError("surrender rate j_s must be below the technical rate");
    }
    const LifeTable& table = first_order(*this);
    if (issue_age < table.min_age() || issue_age + duration - 1 > table.terminal_age())
        throw ContractError("first-order table '" + table.name() +
                            "' does not cover the policy ages");
}

void Cohort::validate() const {
    if (l0 < 1)
        throw ContractError("cohort needs at least one policyholder");
    if (!per_policy_sums.empty()) {
        if (per_policy_sums.size() != static_cast<std::size_t>(l0))
            throw ContractError("number of per-policy sums differs from l0");
        for (double c : per_policy_sums) {
            if (!(c > 0.0))
                throw ContractError("per-policy sums must be positive");
        }
        return;
    }
    if (!(sum_mean > 0.0))
        throw ContractError("cohort sum_mean must be positive");
    if (!(sum_cv >= 0.0))
        throw ContractError("cohort sum_cv must be non-negative");
}

double Cohort::total_sum() const {
    if (!per_policy_sums.empty())
        return std::accumulate(per_policy_sums.begin(), per_policy_sums.end(), 0.0);
    return static_cast<double>(l0) * sum_mean;
}

double PremiumSchedule::gross_at(int t) const {
    if (t < 0 || t >= duration)
        return 0.0;
    if (type == PremiumType::single)
        return t == 0 ? gross : 0.0;
    return gross;
}

double PremiumSchedule::net_at(int t) const {
    if (t < 0 || t >= duration)
        return 0.0;
    return gross_at(t) * (1.0 - loadings.acquisition - loadings.collection) - loadings.management;
}

PremiumSchedule price(const PolicySpec& spec) {
    spec.validate();
    const LifeTable& table = first_order(spec);
    const auto v = flat_discount(spec.technical_rate);
    const double benefits = detail::benefits_value(spec, table, 0, v);
    const double annuity = detail::annuity_due(spec, table, 0, v);
    if (!(annuity > 0.0))
        throw ContractError("premium annuity is zero");

    PremiumSchedule p;
    p.type = spec.premium_type;
    p.duration = spec.duration;
    p.loadings = spec.loadings;
    const double keep = 1.0 - spec.loadings.acquisition - spec.loadings.collection;
    if (!(keep > 0.0))
        throw ContractError("alpha* + beta* must be below 1");
    if (spec.premium_type == PremiumType::annual) {
        p.pure = benefits / annuity;
        p.gross = (p.pure + spec.loadings.management) / keep;
    } else {
        p.pure = benefits;
        p.gross = (p.pure + spec.loadings.management * annuity) / keep;
    }
    return p;
}

double pure_premium_rate(const PolicySpec& spec) {
    return price(spec).pure;
}

double gross_premium_rate(const PolicySpec& spec) {
    return price(spec).gross;
}

double local_reserve_rate(const PolicySpec& spec, const PremiumSchedule& premiums, int t) {
    if (t < 0 || t > spec.duration)
        throw ContractError("reserve time " + std::to_string(t) + " outside [0, n]");
    return detail::prospective_value(spec, premiums, first_order(spec), t,
                                     flat_discount(spec.technical_rate));
}

double local_reserve_rate(const PolicySpec& spec, int t) {
    return local_reserve_rate(spec, price(spec), t);
}

double sum_at_risk(const PolicySpec& spec, const PremiumSchedule& premiums, int t_plus_1) {
    if (t_plus_1 < 1 || t_plus_1 > spec.duration)
        throw ContractError("sum-at-risk time " + std::to_string(t_plus_1) + " outside [1, n]");
    return death_benefit(spec.kind) - local_reserve_rate(spec, premiums, t_plus_1);
}

double sum_at_risk(const PolicySpec& spec, int t_plus_1) {
    return sum_at_risk(spec, price(spec), t_plus_1);
}

double surrender_coefficient(const PolicySpec& spec, int t) {
    if (!spec.surrender || t < spec.surrender->tau)
        return 0.0;
    return std::pow(1.0 + spec.surrender->rate, -static_cast<double>(spec.duration - t));
}

} // namespace demrisk
