#ifndef DEMRISK_SRC_EPV_HPP
#define DEMRISK_SRC_EPV_HPP

#include "demrisk/contract.hpp"
#include "demrisk/lifetable.hpp"

namespace demrisk::detail {

// Expected present value at time t of the remaining benefits less the remaining net premiums,
// per unit sum insured. `discount(k)` is the k-year discount factor seen from t.
// At t = n only the maturity benefit remains.
template <typename Discount>
double prospective_value(const PolicySpec& spec, const PremiumSchedule& premiums,
                         const LifeTable& table, int t, Discount&& discount) {
    const int n = spec.duration;
    const int x = spec.issue_age + t;
    const double c_death = death_benefit(spec.kind);
    double survival = 1.0;
    double value = 0.0;
    for (int k = 0; k < n - t; ++k) {
        const double q = table.qx(x + k);
        value -= premiums.net_at(t + k) * survival * discount(k);
        value += c_death * survival * q * discount(k + 1);
        survival *= 1.0 - q;
    }
    value += maturity_benefit(spec.kind) * survival * discount(n - t);
    return value;
}

template <typename Discount>
double benefits_value(const PolicySpec& spec, const LifeTable& table, int t, Discount&& discount) {
    const int n = spec.duration;
    const int x = spec.issue_age + t;
    const double c_death = death_benefit(spec.kind);
    double survival = 1.0;
    double value = 0.0;
    for (int k = 0; k < n - t; ++k) {
        const double q = table.qx(x + k);
        value += c_death * survival * q * discount(k + 1);
        survival *= 1.0 - q;
    }
    return value + maturity_benefit(spec.kind) * survival * discount(n - t);
}

// Life annuity-due over the remaining n - t premium dates.
template <typename Discount>
double annuity_due(const PolicySpec& spec, const LifeTable& table, int t, Discount&& discount) {
    const int x = spec.issue_age + t;
    double survival = 1.0;
    double value = 0.0;
    for (int k = 0; k < spec.duration - t; ++k) {
        value += survival * discount(k);
        survival *= 1.0 - table.qx(x + k);
    }
    return value;
}

} // namespace demrisk::detail

#endif
