#ifndef DEMRISK_CONTRACT_HPP
#define DEMRISK_CONTRACT_HPP

#include "demrisk/lifetable.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace demrisk {

class ContractError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class BenefitKind { pure_endowment, endowment, term_insurance };
enum class PremiumType { single, annual };

std::string to_string(BenefitKind kind);
std::string to_string(PremiumType type);
BenefitKind parse_benefit_kind(const std::string& text);
PremiumType parse_premium_type(const std::string& text);

// Benefit per unit sum insured paid at the end of the year of death / at maturity.
double death_benefit(BenefitKind kind);
double maturity_benefit(BenefitKind kind);

// alpha and beta are charged on each gross premium; gamma is a yearly charge per unit sum insured.
struct Loadings {
    double acquisition = 0.0; // alpha*
    double collection = 0.0;  // beta*
    double management = 0.0;  // gamma*
};

struct SurrenderPenalty {
    int tau = 1;          // first year in which surrender value is paid
    double rate = 0.0;    // j_s, discount rate applied to the surrender value
};

struct PolicySpec {
    BenefitKind kind = BenefitKind::endowment;
    int issue_age = 40;
    int duration = 20;
    PremiumType premium_type = PremiumType::annual;
    double technical_rate = 0.0; // j*
    Loadings loadings;
    std::optional<SurrenderPenalty> surrender; // none: surrenders pay nothing
    std::shared_ptr<const LifeTable> first_order_table;

    void validate() const;
    int age_at(int t) const { return issue_age + t; }
};

// Number of policyholders and their sums insured at issue.
struct Cohort {
    long l0 = 1;
    double sum_mean = 1.0;
    double sum_cv = 0.0;
    std::vector<double> per_policy_sums;

    void validate() const;
    double total_sum() const;
};

// Premium rates per unit sum insured on the first-order basis.
struct PremiumSchedule {
    PremiumType type = PremiumType::annual;
    int duration = 0;
    double pure = 0.0;  // pi: equivalence premium per instalment, expenses excluded
    double gross = 0.0; // b
    Loadings loadings;

    // Gross premium due at the start of year t+1 (time t).
    double gross_at(int t) const;

    // Premium net of loadings, b_t (1 - alpha* - beta*) - gamma*, for the year starting at t.
    double net_at(int t) const;
};

PremiumSchedule price(const PolicySpec& spec);

double pure_premium_rate(const PolicySpec& spec);
double gross_premium_rate(const PolicySpec& spec);

// Complete prospective reserve at time t (before the premium due at t), locked first-order basis.
double local_reserve_rate(const PolicySpec& spec, int t);
double local_reserve_rate(const PolicySpec& spec, const PremiumSchedule& premiums, int t);

// Death benefit minus the complete reserve at t_plus_1.
double sum_at_risk(const PolicySpec& spec, int t_plus_1);
double sum_at_risk(const PolicySpec& spec, const PremiumSchedule& premiums, int t_plus_1);

// Fraction of the best estimate paid out on surrender at time t.
double surrender_coefficient(const PolicySpec& spec, int t);

} // namespace demrisk

#endif
