#include "demrisk/contract.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace demrisk;
using test::constant_table;
using test::make_policy;

TEST_CASE("pure premium on one-year contracts") {
    const auto t = constant_table(0.1, 40);
    CHECK(pure_premium_rate(make_policy(BenefitKind::pure_endowment, PremiumType::single, 40, 1, 0.0, t)) ==
          doctest::Approx(0.9).epsilon(1e-15));
    CHECK(pure_premium_rate(make_policy(BenefitKind::term_insurance, PremiumType::single, 40, 1, 0.0, t)) ==
          doctest::Approx(0.1).epsilon(1e-15));
    for (double q : {0.0, 0.3, 0.9}) {
        const auto tq = constant_table(q, 40);
        CHECK(pure_premium_rate(make_policy(BenefitKind::endowment, PremiumType::single, 40, 1, 0.0, tq)) ==
              doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("gross premium") {
    const auto t = constant_table(0.1, 40);
    SUBCASE("no loadings") {
        const PolicySpec p = make_policy(BenefitKind::endowment, PremiumType::annual, 40, 10, 0.01, t);
        CHECK(gross_premium_rate(p) == pure_premium_rate(p));
    }
    SUBCASE("gamma only, pi = 0.9") {
        PolicySpec p = make_policy(BenefitKind::pure_endowment, PremiumType::annual, 40, 1, 0.0, t);
        p.loadings.management = 0.1;
        CHECK(pure_premium_rate(p) == doctest::Approx(0.9));
        CHECK(gross_premium_rate(p) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("annual formula") {
        PolicySpec p = make_policy(BenefitKind::endowment, PremiumType::annual, 40, 15, 0.02, t);
        p.loadings = {0.3, 0.025, 0.0015};
        const PremiumSchedule s = price(p);
        CHECK(s.gross == doctest::Approx((s.pure + 0.0015) / (1.0 - 0.325)).epsilon(1e-15));
        CHECK(s.net_at(3) == doctest::Approx(s.pure).epsilon(1e-14));
        CHECK(s.net_at(15) == 0.0);
    }
    SUBCASE("alpha + beta = 1") {
        PolicySpec p = make_policy(BenefitKind::endowment, PremiumType::annual, 40, 10, 0.01, t);
        p.loadings = {0.6, 0.4, 0.0};
        CHECK_THROWS_AS(gross_premium_rate(p), ContractError);
    }
}

TEST_CASE("local reserve") {
    const auto t = constant_table(0.1, 40);
    const PolicySpec endow = make_policy(BenefitKind::endowment, PremiumType::annual, 40, 10, 0.01, t);
    CHECK(local_reserve_rate(endow, 10) == 1.0);
    CHECK(std::abs(local_reserve_rate(endow, 0)) < 1e-15);
    const PolicySpec pe = make_policy(BenefitKind::pure_endowment, PremiumType::single, 40, 2, 0.0, t);
    CHECK(local_reserve_rate(pe, 1) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(local_reserve_rate(make_policy(BenefitKind::term_insurance, PremiumType::annual, 40, 5, 0.01, t), 5) == 0.0);
    CHECK_THROWS_AS(local_reserve_rate(endow, 11), ContractError);
    CHECK_THROWS_AS(local_reserve_rate(endow, -1), ContractError);
}

TEST_CASE("sum at risk") {
    const auto t = test::table_2016();
    const PolicySpec pe = make_policy(BenefitKind::pure_endowment, PremiumType::annual, 40, 20, 0.01, t);
    for (int h = 1; h <= 20; ++h)
        CHECK(sum_at_risk(pe, h) < 0.0);
    const PolicySpec endow = make_policy(BenefitKind::endowment, PremiumType::annual, 40, 20, 0.01, t);
    CHECK(std::abs(sum_at_risk(endow, 20)) < 1e-15);
    const PolicySpec term = make_policy(BenefitKind::term_insurance, PremiumType::annual, 40, 20, 0.01, t);
    for (int h = 1; h <= 20; ++h) {
        CHECK(sum_at_risk(term, h) == doctest::Approx(1.0 - local_reserve_rate(term, h)).epsilon(1e-15));
        CHECK(sum_at_risk(term, h) > 0.95);
    }
    CHECK_THROWS_AS(sum_at_risk(term, 0), ContractError);
}

TEST_CASE("surrender coefficient") {
    const auto t = constant_table(0.01, 30);
    PolicySpec p = make_policy(BenefitKind::endowment, PremiumType::annual, 40, 20, 0.01, t);
    CHECK(surrender_coefficient(p, 7) == 0.0);
    p.surrender = SurrenderPenalty{5, 0.005};
    CHECK(surrender_coefficient(p, 4) == 0.0);
    CHECK(surrender_coefficient(p, 20) == 1.0);
    CHECK(surrender_coefficient(p, 10) == doctest::Approx(std::pow(1.005, -10.0)).epsilon(1e-15));
    CHECK(surrender_coefficient(p, 10) == doctest::Approx(0.951348).epsilon(1e-6));
}

TEST_CASE("policy validation") {
    const auto t = constant_table(0.01, 30);
    PolicySpec p = make_policy(BenefitKind::endowment, PremiumType::annual, 40, 20, 0.01, t);
    CHECK_NOTHROW(p.validate());
    SUBCASE("duration") {
        p.duration = 0;
        CHECK_THROWS_AS(p.validate(), ContractError);
    }
    SUBCASE("surrender rate must be below j*") {
        p.surrender = SurrenderPenalty{5, 0.01};
        CHECK_THROWS_AS(p.validate(), ContractError);
    }
    SUBCASE("tau positive") {
        p.surrender = SurrenderPenalty{0, 0.0};
        CHECK_THROWS_AS(p.validate(), ContractError);
    }
    SUBCASE("negative gamma") {
        p.loadings.management = -0.001;
        CHECK_THROWS_AS(p.validate(), ContractError);
    }
    SUBCASE("table coverage") {
        p.issue_age = 20;
        CHECK_THROWS_AS(p.validate(), ContractError);
    }
    SUBCASE("no table") {
        p.first_order_table.reset();
        CHECK_THROWS_AS(p.validate(), ContractError);
    }
}

TEST_CASE("cohort validation") {
    Cohort c;
    c.l0 = 3;
    c.sum_mean = 10.0;
    CHECK(c.total_sum() == 30.0);
    c.per_policy_sums = {1.0, 2.0};
    CHECK_THROWS_AS(c.validate(), ContractError);
    c.per_policy_sums = {1.0, 2.0, 4.0};
    CHECK_NOTHROW(c.validate());
    CHECK(c.total_sum() == 7.0);
    c.per_policy_sums = {1.0, -2.0, 4.0};
    CHECK_THROWS_AS(c.validate(), ContractError);
}

TEST_CASE("locked-basis reserve recursion on random specs") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        const test::RandomCase c = test::random_case(rng);
        const PremiumSchedule s = price(c.spec);
        const LifeTable& t1 = *c.spec.first_order_table;
        for (int t = 0; t < c.spec.duration; ++t) {
            const double q = t1.qx(c.spec.age_at(t));
            const double lhs = (local_reserve_rate(c.spec, s, t) + s.net_at(t)) * (1.0 + c.spec.technical_rate);
            const double rhs = q * death_benefit(c.spec.kind) + (1.0 - q) * local_reserve_rate(c.spec, s, t + 1);
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
        CHECK(std::abs(local_reserve_rate(c.spec, s, 0)) < 1e-12);
    }
}

TEST_CASE("benefit additivity") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        const test::RandomCase c = test::random_case(rng);
        PolicySpec p = c.spec;
        p.loadings = {};
        p.kind = BenefitKind::pure_endowment;
        const double pe = pure_premium_rate(p);
        p.kind = BenefitKind::term_insurance;
        const double term = pure_premium_rate(p);
        p.kind = BenefitKind::endowment;
        CHECK(std::abs(pe + term - pure_premium_rate(p)) < 1e-12);
    }
}

TEST_CASE("single-premium pure endowment reserve is non-decreasing") {
    const auto t = test::table_2016();
    for (double j : {0.0, 0.01, 0.05}) {
        const PolicySpec p = make_policy(BenefitKind::pure_endowment, PremiumType::single, 40, 30, j, t);
        const PremiumSchedule s = price(p);
        double prev = local_reserve_rate(p, s, 0) + s.net_at(0);
        for (int h = 1; h <= 30; ++h) {
            const double v = local_reserve_rate(p, s, h);
            CHECK(v >= prev - 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("name parsing") {
    CHECK(parse_benefit_kind("pure_endowment") == BenefitKind::pure_endowment);
    CHECK(parse_benefit_kind(to_string(BenefitKind::term_insurance)) == BenefitKind::term_insurance);
    CHECK(parse_premium_type("single") == PremiumType::single);
    CHECK_THROWS_AS(parse_benefit_kind("annuity"), ContractError);
    CHECK_THROWS_AS(parse_premium_type("monthly"), ContractError);
}
