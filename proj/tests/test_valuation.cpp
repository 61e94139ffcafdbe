#include "demrisk/valuation.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

using namespace demrisk;
using test::constant_table;
using test::make_policy;

namespace {

YieldCurve random_curve(std::mt19937_64& rng, int max_maturity) {
    std::uniform_real_distribution<double> level(-0.005, 0.04);
    std::uniform_real_distribution<double> slope(-0.0005, 0.001);
    const double a = level(rng);
    const double b = slope(rng);
    std::vector<double> spots(static_cast<std::size_t>(max_maturity));
    for (int m = 1; m <= max_maturity; ++m)
        spots[static_cast<std::size_t>(m - 1)] = a + b * std::sqrt(static_cast<double>(m));
    return YieldCurve(0, spots);
}

} // namespace

TEST_CASE("coinciding bases give the local reserve") {
    const auto t = test::table_2016();
    for (auto kind : {BenefitKind::pure_endowment, BenefitKind::endowment, BenefitKind::term_insurance}) {
        for (auto premium : {PremiumType::single, PremiumType::annual}) {
            PolicySpec p = make_policy(kind, premium, 40, 20, 0.01, t);
            p.loadings = {0.2, 0.02, 0.0015};
            const ValuationBasis basis = ValuationBasis::flat(0.01, 20, t);
            for (int h = 0; h <= 20; ++h) {
                const double v = local_reserve_rate(p, h);
                CHECK(std::abs(best_estimate_rate(p, h, basis) - v) < 1e-12);
                CHECK(std::abs(epv_rate(p, h, *t) - v) < 1e-12);
            }
        }
    }
}

TEST_CASE("best estimate examples") {
    const auto t = constant_table(0.1, 40);
    const PolicySpec pe = make_policy(BenefitKind::pure_endowment, PremiumType::single, 40, 1, 0.0, t);
    const PremiumSchedule s = price(pe);
    const ValuationBasis basis = ValuationBasis::flat(0.01, 1, t);
    // value once the single premium has been paid
    CHECK(best_estimate_rate(pe, 0, basis) + s.net_at(0) == doctest::Approx(0.9 / 1.01).epsilon(1e-15));
    CHECK(best_estimate_rate(pe, 0, basis) + s.net_at(0) == doctest::Approx(0.891089).epsilon(1e-6));
    CHECK(best_estimate_rate(pe, 1, basis) == 1.0);
    CHECK_THROWS_AS(best_estimate_rate(make_policy(BenefitKind::endowment, PremiumType::annual, 40, 5, 0.0, t), 0,
                                       ValuationBasis::flat(0.01, 3, t)),
                    CurveError);
}

TEST_CASE("epv examples") {
    const auto t = constant_table(0.1, 40);
    const PolicySpec endow = make_policy(BenefitKind::endowment, PremiumType::single, 40, 2, 0.0, t);
    CHECK(epv_rate(endow, 1, *t) == doctest::Approx(1.0).epsilon(1e-15));
    const auto t2 = test::table_2016();
    const PolicySpec p = make_policy(BenefitKind::term_insurance, PremiumType::annual, 40, 20, 0.02, t2);
    const ValuationBasis basis = ValuationBasis::flat(0.02, 20, constant_table(0.004));
    for (int h = 0; h <= 20; ++h)
        CHECK(std::abs(epv_rate(p, h, *basis.mortality) - best_estimate_rate(p, h, basis)) < 1e-12);
}

TEST_CASE("recursive identities on random specs") {
    std::mt19937_64 rng(2024);
    const auto start = std::chrono::steady_clock::now();
    double worst_theorem2 = 0.0;
    double worst_flat = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const test::RandomCase c = test::random_case(rng);
        const ValuationBasis basis{random_curve(rng, c.spec.duration + 1), c.second_order};
        for (int t = 0; t < c.spec.duration; ++t) {
            const YieldCurve curve_t = roll_forward(basis.curve, t);
            const ValuationBasis at_t{curve_t, c.second_order};
            worst_theorem2 = std::max(worst_theorem2, std::abs(recursion_residual_theorem2(c.spec, t, at_t)));
            worst_flat = std::max(worst_flat, std::abs(epv_recursion_residual(c.spec, t, *c.second_order)));
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(worst_theorem2 < 1e-10);
    CHECK(worst_flat < 1e-12);
    CHECK(seconds < 10.0);
}

TEST_CASE("flat curve at j* reduces the best-estimate recursion to the epv recursion") {
    const auto t1 = test::table_2016();
    const auto t2 = constant_table(0.003);
    const PolicySpec p = make_policy(BenefitKind::endowment, PremiumType::annual, 40, 20, 0.015, t1);
    const ValuationBasis basis = ValuationBasis::flat(0.015, 25, t2);
    for (int h = 0; h < 20; ++h)
        CHECK(recursion_residual_theorem2(p, h, basis) ==
              doctest::Approx(epv_recursion_residual(p, h, *t2)).epsilon(1e-12));
}

TEST_CASE("best estimate falls under an upward parallel shift") {
    const auto t1 = test::table_2014();
    const auto t2 = test::table_2016();
    const PolicySpec term = make_policy(BenefitKind::term_insurance, PremiumType::single, 50, 20, 0.0, t1);
    const PremiumSchedule s = price(term);
    std::vector<double> base(20);
    for (int m = 1; m <= 20; ++m)
        base[static_cast<std::size_t>(m - 1)] = 0.002 * m;
    double prev = 1e300;
    for (double shift : {0.0, 0.005, 0.01, 0.02}) {
        std::vector<double> shifted = base;
        for (auto& r : shifted)
            r += shift;
        // after the single premium only benefits remain, so be > 0
        const double be = best_estimate_rate(term, s, 1, YieldCurve(1, shifted), *t2);
        CHECK(be > 0.0);
        CHECK(be < prev);
        prev = be;
    }
}

TEST_CASE("safety loading") {
    const auto t2 = constant_table(0.01);
    const LifeTable t1 = scale_table(*t2, ScalingSchedule::constant(1.15, 0, 120));
    CHECK(safety_loading(0, t1, *t2, 40) == doctest::Approx(0.15).epsilon(1e-13));
    CHECK(safety_loading(19, t1, *t2, 40) == doctest::Approx(0.15).epsilon(1e-13));
    const LifeTable zero("zero", 0, {0.0, 1.0});
    CHECK_THROWS_AS(safety_loading(0, zero, zero, 0), LifeTableError);
}
