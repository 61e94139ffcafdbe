#include "demrisk/lifetable.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace demrisk;

namespace {

std::string ages_40_to_120() {
    std::string text = "age,qx\n";
    for (int a = 40; a < 120; ++a)
        text += std::to_string(a) + "," + std::to_string(0.001 * (a - 39)) + "\n";
    return text + "120,1.0\n";
}

} // namespace

TEST_CASE("load_life_table reads contiguous rows") {
    const LifeTable t = parse_life_table(ages_40_to_120(), "t");
    CHECK(t.size() == 81);
    CHECK(t.min_age() == 40);
    CHECK(t.terminal_age() == 120);
    CHECK(t.qx(40) == doctest::Approx(0.001));
    CHECK(t.qx(41) == doctest::Approx(0.002));
}

TEST_CASE("load_life_table reports row-level errors") {
    SUBCASE("probability out of range") {
        CHECK_THROWS_WITH_AS(parse_life_table("40,0.1\n41,1.2\n42,1\n", "t"),
                             doctest::Contains("probability out of range"), LifeTableError);
    }
    SUBCASE("age gap") {
        CHECK_THROWS_WITH_AS(parse_life_table("40,0.1\n42,1\n", "t"),
                             doctest::Contains("age gap at 41"), LifeTableError);
    }
    SUBCASE("row number is reported") {
        CHECK_THROWS_WITH_AS(parse_life_table("age,qx\n40,0.1\n41,abc\n", "t"),
                             doctest::Contains("row 3"), LifeTableError);
    }
    SUBCASE("non-terminal table is rejected") {
        CHECK_THROWS_AS(parse_life_table("40,0.1\n41,0.2\n", "t"), LifeTableError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_life_table("/nonexistent/table.csv"), LifeTableError);
    }
}

TEST_CASE("min_age skips earlier rows") {
    const LifeTable t = parse_life_table("38,0.1\n39,0.1\n40,0.2\n41,1\n", "t", 40);
    CHECK(t.min_age() == 40);
    CHECK(t.qx(40) == 0.2);
    CHECK_THROWS_AS(parse_life_table("41,0.1\n42,1\n", "t", 40), LifeTableError);
}

TEST_CASE("qx") {
    const auto t = test::constant_table(0.1);
    CHECK(t->qx(120) == 1.0);
    CHECK(t->qx(50) == 0.1);
    const auto late = test::constant_table(0.1, 30);
    CHECK_THROWS_AS(late->qx(29), LifeTableError);
    CHECK_THROWS_AS(late->qx(121), LifeTableError);
}

TEST_CASE("npx") {
    const auto t = test::constant_table(0.1);
    CHECK(t->npx(50, 0) == 1.0);
    CHECK(t->npx(50, 2) == doctest::Approx(0.81).epsilon(1e-15));
    CHECK(t->npx(115, 6) == 0.0);
    CHECK_THROWS_AS(t->npx(115, 7), LifeTableError);
}

TEST_CASE("deferred_qx") {
    const auto t = test::constant_table(0.1);
    CHECK(t->deferred_qx(50, 0) == t->qx(50));
    CHECK(t->deferred_qx(50, 1) == doctest::Approx(0.09).epsilon(1e-15));
    double total = 0.0;
    for (int h = 0; h <= 120 - 50; ++h)
        total += t->deferred_qx(50, h);
    CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("survival and deferred-death properties on random tables") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const auto t = test::random_table(rng);
        std::uniform_int_distribution<int> age(0, 110);
        const int x = age(rng);
        for (int n = 0; x + n < t->terminal_age(); ++n)
            CHECK(t->npx(x, n + 1) == doctest::Approx(t->npx(x, n) * (1.0 - t->qx(x + n))).epsilon(1e-14));
        double total = 0.0;
        for (int h = 0; h <= t->terminal_age() - x; ++h)
            total += t->deferred_qx(x, h);
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("scale_table") {
    const auto t = test::constant_table(0.1, 40);
    SUBCASE("unit schedule is bit-identical") {
        const LifeTable s = scale_table(*t, ScalingSchedule::constant(1.0, 40, 120));
        CHECK(s.probabilities() == t->probabilities());
    }
    SUBCASE("constant 0.85") {
        const LifeTable s = scale_table(*t, ScalingSchedule::constant(0.85, 40, 120));
        CHECK(s.qx(50) == doctest::Approx(0.085).epsilon(1e-15));
        CHECK(s.qx(120) == 1.0);
    }
    SUBCASE("scaled probability above one") {
        CHECK_THROWS_AS(scale_table(*t, ScalingSchedule::constant(20.0, 40, 120)), LifeTableError);
    }
    SUBCASE("schedule must cover the table") {
        CHECK_THROWS_AS(scale_table(*t, ScalingSchedule::constant(0.9, 50, 120)), LifeTableError);
    }
    SUBCASE("non-positive multiplier") {
        CHECK_THROWS_AS(ScalingSchedule::constant(0.0, 40, 120), LifeTableError);
    }
}

TEST_CASE("default pure endowment schedule stays in [0.8, 0.9]") {
    const ScalingSchedule s = ScalingSchedule::default_pure_endowment(0, 120);
    CHECK(s.multiplier(30) == doctest::Approx(0.90));
    CHECK(s.multiplier(40) == doctest::Approx(0.90));
    CHECK(s.multiplier(50) == doctest::Approx(0.85));
    CHECK(s.multiplier(60) == doctest::Approx(0.80));
    CHECK(s.multiplier(90) == doctest::Approx(0.80));
    for (int a = 0; a <= 120; ++a) {
        CHECK(s.multiplier(a) >= 0.8 - 1e-15);
        CHECK(s.multiplier(a) <= 0.9 + 1e-15);
    }
}

TEST_CASE("bundled synthetic tables load") {
    const auto t16 = test::table_2016();
    const auto t14 = test::table_2014();
    CHECK(t16->min_age() == 0);
    CHECK(t16->terminal_age() == 120);
    for (int a = 0; a < 120; ++a)
        CHECK(t14->qx(a) >= t16->qx(a));
}
