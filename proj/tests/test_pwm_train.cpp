#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "pwmss/pwm_train.hpp"

using namespace pwmss;

TEST_CASE("empty pulse train gives zero source voltage") {
    const PwmTrain train = make_pwm_train(100.0, 1.0 / 60.0, {});
    CHECK(train.pulse_count() == 0);
    CHECK(train.breakpoints().size() == 2);
    for (int g = 0; g < 1234; ++g)
        CHECK(vs_at(train, g * train.period() / 1234.0) == 0.0);
}

TEST_CASE("coincident instants collapse pairwise") {
    // The zero-width OFF gap at 2 ms disappears and the pulses concatenate.
    const PwmTrain train = make_pwm_train(100.0, 1.0 / 60.0, {1e-3, 2e-3, 2e-3, 3e-3});
    REQUIRE(train.pulse_count() == 1);
    CHECK(train.instants()[0] == 1e-3);
    CHECK(train.instants()[1] == 3e-3);
    CHECK(vs_at(train, 2e-3) == 100.0);

    // A zero-width ON pulse disappears entirely.
    const PwmTrain dropped = make_pwm_train(100.0, 1.0 / 60.0, {2e-3, 2e-3});
    CHECK(dropped.pulse_count() == 0);

    // cascading collapse: a degenerate pulse followed by a degenerate gap
    const double eps = 1e-16;
    const PwmTrain cascade =
        make_pwm_train(100.0, 1.0 / 60.0, {1e-3, 1e-3 + eps, 1e-3 + 2 * eps, 4e-3});
    REQUIRE(cascade.pulse_count() == 1);
    CHECK(cascade.instants()[1] == 4e-3);
}

TEST_CASE("construction rejects malformed instants") {
    const double period = 1.0 / 60.0;
    CHECK_THROWS_AS(make_pwm_train(100.0, period, {3e-3, 1e-3}), NonMonotonicInstants);
    CHECK_THROWS_AS(make_pwm_train(100.0, period, {1e-3}), OddInstantCount);
    CHECK_THROWS_AS(make_pwm_train(100.0, period, {0.0, 1e-3}), InstantOutOfRange);
    CHECK_THROWS_AS(make_pwm_train(100.0, period, {1e-3, period / 2.0}), InstantOutOfRange);
    CHECK_THROWS_AS(make_pwm_train(100.0, period, {-1e-3, 1e-3}), InstantOutOfRange);
    CHECK_THROWS_AS(make_pwm_train(-5.0, period, {}), InvalidParameter);
    CHECK_THROWS_AS(make_pwm_train(100.0, 0.0, {}), InvalidParameter);
}

TEST_CASE("vs_at levels, half-wave mirror and right-limit convention") {
    const double period = 1.0 / 60.0;
    const double t1 = 2e-3, t2 = 5e-3;
    const PwmTrain train = make_pwm_train(100.0, period, {t1, t2});
    const double mid = (t1 + t2) / 2.0;

    CHECK(vs_at(train, mid) == 100.0);
    CHECK(vs_at(train, mid + period / 2.0) == -100.0);
    CHECK(vs_at(train, t1 / 2.0) == 0.0);
    CHECK(vs_at(train, 0.0) == 0.0);
    CHECK(vs_at(train, period / 2.0) == 0.0);

    // exact switching instants take the right-limit value
    CHECK(vs_at(train, t1) == 100.0);
    CHECK(vs_at(train, t2) == 0.0);
    CHECK(vs_at(train, t1 + period / 2.0) == -100.0);

    // periodic reduction covers negative times and t > T
    CHECK(vs_at(train, mid - period) == 100.0);
    CHECK(vs_at(train, mid + 3.0 * period) == 100.0);
}

TEST_CASE("half-wave symmetry holds for random trains and times") {
    std::mt19937 rng(2024);
    for (int c = 0; c < 12; ++c) {
        const double period = testing_support::log_uniform(rng, 1e-4, 1e-1);
        const PwmTrain train = testing_support::random_train(rng, 48.0, period);
        std::uniform_real_distribution<double> t_dist(-2.0 * period, 3.0 * period);
        for (int k = 0; k < 2000; ++k) {
            const double t = t_dist(rng);
            CHECK(vs_at(train, t + period / 2.0) == -vs_at(train, t));
        }
    }
}
