#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lpma/baselines.hpp"
#include "lpma/rng.hpp"

using namespace lpma;

TEST_CASE("two-user rate pair") {
    auto [r1, r2] = noma_rates(NomaConfig{10.0, {0.8, 0.2}}, 0.5, 2.0);
    CHECK(r1 == Catch::Approx(std::log2(3.0)).margin(1e-12));
    CHECK(r2 == Catch::Approx(std::log2(5.0)).margin(1e-12));

    auto [s1, s2] = noma_rates(NomaConfig{10.0, {1.0, 0.0}}, 0.5, 2.0);
    CHECK(s1 == Catch::Approx(std::log2(1.0 + 10.0 * 0.5)).margin(1e-12));
    CHECK(s2 == 0.0);

    auto [z1, z2] = noma_rates(NomaConfig{0.0, {0.5, 0.5}}, 1.0, 1.0);
    CHECK(z1 == 0.0);
    CHECK(z2 == 0.0);

    CHECK_THROWS_AS(noma_rates(NomaConfig{10.0, {0.8, 0.2}}, 2.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(noma_rates(NomaConfig{10.0, {0.8, 0.3}}, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("equal gains collapse the sum to single-user capacity") {
    std::mt19937_64 rng = substream_rng(101, 0);
    for (int i = 0; i < 1000; ++i) {
        double p = std::pow(10.0, -1.0 + 4.0 * uniform_unit(rng));
        double g = std::pow(10.0, -2.0 + 4.0 * uniform_unit(rng));
        double a1 = uniform_unit(rng);
        double sum = noma_sum_rate(NomaConfig{p, {a1, 1.0 - a1}}, g, g);
        REQUIRE(std::abs(sum - std::log2(1.0 + p * g)) < 1e-12);
    }
    // P*g = 3 gives exactly two bits
    CHECK(noma_sum_rate(NomaConfig{3.0, {0.7, 0.3}}, 1.0, 1.0) == Catch::Approx(2.0).margin(1e-12));
    CHECK(noma_sum_rate(NomaConfig{10.0, {1.0, 0.0}}, 0.3, 0.3) ==
          Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("rates are non-decreasing in power") {
    double prev1 = -1.0, prev2 = -1.0;
    for (double p : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
        auto [r1, r2] = noma_rates(NomaConfig{p, {0.6, 0.4}}, 0.4, 1.3);
        CHECK(r1 >= prev1);
        CHECK(r2 >= prev2);
        prev1 = r1;
        prev2 = r2;
    }
}

TEST_CASE("superposition beats equal-share time sharing for separated gains") {
    const double p = 10.0;
    const double g1 = 0.5, g2 = 2.0;
    double oma_sum = 0.0;
    for (double r : oma_rates(p, {g1, g2}, {0.5, 0.5})) oma_sum += r;
    bool found = false;
    for (double a1 = 0.0; a1 <= 1.0; a1 += 0.01)
        if (noma_sum_rate(NomaConfig{p, {a1, 1.0 - a1}}, g1, g2) > oma_sum) found = true;
    CHECK(found);
}

TEST_CASE("time sharing") {
    auto equal = oma_rates(10.0, {1.0, 1.0}, {0.5, 0.5});
    CHECK(equal[0] == Catch::Approx(0.5 * std::log2(11.0)).margin(1e-12));
    CHECK(equal[0] == equal[1]);

    auto solo = oma_rates(10.0, {1.0, 2.0}, {1.0, 0.0});
    CHECK(solo[0] == Catch::Approx(std::log2(11.0)).margin(1e-12));
    CHECK(solo[1] == 0.0);

    auto mixed = oma_rates(10.0, {0.5, 2.0}, {0.5, 0.5});
    CHECK(mixed[0] == Catch::Approx(0.5 * std::log2(6.0)).margin(1e-12));
    CHECK(mixed[1] == Catch::Approx(0.5 * std::log2(21.0)).margin(1e-12));

    CHECK_THROWS_AS(oma_rates(10.0, {1.0, 1.0}, {0.7, 0.7}), std::invalid_argument);
    CHECK_THROWS_AS(oma_rates(10.0, {1.0, 1.0}, {1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("general chain matches the two-user formula") {
    std::mt19937_64 rng = substream_rng(103, 0);
    for (int i = 0; i < 200; ++i) {
        double p = 0.1 + 20.0 * uniform_unit(rng);
        double a1 = uniform_unit(rng);
        double g1 = uniform_unit(rng);
        double g2 = g1 + uniform_unit(rng);
        auto [r1, r2] = noma_rates(NomaConfig{p, {a1, 1.0 - a1}}, g1, g2);
        auto chain = noma_rates_general(p, {a1, 1.0 - a1}, {g1, g2});
        REQUIRE(chain.size() == 2);
        CHECK(chain[0] == Catch::Approx(r1).margin(1e-12));
        CHECK(chain[1] == Catch::Approx(r2).margin(1e-12));
    }
    // three users: weakest sees the most interference
    auto three = noma_rates_general(10.0, {0.6, 0.3, 0.1}, {0.2, 0.7, 1.4});
    CHECK(three.size() == 3);
    for (double r : three) CHECK(r > 0.0);
}
