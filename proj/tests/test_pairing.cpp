#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "lpma/pairing.hpp"

using namespace lpma;

namespace {
const UserPopulation kDefaultPopulation{{1, 0.10}, {2, 1.00}, {3, 0.12}, {4, 1.10}};
}

TEST_CASE("pair validity") {
    CHECK(noma_pair_valid(0.1, 1.0, 2.0));
    CHECK_FALSE(noma_pair_valid(1.0, 1.05, 2.0));
    CHECK_FALSE(noma_pair_valid(0.7, 0.7, 2.0));
    CHECK(noma_pair_valid(0.0, 0.4, 2.0));
    CHECK_THROWS_AS(noma_pair_valid(0.0, 0.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(noma_pair_valid(0.1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("the three matchings of four users") {
    auto pairings = enumerate_pairings(kDefaultPopulation);
    REQUIRE(pairings.size() == 3);
    std::set<std::set<std::set<int>>> canon;
    for (const auto& p : pairings) {
        std::set<std::set<int>> groups;
        for (const auto& pair : p.pairs) groups.insert({pair[0], pair[1]});
        REQUIRE(groups.size() == 2);
        canon.insert(groups);
    }
    CHECK(canon.size() == 3);
    CHECK(canon.count({{1, 2}, {3, 4}}) == 1);
    CHECK(canon.count({{1, 3}, {2, 4}}) == 1);
    CHECK(canon.count({{1, 4}, {2, 3}}) == 1);

    CHECK_THROWS_AS(enumerate_pairings(UserPopulation{{1, 0.5}, {2, 0.5}}), std::invalid_argument);
}

TEST_CASE("degradation frequency under random pairing") {
    SECTION("default population hits one matching in three") {
        std::mt19937_64 rng = substream_rng(301, 0);
        double rate = random_pairing_degradation_rate(kDefaultPopulation, 2.0, 100000, rng);
        CHECK(rate == Catch::Approx(1.0 / 3.0).margin(0.02));
    }
    SECTION("well-separated gains never degrade") {
        UserPopulation pop{{1, 1.0}, {2, 10.0}, {3, 100.0}, {4, 1000.0}};
        std::mt19937_64 rng = substream_rng(301, 1);
        CHECK(random_pairing_degradation_rate(pop, 2.0, 20000, rng) == 0.0);
    }
    SECTION("equal gains always degrade") {
        UserPopulation pop{{1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}};
        std::mt19937_64 rng = substream_rng(301, 2);
        CHECK(random_pairing_degradation_rate(pop, 2.0, 20000, rng) == 1.0);
    }
    SECTION("frequency converges to the exact matching count") {
        std::mt19937_64 gain_rng = substream_rng(303, 0);
        for (int rep = 0; rep < 5; ++rep) {
            UserPopulation pop;
            for (int u = 1; u <= 4; ++u)
                pop.push_back({u, 0.05 + 2.0 * uniform_unit(gain_rng)});
            int exact = 0;
            for (const auto& p : enumerate_pairings(pop)) exact += pairing_degraded(pop, p, 2.0);
            std::mt19937_64 rng = substream_rng(303, static_cast<std::uint64_t>(rep) + 1);
            double rate = random_pairing_degradation_rate(pop, 2.0, 30000, rng);
            CHECK(rate == Catch::Approx(exact / 3.0).margin(0.02));
        }
    }
}

TEST_CASE("round-robin pairing") {
    SECTION("uniform over the three matchings") {
        std::mt19937_64 rng = substream_rng(305, 0);
        std::map<std::set<std::set<int>>, int> counts;
        const int trials = 100000;
        for (int t = 0; t < trials; ++t) {
            Pairing p = lpma_round_robin_pairing(kDefaultPopulation, rng);
            std::set<std::set<int>> groups;
            for (const auto& pair : p.pairs) groups.insert({pair[0], pair[1]});
            counts[groups]++;
        }
        REQUIRE(counts.size() == 3);
        for (const auto& [groups, count] : counts)
            CHECK(static_cast<double>(count) / trials == Catch::Approx(1.0 / 3.0).margin(0.02));
    }
    SECTION("two users form the unique pair") {
        std::mt19937_64 rng = substream_rng(305, 1);
        Pairing p = lpma_round_robin_pairing(UserPopulation{{5, 0.3}, {9, 0.3}}, rng);
        REQUIRE(p.pairs.size() == 1);
        std::set<int> ids{p.pairs[0][0], p.pairs[0][1]};
        CHECK(ids == std::set<int>{5, 9});
    }
    SECTION("odd populations are rejected") {
        std::mt19937_64 rng = substream_rng(305, 2);
        CHECK_THROWS_AS(lpma_round_robin_pairing(UserPopulation{{1, 0.1}}, rng),
                        std::invalid_argument);
    }
}
