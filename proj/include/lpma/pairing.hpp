#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lpma/rng.hpp"

namespace lpma {

struct UserGain {
    int user_id{0};
    double gain{0.0};  // |h|^2, linear
};

using UserPopulation = std::vector<UserGain>;

/// A perfect matching of user ids into transmission pairs.
struct Pairing {
    std::vector<std::array<int, 2>> pairs;

    friend bool operator==(const Pairing&, const Pairing&) = default;
};

/// Superposition pairing rule: the pair is usable only when the gain ratio
/// reaches the separation threshold.
inline bool noma_pair_valid(double gain_a, double gain_b, double gain_ratio_threshold) {
    if (gain_ratio_threshold <= 1.0) throw std::invalid_argument("threshold must exceed 1");
    if (gain_a < 0.0 || gain_b < 0.0) throw std::invalid_argument("gains must be non-negative");
    double lo = std::min(gain_a, gain_b);
    double hi = std::max(gain_a, gain_b);
    if (hi == 0.0) throw std::domain_error("pair has no usable gain");
    if (lo == 0.0) return true;
    return hi / lo >= gain_ratio_threshold;
}

/// The three perfect matchings of a 4-user population.
inline std::vector<Pairing> enumerate_pairings(const UserPopulation& pop) {
    if (pop.size() != 4) throw std::invalid_argument("pairing enumeration requires exactly 4 users");
    const int a = pop[0].user_id, b = pop[1].user_id, c = pop[2].user_id, d = pop[3].user_id;
    return {
        Pairing{{{a, b}, {c, d}}},
        Pairing{{{a, c}, {b, d}}},
        Pairing{{{a, d}, {b, c}}},
    };
}

namespace detail {
inline double gain_of(const UserPopulation& pop, int id) {
    for (const auto& u : pop)
        if (u.user_id == id) return u.gain;
    throw std::invalid_argument("unknown user id");
}
}  // namespace detail

inline bool pairing_degraded(const UserPopulation& pop, const Pairing& pairing, double threshold) {
    for (const auto& p : pairing.pairs)
        if (!noma_pair_valid(detail::gain_of(pop, p[0]), detail::gain_of(pop, p[1]), threshold))
            return true;
    return false;
}

/**
 * Frequency of capacity degradation under uniformly random pairing: the
 * fraction of sampled matchings that contain at least one pair failing the
 * separation threshold.
 */
inline double random_pairing_degradation_rate(const UserPopulation& pop, double threshold,
                                              std::size_t trials, std::mt19937_64& rng) {
    auto pairings = enumerate_pairings(pop);
    std::array<bool, 3> degraded{};
    for (std::size_t i = 0; i < pairings.size(); ++i)
        degraded[i] = pairing_degraded(pop, pairings[i], threshold);
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t)
        hits += degraded[uniform_below(rng, pairings.size())];
    return trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
}

/// Uniformly random perfect matching; no channel-gain filter is applied.
inline Pairing lpma_round_robin_pairing(const UserPopulation& pop, std::mt19937_64& rng) {
    if (pop.size() % 2 != 0 || pop.empty())
        throw std::invalid_argument("round-robin pairing needs a non-empty even population");
    std::vector<int> ids;
    ids.reserve(pop.size());
    for (const auto& u : pop) ids.push_back(u.user_id);
    for (std::size_t i = ids.size(); i > 1; --i)
        std::swap(ids[i - 1], ids[uniform_below(rng, i)]);
    Pairing out;
    for (std::size_t i = 0; i < ids.size(); i += 2) out.pairs.push_back({ids[i], ids[i + 1]});
    return out;
}

}  // namespace lpma
