#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lpma {

/// Power-domain superposition configuration: total power and the per-user
/// split, weakest user first.
struct NomaConfig {
    double total_power{1.0};
    std::vector<double> alpha{0.5, 0.5};
};

namespace detail {
inline void check_fractions(const std::vector<double>& f, const char* what) {
    double sum = 0.0;
    for (double v : f) {
        if (v < 0.0) throw std::invalid_argument(std::string(what) + " must be non-negative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument(std::string(what) + " must sum to 1");
}
}  // namespace detail

/**
 * Two-user downlink superposition rate pair in bits/symbol. Gains must be
 * sorted ascending: the weak user treats the strong user's power as noise,
 * the strong user cancels the weak user's layer first.
 */
inline std::pair<double, double> noma_rates(const NomaConfig& cfg, double gain_weak,
                                            double gain_strong) {
    if (cfg.alpha.size() != 2) throw std::invalid_argument("two-user rates need two alpha values");
    detail::check_fractions(cfg.alpha, "power allocation");
    if (cfg.total_power < 0.0) throw std::invalid_argument("power must be non-negative");
    if (gain_weak < 0.0 || gain_strong < 0.0) throw std::invalid_argument("gains must be non-negative");
    if (gain_weak > gain_strong) throw std::invalid_argument("gains must be sorted ascending");
    const double p = cfg.total_power;
    double r1 = std::log2(1.0 + p * cfg.alpha[0] * gain_weak / (p * cfg.alpha[1] * gain_weak + 1.0));
    double r2 = std::log2(1.0 + p * cfg.alpha[1] * gain_strong);
    return {r1, r2};
}

/// Sum of the two-user rates; collapses to the single-user capacity
/// log2(1 + P*g) whenever the two gains coincide, for any split.
inline double noma_sum_rate(const NomaConfig& cfg, double gain_weak, double gain_strong) {
    auto [r1, r2] = noma_rates(cfg, gain_weak, gain_strong);
    return r1 + r2;
}

/**
 * Degraded-broadcast SIC chain for L >= 2 users (gains ascending): user i
 * decodes its own layer treating all stronger-ordered users' power as noise.
 * Reduces to the two-user rate pair for L = 2.
 */
inline std::vector<double> noma_rates_general(double total_power, const std::vector<double>& alpha,
                                              const std::vector<double>& gains_ascending) {
    if (alpha.size() != gains_ascending.size() || alpha.size() < 2)
        throw std::invalid_argument("need matching alpha/gain lists of size >= 2");
    detail::check_fractions(alpha, "power allocation");
    for (std::size_t i = 1; i < gains_ascending.size(); ++i)
        if (gains_ascending[i - 1] > gains_ascending[i])
            throw std::invalid_argument("gains must be sorted ascending");
    std::vector<double> rates(alpha.size());
    double tail = 0.0;
    for (std::size_t i = alpha.size(); i-- > 0;) {
        double g = gains_ascending[i];
        rates[i] = std::log2(1.0 + total_power * alpha[i] * g / (total_power * tail * g + 1.0));
        tail += alpha[i];
    }
    return rates;
}

/// Orthogonal time-sharing rates: R_i = share_i * log2(1 + P*g_i).
inline std::vector<double> oma_rates(double total_power, const std::vector<double>& gains,
                                     const std::vector<double>& time_shares) {
    if (gains.size() != time_shares.size())
        throw std::invalid_argument("gains and shares must have equal length");
    detail::check_fractions(time_shares, "time shares");
    std::vector<double> rates(gains.size());
    for (std::size_t i = 0; i < gains.size(); ++i)
        rates[i] = time_shares[i] * std::log2(1.0 + total_power * gains[i]);
    return rates;
}

}  // namespace lpma
