#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lpma/ring.hpp"
#include "lpma/rng.hpp"

namespace lpma {

/// Downlink link-budget parameters (macro-cell defaults).
struct LinkBudget {
    double tx_power_dbm = 46.0;
    double noise_density_dbm_hz = -174.0;
    double noise_figure_db = 5.0;
    double bandwidth_hz = 10e6;
    double pathloss_intercept_db = 21.5;
    double pathloss_slope = 36.7;
};

/// Per-user channel state for one transmission: complex gain and noise
/// variance per complex symbol.
struct ChannelRealization {
    ComplexSample h{1.0, 0.0};
    double sigma2{1.0};
};

inline double pathloss_db(const LinkBudget& budget, double distance_km) {
    if (distance_km <= 0.0) throw std::invalid_argument("distance must be positive");
    return budget.pathloss_intercept_db + budget.pathloss_slope * std::log10(distance_km);
}

inline double pathloss_db(double distance_km) { return pathloss_db(LinkBudget{}, distance_km); }

/// Mean receive SNR (linear) from the link budget at the given distance.
inline double snr_from_budget(const LinkBudget& budget, double distance_km) {
    if (budget.bandwidth_hz <= 0.0) throw std::invalid_argument("bandwidth must be positive");
    double noise_floor_dbm = budget.noise_density_dbm_hz +
                             10.0 * std::log10(budget.bandwidth_hz) + budget.noise_figure_db;
    double snr_db = budget.tx_power_dbm - pathloss_db(budget, distance_km) - noise_floor_dbm;
    return std::pow(10.0, snr_db / 10.0);
}

/// Unit mean-square-magnitude Rayleigh fading coefficient.
inline ComplexSample rayleigh_sample(std::mt19937_64& rng) { return complex_normal(rng, 1.0); }

/// y = h*x + z with z ~ CN(0, sigma2) i.i.d. per symbol.
inline std::vector<ComplexSample> apply_channel(const std::vector<ComplexSample>& x,
                                                const ChannelRealization& real,
                                                std::mt19937_64& rng) {
    std::vector<ComplexSample> y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        ComplexSample z = real.sigma2 > 0.0 ? complex_normal(rng, real.sigma2) : ComplexSample{0.0, 0.0};
        y[j] = real.h * x[j] + z;
    }
    return y;
}

}  // namespace lpma
