#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpma/linear_code.hpp"
#include "lpma/ring.hpp"

namespace lpma {

/// One code level: the owning user, its prime theta, and its FEC code over
/// the residue field of theta.
struct LevelConfig {
    int user_id{0};
    RingPrime theta;
    LinearCode code;
};

/**
 * Immutable multilevel configuration. Construction data derived once:
 * the modulus M = prod(theta_l), the centered representative set of R/MR,
 * the power-minimizing dither, the power scaling beta, and per-level
 * cofactor weights with their inverses mod theta_l.
 *
 * Level indices are 1-based throughout the decoder API, level 1 being the
 * first level peeled off in successive decoding.
 */
struct LpmaConfig {
    RingDomain domain{RingDomain::integers};
    std::vector<LevelConfig> levels;
    std::size_t block_length{1};
    double power{1.0};

    RingElement modulus;
    std::vector<RingElement> representatives;
    ComplexSample dither{0.0, 0.0};
    double beta{1.0};
    std::vector<RingElement> cofactors;          // prod of the other primes
    std::vector<RingElement> cofactor_inverses;  // inverse of cofactor mod own prime

    std::size_t level_count() const { return levels.size(); }

    const LevelConfig& level(std::size_t index_1based) const {
        if (index_1based < 1 || index_1based > levels.size())
            throw std::invalid_argument("level index out of range");
        return levels[index_1based - 1];
    }
};

/// Pre-scaling, pre-dither lattice codeword: centered representatives mod M.
struct LatticeWord {
    std::vector<RingElement> symbols;
};

/// Scaled, dithered transmit block.
struct TransmitSignal {
    std::vector<ComplexSample> samples;
};

enum class DecoderKind { sic, pic, hybrid };

inline const char* decoder_name(DecoderKind k) {
    switch (k) {
        case DecoderKind::sic: return "sic";
        case DecoderKind::pic: return "pic";
        case DecoderKind::hybrid: return "hybrid";
    }
    return "?";
}

struct LevelDecode {
    std::size_t level{0};  // 1-based
    Message w_hat;
    Codeword v_hat;
    std::optional<bool> correct;
};

struct DecodeResult {
    DecoderKind kind{DecoderKind::sic};
    std::vector<LevelDecode> levels;

    const LevelDecode& entry(std::size_t level_1based) const {
        for (const auto& e : levels)
            if (e.level == level_1based) return e;
        throw std::invalid_argument("level " + std::to_string(level_1based) + " was not decoded");
    }
};

struct ScalingAndDither {
    double beta{1.0};
    ComplexSample dither{0.0, 0.0};
};

/**
 * Dither and power scaling for a given modulus: the dither centers the
 * embedded representative set at zero, and beta stretches the centered
 * constellation to average energy P under a uniform symbol distribution.
 */
inline ScalingAndDither derive_scaling_and_dither(const RingElement& modulus, double power,
                                                  const std::vector<RingElement>& representatives) {
    if (power <= 0.0) throw std::invalid_argument("power must be positive");
    if (representatives.empty()) throw std::invalid_argument("empty representative set");
    ComplexSample mean{0.0, 0.0};
    for (const auto& r : representatives) mean += embed(r);
    mean /= static_cast<double>(representatives.size());
    ComplexSample dither = -mean;
    double energy = 0.0;
    for (const auto& r : representatives) energy += std::norm(embed(r) + dither);
    energy /= static_cast<double>(representatives.size());
    if (energy <= 0.0) throw std::invalid_argument("degenerate constellation (modulus " +
                                                   to_string(modulus) + ")");
    return {std::sqrt(power / energy), dither};
}

inline ScalingAndDither derive_scaling_and_dither(const RingElement& modulus, double power) {
    return derive_scaling_and_dither(modulus, power, coset_representatives(modulus));
}

/**
 * Builds and validates the full configuration: primes must live in the
 * stated domain and be pairwise coprime, every code must match its level's
 * residue field and share the common block length.
 */
inline LpmaConfig make_lpma_config(RingDomain domain, std::vector<LevelConfig> levels,
                                   std::size_t block_length, double power) {
    if (levels.empty()) throw std::invalid_argument("need at least one code level");
    if (block_length == 0) throw std::invalid_argument("block length must be positive");

    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto& lv = levels[i];
        std::string tag = "level " + std::to_string(i + 1);
        if (lv.theta.value.domain != domain)
            throw std::invalid_argument(tag + ": prime domain differs from configuration domain");
        if (lv.code.q != lv.theta.residue_field_size)
            throw std::invalid_argument(tag + ": code field size " + std::to_string(lv.code.q) +
                                        " does not match residue field size " +
                                        std::to_string(lv.theta.residue_field_size));
        if (lv.code.n != block_length)
            throw std::invalid_argument(tag + ": code block length differs from configuration");
        for (std::size_t j = 0; j < i; ++j) {
            if (levels[j].user_id == lv.user_id)
                throw std::invalid_argument("duplicate user id " + std::to_string(lv.user_id));
            if (!is_unit(gcd(levels[j].theta.value, lv.theta.value)))
                throw std::invalid_argument("primes " + to_string(levels[j].theta.value) + " and " +
                                            to_string(lv.theta.value) + " are not coprime");
        }
    }

    LpmaConfig cfg;
    cfg.domain = domain;
    cfg.levels = std::move(levels);
    cfg.block_length = block_length;
    cfg.power = power;

    cfg.modulus = RingElement{domain, 1, 0};
    for (const auto& lv : cfg.levels) cfg.modulus = mul(cfg.modulus, lv.theta.value);

    cfg.cofactors.reserve(cfg.levels.size());
    cfg.cofactor_inverses.reserve(cfg.levels.size());
    for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
        RingElement cof{domain, 1, 0};
        for (std::size_t j = 0; j < cfg.levels.size(); ++j)
            if (j != i) cof = mul(cof, cfg.levels[j].theta.value);
        cfg.cofactors.push_back(cof);
        cfg.cofactor_inverses.push_back(inverse_mod(cof, cfg.levels[i].theta));
    }

    cfg.representatives = coset_representatives(cfg.modulus);
    auto scaling = derive_scaling_and_dither(cfg.modulus, power, cfg.representatives);
    cfg.beta = scaling.beta;
    cfg.dither = scaling.dither;
    return cfg;
}

/**
 * Element-wise superposition map: symbol j of the lattice word is the
 * centered representative of sum_l lift(v_l[j]) * cofactor_l modulo M.
 * Restricted to one symbol this is the CRT ring isomorphism
 * F_{q_1} x ... x F_{q_L} -> R/MR.
 */
inline LatticeWord map_pi_a(const LpmaConfig& cfg, const std::vector<Codeword>& codewords) {
    if (codewords.size() != cfg.level_count())
        throw std::invalid_argument("expected one codeword per level");
    for (std::size_t l = 0; l < codewords.size(); ++l)
        detail::check_symbols(codewords[l], cfg.block_length, cfg.levels[l].code.q, "codeword");

    LatticeWord word;
    word.symbols.reserve(cfg.block_length);
    for (std::size_t j = 0; j < cfg.block_length; ++j) {
        RingElement acc{cfg.domain, 0, 0};
        for (std::size_t l = 0; l < codewords.size(); ++l)
            acc = add(acc, mul(lift_field_symbol(cfg.domain, codewords[l][j]), cfg.cofactors[l]));
        word.symbols.push_back(mod_ring(acc, cfg.modulus));
    }
    return word;
}

/// x = beta * (embed(W) + u).
inline TransmitSignal lpma_encode(const LpmaConfig& cfg, const std::vector<Message>& messages) {
    if (messages.size() != cfg.level_count())
        throw std::invalid_argument("expected one message per level");
    std::vector<Codeword> codewords;
    codewords.reserve(messages.size());
    for (std::size_t l = 0; l < messages.size(); ++l)
        codewords.push_back(fec_encode(cfg.levels[l].code, messages[l]));

    LatticeWord word = map_pi_a(cfg, codewords);
    TransmitSignal x;
    x.samples.reserve(cfg.block_length);
    for (const auto& s : word.symbols) x.samples.push_back(cfg.beta * (embed(s) + cfg.dither));
    return x;
}

/**
 * Inverts the channel gain and the transmit scaling, then removes the
 * dither, so the result lives in unscaled lattice coordinates where the
 * per-prime modulo operation is meaningful:  y/(h*beta) - u = W + z/(h*beta).
 */
inline std::vector<ComplexSample> channel_compensate(const LpmaConfig& cfg,
                                                     const std::vector<ComplexSample>& received,
                                                     ComplexSample h) {
    if (h == ComplexSample{0.0, 0.0}) throw std::domain_error("zero channel gain");
    std::vector<ComplexSample> out(received.size());
    const ComplexSample scale = h * cfg.beta;
    for (std::size_t j = 0; j < received.size(); ++j) {
        out[j] = received[j] / scale - cfg.dither;
        detail::ensure_finite(out[j]);
    }
    return out;
}

/**
 * Peels one code level off a residual: fold each symbol modulo theta_l,
 * quantize to the nearest ring element, undo the cofactor weight inside the
 * residue field, and hand the symbol vector to the level's FEC decoder.
 */
inline std::pair<Message, Codeword> extract_level(const LpmaConfig& cfg,
                                                  const std::vector<ComplexSample>& residual,
                                                  std::size_t level_1based) {
    const LevelConfig& lv = cfg.level(level_1based);
    const RingElement& inv = cfg.cofactor_inverses[level_1based - 1];
    std::vector<FieldSymbol> folded(residual.size());
    for (std::size_t j = 0; j < residual.size(); ++j) {
        ComplexSample f = mod_fold(residual[j], lv.theta.value);
        RingElement s = quantize_to_ring(f, cfg.domain);
        folded[j] = ring_to_field(mul(mod_ring(s, lv.theta.value), inv), lv.theta);
    }
    return fec_decode(lv.code, folded);
}

namespace detail {
inline void subtract_reconstruction(const LpmaConfig& cfg, std::vector<ComplexSample>& residual,
                                    std::size_t level_1based, const Codeword& v_hat) {
    const RingElement& cof = cfg.cofactors[level_1based - 1];
    for (std::size_t j = 0; j < residual.size(); ++j)
        residual[j] -= embed(mul(lift_field_symbol(cfg.domain, v_hat[j]), cof));
}
}  // namespace detail

/**
 * Successive decoding of levels 1..target: each decoded level is re-encoded
 * and its weighted reconstruction subtracted in signal space before the
 * next level is folded out.
 */
inline DecodeResult mlo_sic_decode(const LpmaConfig& cfg,
                                   const std::vector<ComplexSample>& compensated,
                                   std::size_t target_level) {
    if (target_level < 1 || target_level > cfg.level_count())
        throw std::invalid_argument("target level out of range");
    DecodeResult result{DecoderKind::sic, {}};
    std::vector<ComplexSample> residual = compensated;
    for (std::size_t l = 1; l <= target_level; ++l) {
        auto [w_hat, v_hat] = extract_level(cfg, residual, l);
        if (l < target_level) detail::subtract_reconstruction(cfg, residual, l, v_hat);
        result.levels.push_back({l, std::move(w_hat), std::move(v_hat), std::nullopt});
    }
    return result;
}

/// One-shot parallel extraction of a single level: one fold, no subtraction.
inline DecodeResult mlo_pic_decode(const LpmaConfig& cfg,
                                   const std::vector<ComplexSample>& compensated,
                                   std::size_t level_1based) {
    auto [w_hat, v_hat] = extract_level(cfg, compensated, level_1based);
    return {DecoderKind::pic, {{level_1based, std::move(w_hat), std::move(v_hat), std::nullopt}}};
}

/**
 * Hybrid receiver: the levels in pic_levels are extracted in parallel from
 * the compensated signal, their reconstructions are subtracted, and the
 * remaining levels are decoded successively on the cleaned residual in the
 * order given by sic_levels.
 */
inline DecodeResult hybrid_decode(const LpmaConfig& cfg,
                                  const std::vector<ComplexSample>& compensated,
                                  const std::vector<std::size_t>& pic_levels,
                                  const std::vector<std::size_t>& sic_levels) {
    std::vector<bool> seen(cfg.level_count() + 1, false);
    auto claim = [&seen, &cfg](std::size_t l) {
        if (l < 1 || l > cfg.level_count()) throw std::invalid_argument("level index out of range");
        if (seen[l]) throw std::invalid_argument("level " + std::to_string(l) +
                                                 " appears in both decoding sets");
        seen[l] = true;
    };
    for (std::size_t l : pic_levels) claim(l);
    for (std::size_t l : sic_levels) claim(l);
    if (pic_levels.empty() && sic_levels.empty())
        throw std::invalid_argument("hybrid split decodes no levels");

    DecodeResult result{DecoderKind::hybrid, {}};
    std::vector<ComplexSample> residual = compensated;
    for (std::size_t l : pic_levels) {
        auto [w_hat, v_hat] = extract_level(cfg, compensated, l);
        detail::subtract_reconstruction(cfg, residual, l, v_hat);
        result.levels.push_back({l, std::move(w_hat), std::move(v_hat), std::nullopt});
    }
    for (std::size_t l : sic_levels) {
        auto [w_hat, v_hat] = extract_level(cfg, residual, l);
        detail::subtract_reconstruction(cfg, residual, l, v_hat);
        result.levels.push_back({l, std::move(w_hat), std::move(v_hat), std::nullopt});
    }
    return result;
}

/// Throughput credited to a level when its message decodes correctly.
inline double level_throughput_bits(const LevelConfig& lv) {
    return lv.code.rate() * std::log2(static_cast<double>(lv.theta.residue_field_size));
}

}  // namespace lpma
