#pragma once

#include <array>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "lpma/simulate.hpp"

namespace lpma {

struct CheckResult {
    std::string name;
    bool passed{false};
    double seconds{0.0};
    std::vector<std::string> details;
};

namespace acceptance {

inline std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return buf;
}

inline LpmaConfig two_level_config(RingDomain domain, std::pair<std::int64_t, std::int64_t> p1,
                                   std::pair<std::int64_t, std::int64_t> p2, std::size_t n,
                                   double power) {
    RingPrime t1 = make_ring_prime(make_element(domain, p1.first, p1.second));
    RingPrime t2 = make_ring_prime(make_element(domain, p2.first, p2.second));
    std::vector<LevelConfig> levels{
        {1, t1, make_identity_code(t1.residue_field_size, n)},
        {2, t2, make_identity_code(t2.residue_field_size, n)},
    };
    return make_lpma_config(domain, std::move(levels), n, power);
}

/// Exhaustive per-symbol bijection onto the representative set, and exact
/// noiseless recovery through every receiver, for both reference prime sets.
inline CheckResult check_bijection_and_round_trip() {
    CheckResult res{"construction-bijection-and-noiseless-round-trip", true, 0.0, {}};
    struct Case {
        RingDomain domain;
        std::pair<std::int64_t, std::int64_t> p1, p2;
    };
    for (const Case& c : {Case{RingDomain::integers, {2, 0}, {7, 0}},
                          Case{RingDomain::eisenstein, {2, 3}, {3, 2}}}) {
        LpmaConfig cfg = two_level_config(c.domain, c.p1, c.p2, 1, 1.0);
        const std::int64_t q1 = cfg.levels[0].code.q;
        const std::int64_t q2 = cfg.levels[1].code.q;

        std::vector<RingElement> image;
        for (std::int64_t v1 = 0; v1 < q1; ++v1) {
            for (std::int64_t v2 = 0; v2 < q2; ++v2) {
                LatticeWord w = map_pi_a(cfg, {Codeword{v1}, Codeword{v2}});
                image.push_back(w.symbols[0]);

                TransmitSignal x = lpma_encode(cfg, {Message{v1}, Message{v2}});
                auto comp = channel_compensate(cfg, x.samples, {1.0, 0.0});
                DecodeResult sic = mlo_sic_decode(cfg, comp, 2);
                DecodeResult pic1 = mlo_pic_decode(cfg, comp, 1);
                DecodeResult pic2 = mlo_pic_decode(cfg, comp, 2);
                DecodeResult hyb = hybrid_decode(cfg, comp, {2}, {1});
                bool ok = sic.entry(1).w_hat == Message{v1} && sic.entry(2).w_hat == Message{v2} &&
                          pic1.entry(1).w_hat == Message{v1} && pic2.entry(2).w_hat == Message{v2} &&
                          hyb.entry(1).w_hat == Message{v1} && hyb.entry(2).w_hat == Message{v2};
                if (!ok) {
                    res.passed = false;
                    res.details.push_back(format("%s: round trip failed at (v1=%lld, v2=%lld)",
                                                 domain_name(c.domain), static_cast<long long>(v1),
                                                 static_cast<long long>(v2)));
                }
            }
        }
        std::sort(image.begin(), image.end(), [](const RingElement& x, const RingElement& y) {
            return x.a < y.a || (x.a == y.a && x.b < y.b);
        });
        bool distinct = std::adjacent_find(image.begin(), image.end()) == image.end();
        if (!distinct || image != cfg.representatives) {
            res.passed = false;
            res.details.push_back(format("%s: symbol map is not a bijection onto R/MR",
                                         domain_name(c.domain)));
        }
    }
    return res;
}

/// The worked two-level instance over Z with primes (2, 7): the folded
/// representative of 7*1 + 2*3 is -1 and successive decoding recovers
/// (v1, v2) = (1, 3) through the cofactor-inverse descaling chain.
inline CheckResult check_worked_sic_chain() {
    CheckResult res{"worked-two-level-sic-chain", true, 0.0, {}};
    LpmaConfig cfg = two_level_config(RingDomain::integers, {2, 0}, {7, 0}, 1, 16.25);

    LatticeWord w = map_pi_a(cfg, {Codeword{1}, Codeword{3}});
    if (!(w.symbols[0] == make_element(RingDomain::integers, -1))) {
        res.passed = false;
        res.details.push_back("folded representative of 7*1 + 2*3 mod 14 is not -1");
    }
    RingElement inv1 = inverse_mod(make_element(RingDomain::integers, 7), cfg.levels[0].theta);
    RingElement inv2 = inverse_mod(make_element(RingDomain::integers, 2), cfg.levels[1].theta);
    if (!(inv1 == make_element(RingDomain::integers, 1)) ||
        !(inv2 == make_element(RingDomain::integers, 4))) {
        res.passed = false;
        res.details.push_back("descaling inverses are not (7^-1 mod 2, 2^-1 mod 7) = (1, 4)");
    }

    TransmitSignal x = lpma_encode(cfg, {Message{1}, Message{3}});
    auto comp = channel_compensate(cfg, x.samples, {1.0, 0.0});
    DecodeResult sic = mlo_sic_decode(cfg, comp, 2);
    if (!(sic.entry(1).v_hat == Codeword{1} && sic.entry(2).v_hat == Codeword{3})) {
        res.passed = false;
        res.details.push_back("successive decoding did not recover (v1, v2) = (1, 3)");
    }
    return res;
}

/// Two-user sum rate at identical gains equals the single-user capacity for
/// any power split, to 1e-12 over random draws.
inline CheckResult check_equal_gain_collapse() {
    CheckResult res{"equal-gain-sum-rate-collapse", true, 0.0, {}};
    std::mt19937_64 rng = substream_rng(424242, 0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double p = std::pow(10.0, -1.0 + 4.0 * uniform_unit(rng));
        double g = std::pow(10.0, -2.0 + 4.0 * uniform_unit(rng));
        double a1 = uniform_unit(rng);
        double sum = noma_sum_rate(NomaConfig{p, {a1, 1.0 - a1}}, g, g);
        double err = std::abs(sum - std::log2(1.0 + p * g));
        worst = std::max(worst, err);
    }
    if (worst >= 1e-12) {
        res.passed = false;
        res.details.push_back(format("worst identity error %.3e >= 1e-12", worst));
    }
    return res;
}

/// Uniformly random pairing of the default 4-user population degrades the
/// superposition pairing one time in three; round-robin pairing never does.
inline CheckResult check_pairing_degradation() {
    CheckResult res{"random-pairing-degradation", true, 0.0, {}};
    PairingStudyConfig cfg;
    cfg.trials = 100000;
    cfg.seed = 7;
    PairingStudyReport report = run_pairing_study(cfg);
    res.details.push_back(format("noma degradation %.4f, lpma degradation %.4f",
                                 report.noma_degradation_rate, report.lpma_degradation_rate));
    if (std::abs(report.noma_degradation_rate - 1.0 / 3.0) > 0.02) res.passed = false;
    if (report.lpma_degradation_rate != 0.0) res.passed = false;
    return res;
}

/// Equal-gain SNR sweep: wherever the multilevel decoder is reliable
/// (success >= 0.99 per user), the simulated LPMA sum throughput must beat
/// the formula-based NOMA and equal-share OMA sums.
inline CheckResult check_equal_gain_throughput_ordering() {
    CheckResult res{"equal-gain-throughput-ordering", true, 0.0, {}};
    for (double snr_db : {10.0, 15.0, 20.0, 25.0, 30.0}) {
        ExperimentConfig cfg;
        cfg.schemes = {Scheme::lpma, Scheme::noma, Scheme::oma};
        cfg.gain_model = GainModelKind::snr_db;
        cfg.gain_values = {snr_db, snr_db};
        cfg.domain = RingDomain::eisenstein;
        cfg.primes = {{2, 3}, {3, 2}};
        cfg.codes = {CodeKind::identity, CodeKind::identity};
        cfg.block_length = 256;
        cfg.decoder.kind = DecoderKind::sic;
        cfg.noma_alpha = {0.5, 0.5};
        cfg.trials = 10000;
        cfg.seed = 1000 + static_cast<std::uint64_t>(snr_db);
        cfg.workers = std::max(1u, std::min(4u, std::thread::hardware_concurrency()));
        ThroughputReport report = run_experiment(cfg);

        double min_success = 1.0;
        for (const auto& row : report.rows)
            if (row.scheme == Scheme::lpma) min_success = std::min(min_success, row.success_rate);
        double lpma_sum = report.sum_throughput.at("LPMA");
        double noma_sum = report.sum_throughput.at("NOMA");
        double oma_sum = report.sum_throughput.at("OMA");

        if (min_success >= 0.99) {
            bool wins = lpma_sum > noma_sum && lpma_sum > oma_sum;
            if (!wins) res.passed = false;
            res.details.push_back(format(
                "snr=%2.0f dB: lpma_sum=%.3f noma_sum=%.3f oma_sum=%.3f success=%.4f -> %s",
                snr_db, lpma_sum, noma_sum, oma_sum, min_success,
                wins ? "ordering holds" : "ORDERING VIOLATED"));
        } else {
            res.details.push_back(format(
                "snr=%2.0f dB: lpma_sum=%.3f noma_sum=%.3f oma_sum=%.3f success=%.4f -> skipped "
                "(below reliability gate)",
                snr_db, lpma_sum, noma_sum, oma_sum, min_success));
        }
    }
    return res;
}

/// The fast nearest-point quantizer must agree exactly with a brute-force
/// search under the shared tie policy, in every domain.
inline CheckResult check_quantizer_oracle() {
    CheckResult res{"nearest-point-quantizer-oracle", true, 0.0, {}};
    for (RingDomain d : {RingDomain::integers, RingDomain::gaussian, RingDomain::eisenstein}) {
        std::mt19937_64 rng = substream_rng(606060, static_cast<std::uint64_t>(d));
        for (int i = 0; i < 10000 && res.passed; ++i) {
            ComplexSample s{-8.0 + 16.0 * uniform_unit(rng),
                            d == RingDomain::integers ? 0.0 : -8.0 + 16.0 * uniform_unit(rng)};
            RingElement fast = quantize_to_ring(s, d);

            auto [ar, br] = ring_coordinates(s, d);
            auto a0 = static_cast<std::int64_t>(std::llround(ar));
            auto b0 = static_cast<std::int64_t>(std::llround(br));
            bool have = false;
            RingElement best{};
            double best_d2 = 0.0;
            const std::int64_t bspan = d == RingDomain::integers ? 0 : 5;
            for (std::int64_t db = -bspan; db <= bspan; ++db) {
                for (std::int64_t da = -6; da <= 6; ++da) {
                    RingElement cand{d, a0 + da, b0 + db};
                    double d2 = std::norm(s - embed(cand));
                    if (!have || d2 < best_d2 ||
                        (d2 == best_d2 &&
                         (cand.a < best.a || (cand.a == best.a && cand.b < best.b)))) {
                        have = true;
                        best = cand;
                        best_d2 = d2;
                    }
                }
            }
            if (!(fast == best)) {
                res.passed = false;
                res.details.push_back(format("%s: mismatch at (%.6f, %.6f)", domain_name(d),
                                             s.real(), s.imag()));
            }
        }
    }
    return res;
}

/// Per-level symbol error rates must not increase with SNR, and the
/// parallel receiver can never beat the successive one.
inline CheckResult check_monotonicity_and_pic_vs_sic() {
    CheckResult res{"error-rate-monotonicity-and-pic-vs-sic", true, 0.0, {}};
    const std::size_t n = 64;
    const std::size_t trials = 1563;  // >= 1e5 symbols per point
    const std::vector<double> snr_db{16.0, 20.0, 24.0, 28.0};

    std::vector<std::array<double, 2>> sic_ser, pic_ser;
    for (double snr : snr_db) {
        double power = std::pow(10.0, snr / 10.0);
        LpmaConfig cfg = two_level_config(RingDomain::integers, {2, 0}, {7, 0}, n, power);
        std::array<std::size_t, 2> sic_err{0, 0}, pic_err{0, 0};
        for (std::size_t t = 0; t < trials; ++t) {
            // common random numbers across SNR points
            std::mt19937_64 rng = substream_rng(909090, t);
            std::vector<Message> msgs(2);
            for (std::size_t l = 0; l < 2; ++l) {
                msgs[l].resize(n);
                for (auto& sym : msgs[l])
                    sym = static_cast<FieldSymbol>(
                        uniform_below(rng, static_cast<std::uint64_t>(cfg.levels[l].code.q)));
            }
            TransmitSignal x = lpma_encode(cfg, msgs);
            auto y = apply_channel(x.samples, {{1.0, 0.0}, 1.0}, rng);
            auto comp = channel_compensate(cfg, y, {1.0, 0.0});
            DecodeResult sic = mlo_sic_decode(cfg, comp, 2);
            for (std::size_t l = 0; l < 2; ++l) {
                DecodeResult pic = mlo_pic_decode(cfg, comp, l + 1);
                for (std::size_t j = 0; j < n; ++j) {
                    sic_err[l] += sic.entry(l + 1).v_hat[j] != msgs[l][j];
                    pic_err[l] += pic.entry(l + 1).v_hat[j] != msgs[l][j];
                }
            }
        }
        const double denom = static_cast<double>(trials * n);
        sic_ser.push_back({sic_err[0] / denom, sic_err[1] / denom});
        pic_ser.push_back({pic_err[0] / denom, pic_err[1] / denom});
        res.details.push_back(format("snr=%2.0f dB: sic_ser=(%.2e, %.2e) pic_ser=(%.2e, %.2e)",
                                     snr, sic_ser.back()[0], sic_ser.back()[1], pic_ser.back()[0],
                                     pic_ser.back()[1]));
    }
    for (std::size_t i = 0; i < snr_db.size(); ++i) {
        for (std::size_t l = 0; l < 2; ++l) {
            if (i > 0 && (sic_ser[i][l] > sic_ser[i - 1][l] || pic_ser[i][l] > pic_ser[i - 1][l])) {
                res.passed = false;
                res.details.push_back(format("level %zu: error rate increased with SNR", l + 1));
            }
            if (pic_ser[i][l] < sic_ser[i][l]) {
                res.passed = false;
                res.details.push_back(format("level %zu: pic beat sic at %.0f dB", l + 1, snr_db[i]));
            }
        }
    }
    return res;
}

/// Identical seed and config must reproduce byte-identical outputs, and the
/// worker count must not affect the results.
inline CheckResult check_simulate_determinism() {
    CheckResult res{"simulate-determinism", true, 0.0, {}};
    ExperimentConfig cfg;
    cfg.schemes = {Scheme::lpma, Scheme::noma, Scheme::oma};
    cfg.gain_model = GainModelKind::snr_db;
    cfg.gain_values = {18.0, 24.0};
    cfg.domain = RingDomain::integers;
    cfg.primes = {{2, 0}, {7, 0}};
    cfg.codes = {CodeKind::identity, CodeKind::identity};
    cfg.block_length = 32;
    cfg.decoder.kind = DecoderKind::sic;
    cfg.noma_alpha = {0.8, 0.2};
    cfg.rayleigh_fading = true;
    cfg.trials = 400;
    cfg.seed = 77;

    ThroughputReport r1 = run_experiment(cfg);
    ThroughputReport r2 = run_experiment(cfg);
    if (report_to_csv(r1) != report_to_csv(r2) || report_to_json(r1) != report_to_json(r2)) {
        res.passed = false;
        res.details.push_back("repeated identical runs differ");
    }
    ExperimentConfig parallel = cfg;
    parallel.workers = 3;
    ThroughputReport r3 = run_experiment(parallel);
    if (report_to_csv(r1) != report_to_csv(r3)) {
        res.passed = false;
        res.details.push_back("worker count changed the results");
    }
    return res;
}

}  // namespace acceptance

/// Runs every acceptance check, printing one pass/fail line (with timing)
/// per check plus any detail lines. Returns the number of failed checks.
inline std::size_t run_acceptance_suite(std::ostream& out) {
    using Clock = std::chrono::steady_clock;
    std::vector<CheckResult (*)()> checks{
        acceptance::check_bijection_and_round_trip,
        acceptance::check_worked_sic_chain,
        acceptance::check_equal_gain_collapse,
        acceptance::check_pairing_degradation,
        acceptance::check_equal_gain_throughput_ordering,
        acceptance::check_quantizer_oracle,
        acceptance::check_monotonicity_and_pic_vs_sic,
        acceptance::check_simulate_determinism,
    };
    std::size_t failures = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        auto start = Clock::now();
        CheckResult res = checks[i]();
        res.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        if (!res.passed) ++failures;
        out << acceptance::format("[%zu/%zu] %s  %-45s (%.2f s)\n", i + 1, checks.size(),
                                  res.passed ? "PASS" : "FAIL", res.name.c_str(), res.seconds);
        for (const auto& line : res.details) out << "        " << line << "\n";
    }
    out << (failures == 0 ? "all acceptance checks passed\n"
                          : acceptance::format("%zu acceptance check(s) failed\n", failures));
    return failures;
}

}  // namespace lpma
