#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lpma/baselines.hpp"
#include "lpma/channel.hpp"
#include "lpma/codec.hpp"
#include "lpma/linear_code.hpp"
#include "lpma/pairing.hpp"
#include "lpma/ring.hpp"
#include "lpma/rng.hpp"

#ifndef LPMA_GIT_DESCRIBE
#define LPMA_GIT_DESCRIBE "unknown"
#endif

namespace lpma {

using ordered_json = nlohmann::ordered_json;

/// Configuration problems carry precise messages and map to exit code 1.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scheme { lpma, noma, oma };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::lpma: return "LPMA";
        case Scheme::noma: return "NOMA";
        case Scheme::oma: return "OMA";
    }
    return "?";
}

enum class GainModelKind { explicit_gains, snr_db, distances_km };
enum class CodeKind { identity, repetition, parity };

struct DecoderSpec {
    DecoderKind kind{DecoderKind::sic};
    std::vector<std::size_t> pic_levels;  // 1-based, hybrid only
    std::vector<std::size_t> sic_levels;  // 1-based, hybrid only
};

struct ExperimentConfig {
    std::vector<Scheme> schemes;

    // channel / users
    GainModelKind gain_model{GainModelKind::explicit_gains};
    std::vector<double> gain_values;  // meaning depends on gain_model
    LinkBudget budget;
    bool rayleigh_fading{false};
    bool noiseless{false};
    double power{1.0};  // total transmit power in explicit-gains mode

    // lpma
    RingDomain domain{RingDomain::integers};
    std::vector<std::pair<std::int64_t, std::int64_t>> primes;
    std::vector<CodeKind> codes;
    std::size_t block_length{1};
    DecoderSpec decoder;

    // baselines
    std::vector<double> noma_alpha;
    double noma_gain_threshold{2.0};
    std::vector<double> oma_shares;  // empty = equal

    std::size_t trials{0};
    std::uint64_t seed{1};
    std::size_t workers{1};
};

// ---------------------------------------------------------------------------
// config parsing

namespace detail {

inline const ordered_json& require_key(const ordered_json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw config_error(std::string("missing required key '") + key + "' in " + where);
    return *it;
}

inline double require_number(const ordered_json& j, const char* key, const char* where) {
    const auto& v = require_key(j, key, where);
    if (!v.is_number()) throw config_error(std::string("'") + key + "' in " + where + " must be a number");
    return v.get<double>();
}

inline std::vector<double> number_list(const ordered_json& v, const char* what) {
    if (!v.is_array() || v.empty())
        throw config_error(std::string(what) + " must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw config_error(std::string(what) + " must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

}  // namespace detail

inline Scheme parse_scheme(const std::string& s) {
    if (s == "lpma") return Scheme::lpma;
    if (s == "noma") return Scheme::noma;
    if (s == "oma") return Scheme::oma;
    throw config_error("unknown scheme '" + s + "' (expected lpma, noma, or oma)");
}

inline RingDomain parse_domain(const std::string& s) {
    if (s == "integers") return RingDomain::integers;
    if (s == "gaussian") return RingDomain::gaussian;
    if (s == "eisenstein") return RingDomain::eisenstein;
    throw config_error("unknown domain '" + s + "' (expected integers, gaussian, or eisenstein)");
}

inline CodeKind parse_code_kind(const std::string& s) {
    if (s == "identity") return CodeKind::identity;
    if (s == "repetition") return CodeKind::repetition;
    if (s == "parity") return CodeKind::parity;
    throw config_error("unknown code kind '" + s + "' (expected identity, repetition, or parity)");
}

inline ExperimentConfig parse_experiment_config(const ordered_json& j) {
    ExperimentConfig cfg;

    const auto& schemes = detail::require_key(j, "schemes", "config");
    if (!schemes.is_array() || schemes.empty())
        throw config_error("'schemes' must be a non-empty array");
    for (const auto& s : schemes) cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
    auto has = [&cfg](Scheme s) {
        return std::find(cfg.schemes.begin(), cfg.schemes.end(), s) != cfg.schemes.end();
    };

    const auto& chan = detail::require_key(j, "channel", "config");
    std::string gm = detail::require_key(chan, "gain_model", "channel").get<std::string>();
    if (gm == "gains") cfg.gain_model = GainModelKind::explicit_gains;
    else if (gm == "snr_db") cfg.gain_model = GainModelKind::snr_db;
    else if (gm == "distances_km") cfg.gain_model = GainModelKind::distances_km;
    else throw config_error("unknown gain_model '" + gm + "'");
    cfg.gain_values = detail::number_list(detail::require_key(chan, "values", "channel"), "channel.values");
    if (chan.contains("fading")) {
        std::string f = chan.at("fading").get<std::string>();
        if (f == "rayleigh") cfg.rayleigh_fading = true;
        else if (f == "none") cfg.rayleigh_fading = false;
        else throw config_error("unknown fading '" + f + "' (expected none or rayleigh)");
    }
    if (chan.contains("noiseless")) cfg.noiseless = chan.at("noiseless").get<bool>();
    if (chan.contains("link_budget")) {
        const auto& lb = chan.at("link_budget");
        if (lb.contains("tx_power_dbm")) cfg.budget.tx_power_dbm = lb.at("tx_power_dbm").get<double>();
        if (lb.contains("noise_density_dbm_hz"))
            cfg.budget.noise_density_dbm_hz = lb.at("noise_density_dbm_hz").get<double>();
        if (lb.contains("noise_figure_db")) cfg.budget.noise_figure_db = lb.at("noise_figure_db").get<double>();
        if (lb.contains("bandwidth_hz")) cfg.budget.bandwidth_hz = lb.at("bandwidth_hz").get<double>();
        if (lb.contains("pathloss_intercept_db"))
            cfg.budget.pathloss_intercept_db = lb.at("pathloss_intercept_db").get<double>();
        if (lb.contains("pathloss_slope")) cfg.budget.pathloss_slope = lb.at("pathloss_slope").get<double>();
    }

    if (j.contains("power")) {
        cfg.power = j.at("power").get<double>();
        if (cfg.power <= 0.0) throw config_error("'power' must be positive");
    }

    if (has(Scheme::lpma)) {
        const auto& lp = detail::require_key(j, "lpma", "config");
        cfg.domain = parse_domain(detail::require_key(lp, "domain", "lpma").get<std::string>());
        const auto& primes = detail::require_key(lp, "primes", "lpma");
        if (!primes.is_array() || primes.empty()) throw config_error("'lpma.primes' must be a non-empty array");
        for (const auto& p : primes) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
                throw config_error("each prime must be an [a, b] integer coordinate pair");
            cfg.primes.emplace_back(p[0].get<std::int64_t>(), p[1].get<std::int64_t>());
        }
        const auto& codes = detail::require_key(lp, "codes", "lpma");
        if (!codes.is_array() || codes.size() != cfg.primes.size())
            throw config_error("'lpma.codes' must list one code per prime");
        for (const auto& c : codes) cfg.codes.push_back(parse_code_kind(c.get<std::string>()));
        double n = detail::require_number(lp, "block_length", "lpma");
        if (n < 1 || n != std::floor(n)) throw config_error("'lpma.block_length' must be a positive integer");
        cfg.block_length = static_cast<std::size_t>(n);

        const auto& dec = detail::require_key(lp, "decoder", "lpma");
        std::string kind = detail::require_key(dec, "kind", "lpma.decoder").get<std::string>();
        if (kind == "sic") cfg.decoder.kind = DecoderKind::sic;
        else if (kind == "pic") cfg.decoder.kind = DecoderKind::pic;
        else if (kind == "hybrid") {
            cfg.decoder.kind = DecoderKind::hybrid;
            for (const auto& l : detail::require_key(dec, "pic_levels", "lpma.decoder"))
                cfg.decoder.pic_levels.push_back(l.get<std::size_t>());
            for (const auto& l : detail::require_key(dec, "sic_levels", "lpma.decoder"))
                cfg.decoder.sic_levels.push_back(l.get<std::size_t>());
        } else {
            throw config_error("unknown decoder kind '" + kind + "'");
        }
        if (cfg.primes.size() != cfg.gain_values.size())
            throw config_error("lpma needs exactly one prime per user (" +
                               std::to_string(cfg.gain_values.size()) + " users, " +
                               std::to_string(cfg.primes.size()) + " primes)");
    }

    if (has(Scheme::noma)) {
        const auto& nm = detail::require_key(j, "noma", "config");
        cfg.noma_alpha = detail::number_list(detail::require_key(nm, "alpha", "noma"), "noma.alpha");
        if (cfg.noma_alpha.size() != cfg.gain_values.size())
            throw config_error("noma.alpha must list one coefficient per user");
        if (nm.contains("gain_threshold")) {
            cfg.noma_gain_threshold = nm.at("gain_threshold").get<double>();
            if (cfg.noma_gain_threshold <= 1.0) throw config_error("noma.gain_threshold must exceed 1");
        }
    }

    if (j.contains("oma") && j.at("oma").contains("shares")) {
        cfg.oma_shares = detail::number_list(j.at("oma").at("shares"), "oma.shares");
        if (cfg.oma_shares.size() != cfg.gain_values.size())
            throw config_error("oma.shares must list one share per user");
    }

    double trials = detail::require_number(j, "trials", "config");
    if (trials < 0 || trials != std::floor(trials)) throw config_error("'trials' must be a non-negative integer");
    cfg.trials = static_cast<std::size_t>(trials);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) {
        cfg.workers = j.at("workers").get<std::size_t>();
        if (cfg.workers == 0) throw config_error("'workers' must be at least 1");
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// canonical echo + digest

inline ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    ordered_json schemes = ordered_json::array();
    for (Scheme s : cfg.schemes) {
        std::string n = scheme_name(s);
        std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
        schemes.push_back(n);
    }
    j["schemes"] = schemes;
    ordered_json chan;
    switch (cfg.gain_model) {
        case GainModelKind::explicit_gains: chan["gain_model"] = "gains"; break;
        case GainModelKind::snr_db: chan["gain_model"] = "snr_db"; break;
        case GainModelKind::distances_km: chan["gain_model"] = "distances_km"; break;
    }
    chan["values"] = cfg.gain_values;
    chan["fading"] = cfg.rayleigh_fading ? "rayleigh" : "none";
    chan["noiseless"] = cfg.noiseless;
    if (cfg.gain_model == GainModelKind::distances_km) {
        chan["link_budget"] = {{"tx_power_dbm", cfg.budget.tx_power_dbm},
                               {"noise_density_dbm_hz", cfg.budget.noise_density_dbm_hz},
                               {"noise_figure_db", cfg.budget.noise_figure_db},
                               {"bandwidth_hz", cfg.budget.bandwidth_hz},
                               {"pathloss_intercept_db", cfg.budget.pathloss_intercept_db},
                               {"pathloss_slope", cfg.budget.pathloss_slope}};
    }
    j["channel"] = chan;
    j["power"] = cfg.power;
    if (!cfg.primes.empty()) {
        ordered_json lp;
        lp["domain"] = domain_name(cfg.domain);
        ordered_json primes = ordered_json::array();
        for (const auto& [a, b] : cfg.primes) primes.push_back({a, b});
        lp["primes"] = primes;
        ordered_json codes = ordered_json::array();
        for (CodeKind c : cfg.codes)
            codes.push_back(c == CodeKind::identity ? "identity"
                            : c == CodeKind::repetition ? "repetition" : "parity");
        lp["codes"] = codes;
        lp["block_length"] = cfg.block_length;
        ordered_json dec;
        dec["kind"] = decoder_name(cfg.decoder.kind);
        if (cfg.decoder.kind == DecoderKind::hybrid) {
            dec["pic_levels"] = cfg.decoder.pic_levels;
            dec["sic_levels"] = cfg.decoder.sic_levels;
        }
        lp["decoder"] = dec;
        j["lpma"] = lp;
    }
    if (!cfg.noma_alpha.empty())
        j["noma"] = {{"alpha", cfg.noma_alpha}, {"gain_threshold", cfg.noma_gain_threshold}};
    if (!cfg.oma_shares.empty()) j["oma"] = {{"shares", cfg.oma_shares}};
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    return j;
}

inline std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// reports

struct UserResult {
    Scheme scheme;
    int user;  // 1-based, config order
    double throughput_bps_per_symbol{0.0};
    double success_rate{1.0};
    double ci_halfwidth{0.0};
};

struct ThroughputReport {
    std::vector<UserResult> rows;                 // scheme-major, user ascending
    std::map<std::string, double> sum_throughput; // per scheme name
    double noma_degraded_fraction{0.0};
    std::size_t trials{0};
    std::uint64_t seed{0};
    std::string config_digest;
    ordered_json config_echo;
};

/// 95% Wilson score halfwidth for a binomial proportion.
inline double wilson_halfwidth(std::size_t successes, std::size_t n) {
    if (n == 0) return 0.0;
    const double z = 1.959963984540054;
    double p = static_cast<double>(successes) / static_cast<double>(n);
    double nn = static_cast<double>(n);
    return z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / (1.0 + z * z / nn);
}

inline std::string report_to_csv(const ThroughputReport& report) {
    std::string out = "scheme,user,throughput_bps_per_symbol,success_rate,ci_halfwidth\n";
    char buf[160];
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%.10g,%.10g,%.10g\n", scheme_name(r.scheme), r.user,
                      r.throughput_bps_per_symbol, r.success_rate, r.ci_halfwidth);
        out += buf;
    }
    return out;
}

inline std::string report_to_json(const ThroughputReport& report) {
    ordered_json j;
    j["tool"] = "lpma-sim";
    j["git_describe"] = LPMA_GIT_DESCRIBE;
    j["seed"] = report.seed;
    j["config_digest"] = report.config_digest;
    j["trials"] = report.trials;
    j["note"] = "LPMA throughput is Monte Carlo (credited on correct decode); "
                "NOMA/OMA throughput is formula-based with the drawn gains.";
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"scheme", scheme_name(r.scheme)},
                        {"user", r.user},
                        {"throughput_bps_per_symbol", r.throughput_bps_per_symbol},
                        {"success_rate", r.success_rate},
                        {"ci_halfwidth", r.ci_halfwidth}});
    j["results"] = rows;
    j["sum_throughput_bps_per_symbol"] = report.sum_throughput;
    j["noma_degraded_fraction"] = report.noma_degraded_fraction;
    j["config"] = report.config_echo;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// experiment runner

/// SINR -> throughput lookup used to rank users for prime assignment; the
/// default is the unconstrained Shannon curve.
using ThroughputTable = std::function<double(double)>;

inline double shannon_throughput(double sinr_linear) { return std::log2(1.0 + sinr_linear); }

namespace detail {

struct DerivedExperiment {
    std::size_t users{0};
    std::vector<double> base_gains;  // linear |h|^2 before fading
    double power{1.0};
    std::optional<LpmaConfig> lpma;
    std::vector<std::size_t> level_of_user;  // user index -> 1-based level
    std::vector<double> level_credit;        // bits/symbol per level when correct
    std::vector<double> oma_shares;
};

inline LinearCode make_code(CodeKind kind, std::int64_t q, std::size_t n) {
    switch (kind) {
        case CodeKind::identity: return make_identity_code(q, n);
        case CodeKind::repetition: return make_repetition_code(q, n);
        case CodeKind::parity: return make_single_parity_check_code(q, n);
    }
    throw std::logic_error("unreachable");
}

inline DerivedExperiment derive_experiment(const ExperimentConfig& cfg,
                                           const ThroughputTable& table) {
    DerivedExperiment d;
    d.users = cfg.gain_values.size();
    d.power = 1.0;
    switch (cfg.gain_model) {
        case GainModelKind::explicit_gains:
            d.base_gains = cfg.gain_values;
            d.power = cfg.power;
            break;
        case GainModelKind::snr_db:
            for (double v : cfg.gain_values) d.base_gains.push_back(std::pow(10.0, v / 10.0));
            break;
        case GainModelKind::distances_km:
            for (double v : cfg.gain_values) {
                if (v <= 0.0) throw config_error("distances must be positive");
                d.base_gains.push_back(snr_from_budget(cfg.budget, v));
            }
            break;
    }
    for (double g : d.base_gains)
        if (g < 0.0) throw config_error("user gains must be non-negative");

    auto has = [&cfg](Scheme s) {
        return std::find(cfg.schemes.begin(), cfg.schemes.end(), s) != cfg.schemes.end();
    };

    if (has(Scheme::lpma)) {
        for (double g : d.base_gains)
            if (g <= 0.0) throw config_error("lpma requires strictly positive user gains");

        // Rank users by the lookup throughput of their mean SINR (worst
        // first); rank primes by residue field size. The weakest user takes
        // the smallest own prime and therefore the largest cofactor weight.
        std::vector<RingPrime> primes;
        for (const auto& [a, b] : cfg.primes) {
            try {
                primes.push_back(make_ring_prime(make_element(cfg.domain, a, b)));
            } catch (const std::invalid_argument& e) {
                throw config_error(std::string("invalid prime: ") + e.what());
            }
        }
        std::stable_sort(primes.begin(), primes.end(), [](const RingPrime& x, const RingPrime& y) {
            return x.residue_field_size < y.residue_field_size;
        });

        std::vector<std::size_t> user_order(d.users);
        for (std::size_t u = 0; u < d.users; ++u) user_order[u] = u;
        std::stable_sort(user_order.begin(), user_order.end(), [&](std::size_t x, std::size_t y) {
            return table(d.power * d.base_gains[x]) < table(d.power * d.base_gains[y]);
        });

        std::vector<LevelConfig> levels;
        d.level_of_user.assign(d.users, 0);
        for (std::size_t l = 0; l < d.users; ++l) {
            std::size_t u = user_order[l];
            LinearCode code = make_code(cfg.codes[l], primes[l].residue_field_size, cfg.block_length);
            levels.push_back({static_cast<int>(u + 1), primes[l], std::move(code)});
            d.level_of_user[u] = l + 1;
        }
        try {
            d.lpma = make_lpma_config(cfg.domain, std::move(levels), cfg.block_length, d.power);
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("invalid lpma configuration: ") + e.what());
        }
        for (std::size_t l = 1; l <= d.users; ++l)
            d.level_credit.push_back(level_throughput_bits(d.lpma->level(l)));

        if (cfg.decoder.kind == DecoderKind::hybrid) {
            std::vector<bool> covered(d.users + 1, false);
            for (std::size_t l : cfg.decoder.pic_levels) {
                if (l < 1 || l > d.users) throw config_error("hybrid pic level out of range");
                covered[l] = true;
            }
            for (std::size_t l : cfg.decoder.sic_levels) {
                if (l < 1 || l > d.users) throw config_error("hybrid sic level out of range");
                if (covered[l]) throw config_error("hybrid level sets overlap");
                covered[l] = true;
            }
            for (std::size_t l = 1; l <= d.users; ++l)
                if (!covered[l]) throw config_error("hybrid split must cover every level");
        }
    }

    if (has(Scheme::oma)) {
        d.oma_shares = cfg.oma_shares;
        if (d.oma_shares.empty())
            d.oma_shares.assign(d.users, 1.0 / static_cast<double>(d.users));
    }
    return d;
}

/// Flat per-trial outcome matrices, filled by workers, reduced serially.
struct TrialMatrix {
    std::size_t users{0};
    std::vector<double> lpma_tp;
    std::vector<std::uint8_t> lpma_ok;
    std::vector<double> noma_tp;
    std::vector<std::uint8_t> noma_degraded;
    std::vector<double> oma_tp;
};

inline void run_trial_range(const ExperimentConfig& cfg, const DerivedExperiment& d,
                            std::size_t first, std::size_t last, TrialMatrix& m) {
    auto has = [&cfg](Scheme s) {
        return std::find(cfg.schemes.begin(), cfg.schemes.end(), s) != cfg.schemes.end();
    };
    const bool want_lpma = has(Scheme::lpma);
    const bool want_noma = has(Scheme::noma);
    const bool want_oma = has(Scheme::oma);
    const std::size_t n_users = d.users;
    const double sigma2 = cfg.noiseless ? 0.0 : 1.0;

    std::vector<ComplexSample> fades(n_users);
    std::vector<double> gains(n_users);
    std::vector<Message> messages(want_lpma ? n_users : 0);

    for (std::size_t t = first; t < last; ++t) {
        std::mt19937_64 rng = substream_rng(cfg.seed, t);

        for (std::size_t u = 0; u < n_users; ++u) {
            fades[u] = cfg.rayleigh_fading ? rayleigh_sample(rng) : ComplexSample{1.0, 0.0};
            gains[u] = d.base_gains[u] * std::norm(fades[u]);
        }

        if (want_lpma) {
            const LpmaConfig& lc = *d.lpma;
            for (std::size_t l = 0; l < n_users; ++l) {
                const LinearCode& code = lc.levels[l].code;
                messages[l].resize(code.k);
                for (auto& sym : messages[l])
                    sym = static_cast<FieldSymbol>(uniform_below(rng, static_cast<std::uint64_t>(code.q)));
            }
            TransmitSignal x = lpma_encode(lc, messages);
            for (std::size_t u = 0; u < n_users; ++u) {
                ComplexSample h = std::sqrt(d.base_gains[u]) * fades[u];
                ChannelRealization real{h, sigma2};
                std::vector<ComplexSample> y = apply_channel(x.samples, real, rng);
                std::vector<ComplexSample> comp = channel_compensate(lc, y, h);
                std::size_t own = d.level_of_user[u];
                const LevelDecode* entry = nullptr;
                DecodeResult res;
                switch (cfg.decoder.kind) {
                    case DecoderKind::sic: res = mlo_sic_decode(lc, comp, own); break;
                    case DecoderKind::pic: res = mlo_pic_decode(lc, comp, own); break;
                    case DecoderKind::hybrid:
                        res = hybrid_decode(lc, comp, cfg.decoder.pic_levels, cfg.decoder.sic_levels);
                        break;
                }
                entry = &res.entry(own);
                bool ok = entry->w_hat == messages[own - 1];
                m.lpma_ok[t * n_users + u] = ok ? 1 : 0;
                m.lpma_tp[t * n_users + u] = ok ? d.level_credit[own - 1] : 0.0;
            }
        }

        if (want_noma) {
            std::vector<std::size_t> order(n_users);
            for (std::size_t u = 0; u < n_users; ++u) order[u] = u;
            std::stable_sort(order.begin(), order.end(),
                             [&gains](std::size_t a, std::size_t b) { return gains[a] < gains[b]; });
            if (n_users == 2) {
                double g_weak = gains[order[0]], g_strong = gains[order[1]];
                bool valid = noma_pair_valid(g_weak, g_strong, cfg.noma_gain_threshold);
                if (valid) {
                    auto [r1, r2] = noma_rates(NomaConfig{d.power, cfg.noma_alpha}, g_weak, g_strong);
                    m.noma_tp[t * n_users + order[0]] = r1;
                    m.noma_tp[t * n_users + order[1]] = r2;
                } else {
                    // similar gains: superposition collapses to single-user
                    // service at the common gain
                    m.noma_tp[t * n_users + order[0]] = std::log2(1.0 + d.power * g_weak);
                    m.noma_tp[t * n_users + order[1]] = 0.0;
                    m.noma_degraded[t] = 1;
                }
            } else {
                std::vector<double> sorted_gains(n_users);
                for (std::size_t i = 0; i < n_users; ++i) sorted_gains[i] = gains[order[i]];
                std::vector<double> rates = noma_rates_general(d.power, cfg.noma_alpha, sorted_gains);
                for (std::size_t i = 0; i < n_users; ++i) m.noma_tp[t * n_users + order[i]] = rates[i];
            }
        }

        if (want_oma) {
            std::vector<double> rates = oma_rates(d.power, gains, d.oma_shares);
            for (std::size_t u = 0; u < n_users; ++u) m.oma_tp[t * n_users + u] = rates[u];
        }
    }
}

}  // namespace detail

/**
 * Seeded Monte Carlo comparison of the configured schemes. Every trial uses
 * an rng substream derived from (seed, trial index), so results are
 * byte-identical across runs and across worker counts; aggregation is a
 * serial reduction in trial order.
 */
inline ThroughputReport run_experiment(const ExperimentConfig& cfg,
                                       const ThroughputTable& table = shannon_throughput) {
    if (cfg.gain_values.empty()) throw config_error("no users configured");
    detail::DerivedExperiment d = detail::derive_experiment(cfg, table);

    detail::TrialMatrix m;
    m.users = d.users;
    auto has = [&cfg](Scheme s) {
        return std::find(cfg.schemes.begin(), cfg.schemes.end(), s) != cfg.schemes.end();
    };
    const std::size_t cells = cfg.trials * d.users;
    if (has(Scheme::lpma)) {
        m.lpma_tp.assign(cells, 0.0);
        m.lpma_ok.assign(cells, 0);
    }
    if (has(Scheme::noma)) {
        m.noma_tp.assign(cells, 0.0);
        m.noma_degraded.assign(cfg.trials, 0);
    }
    if (has(Scheme::oma)) m.oma_tp.assign(cells, 0.0);

    const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, std::max<std::size_t>(cfg.trials, 1)));
    if (workers == 1 || cfg.trials == 0) {
        detail::run_trial_range(cfg, d, 0, cfg.trials, m);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cfg.trials + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            std::size_t first = w * chunk;
            std::size_t last = std::min(cfg.trials, first + chunk);
            if (first >= last) break;
            pool.emplace_back([&cfg, &d, first, last, &m] { detail::run_trial_range(cfg, d, first, last, m); });
        }
        for (auto& th : pool) th.join();
    }

    ThroughputReport report;
    report.trials = cfg.trials;
    report.seed = cfg.seed;
    report.config_echo = config_to_json(cfg);
    report.config_digest = fnv1a64_hex(report.config_echo.dump());

    auto mean_over_trials = [&](const std::vector<double>& tp, std::size_t u) {
        double sum = 0.0;
        for (std::size_t t = 0; t < cfg.trials; ++t) sum += tp[t * d.users + u];
        return cfg.trials == 0 ? 0.0 : sum / static_cast<double>(cfg.trials);
    };
    auto sd_halfwidth = [&](const std::vector<double>& tp, std::size_t u, double mean) {
        if (cfg.trials < 2) return 0.0;
        double ss = 0.0;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            double dlt = tp[t * d.users + u] - mean;
            ss += dlt * dlt;
        }
        double sd = std::sqrt(ss / static_cast<double>(cfg.trials - 1));
        return 1.959963984540054 * sd / std::sqrt(static_cast<double>(cfg.trials));
    };

    if (cfg.trials > 0) {
        for (Scheme s : {Scheme::lpma, Scheme::noma, Scheme::oma}) {
            if (!has(s)) continue;
            double sum_tp = 0.0;
            for (std::size_t u = 0; u < d.users; ++u) {
                UserResult r;
                r.scheme = s;
                r.user = static_cast<int>(u + 1);
                if (s == Scheme::lpma) {
                    std::size_t ok = 0;
                    for (std::size_t t = 0; t < cfg.trials; ++t) ok += m.lpma_ok[t * d.users + u];
                    r.success_rate = static_cast<double>(ok) / static_cast<double>(cfg.trials);
                    r.throughput_bps_per_symbol = mean_over_trials(m.lpma_tp, u);
                    r.ci_halfwidth = d.level_credit[d.level_of_user[u] - 1] *
                                     wilson_halfwidth(ok, cfg.trials);
                } else {
                    const auto& tp = s == Scheme::noma ? m.noma_tp : m.oma_tp;
                    r.throughput_bps_per_symbol = mean_over_trials(tp, u);
                    r.success_rate = 1.0;
                    r.ci_halfwidth = sd_halfwidth(tp, u, r.throughput_bps_per_symbol);
                }
                sum_tp += r.throughput_bps_per_symbol;
                report.rows.push_back(r);
            }
            report.sum_throughput[scheme_name(s)] = sum_tp;
        }
        if (has(Scheme::noma)) {
            std::size_t deg = 0;
            for (std::size_t t = 0; t < cfg.trials; ++t) deg += m.noma_degraded.empty() ? 0 : m.noma_degraded[t];
            report.noma_degraded_fraction = static_cast<double>(deg) / static_cast<double>(cfg.trials);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// pairing study

struct PairingStudyConfig {
    UserPopulation population{{1, 0.10}, {2, 1.00}, {3, 0.12}, {4, 1.10}};
    double gain_threshold{2.0};
    double power{10.0};
    std::vector<double> alpha{0.8, 0.2};
    std::size_t trials{100000};
    std::uint64_t seed{1};
};

struct PairingStudyReport {
    double noma_degradation_rate{0.0};
    double lpma_degradation_rate{0.0};
    std::map<std::string, double> avg_sum_throughput;
    std::size_t trials{0};
    std::uint64_t seed{0};
};

inline PairingStudyConfig parse_pairing_study_config(const ordered_json& j) {
    PairingStudyConfig cfg;
    if (!j.contains("pairing_study")) return cfg;
    const auto& ps = j.at("pairing_study");
    if (ps.contains("population")) {
        cfg.population.clear();
        for (const auto& u : ps.at("population")) {
            if (!u.is_array() || u.size() != 2)
                throw config_error("each population entry must be [user_id, gain]");
            cfg.population.push_back({u[0].get<int>(), u[1].get<double>()});
        }
    }
    if (cfg.population.size() != 4) throw config_error("pairing study requires exactly 4 users");
    if (ps.contains("gain_threshold")) {
        cfg.gain_threshold = ps.at("gain_threshold").get<double>();
        if (cfg.gain_threshold <= 1.0) throw config_error("pairing_study.gain_threshold must exceed 1");
    }
    if (ps.contains("power")) cfg.power = ps.at("power").get<double>();
    if (ps.contains("alpha")) {
        cfg.alpha = detail::number_list(ps.at("alpha"), "pairing_study.alpha");
        if (cfg.alpha.size() != 2) throw config_error("pairing_study.alpha must have two entries");
    }
    if (ps.contains("trials")) cfg.trials = ps.at("trials").get<std::size_t>();
    if (ps.contains("seed")) cfg.seed = ps.at("seed").get<std::uint64_t>();
    return cfg;
}

/**
 * Random-pairing study: degradation frequency under NOMA's separation rule
 * versus unrestricted round-robin pairing, plus the resulting average sum
 * throughput per scheme. LPMA pairs are never filtered, so its degradation
 * frequency is structurally zero; its pair sum uses the same superposition
 * rate region, which it realizes regardless of gain similarity.
 */
inline PairingStudyReport run_pairing_study(const PairingStudyConfig& cfg) {
    if (cfg.population.size() != 4) throw config_error("pairing study requires exactly 4 users");
    PairingStudyReport report;
    report.trials = cfg.trials;
    report.seed = cfg.seed;

    std::mt19937_64 freq_rng = substream_rng(cfg.seed, 0);
    report.noma_degradation_rate =
        random_pairing_degradation_rate(cfg.population, cfg.gain_threshold, cfg.trials, freq_rng);
    report.lpma_degradation_rate = 0.0;

    const NomaConfig noma_cfg{cfg.power, cfg.alpha};
    double noma_sum = 0.0, lpma_sum = 0.0, oma_sum = 0.0;
    std::mt19937_64 tp_rng = substream_rng(cfg.seed, 1);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Pairing pairing = lpma_round_robin_pairing(cfg.population, tp_rng);
        for (const auto& p : pairing.pairs) {
            double ga = detail::gain_of(cfg.population, p[0]);
            double gb = detail::gain_of(cfg.population, p[1]);
            double lo = std::min(ga, gb), hi = std::max(ga, gb);
            double region_sum = noma_sum_rate(noma_cfg, lo, hi);
            lpma_sum += region_sum;
            noma_sum += noma_pair_valid(lo, hi, cfg.gain_threshold)
                            ? region_sum
                            : std::log2(1.0 + cfg.power * lo);
            oma_sum += 0.5 * std::log2(1.0 + cfg.power * lo) + 0.5 * std::log2(1.0 + cfg.power * hi);
        }
    }
    if (cfg.trials > 0) {
        const auto trials = static_cast<double>(cfg.trials);
        report.avg_sum_throughput["NOMA"] = noma_sum / trials;
        report.avg_sum_throughput["LPMA"] = lpma_sum / trials;
        report.avg_sum_throughput["OMA"] = oma_sum / trials;
    }
    return report;
}

inline std::string pairing_report_to_json(const PairingStudyReport& report,
                                          const PairingStudyConfig& cfg) {
    ordered_json j;
    j["tool"] = "lpma-sim";
    j["git_describe"] = LPMA_GIT_DESCRIBE;
    j["seed"] = report.seed;
    j["trials"] = report.trials;
    j["noma_degradation_rate"] = report.noma_degradation_rate;
    j["lpma_degradation_rate"] = report.lpma_degradation_rate;
    j["avg_sum_throughput_bps_per_symbol"] = report.avg_sum_throughput;
    ordered_json pop = ordered_json::array();
    for (const auto& u : cfg.population) pop.push_back({u.user_id, u.gain});
    j["config"] = {{"population", pop},
                   {"gain_threshold", cfg.gain_threshold},
                   {"power", cfg.power},
                   {"alpha", cfg.alpha}};
    return j.dump(2) + "\n";
}

}  // namespace lpma
