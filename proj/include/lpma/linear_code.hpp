#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpma/ring.hpp"

namespace lpma {

using FieldSymbol = std::int64_t;
using Message = std::vector<FieldSymbol>;
using Codeword = std::vector<FieldSymbol>;

/**
 * (n, k) linear block code over the prime field F_q, given by a full-rank
 * k x n generator matrix. Decoding is exhaustive minimum Hamming distance,
 * so non-identity codes are restricted to desk-scale codebooks.
 */
struct LinearCode {
    std::int64_t q{2};
    std::size_t k{1};
    std::size_t n{1};
    std::vector<FieldSymbol> generator;  // row-major k x n, entries in [0, q)
    bool identity{false};

    double rate() const { return static_cast<double>(k) / static_cast<double>(n); }

    friend bool operator==(const LinearCode&, const LinearCode&) = default;
};

namespace detail {

inline std::size_t rank_mod_q(std::vector<FieldSymbol> m, std::size_t rows, std::size_t cols,
                              std::int64_t q) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot * cols + col] % q == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap_ranges(m.begin() + static_cast<long>(pivot * cols),
                         m.begin() + static_cast<long>((pivot + 1) * cols),
                         m.begin() + static_cast<long>(rank * cols));
        for (std::size_t r = rank + 1; r < rows; ++r) {
            // eliminate using row operations; q prime so the pivot inverts
            FieldSymbol piv = m[rank * cols + col] % q;
            FieldSymbol val = m[r * cols + col] % q;
            if (val == 0) continue;
            for (std::size_t c = 0; c < cols; ++c)
                m[r * cols + c] = ((m[r * cols + c] * piv - m[rank * cols + c] * val) % q + q) % q;
        }
        ++rank;
    }
    return rank;
}

inline bool is_identity_matrix(const std::vector<FieldSymbol>& g, std::size_t k, std::size_t n) {
    if (k != n) return false;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (g[i * n + j] != (i == j ? 1 : 0)) return false;
    return true;
}

}  // namespace detail

inline LinearCode make_linear_code(std::int64_t q, std::size_t k, std::size_t n,
                                   std::vector<FieldSymbol> generator) {
    if (!is_rational_prime(q)) throw std::invalid_argument("field size must be prime");
    if (k == 0 || n == 0 || k > n) throw std::invalid_argument("code dimensions require 0 < k <= n");
    if (generator.size() != k * n) throw std::invalid_argument("generator matrix has wrong shape");
    for (auto& e : generator) e = ((e % q) + q) % q;
    if (detail::rank_mod_q(generator, k, n, q) != k)
        throw std::invalid_argument("generator matrix is rank deficient");

    LinearCode code{q, k, n, std::move(generator), false};
    code.identity = detail::is_identity_matrix(code.generator, k, n);
    if (!code.identity) {
        double codebook = std::pow(static_cast<double>(q), static_cast<double>(k));
        if (codebook > 2e6)
            throw std::invalid_argument("codebook too large for exhaustive decoding (q^k > 2e6)");
    }
    return code;
}

inline LinearCode make_identity_code(std::int64_t q, std::size_t n) {
    std::vector<FieldSymbol> g(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) g[i * n + i] = 1;
    return make_linear_code(q, n, n, std::move(g));
}

inline LinearCode make_repetition_code(std::int64_t q, std::size_t n) {
    return make_linear_code(q, 1, n, std::vector<FieldSymbol>(n, 1));
}

/// k = n-1; the last symbol is the negated message sum, so codewords sum to 0.
inline LinearCode make_single_parity_check_code(std::int64_t q, std::size_t n) {
    if (n < 2) throw std::invalid_argument("parity-check code needs n >= 2");
    std::size_t k = n - 1;
    std::vector<FieldSymbol> g(k * n, 0);
    for (std::size_t i = 0; i < k; ++i) {
        g[i * n + i] = 1;
        g[i * n + (n - 1)] = q - 1;
    }
    return make_linear_code(q, k, n, std::move(g));
}

namespace detail {
inline void check_symbols(const std::vector<FieldSymbol>& v, std::size_t expected, std::int64_t q,
                          const char* what) {
    if (v.size() != expected)
        throw std::invalid_argument(std::string(what) + ": expected length " +
                                    std::to_string(expected) + ", got " + std::to_string(v.size()));
    for (FieldSymbol s : v)
        if (s < 0 || s >= q)
            throw std::invalid_argument(std::string(what) + ": symbol out of field range");
}
}  // namespace detail

inline Codeword fec_encode(const LinearCode& code, const Message& w) {
    detail::check_symbols(w, code.k, code.q, "message");
    Codeword v(code.n, 0);
    for (std::size_t j = 0; j < code.n; ++j) {
        FieldSymbol acc = 0;
        for (std::size_t i = 0; i < code.k; ++i)
            acc = (acc + w[i] * code.generator[i * code.n + j]) % code.q;
        v[j] = acc;
    }
    return v;
}

/**
 * Minimum-Hamming-distance decoding over the full codebook. Returns the
 * decoded message and its codeword; distance ties go to the
 * lexicographically smallest message. Always returns a codeword.
 */
inline std::pair<Message, Codeword> fec_decode(const LinearCode& code,
                                               const std::vector<FieldSymbol>& received) {
    detail::check_symbols(received, code.n, code.q, "received word");
    if (code.identity) return {received, received};

    Message w(code.k, 0);
    Message best_w;
    Codeword best_v;
    std::size_t best_dist = code.n + 1;
    while (true) {
        Codeword v = fec_encode(code, w);
        std::size_t dist = 0;
        for (std::size_t j = 0; j < code.n; ++j) dist += v[j] != received[j];
        if (dist < best_dist) {
            best_dist = dist;
            best_w = w;
            best_v = std::move(v);
        }
        // advance lexicographically (last symbol fastest)
        std::size_t pos = code.k;
        while (pos > 0) {
            --pos;
            if (++w[pos] < code.q) break;
            w[pos] = 0;
        }
        if (pos == 0 && w[0] == 0) break;
    }
    return {best_w, best_v};
}

/// Re-encode a decoded message when reconstructing its code level.
inline Codeword reencode(const LinearCode& code, const Message& w_hat) {
    return fec_encode(code, w_hat);
}

}  // namespace lpma
