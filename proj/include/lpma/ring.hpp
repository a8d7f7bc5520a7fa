#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lpma {

/// Signal-space sample. Ring elements embed into the complex plane for
/// transmission; all boundary values must be finite.
using ComplexSample = std::complex<double>;

inline constexpr double kSqrt3Over2 = 0.86602540378443864676372317075293618;

/**
 * The three principal ideal domains the codec supports:
 *   - rational integers Z           (basis 1)
 *   - Gaussian integers Z[i]        (basis 1, i)
 *   - Eisenstein integers Z[w]      (basis 1, w), w = (-1 + i*sqrt(3))/2
 */
enum class RingDomain { integers, gaussian, eisenstein };

inline const char* domain_name(RingDomain d) {
    switch (d) {
        case RingDomain::integers: return "integers";
        case RingDomain::gaussian: return "gaussian";
        case RingDomain::eisenstein: return "eisenstein";
    }
    return "?";
}

namespace detail {

// Desk-scale coordinates fit in 64 bits, but overflow must surface as an
// error, never wrap.
inline std::int64_t checked_add(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("ring arithmetic overflow (add)");
    return r;
}

inline std::int64_t checked_sub(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_sub_overflow(x, y, &r)) throw std::overflow_error("ring arithmetic overflow (sub)");
    return r;
}

inline std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("ring arithmetic overflow (mul)");
    return r;
}

inline void ensure_finite(ComplexSample s) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw std::domain_error("non-finite complex sample");
}

}  // namespace detail

/**
 * Exact ring element in integer coordinates: a + b*i (Gaussian),
 * a + b*w (Eisenstein), or plain a with b = 0 (rational integers).
 */
struct RingElement {
    RingDomain domain{RingDomain::integers};
    std::int64_t a{0};
    std::int64_t b{0};

    bool is_zero() const { return a == 0 && b == 0; }

    friend bool operator==(const RingElement&, const RingElement&) = default;
};

inline RingElement make_element(RingDomain d, std::int64_t a, std::int64_t b = 0) {
    if (d == RingDomain::integers && b != 0)
        throw std::invalid_argument("rational integer with nonzero second coordinate");
    return RingElement{d, a, b};
}

inline std::string to_string(const RingElement& x) {
    std::string unit = x.domain == RingDomain::gaussian ? "i" : "w";
    if (x.domain == RingDomain::integers) return std::to_string(x.a);
    return std::to_string(x.a) + (x.b < 0 ? "" : "+") + std::to_string(x.b) + unit;
}

namespace detail {
inline void require_same_domain(const RingElement& x, const RingElement& y) {
    if (x.domain != y.domain) throw std::invalid_argument("ring domain mismatch");
}
}  // namespace detail

inline RingElement add(const RingElement& x, const RingElement& y) {
    detail::require_same_domain(x, y);
    return RingElement{x.domain, detail::checked_add(x.a, y.a), detail::checked_add(x.b, y.b)};
}

inline RingElement sub(const RingElement& x, const RingElement& y) {
    detail::require_same_domain(x, y);
    return RingElement{x.domain, detail::checked_sub(x.a, y.a), detail::checked_sub(x.b, y.b)};
}

inline RingElement neg(const RingElement& x) {
    return RingElement{x.domain, detail::checked_sub(0, x.a), detail::checked_sub(0, x.b)};
}

/// Exact ring product; i^2 = -1, w^2 = -1 - w.
inline RingElement mul(const RingElement& x, const RingElement& y) {
    detail::require_same_domain(x, y);
    using detail::checked_add;
    using detail::checked_mul;
    using detail::checked_sub;
    switch (x.domain) {
        case RingDomain::integers:
            return RingElement{x.domain, checked_mul(x.a, y.a), 0};
        case RingDomain::gaussian:
            return RingElement{x.domain, checked_sub(checked_mul(x.a, y.a), checked_mul(x.b, y.b)),
                               checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.a))};
        case RingDomain::eisenstein: {
            std::int64_t ac = checked_mul(x.a, y.a);
            std::int64_t bd = checked_mul(x.b, y.b);
            std::int64_t cross = checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.a));
            return RingElement{x.domain, checked_sub(ac, bd), checked_sub(cross, bd)};
        }
    }
    throw std::logic_error("unreachable");
}

inline RingElement operator+(const RingElement& x, const RingElement& y) { return add(x, y); }
inline RingElement operator-(const RingElement& x, const RingElement& y) { return sub(x, y); }
inline RingElement operator*(const RingElement& x, const RingElement& y) { return mul(x, y); }
inline RingElement operator-(const RingElement& x) { return neg(x); }

/// Complex conjugate within the ring; conj(w) = -1 - w.
inline RingElement conjugate(const RingElement& x) {
    switch (x.domain) {
        case RingDomain::integers: return x;
        case RingDomain::gaussian: return RingElement{x.domain, x.a, detail::checked_sub(0, x.b)};
        case RingDomain::eisenstein:
            return RingElement{x.domain, detail::checked_sub(x.a, x.b), detail::checked_sub(0, x.b)};
    }
    throw std::logic_error("unreachable");
}

/// Algebraic norm used for Euclidean division: a^2 (Z, so division is
/// uniform across domains), a^2 + b^2 (Z[i]), a^2 - a*b + b^2 (Z[w]).
/// Equals the squared Euclidean length of the embedded point.
inline std::int64_t norm(const RingElement& x) {
    using detail::checked_add;
    using detail::checked_mul;
    using detail::checked_sub;
    switch (x.domain) {
        case RingDomain::integers:
            return checked_mul(x.a, x.a);
        case RingDomain::gaussian:
            return checked_add(checked_mul(x.a, x.a), checked_mul(x.b, x.b));
        case RingDomain::eisenstein:
            return checked_add(checked_sub(checked_mul(x.a, x.a), checked_mul(x.a, x.b)),
                               checked_mul(x.b, x.b));
    }
    throw std::logic_error("unreachable");
}

inline bool is_unit(const RingElement& x) { return norm(x) == 1; }

/// Embedding of the ring into the complex plane.
inline ComplexSample embed(const RingElement& x) {
    switch (x.domain) {
        case RingDomain::integers: return {static_cast<double>(x.a), 0.0};
        case RingDomain::gaussian: return {static_cast<double>(x.a), static_cast<double>(x.b)};
        case RingDomain::eisenstein:
            return {static_cast<double>(x.a) - 0.5 * static_cast<double>(x.b),
                    kSqrt3Over2 * static_cast<double>(x.b)};
    }
    throw std::logic_error("unreachable");
}

/// Real-valued coordinates of s in the ring basis (inverse of embed).
inline std::pair<double, double> ring_coordinates(ComplexSample s, RingDomain d) {
    switch (d) {
        case RingDomain::integers: return {s.real(), 0.0};
        case RingDomain::gaussian: return {s.real(), s.imag()};
        case RingDomain::eisenstein: {
            double b = s.imag() / kSqrt3Over2;
            return {s.real() + 0.5 * b, b};
        }
    }
    throw std::logic_error("unreachable");
}

/**
 * Nearest ring element to s in Euclidean distance. Ties are broken
 * deterministically: smaller a first, then smaller b. The candidate window
 * around the rounded basis coordinates is wide enough to always contain the
 * true minimizer.
 */
inline RingElement quantize_to_ring(ComplexSample s, RingDomain d) {
    detail::ensure_finite(s);
    auto [ar, br] = ring_coordinates(s, d);
    auto a0 = static_cast<std::int64_t>(std::llround(ar));
    auto b0 = static_cast<std::int64_t>(std::llround(br));

    bool have = false;
    RingElement best{};
    double best_d2 = 0.0;
    const std::int64_t bspan = d == RingDomain::integers ? 0 : 2;
    for (std::int64_t db = -bspan; db <= bspan; ++db) {
        for (std::int64_t da = -2; da <= 2; ++da) {
            RingElement cand{d, a0 + da, b0 + db};
            ComplexSample e = embed(cand);
            double dre = s.real() - e.real();
            double dim = s.imag() - e.imag();
            double d2 = dre * dre + dim * dim;
            if (!have || d2 < best_d2 ||
                (d2 == best_d2 && (cand.a < best.a || (cand.a == best.a && cand.b < best.b)))) {
                have = true;
                best = cand;
                best_d2 = d2;
            }
        }
    }
    return best;
}

/**
 * Euclidean division with a norm-minimal (centered) remainder:
 * x = q*m + r with norm(r) minimal over nearby quotients; remainder ties
 * prefer smaller a, then smaller b. The remainder is the canonical
 * representative of x mod mR, and norm(r) < norm(m) in every domain.
 */
inline std::pair<RingElement, RingElement> divmod_nearest(const RingElement& x, const RingElement& m) {
    detail::require_same_domain(x, m);
    if (m.is_zero()) throw std::domain_error("division by zero ring element");

    // Exact quotient coordinates: x / m = x * conj(m) / norm(m), rounded
    // per coordinate in 128-bit arithmetic. The window search below then
    // finds the norm-minimal remainder without any float involvement.
    const RingElement num = mul(x, conjugate(m));
    const std::int64_t den = norm(m);
    auto round_div = [](std::int64_t n, std::int64_t d) {
        __int128 twice = static_cast<__int128>(n) * 2;
        __int128 shifted = twice >= 0 ? twice + d : twice - d;
        return static_cast<std::int64_t>(shifted / (2 * static_cast<__int128>(d)));
    };
    RingElement q0{x.domain, round_div(num.a, den), round_div(num.b, den)};

    bool have = false;
    RingElement best_q{}, best_r{};
    std::int64_t best_norm = 0;
    const std::int64_t bspan = x.domain == RingDomain::integers ? 0 : 2;
    for (std::int64_t db = -bspan; db <= bspan; ++db) {
        for (std::int64_t da = -2; da <= 2; ++da) {
            RingElement q{x.domain, q0.a + da, q0.b + db};
            RingElement r = sub(x, mul(m, q));
            std::int64_t n = norm(r);
            if (!have || n < best_norm ||
                (n == best_norm && (r.a < best_r.a || (r.a == best_r.a && r.b < best_r.b)))) {
                have = true;
                best_q = q;
                best_r = r;
                best_norm = n;
            }
        }
    }
    return {best_q, best_r};
}

/// Centered representative of x mod mR; idempotent.
inline RingElement mod_ring(const RingElement& x, const RingElement& m) {
    return divmod_nearest(x, m).second;
}

/// Euclidean algorithm; result is a gcd up to units.
inline RingElement gcd(RingElement x, RingElement y) {
    detail::require_same_domain(x, y);
    if (x.is_zero() && y.is_zero()) throw std::domain_error("gcd(0, 0) is undefined");
    while (!y.is_zero()) {
        RingElement r = divmod_nearest(x, y).second;
        x = y;
        y = r;
    }
    return x;
}

inline bool is_rational_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/**
 * A prime of R whose residue field is a prime field F_q. The residue field
 * size q and the integer residue of the non-rational basis unit (i or w)
 * are cached at construction; they drive the field <-> ring symbol maps.
 */
struct RingPrime {
    RingElement value;
    std::int64_t residue_field_size{0};  // q
    std::int64_t generator_residue{0};   // integer k in [0,q) with i == k or w == k (mod value)

    friend bool operator==(const RingPrime&, const RingPrime&) = default;
};

/**
 * Validates primality of v in its domain and builds the residue-field
 * tables. Primes whose residue field is not a prime field (inert rational
 * primes inside Z[i] or Z[w], norm p^2) are rejected: the multilevel code
 * levels require linear codes over prime fields.
 */
inline RingPrime make_ring_prime(const RingElement& v) {
    std::int64_t q = 0;
    if (v.domain == RingDomain::integers) {
        std::int64_t p = v.a < 0 ? -v.a : v.a;
        if (!is_rational_prime(p))
            throw std::invalid_argument(to_string(v) + " is not a rational prime");
        q = p;
    } else {
        std::int64_t n = norm(v);
        if (is_rational_prime(n)) {
            q = n;
        } else {
            // norm p^2 with p inert means v is prime but its residue field
            // is F_{p^2}; anything else is composite.
            auto p = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
            bool inert = p * p == n && is_rational_prime(p) &&
                         ((v.domain == RingDomain::gaussian && p % 4 == 3) ||
                          (v.domain == RingDomain::eisenstein && p % 3 == 2));
            if (inert)
                throw std::invalid_argument(to_string(v) +
                                            " is an inert prime; residue field F_{p^2} is not a prime field");
            throw std::invalid_argument(to_string(v) + " is not prime in " +
                                        domain_name(v.domain));
        }
    }

    RingPrime prime{v, q, 0};
    if (v.domain != RingDomain::integers) {
        RingElement gen{v.domain, 0, 1};
        bool found = false;
        for (std::int64_t k = 0; k < q; ++k) {
            if (mod_ring(sub(gen, RingElement{v.domain, k, 0}), v).is_zero()) {
                prime.generator_residue = k;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("no integer residue for the basis generator");
    }
    return prime;
}

/// Lift of a field symbol into R along the isomorphism F_q = R/(theta R):
/// the integers 0..q-1 form a complete residue system.
inline RingElement lift_field_symbol(RingDomain d, std::int64_t symbol) {
    return RingElement{d, symbol, 0};
}

/// Field symbol in [0, q) congruent to x modulo theta.
inline std::int64_t ring_to_field(const RingElement& x, const RingPrime& theta) {
    detail::require_same_domain(x, theta.value);
    const std::int64_t q = theta.residue_field_size;
    auto reduce = [q](std::int64_t v) { return ((v % q) + q) % q; };
    return reduce(detail::checked_add(reduce(x.a), detail::checked_mul(reduce(x.b), theta.generator_residue)));
}

/// y with x*y == 1 (mod theta), returned as the canonical integer lift.
inline RingElement inverse_mod(const RingElement& x, const RingPrime& theta) {
    std::int64_t t = ring_to_field(x, theta);
    if (t == 0) throw std::domain_error("element is congruent to 0 and has no inverse");
    const std::int64_t q = theta.residue_field_size;
    // extended Euclid on integers; q is prime so any nonzero t is invertible
    std::int64_t r0 = q, r1 = t, s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t k = r0 / r1;
        std::int64_t r2 = r0 - k * r1;
        std::int64_t s2 = s0 - k * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    return lift_field_symbol(x.domain, ((s0 % q) + q) % q);
}

/**
 * Canonical (centered) representatives of R/mR, found by closing {0} under
 * the basis generators and reducing. Sorted by (a, b) so enumeration order
 * is reproducible. The count equals the group index |R/mR|.
 */
inline std::vector<RingElement> coset_representatives(const RingElement& m) {
    if (m.is_zero()) throw std::domain_error("modulus must be nonzero");
    std::vector<RingElement> generators{RingElement{m.domain, 1, 0}};
    if (m.domain != RingDomain::integers) generators.push_back(RingElement{m.domain, 0, 1});

    std::vector<RingElement> reps{mod_ring(RingElement{m.domain, 0, 0}, m)};
    auto contains = [&reps](const RingElement& e) {
        return std::find(reps.begin(), reps.end(), e) != reps.end();
    };
    for (std::size_t i = 0; i < reps.size(); ++i) {
        RingElement current = reps[i];
        for (const auto& g : generators) {
            RingElement next = mod_ring(add(current, g), m);
            if (!contains(next)) reps.push_back(next);
        }
    }
    std::sort(reps.begin(), reps.end(), [](const RingElement& x, const RingElement& y) {
        return x.a < y.a || (x.a == y.a && x.b < y.b);
    });
    return reps;
}

/**
 * Modulo-lattice fold: s minus the nearest point of the scaled lattice mR.
 * The result lies in the fundamental Voronoi region of mR. Near-ties in the
 * folded magnitude are resolved by the folded value's ring coordinates
 * (smaller first), which keeps mod_fold consistent with mod_ring on
 * embedded lattice points, including Voronoi boundaries.
 */
inline ComplexSample mod_fold(ComplexSample s, const RingElement& m) {
    detail::ensure_finite(s);
    if (m.is_zero()) throw std::domain_error("fold modulus must be nonzero");

    const ComplexSample me = embed(m);
    RingElement q0 = quantize_to_ring(s / me, m.domain);

    bool have = false;
    ComplexSample best{};
    double best_mag = 0.0;
    std::pair<double, double> best_coords{};
    const std::int64_t bspan = m.domain == RingDomain::integers ? 0 : 2;
    for (std::int64_t db = -bspan; db <= bspan; ++db) {
        for (std::int64_t da = -2; da <= 2; ++da) {
            RingElement q{m.domain, q0.a + da, q0.b + db};
            ComplexSample f = s - embed(mul(m, q));
            double mag = f.real() * f.real() + f.imag() * f.imag();
            auto coords = ring_coordinates(f, m.domain);
            const double eps = 1e-9 * std::max(1.0, std::max(mag, best_mag));
            bool better;
            if (!have) {
                better = true;
            } else if (mag < best_mag - eps) {
                better = true;
            } else if (mag > best_mag + eps) {
                better = false;
            } else {
                // equal magnitudes: prefer the canonical representative side
                if (coords.first < best_coords.first - 1e-9) better = true;
                else if (coords.first > best_coords.first + 1e-9) better = false;
                else better = coords.second < best_coords.second - 1e-9;
            }
            if (better) {
                have = true;
                best = f;
                best_mag = mag;
                best_coords = coords;
            }
        }
    }
    return best;
}

}  // namespace lpma
