// Reduced binary quadratic forms of negative discriminant: enumeration of
// the reduced set, class numbers, suitable integers, and the certified
// suitable-integer recipes.
#pragma once

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tridisc/ntheory.hpp"

namespace tridisc {

// Validated negative integer congruent to 0 or 1 mod 4.
class Discriminant {
  public:
    explicit Discriminant(i64 value) : value_(value) {
        if (!valid(value)) throw std::invalid_argument("discriminant must be negative and = 0,1 mod 4");
    }

    static bool valid(i64 value) {
        if (value >= 0) return false;
        i64 r = ((value % 4) + 4) % 4;
        return r == 0 || r == 1;
    }

    static std::optional<Discriminant> try_make(i64 value) {
        if (!valid(value)) return std::nullopt;
        return Discriminant(value);
    }

    i64 value() const { return value_; }
    u64 abs() const { return static_cast<u64>(-value_); }
    bool odd() const { return value_ & 1; }

    bool operator==(const Discriminant&) const = default;

  private:
    i64 value_;
};

// (a,b,c) with gcd 1, b^2-4ac < 0, and either -a < b <= a < c or 0 <= b <= a = c.
struct ReducedForm {
    i64 a, b, c;

    bool operator==(const ReducedForm&) const = default;
    i64 discriminant() const { return b * b - 4 * a * c; }
};

// Full reduction predicate, evaluated naively; also the test oracle.
inline bool form_in_t_delta(i64 a, i64 b, i64 c, Discriminant delta) {
    if (a <= 0 || c <= 0) return false;
    if (b * b - 4 * a * c != delta.value()) return false;
    if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) return false;
    if (-a < b && b <= a && a < c) return true;
    if (0 <= b && b <= a && a == c) return true;
    return false;
}

// All of T_delta, sorted by (a, b). A suitable a satisfies 3a^2 <= |delta|,
// which bounds the outer loop.
inline std::vector<ReducedForm> enumerate_forms(Discriminant delta) {
    std::vector<ReducedForm> out;
    const i64 D = delta.value();
    const i64 A = -D;
    for (i64 a = 1; 3 * a * a <= A; ++a) {
        const i64 fourA = 4 * a;
        i64 b = -a + 1;
        if (((b - D) & 1) != 0) ++b;  // match parity of D
        for (; b <= a; b += 2) {
            i64 num = b * b - D;
            if (num % fourA != 0) continue;
            i64 c = num / fourA;
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
            out.push_back({a, b, c});
        }
    }
    return out;
}

inline std::size_t class_number(Discriminant delta) { return enumerate_forms(delta).size(); }

// Distinct first entries of T_delta, ascending; always contains 1.
inline std::vector<i64> suitable_integers(Discriminant delta) {
    std::vector<i64> out;
    for (const auto& f : enumerate_forms(delta)) {
        if (out.empty() || out.back() != f.a) out.push_back(f.a);
    }
    return out;
}

// The y with 0 <= y <= m and y^2 = x^2 mod 4m (0^2..m^2 exhaust all
// squares mod 4m).
inline i64 sqrt_square_mod_4m(i64 x, i64 m) {
    if (m <= 0) throw std::invalid_argument("sqrt_square_mod_4m: m must be positive");
    i64 two_m = 2 * m;
    i64 r = ((x % two_m) + two_m) % two_m;  // in [0, 2m)
    if (r > m) r -= two_m;                  // in (-m, m]
    return r < 0 ? -r : r;
}

enum class Recipe {
    enumeration,
    square_mod_4a,
    divisor,
    split_prime,
    even_2_or_4,
    hensel_2k,
    coprime_split,
    prime_power,
};

inline const char* to_string(Recipe r) {
    switch (r) {
        case Recipe::enumeration: return "enumeration";
        case Recipe::square_mod_4a: return "square-mod-4a";
        case Recipe::divisor: return "divisor";
        case Recipe::split_prime: return "split-prime";
        case Recipe::even_2_or_4: return "even-2-or-4";
        case Recipe::hensel_2k: return "hensel-2k";
        case Recipe::coprime_split: return "coprime-split";
        case Recipe::prime_power: return "prime-power";
    }
    return "?";
}

struct SuitabilityCertificate {
    i64 a;
    ReducedForm form;  // witness triple, first entry a
    Recipe recipe;
};

namespace detail {

inline void emit_if_valid(std::vector<SuitabilityCertificate>& out, i64 a, i64 b, i64 c, Recipe recipe,
                          Discriminant delta) {
    if (form_in_t_delta(a, b, c, delta)) out.push_back({a, {a, b, c}, recipe});
}

// 2-adic square root: x with x^2 = u mod 2^k, for u = 1 mod 8, k >= 3.
inline i64 sqrt_2adic(i64 u, unsigned k) {
    i64 x = 1;
    for (unsigned j = 3; j < k; ++j) {
        i64 mod = i64(1) << (j + 1);
        if (((x * x - u) % mod + mod) % mod != 0) x += i64(1) << (j - 1);
    }
    return x;
}

}  // namespace detail

// Certified suitable-integer recipes. Every certificate's hypothesis is
// checked and its witness triple verified against the reduction predicate
// before emission. Duplicate a values with different recipe tags are kept.
inline std::vector<SuitabilityCertificate> recipe_suitable(Discriminant delta) {
    std::vector<SuitabilityCertificate> out;
    const i64 D = delta.value();
    const i64 A = -D;
    const bool odd = delta.odd();

    // a = 1 is always suitable; the dominant form is its witness.
    if (odd)
        detail::emit_if_valid(out, 1, 1, (1 - D) / 4, Recipe::enumeration, delta);
    else
        detail::emit_if_valid(out, 1, 0, -D / 4, Recipe::enumeration, delta);

    // gcd(a, D) = 1, D a square mod 4a, |D| >= 4a^2.
    for (i64 a = 2; 4 * a * a <= A; ++a) {
        if (std::gcd(a, std::abs(D)) != 1) continue;
        const i64 fourA = 4 * a;
        i64 dmod = ((D % fourA) + fourA) % fourA;
        for (i64 b = 0; b <= a; ++b) {
            if ((b * b) % fourA == dmod) {
                detail::emit_if_valid(out, a, b, (b * b - D) / fourA, Recipe::square_mod_4a, delta);
                break;
            }
        }
    }

    // Divisors of suitable integers that are coprime to D.
    auto forms = enumerate_forms(delta);
    i64 last_a = 0;
    for (const auto& f : forms) {
        if (f.a == last_a || f.a == 1) continue;
        last_a = f.a;
        for (i64 ap = 2; ap < f.a; ++ap) {
            if (f.a % ap != 0 || std::gcd(ap, std::abs(D)) != 1) continue;
            i64 b = sqrt_square_mod_4m(f.b, ap);
            detail::emit_if_valid(out, ap, b, (b * b - D) / (4 * ap), Recipe::divisor, delta);
        }
    }

    // Split primes p with (D/p) = 1 and |D| >= 4p^2.
    {
        i64 pmax = static_cast<i64>(std::sqrt(static_cast<double>(A) / 4.0)) + 1;
        auto primes = PrimeList::up_to(static_cast<u64>(pmax));
        for (u64 pu : primes.primes) {
            i64 p = static_cast<i64>(pu);
            if (4 * p * p > A) break;
            if (kronecker(D, pu) != 1) continue;
            const i64 fourP = 4 * p;
            i64 dmod = ((D % fourP) + fourP) % fourP;
            for (i64 b = 0; b <= p; ++b) {
                if ((b * b) % fourP == dmod) {
                    detail::emit_if_valid(out, p, b, (b * b - D) / fourP, Recipe::split_prime, delta);
                    break;
                }
            }
        }
    }

    // Even discriminants other than 4 mod 32: one of 2, 4 is suitable.
    if (!odd) {
        i64 r16 = ((D % 16) + 16) % 16;
        i64 r32 = ((D % 32) + 32) % 32;
        if (r32 != 4) {
            if (r16 == 8 && A > 8) detail::emit_if_valid(out, 2, 0, -D / 8, Recipe::even_2_or_4, delta);
            if (r16 == 12 && A > 4) detail::emit_if_valid(out, 2, 2, (4 - D) / 8, Recipe::even_2_or_4, delta);
            if (r32 == 20 && A > 44) detail::emit_if_valid(out, 4, 2, (4 - D) / 16, Recipe::even_2_or_4, delta);
            if (r16 == 0 && A > 48) {
                i64 b = (r32 == 16) ? 0 : 4;  // makes nu_2(D - b^2) = 4
                detail::emit_if_valid(out, 4, b, (b * b - D) / 16, Recipe::even_2_or_4, delta);
            }
        }

        // D = 4 mod 32: Hensel lifting makes 2^k suitable once |D| >= 2^(2k+2).
        if (r32 == 4) {
            for (unsigned k = 3; (u64(1) << (2 * k + 2)) <= static_cast<u64>(A); ++k) {
                i64 pk = i64(1) << k;
                i64 x = detail::sqrt_2adic(D / 4, k);
                i64 b = sqrt_square_mod_4m(2 * x, pk);
                if (valuation(b * b - D, 2) != k + 2) b = pk - b;  // force nu_2(b^2-D) = k+2
                detail::emit_if_valid(out, pk, b, (b * b - D) / (4 * pk), Recipe::hensel_2k, delta);
            }
        }
    }

    // Coprime splittings of the odd part.
    {
        unsigned nu = odd ? 0 : valuation(D, 2);
        i64 M = A >> nu;
        auto fac = factor_u64(static_cast<u64>(M));
        if (fac.complete()) {
            std::vector<i64> prime_powers;
            for (const auto& fe : fac.factors) {
                i64 q = 1;
                for (unsigned i = 0; i < fe.exponent; ++i) q *= static_cast<i64>(fe.prime.get_ui());
                prime_powers.push_back(q);
            }
            u64 masks = u64(1) << prime_powers.size();
            for (u64 mask = 0; mask < masks; ++mask) {
                i64 a = 1;
                for (std::size_t i = 0; i < prime_powers.size(); ++i)
                    if (mask & (u64(1) << i)) a *= prime_powers[i];
                i64 ap = M / a;
                if (a > ap) continue;  // unordered pair once
                if (odd) {
                    if (ap >= 3 * a)
                        detail::emit_if_valid(out, a, a, (a + ap) / 4, Recipe::coprime_split, delta);
                    else
                        detail::emit_if_valid(out, (a + ap) / 4, (ap - a) / 2, (a + ap) / 4, Recipe::coprime_split,
                                              delta);
                } else {
                    detail::emit_if_valid(out, a, 0, (i64(1) << (nu - 2)) * ap, Recipe::coprime_split, delta);
                }
            }
        }
    }

    // Odd prime powers p^(2k+1) | D with 9m >= 4p^(2k), m = |D| / p^(2k).
    {
        auto fac = factor_u64(static_cast<u64>(A));
        for (const auto& fe : fac.factors) {
            if (!fe.prime.fits_slong_p()) continue;
            i64 p = fe.prime.get_si();
            if (p == 2) continue;
            for (unsigned k = 1; 2 * k + 1 <= fe.exponent; ++k) {
                i64 pk = 1;
                for (unsigned i = 0; i < k; ++i) pk *= p;
                i64 p2k = pk * pk;
                i64 m = A / p2k;
                if (9 * m < 4 * p2k) continue;
                i64 d = odd ? 2 : 1;
                i64 a1 = 3 * p2k - 2 * d * pk - d * d;  // A_1
                i64 a2 = 3 * p2k + 2 * d * pk - d * d;  // A_2
                i64 aa = (m + (pk - d) * (pk - d)) / 4;
                if (m >= a2)
                    detail::emit_if_valid(out, p2k, p2k - d * pk, aa, Recipe::prime_power, delta);
                else if (m >= a1)
                    detail::emit_if_valid(out, aa, p2k - d * pk, p2k, Recipe::prime_power, delta);
                else
                    detail::emit_if_valid(out, aa, std::abs(m - p2k + d * d) / 2, (m + (pk + d) * (pk + d)) / 4,
                                          Recipe::prime_power, delta);
            }
        }
    }

    return out;
}

}  // namespace tridisc
