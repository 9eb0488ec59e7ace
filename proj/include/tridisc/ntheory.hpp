// Exact integer arithmetic shared by all modules: primality, Kronecker
// symbol, p-adic valuations, CRT, prime generation, integer factorization.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace tridisc {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u32 = std::uint32_t;

inline u64 mulmod_u64(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod_u64(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin; the witness set below is proven sufficient
// for every 64-bit input.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// BPSW-class test for inputs beyond 64 bits (GMP's implementation).
inline bool is_prime(const mpz_class& n) {
    if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
    if (n < 0) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

// Full Kronecker symbol (delta/n), n >= 0. At n = 0 the standard extension
// is used: 1 when delta = +-1, else 0.
inline int kronecker(i64 delta, u64 n) {
    if (n == 0) return (delta == 1 || delta == -1) ? 1 : 0;
    int result = 1;
    if ((n & 1) == 0) {
        if ((delta & 1) == 0) return 0;
        unsigned tz = std::countr_zero(n);
        n >>= tz;
        i64 dm8 = delta & 7;  // two's complement gives the residue mod 8
        if ((tz & 1) && (dm8 == 3 || dm8 == 5)) result = -result;
    }
    if (delta < 0) {
        if ((n & 3) == 3) result = -result;
        delta = -delta;
    }
    u64 a = static_cast<u64>(delta) % n;
    u64 m = n;
    while (a != 0) {
        unsigned tz = std::countr_zero(a);
        a >>= tz;
        if ((tz & 1) && ((m & 7) == 3 || (m & 7) == 5)) result = -result;
        std::swap(a, m);
        if ((a & 3) == 3 && (m & 3) == 3) result = -result;
        a %= m;
    }
    return m == 1 ? result : 0;
}

// Largest e with p^e | n. Rejects n = 0.
inline unsigned valuation(i64 n, i64 p) {
    if (n == 0) throw std::invalid_argument("valuation: n must be nonzero");
    if (p < 2) throw std::invalid_argument("valuation: p must be >= 2");
    unsigned e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

inline unsigned valuation(mpz_class n, const mpz_class& p) {
    if (n == 0) throw std::invalid_argument("valuation: n must be nonzero");
    if (p < 2) throw std::invalid_argument("valuation: p must be >= 2");
    unsigned e = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        ++e;
    }
    return e;
}

struct Valuation {
    i64 prime;
    unsigned exponent;
};

struct CrtResult {
    i64 residue;  // normalized to [0, modulus)
    i64 modulus;  // lcm of the input moduli
};

namespace detail {
// g = gcd(a,b) and x with a*x ~ g mod b (extended Euclid, i64 range).
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    i64 x1, y1;
    i64 g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}
}  // namespace detail

// Combined congruence class mod lcm(m1,m2); empty when the congruences
// are incompatible (gcd(m1,m2) does not divide r1-r2).
inline std::optional<CrtResult> crt_combine(i64 r1, i64 m1, i64 r2, i64 m2) {
    if (m1 <= 0 || m2 <= 0) throw std::invalid_argument("crt_combine: moduli must be positive");
    i64 x, y;
    i64 g = detail::ext_gcd(m1, m2, x, y);
    i64 diff = r2 - r1;
    if (diff % g != 0) return std::nullopt;
    i64 lcm = m1 / g * m2;
    __int128 t = static_cast<__int128>(diff / g) % (m2 / g) * x % (m2 / g);
    __int128 res = (static_cast<__int128>(r1) + static_cast<__int128>(m1) * t) % lcm;
    if (res < 0) res += lcm;
    return CrtResult{static_cast<i64>(res), lcm};
}

// Exactly the primes <= bound, strictly increasing.
struct PrimeList {
    u64 bound = 0;
    std::vector<u64> primes;

    static PrimeList up_to(u64 bound) {
        PrimeList out;
        out.bound = bound;
        if (bound < 2) return out;
        // odd-only sieve of Eratosthenes
        u64 half = (bound - 1) / 2;  // indices 1..half represent 3,5,...
        std::vector<bool> comp(half + 1, false);
        out.primes.push_back(2);
        for (u64 i = 1; i <= half; ++i) {
            if (comp[i]) continue;
            u64 p = 2 * i + 1;
            out.primes.push_back(p);
            if (p * p > bound) continue;
            for (u64 j = (p * p - 1) / 2; j <= half; j += p) comp[j] = true;
        }
        return out;
    }
};

struct FactorExp {
    mpz_class prime;
    unsigned exponent;
};

struct Factorization {
    std::vector<FactorExp> factors;  // ascending primes
    mpz_class cofactor = 1;          // 1, or an unsplit leftover
    bool cofactor_probable_prime = false;

    bool complete() const { return cofactor == 1; }

    mpz_class recompose() const {
        mpz_class n = cofactor;
        for (const auto& f : factors) {
            for (unsigned i = 0; i < f.exponent; ++i) n *= f.prime;
        }
        return n;
    }
};

namespace detail {

// Pollard rho with Brent cycle detection on 64-bit words.
inline u64 rho_brent_u64(u64 n, u64 c) {
    u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    const u64 batch = 128;
    while (g == 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
        for (u64 k = 0; k < r && g == 1; k += batch) {
            ys = y;
            u64 lim = std::min(batch, r - k);
            for (u64 i = 0; i < lim; ++i) {
                y = (mulmod_u64(y, y, n) + c) % n;
                q = mulmod_u64(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = (mulmod_u64(ys, ys, n) + c) % n;
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    if (g == n) return 0;
    return g;
}

inline void factor_into_u64(u64 n, std::vector<mpz_class>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(mpz_class(static_cast<unsigned long>(n)));
        return;
    }
    for (u64 c = 1;; ++c) {
        u64 g = rho_brent_u64(n, c);
        if (g != 0 && g != n) {
            factor_into_u64(g, out);
            factor_into_u64(n / g, out);
            return;
        }
    }
}

// Pollard rho with Brent cycle detection; deterministic parameter
// sequence so factorizations are reproducible run to run.
inline mpz_class rho_brent(const mpz_class& n, unsigned long c, u64 max_iter) {
    mpz_class y = 2, r = 1, q = 1, g = 1, x, ys;
    const u64 batch = 128;
    u64 spent = 0;
    while (g == 1 && spent < max_iter) {
        x = y;
        for (mpz_class i = 0; i < r; ++i) {
            y = (y * y + c) % n;
        }
        mpz_class k = 0;
        while (k < r && g == 1) {
            ys = y;
            u64 lim = std::min<u64>(batch, mpz_get_ui(mpz_class(r - k).get_mpz_t()));
            for (u64 i = 0; i < lim; ++i) {
                y = (y * y + c) % n;
                q = q * abs(x - y) % n;
            }
            g = gcd(q, n);
            k += lim;
            spent += lim;
        }
        r *= 2;
    }
    if (g == n) {
        // backtrack to isolate the factor
        do {
            ys = (ys * ys + c) % n;
            g = gcd(mpz_class(abs(x - ys)), n);
        } while (g == 1);
    }
    if (g == n || g == 1) return 0;
    return g;
}

inline void factor_into(mpz_class n, std::vector<mpz_class>& out, int depth) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    if (depth > 64) {
        out.push_back(0);  // sentinel: give up (handled by caller)
        return;
    }
    for (unsigned long c = 1; c < 64; ++c) {
        mpz_class g = rho_brent(n, c, u64(1) << 26);
        if (g != 0 && g != n) {
            factor_into(g, out, depth + 1);
            factor_into(n / g, out, depth + 1);
            return;
        }
    }
    out.push_back(0);
}

}  // namespace detail

// Prime-power factorization: trial division below trial_bound, then a
// Pollard-rho fallback on the remaining cofactor. The product of the
// returned prime powers times the cofactor equals n exactly.
inline Factorization factor(const mpz_class& n_in, u64 trial_bound) {
    if (n_in < 1) throw std::invalid_argument("factor: n must be positive");
    Factorization out;
    mpz_class n = n_in;
    // p by value: the loop below mutates n, which callers may pass as p
    auto add_factor = [&](mpz_class p) {
        unsigned e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
            ++e;
        }
        out.factors.push_back({p, e});
    };
    if (n % 2 == 0) add_factor(2);
    if (n % 3 == 0) add_factor(3);
    auto sqrt_cap = [&]() -> u64 {
        if (!n.fits_ulong_p()) return ~u64(0);
        u64 v = n.get_ui(), r = static_cast<u64>(std::sqrt(static_cast<double>(v)));
        while (r > 0 && static_cast<unsigned __int128>(r) * r > v) --r;
        while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= v) ++r;
        return r;
    };
    u64 cap = sqrt_cap();
    for (u64 d = 5; d <= trial_bound && d <= cap && n > 1; d += 6) {
        bool hit = false;
        if (mpz_divisible_ui_p(n.get_mpz_t(), d)) add_factor(d), hit = true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), d + 2)) add_factor(d + 2), hit = true;
        if (hit) cap = sqrt_cap();
    }
    if (n > 1) {
        if (is_prime(n)) {
            add_factor(n);
        } else if (n.fits_ulong_p()) {
            std::vector<mpz_class> found;
            detail::factor_into_u64(n.get_ui(), found);
            for (const auto& p : found)
                if (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) add_factor(p);
        } else {
            std::vector<mpz_class> found;
            detail::factor_into(n, found, 0);
            bool gave_up = false;
            for (const auto& p : found) {
                if (p == 0) {
                    gave_up = true;
                    continue;
                }
                if (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) add_factor(p);
            }
            if (gave_up && n > 1) {
                out.cofactor = n;
                out.cofactor_probable_prime = is_prime(n);
                n = 1;
            }
        }
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const FactorExp& a, const FactorExp& b) { return a.prime < b.prime; });
    return out;
}

inline Factorization factor_u64(u64 n, u64 trial_bound = 1'000'000) {
    return factor(mpz_class(static_cast<unsigned long>(n)), trial_bound);
}

}  // namespace tridisc
