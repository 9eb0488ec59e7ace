#include <doctest.h>

#include <random>

#include "tridisc/ntheory.hpp"

using namespace tridisc;

namespace {

// Legendre symbol by exhaustive search over squares mod p.
int legendre_brute(i64 delta, u64 p) {
    i64 r = ((delta % static_cast<i64>(p)) + static_cast<i64>(p)) % static_cast<i64>(p);
    if (r == 0) return 0;
    for (u64 x = 1; x < p; ++x) {
        if (static_cast<i64>((x * x) % p) == r) return 1;
    }
    return -1;
}

}  // namespace

TEST_CASE("kronecker: pinned values") {
    CHECK(kronecker(-4, 1) == 1);
    CHECK(kronecker(-23, 2) == 1);  // -23 = 1 mod 8
    CHECK(kronecker(-15, 3) == 0);
    CHECK(kronecker(-3, 2) == -1);
    CHECK(kronecker(-3, 7) == 1);
    CHECK(kronecker(-7, 2) == 1);
    CHECK(kronecker(1, 0) == 1);
    CHECK(kronecker(-1, 0) == 1);
    CHECK(kronecker(5, 0) == 0);
}

TEST_CASE("kronecker matches brute-force Legendre for odd primes") {
    auto primes = PrimeList::up_to(100);
    for (i64 delta = -500; delta <= 500; ++delta) {
        for (u64 p : primes.primes) {
            if (p == 2) continue;
            CHECK(kronecker(delta, p) == legendre_brute(delta, p));
        }
    }
}

TEST_CASE("kronecker is completely multiplicative in n") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 2000; ++it) {
        i64 delta = -1 - static_cast<i64>(rng() % 100000);
        u64 m = 1 + rng() % 500;
        u64 n = 1 + rng() % 500;
        CHECK(kronecker(delta, m * n) == kronecker(delta, m) * kronecker(delta, n));
    }
}

TEST_CASE("valuation") {
    CHECK(valuation(i64(12), 2) == 2);
    CHECK(valuation(i64(17) * 17 * 17 * 5, 17) == 3);
    CHECK(valuation(i64(7), 3) == 0);
    CHECK(valuation(mpz_class(773) * 773 * 773 * 2, 773) == 3);
    CHECK_THROWS_AS(valuation(i64(0), 2), std::invalid_argument);
}

TEST_CASE("crt_combine") {
    auto r = crt_combine(1, 2, 2, 3);
    REQUIRE(r.has_value());
    CHECK(r->residue == 5);
    CHECK(r->modulus == 6);

    r = crt_combine(3, 8, 1, 3);
    REQUIRE(r.has_value());
    CHECK(r->residue == 19);
    CHECK(r->modulus == 24);

    CHECK(!crt_combine(1, 4, 3, 4).has_value());

    // against exhaustive search, non-coprime moduli included
    std::mt19937_64 rng(11);
    for (int it = 0; it < 500; ++it) {
        i64 m1 = 1 + static_cast<i64>(rng() % 40);
        i64 m2 = 1 + static_cast<i64>(rng() % 40);
        i64 r1 = static_cast<i64>(rng() % static_cast<u64>(m1));
        i64 r2 = static_cast<i64>(rng() % static_cast<u64>(m2));
        i64 lcm = m1 / std::gcd(m1, m2) * m2;
        i64 expect = -1;
        for (i64 x = 0; x < lcm; ++x) {
            if (x % m1 == r1 && x % m2 == r2) {
                expect = x;
                break;
            }
        }
        auto got = crt_combine(r1, m1, r2, m2);
        if (expect < 0) {
            CHECK(!got.has_value());
        } else {
            REQUIRE(got.has_value());
            CHECK(got->residue == expect);
            CHECK(got->modulus == lcm);
        }
    }
}

TEST_CASE("prime list: exact contents") {
    auto pl = PrimeList::up_to(1000000);
    CHECK(pl.primes.size() == 78498);
    CHECK(pl.primes.front() == 2);
    CHECK(pl.primes.back() == 999983);
    bool increasing = true;
    for (std::size_t i = 1; i < pl.primes.size(); ++i) increasing &= pl.primes[i - 1] < pl.primes[i];
    CHECK(increasing);

    // independent plain sieve over the full range
    std::vector<bool> composite(1000001, false);
    std::vector<u64> oracle;
    for (u64 n = 2; n <= 1000000; ++n) {
        if (composite[n]) continue;
        oracle.push_back(n);
        for (u64 m = n * n; m <= 1000000; m += n) composite[m] = true;
    }
    CHECK(pl.primes == oracle);

    // trial division below 10^4
    bool agree = true;
    for (u64 n = 2; n <= 10000; ++n) {
        bool prime = true;
        for (u64 d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                prime = false;
                break;
            }
        agree &= (prime == std::binary_search(pl.primes.begin(), pl.primes.end(), n));
        agree &= (prime == is_prime_u64(n));
    }
    CHECK(agree);
}

TEST_CASE("is_prime spot checks") {
    CHECK(is_prime_u64((u64(1) << 61) - 1));
    CHECK(!is_prime_u64(561));    // Carmichael
    CHECK(!is_prime_u64(3215031751ull));
    CHECK(is_prime(mpz_class("170141183460469231731687303715884105727")));  // 2^127-1
    CHECK(!is_prime(mpz_class("170141183460469231731687303715884105725")));
}

TEST_CASE("factor: pinned examples") {
    auto f = factor(28, 10);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].prime == 2);
    CHECK(f.factors[0].exponent == 2);
    CHECK(f.factors[1].prime == 7);
    CHECK(f.factors[1].exponent == 1);
    CHECK(f.complete());

    f = factor(mpz_class(17 * 17 * 17), 20);
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0].prime == 17);
    CHECK(f.factors[0].exponent == 3);

    f = factor(1, 10);
    CHECK(f.factors.empty());
    CHECK(f.cofactor == 1);
}

TEST_CASE("factor recomposes to the input") {
    std::mt19937_64 rng(13);
    for (int it = 0; it < 200; ++it) {
        mpz_class n = 1 + static_cast<unsigned long>(rng() % 1000000000ull);
        auto f = factor(n, 1000);
        CHECK(f.recompose() == n);
        for (const auto& fe : f.factors) CHECK(is_prime(fe.prime));
    }
    // a product of two 31-bit primes exercises the rho fallback
    mpz_class a = 2147483647;  // 2^31-1
    mpz_class b = 2147483629;
    auto f = factor(a * b, 1000);
    CHECK(f.complete());
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].prime == b);
    CHECK(f.factors[1].prime == a);
    CHECK(f.recompose() == a * b);
}
