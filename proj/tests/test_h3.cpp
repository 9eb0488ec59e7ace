#include <doctest.h>

#include <array>
#include <random>

#include "tridisc/h3_padic.hpp"

using namespace tridisc;

namespace {

using Mat3 = std::array<std::array<mpz_class, 3>, 3>;

Mat3 mat_mul(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            mpz_class s = 0;
            for (int k = 0; k < 3; ++k) s += x[i][k] * y[k][j];
            r[i][j] = s;
        }
    return r;
}

mpz_class trace_of_power(const Mat3& m, unsigned k) {
    Mat3 acc{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    Mat3 base = m;
    unsigned e = k;
    while (e) {
        if (e & 1) acc = mat_mul(acc, base);
        base = mat_mul(base, base);
        e >>= 1;
    }
    return acc[0][0] + acc[1][1] + acc[2][2];
}

// Independent construction of F_k via companion-matrix traces:
//   a_k = -tr(C^k) for C the companion matrix of F,
//   b_k =  tr(D^k) for D the companion matrix of the pair-product cubic
//          t^3 - b t^2 + ac t - c^2,
//   c_k = -(-c)^k.
FkTriple fk_oracle(const mpz_class& a, const mpz_class& b, const mpz_class& c, unsigned k) {
    Mat3 C{{{0, 0, -c}, {1, 0, -b}, {0, 1, -a}}};
    Mat3 D{{{0, 0, c * c}, {1, 0, -a * c}, {0, 1, b}}};
    FkTriple out;
    out.a = -trace_of_power(C, k);
    out.b = trace_of_power(D, k);
    mpz_class mc = -c;
    mpz_pow_ui(out.c.get_mpz_t(), mc.get_mpz_t(), k);
    out.c = -out.c;
    return out;
}

FkTriple fk_by_recurrence(const mpz_class& a, const mpz_class& b, const mpz_class& c, unsigned k) {
    auto s = fk_seeds(a, b, c);
    if (k <= 2) return s[k];
    FkTriple f0 = s[0], f1 = s[1], f2 = s[2];
    for (unsigned i = 3; i <= k; ++i) {
        FkTriple n = fk_step(a, b, c, f0, f1, f2);
        f0 = f1;
        f1 = f2;
        f2 = n;
    }
    return f2;
}

}  // namespace

TEST_CASE("the 25 class-number-3 discriminants") {
    auto list = list_h3_discriminants();
    REQUIRE(list.size() == 25);
    CHECK(std::find(list.begin(), list.end(), -23) != list.end());
    CHECK(std::find(list.begin(), list.end(), -31) != list.end());
    CHECK(std::find(list.begin(), list.end(), -907) != list.end());
    CHECK(std::find(list.begin(), list.end(), -47) == list.end());  // h(-47) = 5
    for (std::size_t i = 0; i < list.size(); ++i) CHECK(h3_reference_table()[i].delta == list[i]);
}

TEST_CASE("scaled cubic: integrality, maximality, pinned valuations") {
    for (i64 v : list_h3_discriminants()) {
        auto sc = extract_scaled_cubic(Discriminant(v));
        const auto& H = sc.hilbert.coefficients;
        CHECK(H[2] % sc.d == 0);
        CHECK(H[1] % (sc.d * sc.d) == 0);
        CHECK(H[0] % (sc.d * sc.d * sc.d) == 0);
        CHECK(sc.a == H[2] / sc.d);
        CHECK(sc.b == H[1] / (sc.d * sc.d));
        CHECK(sc.c == H[0] / (sc.d * sc.d * sc.d));
        CHECK(sc.c != 0);
        for (i64 q : {2, 3, 5, 7, 11, 13}) {
            mpz_class dq = sc.d * q;
            bool integral = mpz_divisible_p(H[2].get_mpz_t(), dq.get_mpz_t()) &&
                            mpz_divisible_p(H[1].get_mpz_t(), mpz_class(dq * dq).get_mpz_t()) &&
                            mpz_divisible_p(H[0].get_mpz_t(), mpz_class(dq * dq * dq).get_mpz_t());
            CHECK(!integral);
        }
        CHECK(cubic_discriminant(sc.a, sc.b, sc.c) != 0);
    }
    auto s23 = extract_scaled_cubic(Discriminant(-23));
    CHECK(valuation(s23.c, 17) == 3);
    auto s83 = extract_scaled_cubic(Discriminant(-83));
    CHECK(valuation(s83.c, 2) == 3);

    CHECK_THROWS_AS(extract_scaled_cubic(Discriminant(-47)), std::invalid_argument);
}

TEST_CASE("select_prime pinned values") {
    CHECK(select_prime(extract_scaled_cubic(Discriminant(-59))).p == 11);
    CHECK(select_prime(extract_scaled_cubic(Discriminant(-652))).p == 389);
    CHECK(select_prime(extract_scaled_cubic(Discriminant(-76))).p == 53);
}

TEST_CASE("fk seeds and pinned steps") {
    auto s = fk_seeds(5, -7, 11);
    CHECK(s[0].a == -3);
    CHECK(s[0].b == 3);
    CHECK(s[0].c == -1);
    CHECK(s[1].a == 5);
    CHECK(s[2].a == -25 + 2 * -7);
    CHECK(s[2].b == 49 - 2 * 5 * 11);
    CHECK(s[2].c == -121);

    // (t-1)(t-2)(t-3): squares have roots 1, 4, 9; cubes 1, 8, 27
    auto f2 = fk_by_recurrence(-6, 11, -6, 2);
    CHECK(f2.a == -14);
    CHECK(f2.b == 49);
    CHECK(f2.c == -36);
    auto f3 = fk_by_recurrence(-6, 11, -6, 3);
    CHECK(f3.a == -36);
    CHECK(f3.b == 8 + 27 + 216);
    CHECK(f3.c == -216);
}

TEST_CASE("fk recurrence matches the companion-matrix oracle") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        mpz_class a = static_cast<long>(rng() % 21) - 10;
        mpz_class b = static_cast<long>(rng() % 21) - 10;
        mpz_class c = static_cast<long>(rng() % 21) - 10;
        if (c == 0) c = 3;
        for (unsigned k = 0; k <= 12; ++k) {
            auto lhs = fk_by_recurrence(a, b, c, k);
            auto rhs = fk_oracle(a, b, c, k);
            CHECK(lhs.a == rhs.a);
            CHECK(lhs.b == rhs.b);
            CHECK(lhs.c == rhs.c);
        }
    }
}

TEST_CASE("cubic discriminant closed form") {
    CHECK(cubic_discriminant(0, -1, 0) == 4);
    CHECK(cubic_discriminant(-3, 3, -1) == 0);
    CHECK(cubic_discriminant(-6, 11, -6) == 4);

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        i64 r1 = static_cast<i64>(rng() % 19) - 9;
        i64 r2 = static_cast<i64>(rng() % 19) - 9;
        i64 r3 = static_cast<i64>(rng() % 19) - 9;
        mpz_class a = -(r1 + r2 + r3);
        mpz_class b = r1 * r2 + r1 * r3 + r2 * r3;
        mpz_class c = mpz_class(-r1) * r2 * r3;
        mpz_class prod = mpz_class(r1 - r2) * (r1 - r2) * (r1 - r3) * (r1 - r3) * (r2 - r3) * (r2 - r3);
        CHECK(cubic_discriminant(a, b, c) == prod);
    }
}

TEST_CASE("disc(F_k) equals the k-th power root-difference product") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        i64 r1 = static_cast<i64>(rng() % 13) - 6;
        i64 r2 = static_cast<i64>(rng() % 13) - 6;
        i64 r3 = static_cast<i64>(rng() % 13) - 6;
        mpz_class a = -(r1 + r2 + r3);
        mpz_class b = r1 * r2 + r1 * r3 + r2 * r3;
        mpz_class c = mpz_class(-r1) * r2 * r3;
        if (c == 0) continue;
        for (unsigned k = 1; k <= 8; ++k) {
            auto fk = fk_by_recurrence(a, b, c, k);
            mpz_class p1, p2, p3;
            mpz_class m1 = r1, m2 = r2, m3 = r3;
            mpz_pow_ui(p1.get_mpz_t(), m1.get_mpz_t(), k);
            mpz_pow_ui(p2.get_mpz_t(), m2.get_mpz_t(), k);
            mpz_pow_ui(p3.get_mpz_t(), m3.get_mpz_t(), k);
            mpz_class prod = (p1 - p2) * (p1 - p2) * (p1 - p3) * (p1 - p3) * (p2 - p3) * (p2 - p3);
            CHECK(cubic_discriminant(fk.a, fk.b, fk.c) == prod);
        }
    }
}

TEST_CASE("find_r0_nu0 pinned values") {
    auto sc23 = extract_scaled_cubic(Discriminant(-23));
    auto r23 = find_r0_nu0(sc23, 17);
    CHECK(r23.first == 1);
    CHECK(r23.second == 1);

    auto sc76 = extract_scaled_cubic(Discriminant(-76));
    auto r76 = find_r0_nu0(sc76, 53);
    CHECK(r76.first == 18);
    CHECK(r76.second == 1);

    auto sc907 = extract_scaled_cubic(Discriminant(-907));
    auto r907 = find_r0_nu0(sc907, 167);
    CHECK(r907.first == 56);
    CHECK(r907.second == 1);
}

TEST_CASE("r0 divides every k <= 3 r0 with p | disc(F_k)") {
    for (i64 v : {-23, -76, -268, -499, -907}) {
        auto sc = extract_scaled_cubic(Discriminant(v));
        auto sp = select_prime(sc);
        auto [r0, nu0] = find_r0_nu0(sc, sp.p);
        (void)nu0;
        mpz_class am = sc.a % sp.p, bm = sc.b % sp.p, cm = sc.c % sp.p;
        auto seeds = fk_seeds(am, bm, cm);
        FkTriple f0 = seeds[0], f1 = seeds[1], f2 = seeds[2];
        auto check_k = [&](u64 k, const FkTriple& f) {
            bool div = mpz_class(cubic_discriminant(f.a, f.b, f.c) % sp.p) == 0;
            if (k >= 1 && div) CHECK(k % r0 == 0);
        };
        check_k(1, f1);
        check_k(2, f2);
        for (u64 k = 3; k <= 3 * r0; ++k) {
            FkTriple n = fk_step(am, bm, cm, f0, f1, f2);
            n.a %= sp.p;
            n.b %= sp.p;
            n.c %= sp.p;
            f0 = f1;
            f1 = f2;
            f2 = n;
            check_k(k, f2);
        }
    }
}

TEST_CASE("liouville bounds sit at or below the reference values") {
    for (i64 v : {-23, -331, -883}) {
        auto sc = extract_scaled_cubic(Discriminant(v));
        auto sp = select_prime(sc);
        auto [r0, nu0] = find_r0_nu0(sc, sp.p);
        PadicCertificate cert{sp.p, r0, nu0, sp.nu_p_c};
        auto lb = liouville_bounds(sc, cert, 256);
        const H3Reference* ref = nullptr;
        for (const auto& r : h3_reference_table())
            if (r.delta == v) ref = &r;
        REQUIRE(ref != nullptr);
        CHECK(lb.lambda <= ref->lambda + h3_reference_slack(ref->lambda));
        CHECK(lb.mu <= ref->mu + h3_reference_slack(ref->mu));
        CHECK(lb.lambda > ref->lambda * 0.8);  // not vacuously small
    }
}

TEST_CASE("verify_impossible") {
    CHECK(verify_impossible(2, 4.3, 0.6));
    CHECK(verify_impossible(59, 4963, 215));
    CHECK(!verify_impossible(2, 10, 0));
}

TEST_CASE("full pipeline reproduces the reference table") {
    auto rows = run_h3_pipeline(1000000, 256, 2);
    REQUIRE(rows.size() == 25);
    const auto& ref = h3_reference_table();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        INFO("delta = " << row.delta);
        CHECK(row.error.empty());
        CHECK(row.delta == ref[i].delta);
        CHECK(row.p == ref[i].p);
        CHECK(row.r0 == ref[i].r0);
        CHECK(row.nu0 == ref[i].nu0);
        CHECK(row.nu_p_c == 3);
        CHECK(row.kronecker_delta_p == -1);
        CHECK(row.lambda <= ref[i].lambda + h3_reference_slack(ref[i].lambda));
        CHECK(row.mu <= ref[i].mu + h3_reference_slack(ref[i].mu));
        CHECK(row.impossible);
        CHECK(row.factorization_certified);
    }
}
