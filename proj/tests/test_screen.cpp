#include <doctest.h>

#include "tridisc/trinomial_screen.hpp"

using namespace tridisc;

namespace {

// Brute force over all ordered triples of distinct moduli.
double brute_margin(Discriminant d, mpfr_prec_t pb) {
    auto moduli = singular_moduli(d, pb);
    std::vector<RBall> mags;
    for (const auto& sm : moduli) mags.push_back(sm.value.abs());
    double best = -1e300;
    const std::size_t h = mags.size();
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j)
            for (std::size_t k = 0; k < h; ++k) {
                if (i == j || j == k || i == k) continue;
                if (mpfr_cmp(mags[i].mid().raw(), mags[j].mid().raw()) < 0) continue;
                if (mpfr_cmp(mags[j].mid().raw(), mags[k].mid().raw()) < 0) continue;
                RBall r = mags[j] / mags[i];
                RBall m = (RBall::exact_int(1, pb) - mags[k] / mags[j]) - (r.mul_si(2) + r.pow_ui(3).mul_si(2));
                best = std::max(best, m.mid().to_double());
            }
    return best;
}

}  // namespace

TEST_CASE("witness_margin rejects h < 3") {
    CHECK_THROWS_AS(witness_margin(Discriminant(-15), 128), std::invalid_argument);
}

TEST_CASE("witness_margin equals the brute-force triple maximum") {
    for (i64 v : {-84, -120, -231, -280, -479, -1155, -1467}) {
        Discriminant d(v);
        if (class_number(d) < 3) continue;
        auto rep = witness_margin(d, 128);
        double brute = brute_margin(d, 128);
        CHECK(rep.margin == doctest::Approx(brute).epsilon(1e-9));
    }
}

TEST_CASE("h = 3 margins are never positive (conjugate degeneracy)") {
    for (i64 v : {-23, -31, -59, -83, -107, -907}) {
        Discriminant d(v);
        REQUIRE(class_number(d) == 3);
        auto rep = witness_margin(d, 128);
        // 1 - |x2/x1| = 0 for the conjugate pair, so the margin reduces to
        // -(2r + 2r^3), never certifiably positive
        CHECK(rep.margin <= rep.error_bound);
        CHECK(rep.h == 3);
        auto moduli = singular_moduli(d, 128);
        RBall r = moduli[1].value.abs() / moduli[0].value.abs();
        double cap = (r.mul_si(2) + r.pow_ui(3).mul_si(2)).upper().to_double();
        CHECK(std::abs(rep.margin) <= cap + 1e-12);
    }
}

TEST_CASE("delta = -479 has margin above 0.15 and -1467 only above 0.001") {
    auto r479 = witness_margin(Discriminant(-479), 128);
    CHECK(r479.h == 25);
    CHECK(r479.margin - r479.error_bound > 0.15);

    auto r1467 = witness_margin(Discriminant(-1467), 128);
    CHECK(r1467.h == 4);
    CHECK(r1467.margin - r1467.error_bound > 0.001);
    CHECK(r1467.margin + r1467.error_bound <= 0.15);
}

TEST_CASE("margins stable between 128- and 256-bit runs") {
    for (i64 v : {-84, -479, -1467, -2044}) {
        Discriminant d(v);
        if (class_number(d) <= 3) continue;
        auto lo = witness_margin(d, 128);
        auto hi = witness_margin(d, 256);
        CHECK(std::abs(lo.margin - hi.margin) < 1e-6);
        CHECK(hi.error_bound <= lo.error_bound / 2);  // at least halves
        CHECK(lo.error_bound < 1e-6);
    }
}

TEST_CASE("scan_small finds exactly -1467 below 2000 at threshold 0.15") {
    auto failures = scan_small(2000, 0.15, 128, 2);
    REQUIRE(failures.size() == 1);
    CHECK(failures[0].delta == -1467);
    CHECK(failures[0].h == 4);

    auto none = scan_small(2000, 0.001, 128, 2);
    CHECK(none.empty());
}

TEST_CASE("scan results independent of thread count") {
    auto t1 = scan_small(1600, 0.15, 128, 1);
    auto t3 = scan_small(1600, 0.15, 128, 3);
    REQUIRE(t1.size() == t3.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].delta == t3[i].delta);
        CHECK(t1[i].margin == t3[i].margin);
        CHECK(t1[i].error_bound == t3[i].error_bound);
    }
}

TEST_CASE("principal_rhs variants") {
    Discriminant d(-1000000);
    TrinomialSignature sig(5, 4);
    Real zero = Real::from_int(0, 64);

    // half: e^(-pi 500 + 0.7), checked in log
    Real half = principal_rhs(d, sig, zero, PrincipalVariant::half, 192);
    RBall lh = log(RBall::from_real(half, 192));
    double expect = -3.14159265358979323846 * 500.0 + 0.7;
    CHECK(lh.mid().to_double() == doctest::Approx(expect).epsilon(1e-12));

    // full and mn share their right-hand side at every signature
    Real lx = Real::from_double(100.0, 64);
    for (auto sg : {TrinomialSignature(2, 1), TrinomialSignature(7, 3)}) {
        Real a = principal_rhs(d, sg, lx, PrincipalVariant::full, 192);
        Real b = principal_rhs(d, sg, lx, PrincipalVariant::mn, 192);
        CHECK(mpfr_cmp(a.raw(), b.raw()) == 0);
    }

    // single exceeds half by the factor e^(1e-17) when log|x1| sits at its
    // ceiling pi sqrt|D|/2 + 1e-17
    RBall pr = RBall::pi(192) * sqrt(RBall::exact_int(1000000, 192));
    Real lx_half = (pr.div_si(2) + RBall::from_decimal("1e-17", 192)).mid();
    Real single = principal_rhs(d, sig, lx_half, PrincipalVariant::single, 192);
    Real halfv = principal_rhs(d, sig, zero, PrincipalVariant::half, 192);
    CHECK(mpfr_cmp(single.raw(), halfv.raw()) > 0);
    RBall fac = RBall::from_real(single, 192) / RBall::from_real(halfv, 192);
    CHECK(fac.mid().to_double() == doctest::Approx(std::exp(1e-17)).epsilon(1e-15));

    CHECK_THROWS_AS(principal_rhs(Discriminant(-500), sig, zero, PrincipalVariant::half, 128),
                    std::domain_error);
}

TEST_CASE("refined_principal_rhs variants") {
    Discriminant d(-100000000000);  // |delta| = 10^11
    Real rho = Real::from_double(2.5, 64);

    // fourth display: exponent -pi sqrt|D| + 2 log|D|
    Real plain = refined_principal_rhs(d, TrinomialSignature(2, 1), rho, RefinedVariant::diff_plain, 256);
    RBall lp = log(RBall::from_real(plain, 256));
    double expect = -3.14159265358979323846 * std::sqrt(1e11) + 2.0 * std::log(1e11);
    CHECK(lp.mid().to_double() == doctest::Approx(expect).epsilon(1e-9));

    // second and third displays coincide when m - n = 1
    Real second = refined_principal_rhs(d, TrinomialSignature(2, 1), rho, RefinedVariant::diff_rho_mn, 256);
    Real third = refined_principal_rhs(d, TrinomialSignature(9, 8), rho, RefinedVariant::diff_rho, 256);
    CHECK(mpfr_cmp(second.raw(), third.raw()) == 0);

    // first display is the second divided by rho (structure check)
    Real first = refined_principal_rhs(d, TrinomialSignature(3, 1), rho, RefinedVariant::ratio_power, 256);
    Real second2 = refined_principal_rhs(d, TrinomialSignature(3, 1), rho, RefinedVariant::diff_rho_mn, 256);
    RBall ratio = RBall::from_real(second2, 256) / RBall::from_real(first, 256);
    CHECK(ratio.mid().to_double() == doctest::Approx(2.5).epsilon(1e-12));
}
