// Complex trinomial-incompatibility machinery: witness margins over
// triples of singular moduli, the small-discriminant range scan, and the
// principal-inequality right-hand-side evaluators.
#pragma once

#include <array>
#include <atomic>
#include <functional>
#include <optional>

#include "tridisc/parallel.hpp"
#include "tridisc/singular_moduli.hpp"

namespace tridisc {

struct TrinomialSignature {
    unsigned m, n;

    TrinomialSignature(unsigned m_, unsigned n_) : m(m_), n(n_) {
        if (!(m > n && n > 0)) throw std::invalid_argument("signature requires m > n > 0");
    }
};

// Best witness over admissible triples for one discriminant. A strictly
// positive margin (beyond its error bound) is incompatible with the
// moduli being roots of one trinomial.
struct WitnessReport {
    i64 delta;
    std::size_t h;
    std::array<ReducedForm, 3> triple;  // forms of the chosen x0, x1, x2
    double margin;                      // (1 - |x2/x1|) - (2|x1/x0| + 2|x1/x0|^3)
    double error_bound;
};

// Maximizes the margin over ordered triples with |x0| >= |x1| >= |x2|.
// With magnitudes sorted descending the maximum is attained at
// x0 = largest, x2 = smallest, so only the middle index is searched;
// the O(h^3) brute force over triples agrees (tested).
inline WitnessReport witness_margin(Discriminant delta, mpfr_prec_t precision_bits = 128) {
    auto moduli = singular_moduli(delta, precision_bits);
    const std::size_t h = moduli.size();
    if (h < 3) throw std::invalid_argument("witness_margin: class number below 3");

    std::vector<RBall> mag;
    mag.reserve(h);
    for (const auto& sm : moduli) mag.push_back(sm.value.abs());

    std::optional<RBall> best;
    std::size_t best_j = 1;
    for (std::size_t j = 1; j + 1 < h; ++j) {
        RBall r = mag[j] / mag[0];
        RBall m = (RBall::exact_int(1, precision_bits) - mag[h - 1] / mag[j]) -
                  (r.mul_si(2) + r.pow_ui(3).mul_si(2));
        if (!best || mpfr_cmp(best->mid().raw(), m.mid().raw()) < 0) {
            best = m;
            best_j = j;
        }
    }
    WitnessReport rep;
    rep.delta = delta.value();
    rep.h = h;
    rep.triple = {moduli[0].form, moduli[best_j].form, moduli[h - 1].form};
    rep.margin = best->mid().to_double();
    rep.error_bound = best->rad().to_double();
    return rep;
}

// Scans discriminants |delta| <= limit with h(delta) > 3 in ascending
// |delta| and returns those whose best margin is not certified above the
// threshold.
inline std::vector<WitnessReport> scan_small(u64 limit, double margin_threshold = 0.15,
                                             mpfr_prec_t precision_bits = 128, unsigned threads = 1,
                                             const std::function<void(std::size_t, std::size_t)>& progress = {}) {
    std::vector<i64> discs;
    for (u64 a = 3; a <= limit; ++a) {
        i64 v = -static_cast<i64>(a);
        if (Discriminant::valid(v)) discs.push_back(v);
    }
    std::vector<std::optional<WitnessReport>> hit(discs.size());
    std::atomic<std::size_t> done{0};
    parallel_for(discs.size(), threads, [&](std::size_t i) {
        Discriminant d(discs[i]);
        if (class_number(d) > 3) {
            auto rep = witness_margin(d, precision_bits);
            if (!(rep.margin - rep.error_bound > margin_threshold)) hit[i] = rep;
        }
        if (progress) progress(++done, discs.size());
    });
    std::vector<WitnessReport> failures;
    for (auto& o : hit)
        if (o) failures.push_back(*o);
    return failures;
}

// Right-hand sides of the four principal-inequality displays. The `full`
// and `mn` displays share one formula (they differ in their left-hand
// sides only).
enum class PrincipalVariant { full, mn, single, half };

inline Real principal_rhs(Discriminant delta, TrinomialSignature sig, const Real& log_x1,
                          PrincipalVariant variant, mpfr_prec_t prec = 128) {
    if (delta.abs() < 1000) throw std::domain_error("principal_rhs: requires |delta| >= 1000");
    RBall pi_root = RBall::pi(prec) * sqrt(RBall::exact_int(static_cast<i64>(delta.abs()), prec));
    RBall lx = RBall::from_real(log_x1, prec);
    switch (variant) {
        case PrincipalVariant::full:
        case PrincipalVariant::mn: {
            RBall inner = (-pi_root + lx + RBall::from_decimal("1e-20", prec)).mul_si(sig.m - sig.n);
            return exp(inner + log(RBall::exact_int(2, prec))).mid();
        }
        case PrincipalVariant::single:
            return exp(-pi_root + lx + RBall::from_decimal("0.7", prec)).mid();
        case PrincipalVariant::half:
            return exp(-(pi_root.div_si(2)) + RBall::from_decimal("0.7", prec)).mid();
    }
    throw std::logic_error("unreachable");
}

// Right-hand sides of the refined principal inequality's four displays.
enum class RefinedVariant { ratio_power, diff_rho_mn, diff_rho, diff_plain };

inline Real refined_principal_rhs(Discriminant delta, TrinomialSignature sig, const Real& rho,
                                  RefinedVariant variant, mpfr_prec_t prec = 128) {
    RBall pi_root = RBall::pi(prec) * sqrt(RBall::exact_int(static_cast<i64>(delta.abs()), prec));
    RBall logd = log(RBall::exact_int(static_cast<i64>(delta.abs()), prec));
    RBall rho_ball = RBall::from_real(rho, prec);
    switch (variant) {
        case RefinedVariant::ratio_power:
            return exp((-pi_root + logd).mul_si(sig.m - sig.n)).mid();
        case RefinedVariant::diff_rho_mn:
            return (rho_ball * exp((-pi_root + logd).mul_si(sig.m - sig.n))).mid();
        case RefinedVariant::diff_rho:
            return (rho_ball * exp(-pi_root + logd)).mid();
        case RefinedVariant::diff_plain:
            return exp(-pi_root + logd.mul_si(2)).mid();
    }
    throw std::logic_error("unreachable");
}

}  // namespace tridisc
