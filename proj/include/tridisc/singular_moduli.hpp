// High-precision singular moduli: certified evaluation of j at
// fundamental-domain points, class polynomials with exact integer
// coefficients, and per-discriminant statistics.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <vector>

#include "tridisc/ball.hpp"
#include "tridisc/quadforms.hpp"

namespace tridisc {

namespace jdetail {

// sigma_3 / sigma_5 tables, grown on demand and shared process-wide.
struct SigmaTables {
    std::vector<u64> s3{0, 1}, s5{0, 1};

    void ensure(std::size_t n) {
        if (s3.size() > n) return;
        std::size_t cap = std::max<std::size_t>(n, 2 * s3.size());
        s3.assign(cap + 1, 0);
        s5.assign(cap + 1, 0);
        for (std::size_t d = 1; d <= cap; ++d) {
            u64 d3 = d * d * d;
            u64 d5 = d3 * d * d;
            for (std::size_t m = d; m <= cap; m += d) {
                s3[m] += d3;
                s5[m] += d5;
            }
        }
    }
};

inline SigmaTables& sigma_tables() {
    static SigmaTables t;
    return t;
}
inline std::mutex& sigma_mutex() {
    static std::mutex m;
    return m;
}

// Truncation tails after N terms, given an upper bound Q on |q|:
//   sum_{n>N} 240 sigma_3(n) |q|^n <= 293 (N+1)^3 Q^(N+1)
//   sum_{n>N} 504 sigma_5(n) |q|^n <= 528 (N+1)^5 Q^(N+1)
// using sigma_3(n) <= zeta(3) n^3, sigma_5(n) <= zeta(5) n^5 and a
// geometric majorant valid for N >= 8, Q <= 0.0045.
inline Real series_tail(const Real& q_upper, unsigned long n_next, unsigned power, double lead) {
    Real t(ballimpl::kRadPrec);
    mpfr_set_d(t.raw(), lead, MPFR_RNDU);
    Real np(ballimpl::kRadPrec);
    mpfr_set_ui(np.raw(), n_next, MPFR_RNDU);
    mpfr_pow_ui(np.raw(), np.raw(), power, MPFR_RNDU);
    mpfr_mul(t.raw(), t.raw(), np.raw(), MPFR_RNDU);
    mpfr_pow_ui(np.raw(), q_upper.raw(), n_next, MPFR_RNDU);
    mpfr_mul(t.raw(), t.raw(), np.raw(), MPFR_RNDU);
    return t;
}

// Smallest N >= 8 with both tails below 2^(-target_bits).
inline unsigned long choose_terms(const Real& q_upper, mpfr_prec_t target_bits) {
    Real budget = Real::pow2(-static_cast<mpfr_exp_t>(target_bits));
    for (unsigned long n = 8; n <= 4000; ++n) {
        Real t4 = series_tail(q_upper, n + 1, 3, 293.0);
        Real t6 = series_tail(q_upper, n + 1, 5, 528.0);
        if (mpfr_cmp(t4.raw(), budget.raw()) <= 0 && mpfr_cmp(t6.raw(), budget.raw()) <= 0) return n;
    }
    throw std::runtime_error("eval_j: series does not converge fast enough (|q| too close to the bound)");
}

}  // namespace jdetail

namespace jdetail {

// One evaluation pass at a fixed working precision. Returns nothing when
// the result cannot be certified to 2^(-precision_bits) relative accuracy
// (the caller then raises the working precision).
inline std::optional<CBall> eval_j_once(const RBall& tau_re, const RBall& tau_im, mpfr_prec_t precision_bits,
                                        mpfr_prec_t prec, bool final_attempt) {
    RBall two_pi = RBall::pi(prec).mul_si(2);
    RBall qa = exp(-(two_pi * tau_im));
    auto [c, s] = cos_sin(two_pi * tau_re);
    CBall q(qa * c, qa * s);

    Real q_up = q.abs().upper();
    if (mpfr_cmp_d(q_up.raw(), 0.0045) > 0)
        throw std::domain_error("eval_j: |q| too large (tau below the domain)");

    unsigned long terms = choose_terms(q_up, prec + 2);
    {
        std::lock_guard<std::mutex> lk(sigma_mutex());
        sigma_tables().ensure(terms);
    }
    const auto& tabs = sigma_tables();

    CBall e4 = CBall::exact_int(1, prec);
    CBall e6 = CBall::exact_int(1, prec);
    CBall qn = q;
    for (unsigned long n = 1; n <= terms; ++n) {
        e4 = e4 + qn.mul_ui(tabs.s3[n]).mul_ui(240);
        e6 = e6 - qn.mul_ui(tabs.s5[n]).mul_ui(504);
        if (n < terms) qn = qn * q;
    }
    Real tail4 = series_tail(q_up, terms + 1, 3, 293.0);
    Real tail6 = series_tail(q_up, terms + 1, 5, 528.0);
    e4.re.inflate(tail4);
    e4.im.inflate(tail4);
    e6.re.inflate(tail6);
    e6.im.inflate(tail6);

    CBall e43 = e4.pow_ui(3);
    CBall denom = e43 - e6.pow_ui(2);
    if (!(denom.re * denom.re + denom.im * denom.im).definitely_positive()) {
        if (final_attempt) throw std::runtime_error("eval_j: denominator not separated from zero");
        return std::nullopt;
    }
    CBall j = e43.mul_ui(1728) / denom;

    // certify rad <= 2^(-pb) max(1,|j|); on the final attempt accept the
    // contractual 2^(-pb/2) before failing
    Real jmag = j.abs().upper();
    Real scale(ballimpl::kRadPrec);
    if (mpfr_cmp_ui(jmag.raw(), 1) < 0)
        mpfr_set_ui(scale.raw(), 1, MPFR_RNDU);
    else
        mpfr_set(scale.raw(), jmag.raw(), MPFR_RNDU);
    Real rb = j.rad_bound();
    Real bound(ballimpl::kRadPrec);
    mpfr_mul(bound.raw(), scale.raw(), Real::pow2(-static_cast<mpfr_exp_t>(precision_bits)).raw(), MPFR_RNDU);
    if (mpfr_cmp(rb.raw(), bound.raw()) <= 0) return j;
    if (final_attempt) {
        mpfr_mul(bound.raw(), scale.raw(), Real::pow2(-static_cast<mpfr_exp_t>(precision_bits / 2)).raw(),
                 MPFR_RNDU);
        if (mpfr_cmp(rb.raw(), bound.raw()) <= 0) return j;
        throw std::runtime_error("eval_j: cannot certify requested precision");
    }
    return std::nullopt;
}

inline void check_domain(double re, double im) {
    if (im < 0.86502 || std::abs(re) > 0.501)
        throw std::domain_error("eval_j: tau outside the relaxed fundamental-domain box");
}

// cancellation depth of E4^3 - E6^2 ~ |q| = e^(-2 pi Im tau), in bits
inline mpfr_prec_t cancel_bits(double im) {
    return static_cast<mpfr_prec_t>(2.0 * 3.14159265358979 * im * 1.4426950408889634) + 2;
}

}  // namespace jdetail

// j(tau) as a certified complex ball. The precondition is a relaxed
// fundamental-domain box: Im tau >= sqrt(3)/2 - 0.001, |Re tau| <= 0.501.
// The enclosure radius of the input limits what can be certified.
inline CBall eval_j(const RBall& tau_re, const RBall& tau_im, mpfr_prec_t precision_bits) {
    jdetail::check_domain(tau_re.mid().to_double(), tau_im.mid().to_double());
    mpfr_prec_t prec = precision_bits + jdetail::cancel_bits(tau_im.mid().to_double()) + 96;
    for (int attempt = 0;; ++attempt, prec *= 2) {
        RBall z = RBall::exact_int(0, prec);
        auto j = jdetail::eval_j_once(z + tau_re, z + tau_im, precision_bits, prec, attempt >= 3);
        if (j) return *j;
    }
}

// j at the fundamental-domain point (b + sqrt(delta)) / 2a of a reduced
// form; tau is rebuilt exactly at every working precision.
inline CBall eval_j_form(const ReducedForm& f, Discriminant delta, mpfr_prec_t precision_bits) {
    const double im_approx = std::sqrt(static_cast<double>(delta.abs())) / (2.0 * static_cast<double>(f.a));
    mpfr_prec_t prec = precision_bits + jdetail::cancel_bits(im_approx) + 96;
    for (int attempt = 0;; ++attempt, prec *= 2) {
        RBall tau_im = sqrt(RBall::exact_int(static_cast<i64>(delta.abs()), prec)).div_si(2 * f.a);
        RBall tau_re = RBall::exact_int(f.b, prec).div_si(2 * f.a);
        auto j = jdetail::eval_j_once(tau_re, tau_im, precision_bits, prec, attempt >= 3);
        if (j) return *j;
    }
}

// A reduced form together with the certified value of j at its point.
struct SingularModulus {
    ReducedForm form;
    CBall value;

    bool dominant() const { return form.a == 1; }
    bool real_point() const { return form.b == 0 || form.b == form.a || form.a == form.c; }
};

// One modulus per element of T_delta: dominant first, then descending
// |value|, ties broken by (a, b) order. Conjugate pairs are evaluated once.
inline std::vector<SingularModulus> singular_moduli(Discriminant delta, mpfr_prec_t precision_bits) {
    auto forms = enumerate_forms(delta);
    std::vector<SingularModulus> out;
    out.reserve(forms.size());
    for (const auto& f : forms) {
        if (f.b < 0) continue;
        out.push_back({f, eval_j_form(f, delta, precision_bits)});
    }
    // mirror the b < 0 forms from their conjugates
    for (const auto& f : forms) {
        if (f.b >= 0) continue;
        const ReducedForm mate{f.a, -f.b, f.c};
        for (const auto& sm : out) {
            if (sm.form == mate) {
                out.push_back({f, sm.value.conj()});
                break;
            }
        }
    }
    std::vector<Real> mags;
    mags.reserve(out.size());
    for (const auto& sm : out) mags.push_back(sm.value.abs().mid());
    std::vector<std::size_t> idx(out.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        if (out[x].dominant() != out[y].dominant()) return out[x].dominant();
        int c = mpfr_cmp(mags[x].raw(), mags[y].raw());
        if (c != 0) return c > 0;
        return std::pair(out[x].form.a, out[x].form.b) < std::pair(out[y].form.a, out[y].form.b);
    });
    std::vector<SingularModulus> sorted;
    sorted.reserve(out.size());
    for (std::size_t i : idx) sorted.push_back(std::move(out[i]));
    return sorted;
}

// Dense integer polynomial, constant term first.
struct IntPolynomial {
    std::vector<mpz_class> coefficients;

    std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
    const mpz_class& constant_term() const { return coefficients.front(); }
    bool monic() const { return !coefficients.empty() && coefficients.back() == 1; }

    bool operator==(const IntPolynomial&) const = default;
};

struct HilbertResult {
    IntPolynomial poly;
    mpfr_prec_t precision_bits;   // working precision that produced it
    int retries;                  // precision doublings that were needed
    double max_rounding_distance; // worst |coefficient - nearest integer|
};

inline mpfr_prec_t hilbert_auto_precision(Discriminant delta, std::size_t h) {
    double bits = 3.14159265358979 * std::sqrt(static_cast<double>(delta.abs())) / 0.6931471805599453;
    return static_cast<mpfr_prec_t>(bits) + 1 + 64 * static_cast<mpfr_prec_t>(h);
}

// Monic integer polynomial whose roots are the singular moduli. Every
// complex product coefficient must land within 0.25 of an integer
// (rounding certificate); on failure the working precision doubles, at
// most 3 times.
inline HilbertResult hilbert_class_poly(Discriminant delta,
                                        std::optional<mpfr_prec_t> precision = std::nullopt) {
    auto forms = enumerate_forms(delta);
    const std::size_t h = forms.size();
    mpfr_prec_t prec = precision.value_or(hilbert_auto_precision(delta, h));

    for (int retry = 0;; ++retry) {
        auto moduli = singular_moduli(delta, prec);

        bool realness_ok = true;
        std::vector<RBall> coef;
        coef.push_back(RBall::exact_int(1, prec));
        for (const auto& sm : moduli) {
            if (sm.form.b < 0) continue;  // conjugate handled with its mate
            if (sm.real_point()) {
                if (!sm.value.im.contains_zero()) {
                    realness_ok = false;  // enclosure too loose; retry wider
                    break;
                }
                // multiply by (t - x)
                std::vector<RBall> next(coef.size() + 1, RBall(prec));
                next[0] = RBall::exact_int(0, prec) - sm.value.re * coef[0];
                for (std::size_t i = 1; i <= coef.size(); ++i) {
                    next[i] = (i < coef.size()) ? coef[i - 1] - sm.value.re * coef[i] : coef[i - 1];
                }
                coef = std::move(next);
            } else {
                // multiply by t^2 - 2 Re(x) t + |x|^2
                RBall lin = sm.value.re.mul_si(-2);
                RBall cst = sm.value.re * sm.value.re + sm.value.im * sm.value.im;
                std::vector<RBall> next(coef.size() + 2, RBall(prec));
                for (std::size_t i = 0; i < coef.size() + 2; ++i) {
                    RBall acc = RBall::exact_int(0, prec);
                    if (i < coef.size()) acc = acc + cst * coef[i];
                    if (i >= 1 && i - 1 < coef.size()) acc = acc + lin * coef[i - 1];
                    if (i >= 2) acc = acc + coef[i - 2];
                    next[i] = acc;
                }
                coef = std::move(next);
            }
        }

        IntPolynomial poly;
        poly.coefficients.resize(coef.size());
        double max_dist = 0.0;
        bool certified = realness_ok;
        for (std::size_t i = 0; certified && i < coef.size(); ++i) {
            mpz_class n;
            mpfr_get_z(n.get_mpz_t(), coef[i].mid().raw(), MPFR_RNDN);
            Real dist(ballimpl::kRadPrec);
            Real nz = Real::from_mpz(n, coef[i].precision());
            mpfr_sub(dist.raw(), coef[i].mid().raw(), nz.raw(), MPFR_RNDA);
            mpfr_abs(dist.raw(), dist.raw(), MPFR_RNDU);
            mpfr_add(dist.raw(), dist.raw(), coef[i].rad().raw(), MPFR_RNDU);
            double d = dist.to_double();
            max_dist = std::max(max_dist, d);
            if (!(d <= 0.25)) certified = false;
            poly.coefficients[i] = n;
        }
        if (certified) {
            if (poly.coefficients.size() != h + 1 || !poly.monic())
                throw std::runtime_error("hilbert_class_poly: degree/monicity check failed");
            return {std::move(poly), prec, retry, max_dist};
        }
        if (retry >= 3)
            throw std::runtime_error("hilbert_class_poly: rounding certificate failed at maximum precision");
        prec *= 2;
    }
}

// Class number, largest non-dominant modulus, and the absolute norm.
struct DeltaStats {
    std::size_t h;
    std::optional<Real> rho;  // absent when h = 1
    mpz_class norm;           // |H(0)|, exact
    double log_norm;          // sum of log|x_i|
};

inline DeltaStats delta_stats(Discriminant delta) {
    auto hp = hilbert_class_poly(delta);
    auto moduli = singular_moduli(delta, hp.precision_bits);
    DeltaStats st;
    st.h = moduli.size();
    if (st.h >= 2) st.rho = moduli[1].value.abs().mid();
    st.norm = hp.poly.constant_term();
    if (st.norm < 0) st.norm = -st.norm;
    if (st.norm == 0) {  // only delta = -3, whose singular modulus is 0
        st.log_norm = -std::numeric_limits<double>::infinity();
        return st;
    }
    RBall acc = RBall::exact_int(0, 64);
    for (const auto& sm : moduli) acc = acc + log(sm.value.abs());
    st.log_norm = acc.mid().to_double();
    return st;
}

}  // namespace tridisc
