// Certified arbitrary-precision arithmetic: midpoints at a chosen MPFR
// working precision with upward-rounded error radii carried alongside.
// Every operation keeps the invariant |true - mid| <= rad.
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

namespace tridisc {

// RAII value wrapper around mpfr_t.
class Real {
  public:
    explicit Real(mpfr_prec_t prec = 64) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    static Real from_double(double d, mpfr_prec_t prec = 64) {
        Real r(prec);
        mpfr_set_d(r.v_, d, MPFR_RNDN);
        return r;
    }
    static Real from_int(std::int64_t n, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_sj(r.v_, n, MPFR_RNDN);
        return r;
    }
    static Real from_mpz(const mpz_class& n, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_z(r.v_, n.get_mpz_t(), MPFR_RNDN);
        return r;
    }
    // 2^e
    static Real pow2(mpfr_exp_t e, mpfr_prec_t prec = 32) {
        Real r(prec);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDU);
        return r;
    }
    static Real pi(mpfr_prec_t prec) {
        Real r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    int sign() const { return mpfr_sgn(v_); }
    bool operator<(const Real& o) const { return mpfr_cmp(v_, o.v_) < 0; }
    bool operator<=(const Real& o) const { return mpfr_cmp(v_, o.v_) <= 0; }

    std::string str(std::size_t digits = 20) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

  private:
    mpfr_t v_;
};

namespace ballimpl {

constexpr mpfr_prec_t kRadPrec = 32;

// Upper bound on the rounding error of a correctly rounded result r at
// precision p: one ulp, i.e. 2^(exp(r)-p). Exact results contribute 0.
inline void add_round_err(mpfr_ptr rad, mpfr_srcptr r, int ternary) {
    if (ternary == 0) return;
    if (mpfr_zero_p(r) || !mpfr_number_p(r)) throw std::runtime_error("ball: rounding produced zero/non-finite");
    mpfr_exp_t e = mpfr_get_exp(r) - mpfr_get_prec(r);
    mpfr_t ulp;
    mpfr_init2(ulp, kRadPrec);
    mpfr_set_ui_2exp(ulp, 1, e, MPFR_RNDU);
    mpfr_add(rad, rad, ulp, MPFR_RNDU);
    mpfr_clear(ulp);
}

}  // namespace ballimpl

// Real ball: |true - mid| <= rad. Radii are kept in a low-precision MPFR
// number and every radius operation rounds upward, so the enclosure is
// rigorous regardless of the midpoint precision.
class RBall {
  public:
    explicit RBall(mpfr_prec_t prec = 64) : mid_(prec), rad_(ballimpl::kRadPrec) {}

    static RBall exact_int(std::int64_t n, mpfr_prec_t prec) {
        RBall b(prec);
        int t = mpfr_set_sj(b.mid_.raw(), n, MPFR_RNDN);
        ballimpl::add_round_err(b.rad_.raw(), b.mid_.raw(), t);
        return b;
    }
    static RBall exact_mpz(const mpz_class& n, mpfr_prec_t prec) {
        RBall b(prec);
        int t = mpfr_set_z(b.mid_.raw(), n.get_mpz_t(), MPFR_RNDN);
        ballimpl::add_round_err(b.rad_.raw(), b.mid_.raw(), t);
        return b;
    }
    static RBall exact_double(double d, mpfr_prec_t prec) {
        RBall b(prec);
        int t = mpfr_set_d(b.mid_.raw(), d, MPFR_RNDN);
        ballimpl::add_round_err(b.rad_.raw(), b.mid_.raw(), t);
        return b;
    }
    // decimal literal, correctly rounded at prec with a one-ulp radius
    static RBall from_decimal(const char* s, mpfr_prec_t prec) {
        RBall b(prec);
        int t = mpfr_set_str(b.mid_.raw(), s, 10, MPFR_RNDN);
        if (t == -1) throw std::invalid_argument("RBall::from_decimal: bad literal");
        ballimpl::add_round_err(b.rad_.raw(), b.mid_.raw(), 1);
        return b;
    }
    static RBall pi(mpfr_prec_t prec) {
        RBall b(prec);
        int t = mpfr_const_pi(b.mid_.raw(), MPFR_RNDN);
        ballimpl::add_round_err(b.rad_.raw(), b.mid_.raw(), t);
        return b;
    }
    // treats x as exact data (one-ulp radius when it does not fit prec)
    static RBall from_real(const Real& x, mpfr_prec_t prec) {
        RBall b(prec);
        int t = mpfr_set(b.mid_.raw(), x.raw(), MPFR_RNDN);
        ballimpl::add_round_err(b.rad_.raw(), b.mid_.raw(), t);
        return b;
    }

    const Real& mid() const { return mid_; }
    const Real& rad() const { return rad_; }
    mpfr_prec_t precision() const { return mid_.precision(); }

    // Adds an extra error term (e.g. a series truncation bound).
    void inflate(const Real& extra) { mpfr_add(rad_.raw(), rad_.raw(), extra.raw(), MPFR_RNDU); }

    RBall operator-() const {
        RBall r = *this;
        mpfr_neg(r.mid_.raw(), r.mid_.raw(), MPFR_RNDN);
        return r;
    }

    RBall abs() const {
        RBall r = *this;
        mpfr_abs(r.mid_.raw(), r.mid_.raw(), MPFR_RNDN);
        return r;
    }

    friend RBall operator+(const RBall& a, const RBall& b) {
        RBall r(std::max(a.precision(), b.precision()));
        int t = mpfr_add(r.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
        mpfr_add(r.rad_.raw(), a.rad_.raw(), b.rad_.raw(), MPFR_RNDU);
        ballimpl::add_round_err(r.rad_.raw(), r.mid_.raw(), t);
        return r;
    }
    friend RBall operator-(const RBall& a, const RBall& b) {
        RBall r(std::max(a.precision(), b.precision()));
        int t = mpfr_sub(r.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
        mpfr_add(r.rad_.raw(), a.rad_.raw(), b.rad_.raw(), MPFR_RNDU);
        ballimpl::add_round_err(r.rad_.raw(), r.mid_.raw(), t);
        return r;
    }
    friend RBall operator*(const RBall& a, const RBall& b) {
        RBall r(std::max(a.precision(), b.precision()));
        int t = mpfr_mul(r.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
        // |a|rb + |b|ra + ra rb
        mpfr_t am, bm, term;
        mpfr_init2(am, ballimpl::kRadPrec);
        mpfr_init2(bm, ballimpl::kRadPrec);
        mpfr_init2(term, ballimpl::kRadPrec);
        mpfr_abs(am, a.mid_.raw(), MPFR_RNDU);
        mpfr_abs(bm, b.mid_.raw(), MPFR_RNDU);
        mpfr_mul(term, am, b.rad_.raw(), MPFR_RNDU);
        mpfr_add(r.rad_.raw(), r.rad_.raw(), term, MPFR_RNDU);
        mpfr_mul(term, bm, a.rad_.raw(), MPFR_RNDU);
        mpfr_add(r.rad_.raw(), r.rad_.raw(), term, MPFR_RNDU);
        mpfr_mul(term, a.rad_.raw(), b.rad_.raw(), MPFR_RNDU);
        mpfr_add(r.rad_.raw(), r.rad_.raw(), term, MPFR_RNDU);
        ballimpl::add_round_err(r.rad_.raw(), r.mid_.raw(), t);
        mpfr_clear(am);
        mpfr_clear(bm);
        mpfr_clear(term);
        return r;
    }
    friend RBall operator/(const RBall& a, const RBall& b) {
        // lower bound of |b|
        mpfr_t blo, num, tmp;
        mpfr_init2(blo, ballimpl::kRadPrec);
        mpfr_abs(blo, b.mid_.raw(), MPFR_RNDD);
        mpfr_sub(blo, blo, b.rad_.raw(), MPFR_RNDD);
        if (mpfr_sgn(blo) <= 0) {
            mpfr_clear(blo);
            throw std::domain_error("ball division: denominator interval contains zero");
        }
        RBall r(std::max(a.precision(), b.precision()));
        int t = mpfr_div(r.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
        // (ra + |q| rb) / (|b| - rb), with |q| bumped one 32-bit ulp above
        // the rounded quotient to cover |a/b| > |fl(a/b)|
        mpfr_init2(num, ballimpl::kRadPrec);
        mpfr_init2(tmp, ballimpl::kRadPrec);
        mpfr_abs(num, r.mid_.raw(), MPFR_RNDU);
        mpfr_nextabove(num);
        mpfr_mul(num, num, b.rad_.raw(), MPFR_RNDU);
        mpfr_add(num, num, a.rad_.raw(), MPFR_RNDU);
        mpfr_div(tmp, num, blo, MPFR_RNDU);
        mpfr_add(r.rad_.raw(), r.rad_.raw(), tmp, MPFR_RNDU);
        ballimpl::add_round_err(r.rad_.raw(), r.mid_.raw(), t);
        mpfr_clear(blo);
        mpfr_clear(num);
        mpfr_clear(tmp);
        return r;
    }

    RBall mul_si(std::int64_t k) const {
        RBall r(precision());
        int t = mpfr_mul_si(r.mid_.raw(), mid_.raw(), k, MPFR_RNDN);
        mpfr_mul_si(r.rad_.raw(), rad_.raw(), k < 0 ? -k : k, MPFR_RNDU);
        ballimpl::add_round_err(r.rad_.raw(), r.mid_.raw(), t);
        return r;
    }
    RBall mul_ui(std::uint64_t k) const {
        RBall r(precision());
        int t = mpfr_mul_ui(r.mid_.raw(), mid_.raw(), k, MPFR_RNDN);
        mpfr_mul_ui(r.rad_.raw(), rad_.raw(), k, MPFR_RNDU);
        ballimpl::add_round_err(r.rad_.raw(), r.mid_.raw(), t);
        return r;
    }
    RBall div_si(std::int64_t k) const {
        RBall r(precision());
        int t = mpfr_div_si(r.mid_.raw(), mid_.raw(), k, MPFR_RNDN);
        mpfr_div_si(r.rad_.raw(), rad_.raw(), k < 0 ? -k : k, MPFR_RNDU);
        // RNDU division by positive k keeps the bound valid
        ballimpl::add_round_err(r.rad_.raw(), r.mid_.raw(), t);
        return r;
    }
    RBall add_si(std::int64_t k) const {
        RBall r(precision());
        int t = mpfr_add_si(r.mid_.raw(), mid_.raw(), k, MPFR_RNDN);
        mpfr_set(r.rad_.raw(), rad_.raw(), MPFR_RNDU);
        ballimpl::add_round_err(r.rad_.raw(), r.mid_.raw(), t);
        return r;
    }

    friend RBall sqrt(const RBall& a) {
        mpfr_t lo;
        mpfr_init2(lo, ballimpl::kRadPrec);
        mpfr_set(lo, a.mid_.raw(), MPFR_RNDD);
        mpfr_sub(lo, lo, a.rad_.raw(), MPFR_RNDD);
        if (mpfr_sgn(lo) <= 0) {
            mpfr_clear(lo);
            throw std::domain_error("ball sqrt: interval not strictly positive");
        }
        RBall r(a.precision());
        int t = mpfr_sqrt(r.mid_.raw(), a.mid_.raw(), MPFR_RNDN);
        // ra / (2 sqrt(lo))
        mpfr_t den;
        mpfr_init2(den, ballimpl::kRadPrec);
        mpfr_sqrt(den, lo, MPFR_RNDD);
        mpfr_mul_ui(den, den, 2, MPFR_RNDD);
        mpfr_div(lo, a.rad_.raw(), den, MPFR_RNDU);
        mpfr_add(r.rad_.raw(), r.rad_.raw(), lo, MPFR_RNDU);
        ballimpl::add_round_err(r.rad_.raw(), r.mid_.raw(), t);
        mpfr_clear(lo);
        mpfr_clear(den);
        return r;
    }

    friend RBall exp(const RBall& a) {
        RBall r(a.precision());
        int t = mpfr_exp(r.mid_.raw(), a.mid_.raw(), MPFR_RNDN);
        // e^(a+ra) * ra
        mpfr_t hi;
        mpfr_init2(hi, ballimpl::kRadPrec);
        mpfr_set(hi, a.mid_.raw(), MPFR_RNDU);
        mpfr_add(hi, hi, a.rad_.raw(), MPFR_RNDU);
        mpfr_exp(hi, hi, MPFR_RNDU);
        mpfr_mul(hi, hi, a.rad_.raw(), MPFR_RNDU);
        mpfr_add(r.rad_.raw(), r.rad_.raw(), hi, MPFR_RNDU);
        ballimpl::add_round_err(r.rad_.raw(), r.mid_.raw(), t);
        mpfr_clear(hi);
        return r;
    }

    friend RBall log(const RBall& a) {
        mpfr_t lo;
        mpfr_init2(lo, ballimpl::kRadPrec);
        mpfr_set(lo, a.mid_.raw(), MPFR_RNDD);
        mpfr_sub(lo, lo, a.rad_.raw(), MPFR_RNDD);
        if (mpfr_sgn(lo) <= 0) {
            mpfr_clear(lo);
            throw std::domain_error("ball log: interval not strictly positive");
        }
        RBall r(a.precision());
        int t = mpfr_log(r.mid_.raw(), a.mid_.raw(), MPFR_RNDN);
        mpfr_div(lo, a.rad_.raw(), lo, MPFR_RNDU);
        mpfr_add(r.rad_.raw(), r.rad_.raw(), lo, MPFR_RNDU);
        ballimpl::add_round_err(r.rad_.raw(), r.mid_.raw(), t);
        mpfr_clear(lo);
        return r;
    }

    // cos and sin are 1-Lipschitz: the input radius carries over.
    friend std::pair<RBall, RBall> cos_sin(const RBall& a) {
        RBall c(a.precision()), s(a.precision());
        int t = mpfr_sin_cos(s.mid_.raw(), c.mid_.raw(), a.mid_.raw(), MPFR_RNDN);
        mpfr_add(c.rad_.raw(), c.rad_.raw(), a.rad_.raw(), MPFR_RNDU);
        mpfr_add(s.rad_.raw(), s.rad_.raw(), a.rad_.raw(), MPFR_RNDU);
        ballimpl::add_round_err(s.rad_.raw(), s.mid_.raw(), t % 4);
        ballimpl::add_round_err(c.rad_.raw(), c.mid_.raw(), t / 4);
        return {c, s};
    }

    RBall pow_ui(std::uint64_t e) const {
        RBall r = RBall::exact_int(1, precision());
        RBall base = *this;
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    // Conservative bounds and predicates.
    Real upper() const {
        Real u(ballimpl::kRadPrec);
        mpfr_set(u.raw(), mid_.raw(), MPFR_RNDU);
        mpfr_add(u.raw(), u.raw(), rad_.raw(), MPFR_RNDU);
        return u;
    }
    Real lower() const {
        Real l(ballimpl::kRadPrec);
        mpfr_set(l.raw(), mid_.raw(), MPFR_RNDD);
        mpfr_sub(l.raw(), l.raw(), rad_.raw(), MPFR_RNDD);
        return l;
    }
    bool definitely_positive() const { return lower().sign() > 0; }
    bool contains_zero() const { return lower().sign() <= 0 && upper().sign() >= 0; }
    bool contains(const Real& x) const {
        return mpfr_cmp(lower().raw(), x.raw()) <= 0 && mpfr_cmp(x.raw(), upper().raw()) <= 0;
    }

  private:
    Real mid_;
    Real rad_;
};

// Complex ball with componentwise enclosures.
struct CBall {
    RBall re, im;

    explicit CBall(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    CBall(RBall r, RBall i) : re(std::move(r)), im(std::move(i)) {}

    static CBall exact_int(std::int64_t n, mpfr_prec_t prec) {
        return {RBall::exact_int(n, prec), RBall::exact_int(0, prec)};
    }

    mpfr_prec_t precision() const { return re.precision(); }

    CBall conj() const { return {re, -im}; }

    friend CBall operator+(const CBall& a, const CBall& b) { return {a.re + b.re, a.im + b.im}; }
    friend CBall operator-(const CBall& a, const CBall& b) { return {a.re - b.re, a.im - b.im}; }
    friend CBall operator*(const CBall& a, const CBall& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend CBall operator/(const CBall& a, const CBall& b) {
        RBall n = b.re * b.re + b.im * b.im;
        CBall num = a * b.conj();
        return {num.re / n, num.im / n};
    }

    CBall mul_ui(std::uint64_t k) const { return {re.mul_ui(k), im.mul_ui(k)}; }
    CBall mul_si(std::int64_t k) const { return {re.mul_si(k), im.mul_si(k)}; }

    CBall pow_ui(std::uint64_t e) const {
        CBall r = CBall::exact_int(1, precision());
        CBall base = *this;
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    // |z| as a ball; if the norm interval touches zero the enclosure
    // degrades gracefully to [0, sqrt(upper)].
    RBall abs() const {
        RBall n = re * re + im * im;
        if (n.lower().sign() > 0) return sqrt(n);
        RBall r(precision());  // mid = 0
        Real hi = n.upper();
        if (hi.sign() < 0) return r;  // norm ball entirely <= 0: |z| pinned to 0
        Real s(ballimpl::kRadPrec);
        mpfr_sqrt(s.raw(), hi.raw(), MPFR_RNDU);
        r.inflate(s);
        return r;
    }

    // Magnitude of the total radius, as an upper bound (|dre| + |dim|).
    Real rad_bound() const {
        Real u(ballimpl::kRadPrec);
        mpfr_add(u.raw(), re.rad().raw(), im.rad().raw(), MPFR_RNDU);
        return u;
    }
};

}  // namespace tridisc
