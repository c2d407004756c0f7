#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "confign/numbers.hpp"

namespace confign {

// RAII wrapper over an mpfr_t with explicit binary precision. All operations
// round to nearest; binary operations produce results at the larger of the
// two operand precisions.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
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
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real of(double x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_d(r.v_, x, MPFR_RNDN);
    return r;
  }
  static Real of(long x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si(r.v_, x, MPFR_RNDN);
    return r;
  }
  static Real of(const Int& x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_z(r.v_, x.get_mpz_t(), MPFR_RNDN);
    return r;
  }
  static Real of(const Rat& x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN);
    return r;
  }
  static Real pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Value formatted with `digits` significant decimal digits.
  std::string str(int digits = 15) const;

  friend Real operator+(const Real& a, const Real& b) { return bin(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return bin(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return bin(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return bin(a, b, mpfr_div); }
  Real operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }
  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

  static Real log(const Real& x) { return un(x, mpfr_log); }
  static Real exp(const Real& x) { return un(x, mpfr_exp); }
  static Real sqrt(const Real& x) { return un(x, mpfr_sqrt); }
  static Real sin(const Real& x) { return un(x, mpfr_sin); }
  static Real cos(const Real& x) { return un(x, mpfr_cos); }
  static Real erf(const Real& x) { return un(x, mpfr_erf); }
  static Real abs(const Real& x) { return un(x, mpfr_abs); }
  static Real pow(const Real& b, const Real& e) { return bin(b, e, mpfr_pow); }

  // ln(num) - ln(den): the logarithm of a huge exact rational without
  // materializing the quotient at full precision.
  static Real log_ratio(const Int& num, const Int& den, mpfr_prec_t prec) {
    Real n = of(num, prec), d = of(den, prec);
    return log(n) - log(d);
  }

 private:
  using BinOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  using UnOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
  static Real bin(const Real& a, const Real& b, BinOp op) {
    Real r(std::max(a.precision(), b.precision()));
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  static Real un(const Real& x, UnOp op) {
    Real r(x.precision());
    op(r.v_, x.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

// Standard normal CDF at working precision.
Real normal_cdf(const Real& y);

}  // namespace confign
