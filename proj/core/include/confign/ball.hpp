#pragma once

#include <cmath>
#include <limits>

#include "confign/errors.hpp"
#include "confign/real.hpp"

namespace confign {

// Rigorous enclosure: the represented value lies in [mid - rad, mid + rad].
// The midpoint carries the working precision; the radius is a double kept as
// a guaranteed upper bound (all radius arithmetic is inflated upward).
class Ball {
 public:
  Ball() : mid_(64), rad_(0) {}
  Ball(Real mid, double rad) : mid_(std::move(mid)), rad_(rad) {}

  static Ball exact(long v, mpfr_prec_t prec);
  static Ball of(const Rat& q, mpfr_prec_t prec);
  static Ball of(const Int& z, mpfr_prec_t prec);
  static Ball pi(mpfr_prec_t prec);

  const Real& mid() const { return mid_; }
  double rad() const { return rad_; }
  mpfr_prec_t precision() const { return mid_.precision(); }

  // Directed double bounds on the enclosed interval.
  double upper() const;
  double lower() const;

  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator*(const Ball& a, const Ball& b);
  Ball operator-() const { return Ball(-mid_, rad_); }
  Ball mul_ui(unsigned long k) const;
  Ball div_ui(unsigned long k) const;

  static Ball log(const Ball& x);   // requires x surely positive
  static Ball sqrt(const Ball& x);  // requires x surely nonnegative
  static Ball sin(const Ball& x);
  static Ball cos(const Ball& x);

  // -1 if a < b for every pair of represented values, +1 if a > b likewise,
  // 0 when the enclosures overlap (undecided at this precision).
  static int compare(const Ball& a, const Ball& b);

  // Upward-inflated double arithmetic for radius bookkeeping.
  static double up(double x) {
    return std::nextafter(x * (1.0 + 1e-13), std::numeric_limits<double>::infinity());
  }

 private:
  Real mid_;
  double rad_;
};

}  // namespace confign
