#include "confign/ball.hpp"

namespace confign {

namespace {

// 2^(exp - prec): one unit in the last place of x; 0 for an exact zero.
double ulp_of(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return 0.0;
  long e = static_cast<long>(mpfr_get_exp(x)) - static_cast<long>(mpfr_get_prec(x));
  return std::ldexp(1.0, static_cast<int>(std::max(e, -1000L)));
}

double round_err(int ternary, mpfr_srcptr x) {
  return ternary == 0 ? 0.0 : ulp_of(x);
}

double mag_up(mpfr_srcptr x) {
  return std::fabs(mpfr_get_d(x, MPFR_RNDA));
}

double mag_down(mpfr_srcptr x) {
  return std::fabs(mpfr_get_d(x, MPFR_RNDZ));
}

}  // namespace

Ball Ball::exact(long v, mpfr_prec_t prec) {
  return Ball(Real::of(v, prec), 0.0);
}

Ball Ball::of(const Rat& q, mpfr_prec_t prec) {
  Real m(prec);
  int t = mpfr_set_q(m.raw(), q.get_mpq_t(), MPFR_RNDN);
  double r = round_err(t, m.raw());
  return Ball(std::move(m), r);
}

Ball Ball::of(const Int& z, mpfr_prec_t prec) {
  Real m(prec);
  int t = mpfr_set_z(m.raw(), z.get_mpz_t(), MPFR_RNDN);
  double r = round_err(t, m.raw());
  return Ball(std::move(m), r);
}

Ball Ball::pi(mpfr_prec_t prec) {
  Real m(prec);
  mpfr_const_pi(m.raw(), MPFR_RNDN);
  return Ball(std::move(m), ulp_of(m.raw()));
}

double Ball::upper() const {
  double d = mpfr_get_d(mid_.raw(), MPFR_RNDU);
  double x = d + rad_;
  return std::nextafter(x + std::fabs(x) * 1e-13 + 5e-324,
                        std::numeric_limits<double>::infinity());
}

double Ball::lower() const {
  double d = mpfr_get_d(mid_.raw(), MPFR_RNDD);
  double x = d - rad_;
  return std::nextafter(x - std::fabs(x) * 1e-13 - 5e-324,
                        -std::numeric_limits<double>::infinity());
}

Ball operator+(const Ball& a, const Ball& b) {
  Real m(std::max(a.precision(), b.precision()));
  int t = mpfr_add(m.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
  double r = Ball::up(a.rad_ + b.rad_ + round_err(t, m.raw()));
  return Ball(std::move(m), r);
}

Ball operator-(const Ball& a, const Ball& b) {
  Real m(std::max(a.precision(), b.precision()));
  int t = mpfr_sub(m.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
  double r = Ball::up(a.rad_ + b.rad_ + round_err(t, m.raw()));
  return Ball(std::move(m), r);
}

Ball operator*(const Ball& a, const Ball& b) {
  Real m(std::max(a.precision(), b.precision()));
  int t = mpfr_mul(m.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
  double ma = mag_up(a.mid_.raw()), mb = mag_up(b.mid_.raw());
  double r = Ball::up(ma * b.rad_ + mb * a.rad_ + a.rad_ * b.rad_ + round_err(t, m.raw()));
  return Ball(std::move(m), r);
}

Ball Ball::mul_ui(unsigned long k) const {
  Real m(precision());
  int t = mpfr_mul_ui(m.raw(), mid_.raw(), k, MPFR_RNDN);
  double r = up(rad_ * static_cast<double>(k) + round_err(t, m.raw()));
  return Ball(std::move(m), r);
}

Ball Ball::div_ui(unsigned long k) const {
  Real m(precision());
  int t = mpfr_div_ui(m.raw(), mid_.raw(), k, MPFR_RNDN);
  double r = up(rad_ / static_cast<double>(k) + round_err(t, m.raw()));
  return Ball(std::move(m), r);
}

Ball Ball::log(const Ball& x) {
  double lo = std::nextafter((mag_down(x.mid_.raw()) - x.rad_) * (1.0 - 1e-13), 0.0);
  if (!(lo > 0) || mpfr_sgn(x.mid_.raw()) <= 0)
    throw Error("Ball::log requires a surely-positive argument");
  Real m(x.precision());
  int t = mpfr_log(m.raw(), x.mid_.raw(), MPFR_RNDN);
  double r = up(x.rad_ / lo + round_err(t, m.raw()));
  return Ball(std::move(m), r);
}

Ball Ball::sqrt(const Ball& x) {
  double lo = std::nextafter((mag_down(x.mid_.raw()) - x.rad_) * (1.0 - 1e-13), 0.0);
  if (!(lo > 0) || mpfr_sgn(x.mid_.raw()) < 0)
    throw Error("Ball::sqrt requires a surely-positive argument");
  Real m(x.precision());
  int t = mpfr_sqrt(m.raw(), x.mid_.raw(), MPFR_RNDN);
  double r = up(x.rad_ / (2.0 * std::sqrt(lo) * (1.0 - 1e-13)) + round_err(t, m.raw()));
  return Ball(std::move(m), r);
}

Ball Ball::sin(const Ball& x) {
  Real m(x.precision());
  int t = mpfr_sin(m.raw(), x.mid_.raw(), MPFR_RNDN);
  return Ball(std::move(m), up(x.rad_ + round_err(t, m.raw())));
}

Ball Ball::cos(const Ball& x) {
  Real m(x.precision());
  int t = mpfr_cos(m.raw(), x.mid_.raw(), MPFR_RNDN);
  return Ball(std::move(m), up(x.rad_ + round_err(t, m.raw())));
}

int Ball::compare(const Ball& a, const Ball& b) {
  Real d(std::max(a.precision(), b.precision()));
  mpfr_sub(d.raw(), b.mid_.raw(), a.mid_.raw(), MPFR_RNDN);
  int s = mpfr_sgn(d.raw());
  if (s == 0) {
    if (a.rad_ == 0 && b.rad_ == 0) return 0;  // exactly equal midpoints, no slack
    return 0;
  }
  // |mid_b - mid_a| certainly exceeds dl*(1-1e-13); decided when that beats
  // the combined radii.
  double dl = mag_down(d.raw()) * (1.0 - 1e-13);
  double rr = up(a.rad_ + b.rad_);
  if (dl > rr) return s > 0 ? -1 : +1;
  return 0;
}

}  // namespace confign
