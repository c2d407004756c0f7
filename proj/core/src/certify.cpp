#include "confign/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "confign/ball.hpp"
#include "confign/errors.hpp"

namespace confign {

RationalSeq u_seq(int N, int cap) {
  if (N < 1) throw Error("u_seq requires N >= 1");
  if (cap <= 0) cap = 600;
  if (N > cap) throw CapError("u_seq: N exceeds cap " + std::to_string(cap));

  RationalSeq e = mean_seq(Model::YuleHarding, std::max(N, 2));
  // e_0 = 0 by convention; prefix[m] = sum_{j=0..m} e_j.
  std::vector<Rat> prefix(static_cast<size_t>(N) + 1);
  prefix[0] = 0;
  for (int m = 1; m <= N; ++m)
    prefix[static_cast<size_t>(m)] = prefix[static_cast<size_t>(m - 1)] + e.at(m);

  auto e_at = [&](int m) -> Rat { return m == 0 ? Rat(0) : e.at(m); };

  RationalSeq u;
  u.kind = SeqKind::U;
  u.base_index = 0;
  u.values.assign(static_cast<size_t>(N) + 1, Rat(0));
  u.values[0] = 1;
  for (int n = 2; n <= N; ++n) {
    Rat s1(0), s2(0), s3(0);
    for (int k = 0; k < n; ++k) {
      const Rat& uk = u.values[static_cast<size_t>(k)];
      if (uk == 0) continue;
      s1 += (3 * n - k - 3) * uk;
      s2 += (n - 2 * k - 1) * e_at(n - k) * uk;
      s3 += prefix[static_cast<size_t>(n - k - 1)] * uk;
    }
    Rat v = (s1 - 4 * s2 + 4 * s3) / (static_cast<long>(n) * (n - 1));
    v.canonicalize();
    u.values[static_cast<size_t>(n)] = std::move(v);
  }
  return u;
}

namespace {

// Denominator-cleared truncation of U for exact evaluation at rationals:
// sum c_k x^k / D with integer c_k.
struct ExactPoly {
  Int D;
  std::vector<Int> c;

  ExactPoly(const RationalSeq& u, int deg) {
    D = 1;
    for (int k = 0; k <= deg; ++k)
      mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), u.at(k).get_den().get_mpz_t());
    c.reserve(static_cast<size_t>(deg) + 1);
    for (int k = 0; k <= deg; ++k) {
      const Rat& uk = u.at(k);
      c.push_back(uk.get_num() * (D / uk.get_den()));
    }
  }

  Rat eval(const Rat& x) const {
    const Int& p = x.get_num();
    const Int& q = x.get_den();
    size_t deg = c.size() - 1;
    Int acc = c[deg];
    Int qpow = 1;
    for (size_t k = deg; k-- > 0;) {
      qpow *= q;
      acc = acc * p + c[k] * qpow;
    }
    Rat r(acc, D * qpow);
    r.canonicalize();
    return r;
  }
};

// Bisection of the sign change of an exact polynomial over [0, 1/2]; after
// `steps` halvings the dyadic interval has width 2^{-steps-1} and carries
// exact opposite signs at the endpoints.
struct Bisect {
  Rat lo, hi;
  Rat f_lo, f_hi;
};

Bisect bisect_u(const ExactPoly& poly, int steps) {
  Bisect b;
  b.lo = 0;
  b.hi = Rat(1, 2);
  b.f_lo = poly.eval(b.lo);
  b.f_hi = poly.eval(b.hi);
  if (!(b.f_lo > 0 && b.f_hi < 0))
    throw CertifyError("bisection: no sign change on [0, 1/2]");
  for (int i = 0; i < steps; ++i) {
    Rat mid = (b.lo + b.hi) / 2;
    Rat v = poly.eval(mid);
    if (v > 0) {
      b.lo = std::move(mid);
      b.f_lo = std::move(v);
    } else {
      b.hi = std::move(mid);
      b.f_hi = std::move(v);
    }
  }
  return b;
}

}  // namespace

Rat eval_u_truncation(const RationalSeq& u, int deg, const Rat& x) {
  if (deg < 0 || deg > u.max_index()) throw Error("eval_u_truncation: bad degree");
  return ExactPoly(u, deg).eval(x);
}

Rat tail_bound(int K) {
  if (K < 0) throw Error("tail_bound requires K >= 0");
  auto e = static_cast<unsigned long>(K) + 1;
  Rat t(10 * pow_int(9, e), pow_int(10, e));
  t.canonicalize();
  return t;
}

namespace {

Rat mean_bound_at(int n) {
  // (9/10)(3/2)^n
  Rat b(9 * pow_int(3, static_cast<unsigned long>(n)),
        10 * pow_int(2, static_cast<unsigned long>(n)));
  b.canonicalize();
  return b;
}

Rat u_bound_at(int n) {
  Rat b(pow_int(9, static_cast<unsigned long>(n)), pow_int(5, static_cast<unsigned long>(n)));
  b.canonicalize();
  return b;
}

BoundCertificate check_range(const std::string& lemma, int hi,
                             const std::function<Rat(int)>& bound,
                             const std::function<Rat(int)>& value) {
  BoundCertificate cert;
  cert.lemma = lemma;
  cert.lo = 0;
  cert.hi = hi;
  cert.holds = true;
  bool have_margin = false;
  for (int n = 0; n <= hi; ++n) {
    Rat margin = bound(n) - value(n);
    if (margin < 0) {
      cert.holds = false;
      cert.min_margin = margin;
      cert.margin_argmin = n;
      return cert;
    }
    if (n == 0 && margin == 0) {
      cert.tight_at_zero = true;  // |u_0| = (9/5)^0; margin reported over n >= 1
      continue;
    }
    if (!have_margin || margin < cert.min_margin) {
      cert.min_margin = margin;
      cert.margin_argmin = n;
      have_margin = true;
    }
  }
  return cert;
}

}  // namespace

std::vector<BoundCertificate> verify_bounds(int extended_to) {
  if (extended_to < 41) extended_to = 41;
  if (extended_to > 600) throw CapError("verify_bounds: extended range exceeds 600");
  RationalSeq e = mean_seq(Model::YuleHarding, extended_to);
  RationalSeq u = u_seq(extended_to);
  auto e_val = [&](int n) { return n == 0 ? Rat(0) : e.at(n); };
  auto u_val = [&](int n) { return abs_rat(u.at(n)); };

  std::vector<BoundCertificate> out;
  out.push_back(check_range("mean-bound", 41, mean_bound_at, e_val));
  out.push_back(check_range("mean-bound", extended_to, mean_bound_at, e_val));
  out.push_back(check_range("u-bound", 25, u_bound_at, u_val));
  out.push_back(check_range("u-bound", extended_to, u_bound_at, u_val));
  for (const auto& c : out)
    if (!c.holds)
      throw CertifyError("bound violated: " + c.lemma + " at n = " +
                         std::to_string(c.margin_argmin));
  return out;
}

// ---------------------------------------------------------------------------
// Grid scans

namespace {

double up(double x) { return Ball::up(x); }

double ulp_raw(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return 0.0;
  long e = static_cast<long>(mpfr_get_exp(x)) - static_cast<long>(mpfr_get_prec(x));
  return std::ldexp(1.0, static_cast<int>(std::max(e, -1000L)));
}

double mag_up_raw(mpfr_srcptr x) { return std::fabs(mpfr_get_d(x, MPFR_RNDA)); }

// Upper bound of a nonnegative rational as a double (mpq_get_d truncates
// toward zero).
double rat_up(const Rat& q) { return up(mpq_get_d(q.get_mpq_t())); }

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact comparison of a double (already a rigorous bound) with a rational:
// the double converts to a rational losslessly.
bool dbl_ge(double x, const Rat& threshold) {
  Rat xr;
  mpq_set_d(xr.get_mpq_t(), x);
  return xr >= threshold;
}

bool dbl_gt(double x, const Rat& threshold) {
  Rat xr;
  mpq_set_d(xr.get_mpq_t(), x);
  return xr > threshold;
}

// Complex Horner evaluation of a real-coefficient polynomial with rigorous
// error tracking: midpoints at `prec` bits and a single euclidean-norm error
// radius for the accumulator.
class ComplexHorner {
 public:
  ComplexHorner(const std::vector<Rat>& coeffs, mpfr_prec_t prec) {
    cm_.reserve(coeffs.size());
    cr_.reserve(coeffs.size());
    for (const Rat& c : coeffs) {
      Real m(prec);
      int t = mpfr_set_q(m.raw(), c.get_mpq_t(), MPFR_RNDN);
      cr_.push_back(t == 0 ? 0.0 : ulp_raw(m.raw()));
      cm_.push_back(std::move(m));
    }
    mpfr_inits2(prec, re_, im_, t1_, t2_, mpfr_ptr(nullptr));
  }
  ~ComplexHorner() { mpfr_clears(re_, im_, t1_, t2_, mpfr_ptr(nullptr)); }
  ComplexHorner(const ComplexHorner&) = delete;
  ComplexHorner& operator=(const ComplexHorner&) = delete;

  // z given as midpoints (zr, zi), euclidean error radius zrad, and an upper
  // bound zmag >= |z| + 2*zrad.
  void eval(mpfr_srcptr zr, mpfr_srcptr zi, double zrad, double zmag) {
    size_t deg = cm_.size() - 1;
    mpfr_set(re_, cm_[deg].raw(), MPFR_RNDN);
    mpfr_set_zero(im_, 1);
    rad_ = cr_[deg];
    for (size_t k = deg; k-- > 0;) {
      double amag = up(std::hypot(mag_up_raw(re_), mag_up_raw(im_)));
      mpfr_fmms(t1_, re_, zr, im_, zi, MPFR_RNDN);  // re*zr - im*zi
      mpfr_fmma(t2_, re_, zi, im_, zr, MPFR_RNDN);  // re*zi + im*zr
      mpfr_add(re_, t1_, cm_[k].raw(), MPFR_RNDN);
      mpfr_swap(im_, t2_);
      // ||e_a||(|z| + zrad) + |a| zrad + ||e_a|| zrad <= rad*zmag + amag*zrad
      rad_ = up(rad_ * zmag + amag * zrad + cr_[k] + ulp_raw(t1_) + ulp_raw(im_) +
                ulp_raw(re_));
    }
  }

  mpfr_srcptr re() const { return re_; }
  mpfr_srcptr im() const { return im_; }
  double rad() const { return rad_; }

  // |value|^2 midpoint and radius (for the G scan).
  void norm2(mpfr_ptr out, double& out_rad) const {
    mpfr_fmma(out, re_, re_, im_, im_, MPFR_RNDN);
    double amag = up(std::hypot(mag_up_raw(re_), mag_up_raw(im_)));
    out_rad = up(2.0 * amag * rad_ + rad_ * rad_ + ulp_raw(out));
  }

 private:
  std::vector<Real> cm_;
  std::vector<double> cr_;
  mpfr_t re_, im_, t1_, t2_;
  double rad_ = 0;
};

}  // namespace

GridReport grid_minima(double scale, mpfr_prec_t bits) {
  if (!(scale > 0) || scale > 1) throw Error("grid_minima: scale must be in (0, 1]");
  if (bits < 128) bits = 128;

  GridReport rep;
  rep.scale = scale;
  rep.bits = bits;
  rep.reduced_confidence = scale < 1;

  RationalSeq u = u_seq(100);
  ExactPoly u_poly(u, 100);

  // beta~ by bisection of the degree-100 truncation; |beta - beta~| <= 2^-50.
  Bisect bis = bisect_u(u_poly, 50);
  rep.beta_tilde = bis.lo;
  rep.beta_err = Rat(Int(1), pow2(50));
  rep.beta_err.canonicalize();

  // a_l = sum_{k>l} u_k beta~^{k-1-l}, backwards Horner.
  std::vector<Rat> a(100);
  a[99] = u.at(100);
  for (int l = 98; l >= 0; --l)
    a[static_cast<size_t>(l)] = u.at(l + 1) + rep.beta_tilde * a[static_cast<size_t>(l + 1)];
  for (auto& q : a) q.canonicalize();

  // Exact bound constants.
  {
    Rat s0(0), s1(0);
    for (int k = 0; k <= 100; ++k) {
      Rat t(pow_int(9, static_cast<unsigned long>(k)),
            pow_int(10, static_cast<unsigned long>(k)));
      s0 += t;
      s1 += k * t;
    }
    rep.g_deriv_bound = 4 * s0 * s1;
    rep.g_deriv_bound.canonicalize();
  }
  {
    Rat g(0);
    for (int l = 1; l <= 99; ++l)
      g += l * abs_rat(a[static_cast<size_t>(l)]) * Rat(Int(1), pow2(static_cast<unsigned long>(l - 1)));
    g.canonicalize();
    rep.s_grad_bound = g;
  }
  {
    Rat r(0);
    for (int l = 0; l <= 99; ++l)
      for (int k = l + 2; k <= 100; ++k)
        r += (k - 1 - l) * Rat(pow_int(9, static_cast<unsigned long>(k)) * 4,
                               pow_int(10, static_cast<unsigned long>(k)));
    r.canonicalize();
    rep.r_poly_bound = r;
  }
  rep.rouche_slack = rep.beta_err * rep.r_poly_bound;
  rep.u2_tail = tail_bound(100);

  Real pi_m = Real::pi(bits);
  double pi_up = up(mag_up_raw(pi_m.raw()));
  double pi_rad = ulp_raw(pi_m.raw());

  // --- G scan over t = k pi / M ---
  {
    auto M = static_cast<size_t>(std::max(4.0, std::round(1e6 * scale)));
    rep.g_points = M + 1;
    ComplexHorner horner(u.values, bits);
    Real t(bits), c(bits), s(bits), g(bits), best(bits);
    mpfr_t zr, zi;
    mpfr_inits2(bits, zr, zi, mpfr_ptr(nullptr));
    double best_lower = kInf;
    bool first = true;
    for (size_t k = 0; k <= M; ++k) {
      mpfr_mul_ui(t.raw(), pi_m.raw(), static_cast<unsigned long>(k), MPFR_RNDN);
      double trad = up(static_cast<double>(k) * pi_rad + ulp_raw(t.raw()));
      mpfr_div_ui(t.raw(), t.raw(), static_cast<unsigned long>(M), MPFR_RNDN);
      trad = up(trad / static_cast<double>(M) + ulp_raw(t.raw()));
      mpfr_sin_cos(s.raw(), c.raw(), t.raw(), MPFR_RNDN);
      double comp_err = up(trad + std::max(ulp_raw(s.raw()), ulp_raw(c.raw())));
      mpfr_div_2ui(zr, c.raw(), 1, MPFR_RNDN);  // exact halving
      mpfr_div_2ui(zi, s.raw(), 1, MPFR_RNDN);
      double zrad = up(comp_err);  // (2*comp_err/2 covers both components)
      double zmag = up(0.5 + 2.0 * zrad);
      horner.eval(zr, zi, zrad, zmag);
      double grad;
      horner.norm2(g.raw(), grad);
      double lower = std::nextafter(mpfr_get_d(g.raw(), MPFR_RNDD) - grad, -kInf);
      if (first || mpfr_cmp(g.raw(), best.raw()) < 0) {
        best = g;
        rep.g_argmin = k;
      }
      if (first || lower < best_lower) best_lower = lower;
      first = false;
    }
    mpfr_clears(zr, zi, mpfr_ptr(nullptr));
    rep.g_min = best;
    rep.g_min_lower = best_lower;
    double half_spacing = up(pi_up / static_cast<double>(M) / 2.0);
    rep.g_rect_lower = best_lower - up(rat_up(rep.g_deriv_bound) * half_spacing);
    Rat g_threshold(9, 1000000);
    g_threshold.canonicalize();
    rep.g_chain_ok = dbl_ge(rep.g_rect_lower, g_threshold);
  }

  // --- S scan over (r, theta) in [0, 1/2] x [0, pi] ---
  {
    auto Kr = static_cast<size_t>(std::max(2.0, std::round(1000 * scale)));
    auto Kt = static_cast<size_t>(std::max(2.0, std::round(1000 * scale)));
    rep.s_points_r = Kr + 1;
    rep.s_points_theta = Kt + 1;
    ComplexHorner horner(a, bits);
    std::vector<Real> cos_t, sin_t;
    cos_t.reserve(Kt + 1);
    sin_t.reserve(Kt + 1);
    std::vector<double> trig_rad(Kt + 1);
    {
      Real th(bits);
      for (size_t j = 0; j <= Kt; ++j) {
        mpfr_mul_ui(th.raw(), pi_m.raw(), static_cast<unsigned long>(j), MPFR_RNDN);
        double trad = up(static_cast<double>(j) * pi_rad + ulp_raw(th.raw()));
        mpfr_div_ui(th.raw(), th.raw(), static_cast<unsigned long>(Kt), MPFR_RNDN);
        trad = up(trad / static_cast<double>(Kt) + ulp_raw(th.raw()));
        Real cj(bits), sj(bits);
        mpfr_sin_cos(sj.raw(), cj.raw(), th.raw(), MPFR_RNDN);
        trig_rad[j] = up(trad + std::max(ulp_raw(sj.raw()), ulp_raw(cj.raw())));
        cos_t.push_back(std::move(cj));
        sin_t.push_back(std::move(sj));
      }
    }
    mpfr_t r_m, zr, zi;
    mpfr_inits2(bits, r_m, zr, zi, mpfr_ptr(nullptr));
    Real best(bits);
    double best_lower = kInf;
    bool first = true;
    for (size_t k = 0; k <= Kr; ++k) {
      mpfr_set_ui(r_m, static_cast<unsigned long>(k), MPFR_RNDN);
      int tr = mpfr_div_ui(r_m, r_m, static_cast<unsigned long>(2 * Kr), MPFR_RNDN);
      double r_rad = tr == 0 ? 0.0 : ulp_raw(r_m);
      double r_up = up(static_cast<double>(k) / (2.0 * static_cast<double>(Kr)) + r_rad);
      for (size_t j = 0; j <= Kt; ++j) {
        mpfr_mul(zr, r_m, cos_t[j].raw(), MPFR_RNDN);
        mpfr_mul(zi, r_m, sin_t[j].raw(), MPFR_RNDN);
        double zrad = up(2.0 * r_rad + 2.0 * r_up * trig_rad[j] + ulp_raw(zr) + ulp_raw(zi));
        double zmag = up(r_up + 2.0 * zrad);
        horner.eval(zr, zi, zrad, zmag);
        // S = Re Q; the euclidean radius bounds the component error.
        double sr = horner.rad();
        double hi_d = std::nextafter(mpfr_get_d(horner.re(), MPFR_RNDU) + sr, kInf);
        double lo_d = std::nextafter(mpfr_get_d(horner.re(), MPFR_RNDD) - sr, -kInf);
        double abs_lower = lo_d > 0 ? lo_d : (hi_d < 0 ? -hi_d : 0.0);
        Real abs_mid(bits);
        mpfr_abs(abs_mid.raw(), horner.re(), MPFR_RNDN);
        if (first || mpfr_cmp(abs_mid.raw(), best.raw()) < 0) {
          best = abs_mid;
          rep.s_argmin_r = k;
          rep.s_argmin_theta = j;
        }
        if (first || abs_lower < best_lower) best_lower = abs_lower;
        first = false;
      }
    }
    mpfr_clears(r_m, zr, zi, mpfr_ptr(nullptr));
    rep.s_min_abs = best;
    rep.s_min_lower = best_lower;
    double step_r = up(0.5 / static_cast<double>(Kr));
    double step_t = up(pi_up / static_cast<double>(Kt));
    double max_dist = up(0.5 * std::hypot(step_r, step_t));
    rep.s_rect_lower = best_lower - up(rat_up(rep.s_grad_bound) * max_dist);
    rep.s_chain_ok = dbl_gt(rep.s_rect_lower, rep.rouche_slack);
  }

  Rat three_milli(3, 1000);
  three_milli.canonicalize();
  rep.rouche_ok = rep.g_chain_ok && three_milli > rep.u2_tail;
  return rep;
}

CertifiedRoot certify_alpha() {
  RationalSeq u = u_seq(500);
  ExactPoly poly(u, 500);
  Bisect bis = bisect_u(poly, 50);

  CertifiedRoot out;
  out.lower = bis.lo;
  out.upper = bis.hi;
  out.f_lower = bis.f_lo;
  out.f_upper = bis.f_hi;
  out.tail = tail_bound(500);

  // The truncation values certify the sign of U itself only when they
  // dominate the tail on |z| <= 1/2.
  if (!(abs_rat(out.f_lower) > out.tail))
    throw CertifyError("sign certification failed at the lower endpoint");
  if (!(abs_rat(out.f_upper) > out.tail))
    throw CertifyError("sign certification failed at the upper endpoint");

  Rat inv(out.lower.get_den(), out.lower.get_num());
  inv.canonicalize();
  out.alpha = Real::of(out.lower, 128);
  out.k_v = Real::of(inv, 128);
  out.alpha_digits = out.alpha.str(10);
  out.kv_digits = out.k_v.str(20);
  return out;
}

}  // namespace confign
