#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "confign/momentseries.hpp"
#include "confign/numbers.hpp"
#include "confign/real.hpp"

namespace confign {

// u_0..u_N: Taylor coefficients of U(z) = exp(-int_0^z S(x)/x dx), from the
// recurrence driven by the exact Yule-Harding means; u_0 = 1, u_1 = 0.
RationalSeq u_seq(int N, int cap = 600);

// Exact evaluation of sum_{k<=deg} u_k x^k at a rational point.
Rat eval_u_truncation(const RationalSeq& u, int deg, const Rat& x);

struct BoundCertificate {
  std::string lemma;  // "mean-bound": e_n <= (9/10)(3/2)^n; "u-bound": |u_n| <= (9/5)^n
  int lo = 0, hi = 0;  // verified index range (non-strict inequality throughout)
  bool holds = false;
  Rat min_margin;      // min over n in [max(lo,1), hi] of bound - |value|
  int margin_argmin = 0;
  bool tight_at_zero = false;  // |u_0| = (9/5)^0 holds with equality
};

// Lemma-style bound verification: the ranges the paper checked by software
// (mean bound to 41, u bound to 25) plus extended regression ranges.
std::vector<BoundCertificate> verify_bounds(int extended_to = 500);

// Exact tail bound sum_{k>K} (9/5)^k (1/2)^k = 10 (9/10)^{K+1}.
Rat tail_bound(int K);

struct GridReport {
  double scale = 1.0;
  mpfr_prec_t bits = 256;
  bool reduced_confidence = false;  // true when scale < 1

  // G(t) = |U_1(e^{it}/2)|^2 over t = k pi/M, k = 0..M.
  std::size_t g_points = 0;
  Real g_min;               // midpoint value at the grid argmin
  std::size_t g_argmin = 0;
  double g_min_lower = 0;   // rigorous lower bound over all grid points
  Rat g_deriv_bound;        // 4 (sum (9/10)^k)(sum k (9/10)^k), exact
  double g_rect_lower = 0;  // g_min_lower - |G'| * spacing/2
  bool g_chain_ok = false;  // g_rect_lower >= 9e-6, i.e. min|U_1| >= 3/1000 on |z|=1/2

  // S(r, theta) = Re Q(r e^{i theta}) over the [0,1/2] x [0,pi] grid.
  std::size_t s_points_r = 0, s_points_theta = 0;
  Real s_min_abs;
  std::size_t s_argmin_r = 0, s_argmin_theta = 0;
  double s_min_lower = 0;
  Rat s_grad_bound;         // sum l |a_l| (1/2)^{l-1}, exact
  Rat r_poly_bound;         // triple sum (9/5)^k (1/2)^{k-2}, exact
  double s_rect_lower = 0;
  Rat rouche_slack;         // 2^-50 * r_poly_bound
  bool s_chain_ok = false;  // s_rect_lower > rouche_slack: U_1 has one root in |z|<=1/2

  // beta~: dyadic bisection approximant of the root of U_1, |beta-beta~| <= 2^-50.
  Rat beta_tilde;
  Rat beta_err;

  Rat u2_tail;              // 10 (9/10)^101: |U_2| on |z| <= 1/2
  bool rouche_ok = false;   // 3/1000 > u2_tail together with g_chain_ok

  bool all_ok() const { return g_chain_ok && s_chain_ok && rouche_ok; }
};

// Recomputes the appendix grids in ball arithmetic. scale < 1 thins the grids
// proportionally; the minima are still reported but the certified inequality
// chains generally need the full density.
GridReport grid_minima(double scale = 1.0, mpfr_prec_t bits = 256);

struct CertifiedRoot {
  Rat lower, upper;      // dyadic interval containing alpha, width <= 2^-50
  Rat f_lower, f_upper;  // exact degree-500 truncation values at the endpoints
  Rat tail;              // tail bound dominating |U - U~_1| on the disc
  std::string alpha_digits;  // 10 significant digits
  std::string kv_digits;     // 20 significant digits of 1/lower
  Real alpha{128};
  Real k_v{128};
};

// Bisection on the degree-500 truncation with exact endpoint evaluation; the
// sign of U itself is certified by |U~_1(endpoint)| > tail_bound(500).
CertifiedRoot certify_alpha();

}  // namespace confign
