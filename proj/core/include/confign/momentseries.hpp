#pragma once

#include <vector>

#include "confign/distribution.hpp"
#include "confign/numbers.hpp"
#include "confign/real.hpp"

namespace confign {

enum class SeqKind { MeanYule, MeanUniform, SecondYule, SecondUniform, VarYule, VarUniform, U };

const char* seq_kind_name(SeqKind k);

// Exact rational sequence produced by a named recurrence; entry i of
// `values` is the term of index base_index + i.
struct RationalSeq {
  SeqKind kind = SeqKind::MeanYule;
  int base_index = 1;
  std::vector<Rat> values;

  int max_index() const { return base_index + static_cast<int>(values.size()) - 1; }
  const Rat& at(int n) const;
};

// e_1..e_N: mean of R_n. Yule-Harding uses the uniform-split recurrence,
// Uniform the Catalan-split one. Internally scaled to integers, (n-1)! e_n
// and C_{n-1} e_n respectively, so no rational reduction happens in the
// convolutions.
RationalSeq mean_seq(Model model, int N);

// s_1..s_N: second moment of R_n.
RationalSeq second_moment_seq(Model model, int N);

// s_n - e_n^2.
RationalSeq variance_seq(Model model, int N);

constexpr int kSeqCap = 4000;

struct GrowthRow {
  int n;
  Real ratio;  // a_n / base^n
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  Real last_ratio;
  Real drift;  // |ratio(N) - ratio(N/2)|
};

// a_n / base^n computed through logarithms of the exact terms at >= 256-bit
// precision. Zero entries (the n=1 bases) are skipped. Requires >= 50 terms.
GrowthReport growth_report(const RationalSeq& seq, const Real& base, int stride = 1);

// k_e = 1/(1 - e^{-2 pi sqrt(3)/9}), about 1.42538682.
Real yule_mean_growth_constant(mpfr_prec_t prec = 128);
// 4/(7(8 sqrt(2) - 11)), about 1.8215272: growth base of the uniform-model
// variance.
Real uniform_variance_growth_base(mpfr_prec_t prec = 128);
// sqrt(7(11 - sqrt(2))/34), about 1.4048289.
Real uniform_variance_amplitude(mpfr_prec_t prec = 128);
// sqrt(3/2).
Real uniform_mean_amplitude(mpfr_prec_t prec = 128);

struct WagnerConstants {
  Real mu;
  Real sigma2;
  int mu_cap = 15;
  int sigma_cap = 12;
  mpfr_prec_t bits = 256;
};

// Truncated sums for the lognormal constants of the Yule-Harding model:
// mu = sum_t 2 f(t)/(|t|+1)! and the matching sigma^2 expression, with
// f = ln(1 + 1/c_r) and F = ln(c_r + 1). Histories are never enumerated:
// S_f(n) = (n-1)! E_YH,n[f] reduces each size to a shape sum, and the
// double sum factorizes because its bracket depends only on the sizes.
WagnerConstants wagner_constants(int mu_cap = 15, int sigma_cap = 12, mpfr_prec_t bits = 256);

// E_n[2^{-cherries}] under Yule-Harding, exact; the consecutive ratio tends
// to about 0.802.
Rat two_pow_neg_cherries_mean(int n, int cap = 18);

// Coefficients of the closed-form generating function of the Yule-Harding
// means, expanded by high-precision series composition; an independent route
// to the same numbers as mean_seq(YuleHarding).
std::vector<Real> closed_form_mean_series(int N, mpfr_prec_t prec = 256);

}  // namespace confign
