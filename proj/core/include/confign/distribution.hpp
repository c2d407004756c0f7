#pragma once

#include <map>
#include <vector>

#include "confign/numbers.hpp"
#include "confign/real.hpp"
#include "confign/treekit.hpp"

namespace confign {

enum class Model { Uniform, YuleHarding };

const char* model_name(Model m);

// Exact distribution of the number of root configurations R_n. Keys are the
// attainable c_r values, probabilities are exact rationals summing to 1.
struct Pmf {
  Model model = Model::Uniform;
  int n = 0;
  std::map<Int, Rat> entries;
};

// Size-indexed convolution: for each split size j the sub-PMFs combine as
// (rho1 + 1)(rho2 + 1) with the model's split probability. Identical to the
// divisor-sum recurrences but needs no factorization.
Pmf pmf(int n, Model model, int cap = 18);

// Shape-weighted brute force: enumerate shapes, weight by lab/|T_n| or
// lab * P_YH, group by c_r. The independent oracle for pmf().
Pmf pmf_oracle(int n, Model model, int cap = 15);

// Literal divisor-sum form of the PMF recurrences; secondary cross-check,
// practical only for small n.
Pmf pmf_divisor_sum(int n, Model model, int cap = 8);

Rat pmf_mean(const Pmf& p);
Rat pmf_second_moment(const Pmf& p);

struct LogMoments {
  Model model = Model::Uniform;
  int n = 0;
  mpfr_prec_t bits = 128;
  Real mean;      // E[ln c_r]
  Real variance;  // V[ln c_r]
};

LogMoments log_moments(const Pmf& p, mpfr_prec_t bits = 128);

struct CdfRow {
  Rat y;
  Rat probability;  // P[ln c_r <= E + y*sigma], exact sum of PMF atoms
};

struct CdfTable {
  Model model = Model::Uniform;
  int n = 0;
  mpfr_prec_t bits = 128;
  std::vector<CdfRow> rows;
};

// Threshold semantics: "<=" decided by interval evaluation of ln(rho) against
// E + y*sigma, doubling precision until unambiguous; a comparison still open
// at the precision ceiling is classified as equality (which "<=" includes).
CdfTable cdf_table(const Pmf& p, const std::vector<Rat>& y_grid, mpfr_prec_t bits = 128);

// y = lo/10, (lo+1)/10, ..., hi/10.
std::vector<Rat> y_grid_tenths(int lo_tenths, int hi_tenths);

}  // namespace confign
