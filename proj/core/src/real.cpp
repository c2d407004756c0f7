#include "confign/real.hpp"

#include <cstdio>
#include <vector>

namespace confign {

std::string Real::str(int digits) const {
  if (digits < 1) digits = 1;
  int need = mpfr_snprintf(nullptr, 0, "%.*Rg", digits, v_);
  std::vector<char> buf(static_cast<size_t>(need) + 1);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

Real normal_cdf(const Real& y) {
  mpfr_prec_t p = y.precision();
  Real half = Real::of(0.5, p);
  Real sqrt2 = Real::sqrt(Real::of(2L, p));
  return half * (Real::of(1L, p) + Real::erf(y / sqrt2));
}

}  // namespace confign
