#pragma once

#include <string>
#include <vector>

#include "confign/certify.hpp"
#include "confign/configcore.hpp"
#include "confign/distribution.hpp"
#include "confign/momentseries.hpp"
#include "confign/sampler.hpp"

namespace confign {

// Serialization helpers. All output is byte-deterministic: exact values as
// integer pairs or "p/q", floats at 15 significant digits, LF line endings.

std::string format_real15(const Real& x);
std::string format_double15(double x);

std::string csv_pmf(const Pmf& p);                       // rho,p_num,p_den
std::string json_pmf(const Pmf& p);
std::string csv_cdf(const CdfTable& t, bool normal_column);  // y,cdf[,normal]
std::string csv_seq(const RationalSeq& s);               // n,numerator,denominator
std::string csv_growth(const GrowthReport& r);           // n,ratio
std::string json_configurations(const std::vector<Configuration>& cs);
std::string json_sample_report(const SampleReport& r);
std::string json_bound_certificates(const std::vector<BoundCertificate>& cs);
std::string json_grid_report(const GridReport& r);
std::string json_certified_root(const CertifiedRoot& r);

double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Plot-ready data behind the paper-style figures. fig4/fig5: exact CDF of
// log c_r at n = 15 (uniform / Yule-Harding) over y in [-3, 3] step 0.1 with
// a standard-normal column. fig6/fig7: means/variances of both models for
// n = 2..20. fig8: per-shape history counts vs root-configuration counts at
// n = 15.
struct FigureData {
  std::string csv;
  double pearson_primary = 0;    // fig6/fig7: raw; fig8: log-log
  double pearson_secondary = 0;  // fig8: unlogged
};

FigureData figure_data(const std::string& id, mpfr_prec_t bits = 128);

}  // namespace confign
