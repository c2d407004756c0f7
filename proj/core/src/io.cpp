#include "confign/io.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "confign/errors.hpp"

namespace confign {

using nlohmann::json;

std::string format_real15(const Real& x) { return x.str(15); }

std::string format_double15(double x) { return Real::of(x, 64).str(15); }

namespace {

std::string rat_real15(const Rat& q) { return Real::of(q, 64).str(15); }

}  // namespace

std::string csv_pmf(const Pmf& p) {
  std::string out = "rho,p_num,p_den\n";
  for (const auto& [rho, pr] : p.entries)
    out += rho.get_str() + "," + pr.get_num().get_str() + "," + pr.get_den().get_str() + "\n";
  return out;
}

std::string json_pmf(const Pmf& p) {
  json rows = json::array();
  for (const auto& [rho, pr] : p.entries)
    rows.push_back({{"rho", rho.get_str()},
                    {"p_num", pr.get_num().get_str()},
                    {"p_den", pr.get_den().get_str()}});
  json j{{"model", model_name(p.model)}, {"n", p.n}, {"entries", rows}};
  return j.dump(2) + "\n";
}

std::string csv_cdf(const CdfTable& t, bool normal_column) {
  std::string out = normal_column ? "y,cdf,normal\n" : "y,cdf\n";
  mpfr_prec_t bits = 128;
  for (const auto& row : t.rows) {
    out += rat_real15(row.y) + "," + rat_real15(row.probability);
    if (normal_column)
      out += "," + normal_cdf(Real::of(row.y, bits)).str(15);
    out += "\n";
  }
  return out;
}

std::string csv_seq(const RationalSeq& s) {
  std::string out = "n,numerator,denominator\n";
  for (int n = s.base_index; n <= s.max_index(); ++n) {
    const Rat& v = s.at(n);
    out += std::to_string(n) + "," + v.get_num().get_str() + "," + v.get_den().get_str() + "\n";
  }
  return out;
}

std::string csv_growth(const GrowthReport& r) {
  std::string out = "n,ratio\n";
  for (const auto& row : r.rows)
    out += std::to_string(row.n) + "," + row.ratio.str(15) + "\n";
  return out;
}

std::string json_configurations(const std::vector<Configuration>& cs) {
  json arr = json::array();
  for (const auto& c : cs) arr.push_back(c.ids);
  return arr.dump(2) + "\n";
}

std::string json_sample_report(const SampleReport& r) {
  json grid = json::array(), ecdf = json::array();
  for (double y : r.y_grid) grid.push_back(y);
  for (double v : r.ecdf) ecdf.push_back(v);
  json j{{"model", model_name(r.model)},
         {"n", r.n},
         {"trials", r.trials},
         {"seed", r.seed},
         {"lanes", r.lanes},
         {"rng", r.rng_algorithm},
         {"mean_cr", r.mean_cr},
         {"var_cr", r.var_cr},
         {"mean_log_cr", r.mean_log_cr},
         {"var_log_cr", r.var_log_cr},
         {"y_grid", grid},
         {"ecdf", ecdf},
         {"sup_dev_normal", r.sup_dev_normal},
         {"dkw_epsilon", r.dkw_epsilon}};
  return j.dump(2) + "\n";
}

std::string json_bound_certificates(const std::vector<BoundCertificate>& cs) {
  json arr = json::array();
  for (const auto& c : cs) {
    arr.push_back({{"lemma", c.lemma},
                   {"range", {c.lo, c.hi}},
                   {"holds", c.holds},
                   {"min_margin", rat_str(c.min_margin)},
                   {"min_margin_approx", rat_real15(c.min_margin)},
                   {"margin_argmin", c.margin_argmin},
                   {"tight_at_zero", c.tight_at_zero}});
  }
  return arr.dump(2) + "\n";
}

std::string json_grid_report(const GridReport& r) {
  json j{
      {"scale", r.scale},
      {"precision_bits", static_cast<long>(r.bits)},
      {"reduced_confidence", r.reduced_confidence},
      {"boundary_norm_grid",
       {{"points", r.g_points},
        {"min", r.g_min.str(15)},
        {"argmin", r.g_argmin},
        {"min_lower_bound", r.g_min_lower},
        {"derivative_bound", rat_real15(r.g_deriv_bound)},
        {"rect_lower_bound", r.g_rect_lower},
        {"chain_ok", r.g_chain_ok}}},
      {"quotient_real_part_grid",
       {{"points_r", r.s_points_r},
        {"points_theta", r.s_points_theta},
        {"min_abs", r.s_min_abs.str(15)},
        {"argmin_r", r.s_argmin_r},
        {"argmin_theta", r.s_argmin_theta},
        {"min_lower_bound", r.s_min_lower},
        {"gradient_bound", rat_real15(r.s_grad_bound)},
        {"remainder_bound", rat_real15(r.r_poly_bound)},
        {"rect_lower_bound", r.s_rect_lower},
        {"rouche_slack", rat_real15(r.rouche_slack)},
        {"chain_ok", r.s_chain_ok}}},
      {"beta_tilde", rat_str(r.beta_tilde)},
      {"beta_err", rat_str(r.beta_err)},
      {"u2_tail", rat_real15(r.u2_tail)},
      {"rouche_ok", r.rouche_ok}};
  return j.dump(2) + "\n";
}

std::string json_certified_root(const CertifiedRoot& r) {
  json j{{"lower", rat_str(r.lower)},
         {"upper", rat_str(r.upper)},
         {"width", rat_str(r.upper - r.lower)},
         {"f_lower_approx", Real::of(r.f_lower, 128).str(10)},
         {"f_upper_approx", Real::of(r.f_upper, 128).str(10)},
         {"tail_bound", Real::of(r.tail, 128).str(10)},
         {"alpha", r.alpha_digits},
         {"k_v", r.kv_digits},
         {"k_v_error_bound", "5e-14"}};
  return j.dump(2) + "\n";
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  size_t n = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

namespace {

FigureData figure_cdf(Model model, mpfr_prec_t bits) {
  Pmf p = pmf(15, model);
  CdfTable t = cdf_table(p, y_grid_tenths(-30, 30), bits);
  return FigureData{csv_cdf(t, true), 0, 0};
}

FigureData figure_model_curves(bool variances) {
  RationalSeq uni = variances ? variance_seq(Model::Uniform, 20) : mean_seq(Model::Uniform, 20);
  RationalSeq yh =
      variances ? variance_seq(Model::YuleHarding, 20) : mean_seq(Model::YuleHarding, 20);
  std::string head = variances ? "n,uniform_var,yule_var\n" : "n,uniform_mean,yule_mean\n";
  std::string out = head;
  std::vector<double> xs, ys;
  for (int n = 2; n <= 20; ++n) {
    out += std::to_string(n) + "," + rat_real15(uni.at(n)) + "," + rat_real15(yh.at(n)) + "\n";
    xs.push_back(Real::of(uni.at(n), 64).to_double());
    ys.push_back(Real::of(yh.at(n), 64).to_double());
  }
  double r = pearson(xs, ys);
  out += "# pearson=" + format_double15(r) + "\n";
  return FigureData{out, r, 0};
}

FigureData figure_census() {
  std::string out = "index,histories,c_r,log_histories,log_cr\n";
  std::vector<double> lh, lc, h, c;
  int idx = 0;
  for (ShapeRef s : enumerate_shapes(15)) {
    Int hist = labeled_history_count(s);
    const Int& cr = root_config_count(s);
    double hd = hist.get_d(), cd = cr.get_d();
    h.push_back(hd);
    c.push_back(cd);
    lh.push_back(std::log(hd));
    lc.push_back(std::log(cd));
    out += std::to_string(idx++) + "," + hist.get_str() + "," + cr.get_str() + "," +
           format_double15(std::log(hd)) + "," + format_double15(std::log(cd)) + "\n";
  }
  double r_log = pearson(lh, lc);
  double r_raw = pearson(h, c);
  out += "# pearson_log=" + format_double15(r_log) +
         " pearson_raw=" + format_double15(r_raw) + "\n";
  return FigureData{out, r_log, r_raw};
}

}  // namespace

FigureData figure_data(const std::string& id, mpfr_prec_t bits) {
  if (id == "fig4") return figure_cdf(Model::Uniform, bits);
  if (id == "fig5") return figure_cdf(Model::YuleHarding, bits);
  if (id == "fig6") return figure_model_curves(false);
  if (id == "fig7") return figure_model_curves(true);
  if (id == "fig8") return figure_census();
  throw Error("unknown figure id: " + id);
}

}  // namespace confign
