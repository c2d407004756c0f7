// confign: exact counting, distributions, moment series and certification
// for root ancestral configurations of matching gene/species trees.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "confign/certify.hpp"
#include "confign/configcore.hpp"
#include "confign/distribution.hpp"
#include "confign/io.hpp"
#include "confign/momentseries.hpp"
#include "confign/sampler.hpp"
#include "confign/treekit.hpp"

namespace {

using namespace confign;

mpfr_prec_t env_bits(mpfr_prec_t fallback) {
  const char* v = std::getenv("CONFIGN_PRECISION_BITS");
  if (!v) return fallback;
  long b = std::strtol(v, nullptr, 10);
  return b >= 64 ? static_cast<mpfr_prec_t>(b) : fallback;
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error("cannot open output file: " + out_path);
  f << payload;
}

Model parse_model(const std::string& m) {
  if (m == "uniform") return Model::Uniform;
  if (m == "yule" || m == "yule-harding" || m == "yh") return Model::YuleHarding;
  throw Error("unknown model: " + m + " (expected 'uniform' or 'yule')");
}

ShapeRef family_shape(const std::string& family, int n) {
  if (family == "caterpillar") return caterpillar(n);
  if (family == "balanced" || family == "maxfamily") return balanced_family(n);
  throw Error("unknown family: " + family +
              " (expected 'caterpillar', 'balanced' or 'maxfamily')");
}

Real parse_base(const std::string& spec, mpfr_prec_t bits) {
  if (spec == "ke") return yule_mean_growth_constant(bits);
  if (spec == "kv") {
    CertifiedRoot r = certify_alpha();
    Rat inv(r.lower.get_den(), r.lower.get_num());
    inv.canonicalize();
    return Real::of(inv, bits);
  }
  if (spec == "uniform-mean") return Real::of(Rat(4, 3), bits);
  if (spec == "uniform-var") return uniform_variance_growth_base(bits);
  if (spec.find('/') != std::string::npos) {
    Rat q(spec);
    q.canonicalize();
    return Real::of(q, bits);
  }
  return Real::of(std::stod(spec), bits);
}

int cmd_count(const std::string& newick, const std::string& family, int n) {
  LabeledTopology t;
  if (!newick.empty()) {
    t = parse_newick(newick);
  } else {
    t = representative_labeling(family_shape(family, n));
  }
  ShapeRef s = t.shape;
  ConfigProfile prof = config_profile(s);
  LabOr lo = labelings_and_orientations(s);
  std::cout << "n=" << s->size() << "\n";
  std::cout << "newick=" << render_newick(t) << "\n";
  std::cout << "c_r=" << prof.root.get_str() << "\n";
  std::cout << "c_total=" << prof.total.get_str() << "\n";
  std::cout << "cherries=" << cherry_count(s) << "\n";
  std::cout << "labelings=" << lo.labelings.get_str() << "\n";
  std::cout << "orientations=" << lo.orientations.get_str() << "\n";
  std::cout << "histories_per_labeling=" << labeled_history_count(s).get_str() << "\n";
  if (s->size() >= 2)
    std::cout << "yule_probability=" << rat_str(yule_probability(s)) << "\n";
  return 0;
}

int cmd_shapes(int n, int cap, const std::string& out) {
  std::string csv = "index,newick,c_r,cherries,labelings,orientations,histories\n";
  int idx = 0;
  for (ShapeRef s : enumerate_shapes(n, cap)) {
    LabOr lo = labelings_and_orientations(s);
    csv += std::to_string(idx++) + "," + render_newick(representative_labeling(s)) + "," +
           root_config_count(s).get_str() + "," + std::to_string(cherry_count(s)) + "," +
           lo.labelings.get_str() + "," + lo.orientations.get_str() + "," +
           labeled_history_count(s).get_str() + "\n";
  }
  emit(csv, out);
  return 0;
}

int cmd_pmf(int n, const std::string& model, bool oracle, const std::string& format,
            const std::string& out) {
  Model m = parse_model(model);
  Pmf p = oracle ? pmf_oracle(n, m) : pmf(n, m);
  emit(format == "json" ? json_pmf(p) : csv_pmf(p), out);
  return 0;
}

int cmd_moments(const std::string& model, int N, const std::string& kind,
                const std::string& out) {
  Model m = parse_model(model);
  RationalSeq seq;
  if (kind == "mean")
    seq = mean_seq(m, N);
  else if (kind == "second")
    seq = second_moment_seq(m, N);
  else if (kind == "variance")
    seq = variance_seq(m, N);
  else
    throw Error("unknown kind: " + kind + " (expected mean, second or variance)");
  emit(csv_seq(seq), out);
  return 0;
}

int cmd_growth(const std::string& model, const std::string& kind, int N,
               const std::string& base, int stride, const std::string& out) {
  Model m = parse_model(model);
  RationalSeq seq;
  if (kind == "mean")
    seq = mean_seq(m, N);
  else if (kind == "second")
    seq = second_moment_seq(m, N);
  else if (kind == "variance")
    seq = variance_seq(m, N);
  else
    throw Error("unknown kind: " + kind);
  GrowthReport rep = growth_report(seq, parse_base(base, 256), stride);
  emit(csv_growth(rep), out);
  return 0;
}

int cmd_wagner(int mu_cap, int sigma_cap) {
  WagnerConstants w = wagner_constants(mu_cap, sigma_cap, env_bits(256));
  std::cout << "mu=" << w.mu.str(15) << "\n";
  std::cout << "sigma2=" << w.sigma2.str(15) << "\n";
  return 0;
}

int cmd_figure(const std::string& id, const std::string& out) {
  FigureData fig = figure_data(id, env_bits(128));
  emit(fig.csv, out);
  return 0;
}

int cmd_certify(double grid_scale, int extended, const std::string& out_dir,
                std::optional<int> tail_K) {
  if (tail_K) {
    Rat t = tail_bound(*tail_K);
    std::cout << "tail_bound(" << *tail_K << ")=" << rat_str(t) << "\n";
    std::cout << "tail_bound_approx=" << Real::of(t, 128).str(12) << "\n";
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  mpfr_prec_t bits = env_bits(256);

  auto certs = verify_bounds(extended);
  emit(json_bound_certificates(certs), out_dir + "/bounds.json");
  for (const auto& c : certs)
    std::cout << "bound " << c.lemma << " [0," << c.hi << "]: "
              << (c.holds ? "ok" : "VIOLATED")
              << " margin>=" << Real::of(c.min_margin, 64).str(6) << "\n";

  std::cout << "tail_bound(100)=" << Real::of(tail_bound(100), 128).str(12) << "\n";
  std::cout << "tail_bound(500)=" << Real::of(tail_bound(500), 128).str(12) << "\n";

  GridReport grid = grid_minima(grid_scale, bits);
  emit(json_grid_report(grid), out_dir + "/grid.json");
  std::cout << "grid_G_min=" << grid.g_min.str(12) << " at index " << grid.g_argmin << "\n";
  std::cout << "grid_S_min=" << grid.s_min_abs.str(12) << " at (" << grid.s_argmin_r << ","
            << grid.s_argmin_theta << ")\n";
  std::cout << "G_derivative_bound=" << Real::of(grid.g_deriv_bound, 128).str(10) << "\n";
  std::cout << "S_gradient_bound=" << Real::of(grid.s_grad_bound, 128).str(9) << "\n";
  std::cout << "R_bound=" << Real::of(grid.r_poly_bound, 128).str(10) << "\n";
  if (grid.reduced_confidence)
    std::cout << "grid chains: reduced-confidence (scale=" << grid.scale << ")\n";

  CertifiedRoot root = certify_alpha();
  emit(json_certified_root(root), out_dir + "/alpha.json");
  std::cout << "alpha=" << root.alpha_digits << "\n";
  std::cout << "k_v=" << root.kv_digits << "\n";

  if (!grid.reduced_confidence && !grid.all_ok()) {
    std::cerr << "certification chains failed at full grid density\n";
    return 3;
  }
  return 0;
}

int cmd_sample(int n, const std::string& model, std::uint64_t trials, std::uint64_t seed,
               int lanes, double y_from, double y_to, double y_step,
               const std::string& out) {
  std::vector<double> grid;
  for (double y = y_from; y <= y_to + 1e-12; y += y_step) grid.push_back(y);
  SampleReport rep = empirical_report(n, parse_model(model), trials, grid, seed, lanes);
  emit(json_sample_report(rep), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact root-ancestral-configuration toolkit"};
  app.require_subcommand(1);

  auto* count = app.add_subcommand("count", "configuration counts of one tree");
  std::string count_newick, count_family;
  int count_n = 0;
  count->add_option("--newick", count_newick, "rooted binary Newick string");
  count->add_option("--family", count_family, "caterpillar | balanced | maxfamily");
  count->add_option("--n", count_n, "size for --family");

  auto* shapes = app.add_subcommand("shapes", "enumerate canonical shapes of size n");
  int shapes_n = 0, shapes_cap = 20;
  std::string shapes_out;
  shapes->add_option("--n", shapes_n, "leaf count")->required();
  shapes->add_option("--cap", shapes_cap, "enumeration cap (default 20)");
  shapes->add_option("--out", shapes_out, "output file (default stdout)");

  auto* pmfc = app.add_subcommand("pmf", "exact PMF of the root configuration count");
  int pmf_n = 0;
  std::string pmf_model = "yule", pmf_format = "csv", pmf_out;
  bool pmf_oracle_flag = false;
  pmfc->add_option("--n", pmf_n, "tree size")->required();
  pmfc->add_option("--model", pmf_model, "uniform | yule");
  pmfc->add_flag("--oracle", pmf_oracle_flag, "use the shape-weighted oracle route");
  pmfc->add_option("--format", pmf_format, "csv | json");
  pmfc->add_option("--out", pmf_out, "output file (default stdout)");

  auto* moments = app.add_subcommand("moments", "exact moment sequences e_n / s_n");
  std::string mom_model = "yule", mom_kind = "mean", mom_out;
  int mom_N = 0;
  moments->add_option("--model", mom_model, "uniform | yule");
  moments->add_option("--N", mom_N, "sequence length")->required();
  moments->add_option("--kind", mom_kind, "mean | second | variance");
  moments->add_option("--out", mom_out, "output file (default stdout)");

  auto* growth = app.add_subcommand("growth", "ratios a_n / base^n");
  std::string gr_model = "yule", gr_kind = "mean", gr_base = "ke", gr_out;
  int gr_N = 2000, gr_stride = 1;
  growth->add_option("--model", gr_model, "uniform | yule");
  growth->add_option("--kind", gr_kind, "mean | second | variance");
  growth->add_option("--N", gr_N, "sequence length");
  growth->add_option("--base", gr_base, "ke | kv | uniform-mean | uniform-var | p/q | float");
  growth->add_option("--stride", gr_stride, "report every k-th term");
  growth->add_option("--out", gr_out, "output file (default stdout)");

  auto* wagner = app.add_subcommand("wagner", "truncated lognormal constants mu, sigma^2");
  int w_mu = 15, w_sigma = 12;
  wagner->add_option("--mu-cap", w_mu, "size cap for the mu sum (default 15)");
  wagner->add_option("--sigma-cap", w_sigma, "size cap for the sigma^2 sums (default 12)");

  auto* figure = app.add_subcommand("figure", "plot-ready CSV behind a named figure");
  std::string fig_id, fig_out;
  figure->add_option("--id", fig_id, "fig4 | fig5 | fig6 | fig7 | fig8")->required();
  figure->add_option("--out", fig_out, "output file (default stdout)");

  auto* certify = app.add_subcommand("certify", "run the root-isolation certification");
  double cert_scale = 1.0;
  int cert_extended = 500;
  std::string cert_dir = "certificates";
  int cert_K = -1;
  certify->add_option("--grid-scale", cert_scale, "grid density factor in (0,1], default 1");
  certify->add_option("--extended", cert_extended, "bound regression range (default 500)");
  certify->add_option("--out-dir", cert_dir, "certificate directory (default certificates)");
  certify->add_option("--K", cert_K, "print the tail bound for K terms and exit");

  auto* sample = app.add_subcommand("sample", "Monte Carlo report at large n");
  int sm_n = 0, sm_lanes = 8;
  std::string sm_model = "yule", sm_out;
  std::uint64_t sm_trials = 100000, sm_seed = 1;
  double sm_from = -3, sm_to = 3, sm_step = 0.5;
  sample->add_option("--n", sm_n, "tree size")->required();
  sample->add_option("--model", sm_model, "uniform | yule");
  sample->add_option("--trials", sm_trials, "number of sampled trees");
  sample->add_option("--seed", sm_seed, "master RNG seed");
  sample->add_option("--lanes", sm_lanes, "deterministic reduction lanes (default 8)");
  sample->add_option("--y-from", sm_from, "ECDF grid start");
  sample->add_option("--y-to", sm_to, "ECDF grid end");
  sample->add_option("--y-step", sm_step, "ECDF grid step");
  sample->add_option("--out", sm_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*count) {
      if (count_newick.empty() && (count_family.empty() || count_n < 1))
        throw Error("count needs --newick or --family with --n");
      return cmd_count(count_newick, count_family, count_n);
    }
    if (*shapes) return cmd_shapes(shapes_n, shapes_cap, shapes_out);
    if (*pmfc) return cmd_pmf(pmf_n, pmf_model, pmf_oracle_flag, pmf_format, pmf_out);
    if (*moments) return cmd_moments(mom_model, mom_N, mom_kind, mom_out);
    if (*growth) return cmd_growth(gr_model, gr_kind, gr_N, gr_base, gr_stride, gr_out);
    if (*wagner) return cmd_wagner(w_mu, w_sigma);
    if (*figure) return cmd_figure(fig_id, fig_out);
    if (*certify)
      return cmd_certify(cert_scale, cert_extended, cert_dir,
                         cert_K >= 0 ? std::optional<int>(cert_K) : std::nullopt);
    if (*sample)
      return cmd_sample(sm_n, sm_model, sm_trials, sm_seed, sm_lanes, sm_from, sm_to,
                        sm_step, sm_out);
  } catch (const CapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CertifyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
