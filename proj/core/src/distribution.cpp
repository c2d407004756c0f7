#include "confign/distribution.hpp"

#include <algorithm>

#include "confign/ball.hpp"
#include "confign/errors.hpp"

namespace confign {

const char* model_name(Model m) {
  return m == Model::Uniform ? "uniform" : "yule-harding";
}

namespace {

constexpr mpfr_prec_t kPrecisionCeiling = 1 << 14;

// Split probability P[I_m = j] for the two models.
Rat split_weight(int m, int j, Model model, const std::vector<Int>& cat) {
  if (model == Model::YuleHarding) {
    Rat w(1, m - 1);
    w.canonicalize();
    return w;
  }
  Rat w(cat[static_cast<size_t>(j - 1)] * cat[static_cast<size_t>(m - j - 1)],
        cat[static_cast<size_t>(m - 1)]);
  w.canonicalize();
  return w;
}

std::vector<Int> catalan_table(int n) {
  std::vector<Int> cat(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) cat[static_cast<size_t>(i)] = catalan(static_cast<unsigned long>(i));
  return cat;
}

}  // namespace

Pmf pmf(int n, Model model, int cap) {
  if (n < 1) throw Error("pmf requires n >= 1");
  if (cap <= 0) cap = 18;
  if (n > cap) throw CapError("pmf: n exceeds cap " + std::to_string(cap));
  std::vector<Int> cat = catalan_table(n);
  std::vector<std::map<Int, Rat>> P(static_cast<size_t>(n) + 1);
  P[1] = {{Int(0), Rat(1)}};
  for (int m = 2; m <= n; ++m) {
    auto& cur = P[static_cast<size_t>(m)];
    // Split sizes j and m-j carry equal weight in both models; iterate the
    // lower half with a symmetry factor of 2, the middle split once.
    for (int j = 1; 2 * j <= m; ++j) {
      if (j == m - j) {
        Rat w = split_weight(m, j, model, cat);
        const auto& half = P[static_cast<size_t>(j)];
        for (const auto& [r1, p1] : half)
          for (const auto& [r2, p2] : half) cur[(r1 + 1) * (r2 + 1)] += w * p1 * p2;
      } else {
        Rat w = 2 * split_weight(m, j, model, cat);
        for (const auto& [r1, p1] : P[static_cast<size_t>(j)])
          for (const auto& [r2, p2] : P[static_cast<size_t>(m - j)])
            cur[(r1 + 1) * (r2 + 1)] += w * p1 * p2;
      }
    }
  }
  Pmf out;
  out.model = model;
  out.n = n;
  out.entries = std::move(P[static_cast<size_t>(n)]);
  return out;
}

Pmf pmf_oracle(int n, Model model, int cap) {
  if (n < 1) throw Error("pmf_oracle requires n >= 1");
  if (cap <= 0) cap = 15;
  if (n > cap) throw CapError("pmf_oracle: n exceeds cap " + std::to_string(cap));
  Pmf out;
  out.model = model;
  out.n = n;
  if (n == 1) {
    out.entries = {{Int(0), Rat(1)}};
    return out;
  }
  Int tn = class_count(n, TreeClass::LabeledTopologies).value;
  for (ShapeRef s : enumerate_shapes(n, std::max(cap, 15))) {
    Rat w;
    if (model == Model::Uniform) {
      w = Rat(labelings_and_orientations(s).labelings, tn);
      w.canonicalize();
    } else {
      w = labelings_and_orientations(s).labelings * yule_probability(s);
    }
    out.entries[s->root_configs()] += w;
  }
  return out;
}

Pmf pmf_divisor_sum(int n, Model model, int cap) {
  if (n < 1) throw Error("pmf_divisor_sum requires n >= 1");
  if (cap <= 0) cap = 8;
  if (n > cap) throw CapError("pmf_divisor_sum: n exceeds cap " + std::to_string(cap));
  std::vector<Int> cat = catalan_table(n);
  std::vector<std::map<Int, Rat>> P(static_cast<size_t>(n) + 1);
  P[1] = {{Int(0), Rat(1)}};
  for (int m = 2; m <= n; ++m) {
    auto& cur = P[static_cast<size_t>(m)];
    // (c_L+1)(c_R+1) <= 2^{m-2}, so rho <= 2^{m-2}; trial division is enough
    // at the sizes this route supports.
    unsigned long max_rho = 1ul << std::max(m - 2, 0);
    for (unsigned long rho = 1; rho <= max_rho; ++rho) {
      Rat tot(0);
      for (unsigned long d = 1; d <= rho; ++d) {
        if (rho % d != 0) continue;
        for (int j = 1; j < m; ++j) {
          Rat w = split_weight(m, j, model, cat);
          auto p1 = P[static_cast<size_t>(j)].find(Int(d - 1));
          if (p1 == P[static_cast<size_t>(j)].end()) continue;
          auto p2 = P[static_cast<size_t>(m - j)].find(Int(rho / d - 1));
          if (p2 == P[static_cast<size_t>(m - j)].end()) continue;
          tot += w * p1->second * p2->second;
        }
      }
      if (tot != 0) cur[Int(rho)] = std::move(tot);
    }
  }
  Pmf out;
  out.model = model;
  out.n = n;
  out.entries = std::move(P[static_cast<size_t>(n)]);
  return out;
}

Rat pmf_mean(const Pmf& p) {
  Rat m(0);
  for (const auto& [rho, pr] : p.entries) m += Rat(rho) * pr;
  return m;
}

Rat pmf_second_moment(const Pmf& p) {
  Rat m(0);
  for (const auto& [rho, pr] : p.entries) m += Rat(rho * rho) * pr;
  return m;
}

LogMoments log_moments(const Pmf& p, mpfr_prec_t bits) {
  if (bits < 64) bits = 64;
  LogMoments out;
  out.model = p.model;
  out.n = p.n;
  out.bits = bits;
  Real mean(bits), var(bits);
  for (const auto& [rho, pr] : p.entries) {
    if (rho <= 0) throw Error("log_moments: PMF has a nonpositive key");
    mean += Real::of(pr, bits) * Real::log(Real::of(rho, bits));
  }
  // Two-pass variance keeps the result nonnegative under rounding.
  for (const auto& [rho, pr] : p.entries) {
    Real d = Real::log(Real::of(rho, bits)) - mean;
    var += Real::of(pr, bits) * d * d;
  }
  out.mean = std::move(mean);
  out.variance = std::move(var);
  return out;
}

namespace {

// Classification of each atom against the threshold E + y*sigma at one
// precision; -1 below, +1 above, 0 undecided.
std::vector<int> classify_atoms(const Pmf& p, const Rat& y, mpfr_prec_t bits) {
  Ball mean(Real(bits), 0.0);
  for (const auto& [rho, pr] : p.entries)
    mean = mean + Ball::of(pr, bits) * Ball::log(Ball::of(rho, bits));
  Ball var(Real(bits), 0.0);
  for (const auto& [rho, pr] : p.entries) {
    Ball d = Ball::log(Ball::of(rho, bits)) - mean;
    var = var + Ball::of(pr, bits) * d * d;
  }
  Ball sigma = Ball::sqrt(var);
  Ball thr = mean + Ball::of(y, bits) * sigma;
  std::vector<int> cls;
  cls.reserve(p.entries.size());
  for (const auto& [rho, pr] : p.entries)
    cls.push_back(Ball::compare(Ball::log(Ball::of(rho, bits)), thr));
  return cls;
}

}  // namespace

CdfTable cdf_table(const Pmf& p, const std::vector<Rat>& y_grid, mpfr_prec_t bits) {
  if (bits < 64) bits = 64;
  CdfTable out;
  out.model = p.model;
  out.n = p.n;
  out.bits = bits;
  if (p.entries.empty()) throw Error("cdf_table: empty PMF");

  if (p.entries.size() == 1) {
    // Degenerate distribution: sigma = 0 and ln rho = E exactly, so the
    // "<=" threshold is met at every y.
    for (const Rat& y : y_grid) out.rows.push_back(CdfRow{y, Rat(1)});
    return out;
  }

  for (const Rat& y : y_grid) {
    std::vector<int> cls;
    mpfr_prec_t prec = bits;
    for (;;) {
      cls = classify_atoms(p, y, prec);
      bool open = std::any_of(cls.begin(), cls.end(), [](int c) { return c == 0; });
      if (!open) break;
      if (prec >= kPrecisionCeiling) {
        // Unresolvable at the ceiling: treat as equality, included by "<=".
        for (int& c : cls)
          if (c == 0) c = -1;
        break;
      }
      prec = std::min<mpfr_prec_t>(prec * 2, kPrecisionCeiling);
    }
    Rat acc(0);
    size_t i = 0;
    for (const auto& [rho, pr] : p.entries) {
      if (cls[i++] < 0) acc += pr;
    }
    out.rows.push_back(CdfRow{y, std::move(acc)});
  }
  return out;
}

std::vector<Rat> y_grid_tenths(int lo_tenths, int hi_tenths) {
  std::vector<Rat> ys;
  for (int k = lo_tenths; k <= hi_tenths; ++k) {
    Rat y(k, 10);
    y.canonicalize();
    ys.push_back(std::move(y));
  }
  return ys;
}

}  // namespace confign
