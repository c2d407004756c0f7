#include "confign/momentseries.hpp"

#include <algorithm>

#include "confign/errors.hpp"

namespace confign {

const char* seq_kind_name(SeqKind k) {
  switch (k) {
    case SeqKind::MeanYule: return "e_yh";
    case SeqKind::MeanUniform: return "e_uni";
    case SeqKind::SecondYule: return "s_yh";
    case SeqKind::SecondUniform: return "s_uni";
    case SeqKind::VarYule: return "var_yh";
    case SeqKind::VarUniform: return "var_uni";
    case SeqKind::U: return "u";
  }
  return "?";
}

const Rat& RationalSeq::at(int n) const {
  int i = n - base_index;
  if (i < 0 || i >= static_cast<int>(values.size()))
    throw Error("RationalSeq: index out of range");
  return values[static_cast<size_t>(i)];
}

namespace {

void check_seq_cap(int N) {
  if (N < 2) throw Error("sequence length must be >= 2");
  if (N > kSeqCap) throw CapError("sequence cap exceeded (" + std::to_string(kSeqCap) + ")");
}

// (n-1)! e_n for the Yule-Harding mean:
//   E~_n = (n-1)! + sum_j binom(n-2, j-1) E~_j E~_{n-j}
//               + 2 sum_j [(n-2)!/(j-1)!] E~_j
std::vector<Int> yule_mean_scaled(int N) {
  std::vector<Int> E(static_cast<size_t>(N) + 1);
  if (N >= 2) E[2] = 1;
  for (int n = 3; n <= N; ++n) {
    auto un = static_cast<unsigned long>(n);
    Int acc = factorial(un - 1);
    // Rolling binomial row binom(n-2, j-1) and falling factorial (n-2)!/(j-1)!.
    Int binom_row = 1;
    Int fall = factorial(un - 2);
    Int conv = 0, lin = 0;
    for (int j = 1; j < n; ++j) {
      if (E[static_cast<size_t>(j)] != 0) {
        if (2 * j < n)
          conv += 2 * binom_row * E[static_cast<size_t>(j)] * E[static_cast<size_t>(n - j)];
        else if (2 * j == n)
          conv += binom_row * E[static_cast<size_t>(j)] * E[static_cast<size_t>(j)];
        lin += fall * E[static_cast<size_t>(j)];
      }
      binom_row = binom_row * (n - 1 - j) / j;
      fall /= j;
    }
    E[static_cast<size_t>(n)] = acc + conv + 2 * lin;
  }
  return E;
}

// (n-1)! s_n for the Yule-Harding second moment (squared split recurrence):
//   S~_n = (n-1)! + sum_j binom(n-2,j-1) [S~_j S~_{n-j} + 4 S~_j E~_{n-j}
//          + 4 E~_j E~_{n-j}] + sum_j [(n-2)!/(j-1)!] (2 S~_j + 4 E~_j)
std::vector<Int> yule_second_scaled(int N, const std::vector<Int>& E) {
  std::vector<Int> S(static_cast<size_t>(N) + 1);
  if (N >= 2) S[2] = 1;
  for (int n = 3; n <= N; ++n) {
    auto un = static_cast<unsigned long>(n);
    Int acc = factorial(un - 1);
    Int binom_row = 1;
    Int fall = factorial(un - 2);
    for (int j = 1; j < n; ++j) {
      const Int& Sj = S[static_cast<size_t>(j)];
      const Int& Ej = E[static_cast<size_t>(j)];
      const Int& So = S[static_cast<size_t>(n - j)];
      const Int& Eo = E[static_cast<size_t>(n - j)];
      acc += binom_row * (Sj * So + 4 * Sj * Eo + 4 * Ej * Eo);
      acc += fall * (2 * Sj + 4 * Ej);
      binom_row = binom_row * (n - 1 - j) / j;
      fall /= j;
    }
    S[static_cast<size_t>(n)] = std::move(acc);
  }
  return S;
}

// C_{n-1} e_n for the uniform mean: E^_n = sum_j (E^_j + C_{j-1})(E^_{n-j} + C_{n-j-1}).
std::vector<Int> uniform_mean_scaled(int N, const std::vector<Int>& cat) {
  std::vector<Int> E(static_cast<size_t>(N) + 1);
  for (int n = 2; n <= N; ++n) {
    Int acc = 0;
    for (int j = 1; 2 * j <= n; ++j) {
      Int a = E[static_cast<size_t>(j)] + cat[static_cast<size_t>(j - 1)];
      Int b = E[static_cast<size_t>(n - j)] + cat[static_cast<size_t>(n - j - 1)];
      Int term = a * b;
      acc += (2 * j == n) ? term : 2 * term;
    }
    E[static_cast<size_t>(n)] = std::move(acc);
  }
  return E;
}

std::vector<Int> uniform_second_scaled(int N, const std::vector<Int>& E,
                                       const std::vector<Int>& cat) {
  std::vector<Int> S(static_cast<size_t>(N) + 1);
  for (int n = 2; n <= N; ++n) {
    Int acc = 0;
    for (int j = 1; 2 * j <= n; ++j) {
      Int a = S[static_cast<size_t>(j)] + 2 * E[static_cast<size_t>(j)] +
              cat[static_cast<size_t>(j - 1)];
      Int b = S[static_cast<size_t>(n - j)] + 2 * E[static_cast<size_t>(n - j)] +
              cat[static_cast<size_t>(n - j - 1)];
      Int term = a * b;
      acc += (2 * j == n) ? term : 2 * term;
    }
    S[static_cast<size_t>(n)] = std::move(acc);
  }
  return S;
}

std::vector<Int> catalan_table_upto(int N) {
  std::vector<Int> cat(static_cast<size_t>(N) + 1);
  cat[0] = 1;
  for (int i = 1; i <= N; ++i)
    cat[static_cast<size_t>(i)] =
        cat[static_cast<size_t>(i - 1)] * 2 * (2 * i - 1) / (i + 1);
  return cat;
}

RationalSeq materialize(SeqKind kind, int N, const std::vector<Int>& scaled,
                        const std::vector<Int>& dens) {
  RationalSeq seq;
  seq.kind = kind;
  seq.base_index = 1;
  seq.values.reserve(static_cast<size_t>(N));
  for (int n = 1; n <= N; ++n) {
    Rat v(scaled[static_cast<size_t>(n)], dens[static_cast<size_t>(n)]);
    v.canonicalize();
    seq.values.push_back(std::move(v));
  }
  return seq;
}

std::vector<Int> factorial_dens(int N) {
  std::vector<Int> d(static_cast<size_t>(N) + 1, Int(1));
  for (int n = 2; n <= N; ++n)
    d[static_cast<size_t>(n)] = d[static_cast<size_t>(n - 1)] * (n - 1);
  return d;
}

std::vector<Int> catalan_dens(int N) {
  std::vector<Int> cat = catalan_table_upto(N);
  std::vector<Int> d(static_cast<size_t>(N) + 1, Int(1));
  for (int n = 1; n <= N; ++n) d[static_cast<size_t>(n)] = cat[static_cast<size_t>(n - 1)];
  return d;
}

}  // namespace

RationalSeq mean_seq(Model model, int N) {
  check_seq_cap(N);
  if (model == Model::YuleHarding)
    return materialize(SeqKind::MeanYule, N, yule_mean_scaled(N), factorial_dens(N));
  std::vector<Int> cat = catalan_table_upto(N);
  return materialize(SeqKind::MeanUniform, N, uniform_mean_scaled(N, cat), catalan_dens(N));
}

RationalSeq second_moment_seq(Model model, int N) {
  check_seq_cap(N);
  if (model == Model::YuleHarding) {
    std::vector<Int> E = yule_mean_scaled(N);
    return materialize(SeqKind::SecondYule, N, yule_second_scaled(N, E), factorial_dens(N));
  }
  std::vector<Int> cat = catalan_table_upto(N);
  std::vector<Int> E = uniform_mean_scaled(N, cat);
  return materialize(SeqKind::SecondUniform, N, uniform_second_scaled(N, E, cat),
                     catalan_dens(N));
}

RationalSeq variance_seq(Model model, int N) {
  RationalSeq e = mean_seq(model, N);
  RationalSeq s = second_moment_seq(model, N);
  RationalSeq v;
  v.kind = model == Model::YuleHarding ? SeqKind::VarYule : SeqKind::VarUniform;
  v.base_index = 1;
  v.values.reserve(static_cast<size_t>(N));
  for (int n = 1; n <= N; ++n) v.values.push_back(s.at(n) - e.at(n) * e.at(n));
  return v;
}

GrowthReport growth_report(const RationalSeq& seq, const Real& base, int stride) {
  if (static_cast<int>(seq.values.size()) < 50)
    throw Error("growth_report needs at least 50 entries");
  if (stride < 1) stride = 1;
  mpfr_prec_t prec = std::max<mpfr_prec_t>(256, base.precision());
  Real ln_base = Real::log(base);
  GrowthReport rep;
  auto ratio_at = [&](int n) {
    const Rat& v = seq.at(n);
    Real ln_v = Real::log_ratio(v.get_num(), v.get_den(), prec);
    return Real::exp(ln_v - Real::of(static_cast<long>(n), prec) * ln_base);
  };
  int N = seq.max_index();
  for (int n = seq.base_index; n <= N; n += stride) {
    if (seq.at(n) == 0) continue;
    rep.rows.push_back(GrowthRow{n, ratio_at(n)});
  }
  rep.last_ratio = rep.rows.back().ratio;
  rep.drift = Real::abs(rep.last_ratio - ratio_at(std::max(seq.base_index + 1, N / 2)));
  return rep;
}

Real yule_mean_growth_constant(mpfr_prec_t prec) {
  Real one = Real::of(1L, prec);
  Real x = Real::of(2L, prec) * Real::pi(prec) * Real::sqrt(Real::of(3L, prec)) /
           Real::of(9L, prec);
  return one / (one - Real::exp(-x));
}

Real uniform_variance_growth_base(mpfr_prec_t prec) {
  Real s2 = Real::sqrt(Real::of(2L, prec));
  return Real::of(4L, prec) /
         (Real::of(7L, prec) * (Real::of(8L, prec) * s2 - Real::of(11L, prec)));
}

Real uniform_variance_amplitude(mpfr_prec_t prec) {
  Real s2 = Real::sqrt(Real::of(2L, prec));
  return Real::sqrt(Real::of(7L, prec) * (Real::of(11L, prec) - s2) / Real::of(34L, prec));
}

Real uniform_mean_amplitude(mpfr_prec_t prec) {
  return Real::sqrt(Real::of(3L, prec) / Real::of(2L, prec));
}

namespace {

// S_f(n) and S_{f(2F-f)}(n): sums of the toll quantities over the (n-1)!
// ordered unlabeled histories of size n, via Yule-Harding shape masses.
struct TollSums {
  Real f;    // sum of f(t)
  Real mix;  // sum of f(t)(2F(t) - f(t))
};

TollSums toll_sums(int n, mpfr_prec_t bits) {
  TollSums out{Real(bits), Real(bits)};
  Rat hist_total = factorial(static_cast<unsigned long>(n - 1));
  for (ShapeRef s : enumerate_shapes(n)) {
    // Number of ordered unlabeled histories with this underlying shape.
    Rat w = labelings_and_orientations(s).labelings * yule_probability(s) * hist_total;
    const Int& c = s->root_configs();
    Rat ratio(c + 1, c);
    ratio.canonicalize();
    Real f = Real::log(Real::of(ratio, bits));
    Real F = Real::log(Real::of(Int(c + 1), bits));
    Real wr = Real::of(w, bits);
    out.f += wr * f;
    out.mix += wr * f * (Real::of(2L, bits) * F - f);
  }
  return out;
}

// The size-only bracket of the sigma^2 double sum.
Rat sigma_bracket(int m, int k) {
  Rat b(0);
  b += Rat(Int(m - 1) * Int(k - 1), Int(m + k - 1));
  b -= m + k - 2;
  b += Rat(Int(m - 1) * Int(k - 1), Int(m + k) * Int(m + k + 1));
  Int mk1 = Int(m - 1) * Int(m - 1) * Int(k - 1) * Int(k - 1);
  b += Rat(mk1, Int(m + k - 1) * Int(m + k) * Int(m + k + 1));
  b.canonicalize();
  return b;
}

}  // namespace

WagnerConstants wagner_constants(int mu_cap, int sigma_cap, mpfr_prec_t bits) {
  if (mu_cap > 18) throw CapError("wagner_constants: mu_cap exceeds 18");
  if (sigma_cap > 14) throw CapError("wagner_constants: sigma_cap exceeds 14");
  if (mu_cap < 2 || sigma_cap < 2) throw Error("wagner_constants: caps must be >= 2");
  WagnerConstants out;
  out.mu_cap = mu_cap;
  out.sigma_cap = sigma_cap;
  out.bits = bits;

  int top = std::max(mu_cap, sigma_cap);
  std::vector<TollSums> sums;
  sums.reserve(static_cast<size_t>(top) + 1);
  sums.emplace_back(TollSums{Real(bits), Real(bits)});  // n = 0 unused
  sums.emplace_back(TollSums{Real(bits), Real(bits)});  // n = 1: f = 0
  for (int n = 2; n <= top; ++n) sums.push_back(toll_sums(n, bits));

  Real mu(bits);
  for (int n = 2; n <= mu_cap; ++n)
    mu += Real::of(2L, bits) * sums[static_cast<size_t>(n)].f /
          Real::of(factorial(static_cast<unsigned long>(n + 1)), bits);

  Real first(bits);
  for (int n = 2; n <= sigma_cap; ++n)
    first += Real::of(2L, bits) * sums[static_cast<size_t>(n)].mix /
             Real::of(factorial(static_cast<unsigned long>(n + 1)), bits);

  Real dbl(bits);
  for (int m = 2; m <= sigma_cap; ++m)
    for (int k = 2; k <= sigma_cap; ++k) {
      Int fprod = factorial(static_cast<unsigned long>(m + 1)) *
                  factorial(static_cast<unsigned long>(k + 1));
      Real coeff = Real::of(4L, bits) / Real::of(fprod, bits);
      dbl += coeff * sums[static_cast<size_t>(m)].f * sums[static_cast<size_t>(k)].f *
             Real::of(sigma_bracket(m, k), bits);
    }

  out.sigma2 = first - mu * mu + dbl;
  out.mu = std::move(mu);
  return out;
}

Rat two_pow_neg_cherries_mean(int n, int cap) {
  if (cap <= 0) cap = 18;
  if (n > cap) throw CapError("two_pow_neg_cherries_mean: n exceeds cap");
  if (n < 2) throw Error("two_pow_neg_cherries_mean requires n >= 2");
  Rat acc(0);
  for (ShapeRef s : enumerate_shapes(n, cap)) {
    Rat mass = labelings_and_orientations(s).labelings * yule_probability(s);
    Rat w(1, pow2(static_cast<unsigned long>(s->cherry_count())));
    w.canonicalize();
    acc += mass * w;
  }
  return acc;
}

namespace {

using Series = std::vector<Real>;  // coefficients [z^0 .. z^N]

Series series_mul(const Series& a, const Series& b, mpfr_prec_t prec) {
  size_t N = a.size();
  Series out(N, Real(prec));
  for (size_t n = 0; n < N; ++n) {
    Real acc(prec);
    for (size_t k = 0; k <= n; ++k) acc += a[k] * b[n - k];
    out[n] = std::move(acc);
  }
  return out;
}

Series series_div(const Series& a, const Series& b, mpfr_prec_t prec) {
  size_t N = a.size();
  Series q(N, Real(prec));
  for (size_t n = 0; n < N; ++n) {
    Real acc = a[n];
    for (size_t k = 0; k < n; ++k) acc -= q[k] * b[n - k];
    q[n] = acc / b[0];
  }
  return q;
}

}  // namespace

std::vector<Real> closed_form_mean_series(int N, mpfr_prec_t prec) {
  if (N < 2) throw Error("closed_form_mean_series requires N >= 2");
  size_t M = static_cast<size_t>(N) + 1;
  // w = (sqrt(3)/2) log(1-z); sin(w), cos(w) by the ODE recurrences
  // (sin w)' = w' cos w, (cos w)' = -w' sin w on coefficients.
  Real half_sqrt3 = Real::sqrt(Real::of(3L, prec)) / Real::of(2L, prec);
  Series w(M, Real(prec));
  for (size_t k = 1; k < M; ++k)
    w[k] = -half_sqrt3 / Real::of(static_cast<long>(k), prec);
  Series s(M, Real(prec)), c(M, Real(prec));
  c[0] = Real::of(1L, prec);
  for (size_t n = 1; n < M; ++n) {
    Real sa(prec), ca(prec);
    for (size_t k = 1; k <= n; ++k) {
      Real kw = Real::of(static_cast<long>(k), prec) * w[k];
      sa += kw * c[n - k];
      ca += kw * s[n - k];
    }
    Real inv_n = Real::of(1L, prec) / Real::of(static_cast<long>(n), prec);
    s[n] = sa * inv_n;
    c[n] = -(ca * inv_n);
  }
  // numerator 2 z sin(w); denominator (z-1)(sqrt(3) cos(w) + sin(w))
  Series num(M, Real(prec));
  for (size_t n = 0; n + 1 < M; ++n) num[n + 1] = Real::of(2L, prec) * s[n];
  Series lin(M, Real(prec));
  lin[0] = Real::of(-1L, prec);
  lin[1] = Real::of(1L, prec);
  Series den2(M, Real(prec));
  Real sqrt3 = Real::sqrt(Real::of(3L, prec));
  for (size_t n = 0; n < M; ++n) den2[n] = sqrt3 * c[n] + s[n];
  return series_div(num, series_mul(lin, den2, prec), prec);
}

}  // namespace confign
