#include "confign/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "confign/errors.hpp"

namespace confign {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& w : s_) w = splitmix64(sm);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t Rng::next() {
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound < 2) return 0;
  std::uint64_t threshold = (-bound) % bound;
  for (;;) {
    std::uint64_t x = next();
    if (x >= threshold) return x % bound;
  }
}

Rng Rng::substream(std::uint64_t lane) const {
  std::uint64_t sm = seed_ ^ (0xA0761D6478BD642Full * (lane + 1));
  return Rng(splitmix64(sm));
}

// ---------------------------------------------------------------------------
// Raw array trees (no canonicalization): children per internal node, -1 at
// leaves; node 0 need not be the root.

namespace {

struct RawTree {
  std::vector<int> left, right, parent;
  std::vector<int> leaf_order;  // node index of the k-th created leaf
  int root = 0;

  int add_leaf() {
    int v = static_cast<int>(left.size());
    left.push_back(-1);
    right.push_back(-1);
    parent.push_back(-1);
    leaf_order.push_back(v);
    return v;
  }
};

// Leaf insertion: replace a uniformly chosen node v by a new internal node
// with children {v, new leaf}.
RawTree raw_uniform_tree(int n, Rng& rng) {
  RawTree t;
  t.root = t.add_leaf();
  for (int k = 1; k < n; ++k) {
    int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(t.left.size())));
    int p = static_cast<int>(t.left.size());
    t.left.push_back(v);
    t.right.push_back(-1);
    t.parent.push_back(t.parent[static_cast<size_t>(v)]);
    int leaf = t.add_leaf();
    t.right[static_cast<size_t>(p)] = leaf;
    int old_parent = t.parent[static_cast<size_t>(p)];
    if (old_parent < 0) {
      t.root = p;
    } else if (t.left[static_cast<size_t>(old_parent)] == v) {
      t.left[static_cast<size_t>(old_parent)] = p;
    } else {
      t.right[static_cast<size_t>(old_parent)] = p;
    }
    t.parent[static_cast<size_t>(v)] = p;
    t.parent[static_cast<size_t>(leaf)] = p;
  }
  return t;
}

RawTree raw_yule_tree(int n, Rng& rng) {
  RawTree t;
  t.root = t.add_leaf();
  std::vector<int> leaves{t.root};
  for (int k = 1; k < n; ++k) {
    size_t idx = static_cast<size_t>(rng.below(leaves.size()));
    int v = leaves[idx];
    int a = t.add_leaf();
    int b = t.add_leaf();
    t.left[static_cast<size_t>(v)] = a;
    t.right[static_cast<size_t>(v)] = b;
    t.parent[static_cast<size_t>(a)] = v;
    t.parent[static_cast<size_t>(b)] = v;
    leaves[idx] = a;
    leaves.push_back(b);
  }
  // Split nodes stopped being leaves; rebuild the creation-order leaf list.
  t.leaf_order.clear();
  for (size_t v = 0; v < t.left.size(); ++v)
    if (t.left[v] < 0) t.leaf_order.push_back(static_cast<int>(v));
  return t;
}

LabeledTopology canonicalize(const RawTree& t, const std::vector<std::string>& leaf_labels) {
  TreeBuilder b;
  std::vector<int> built(t.left.size(), -1);
  // Post-order over an explicit stack; leaf labels follow creation order.
  std::vector<std::pair<int, bool>> stack{{t.root, false}};
  size_t leaf_i = 0;
  std::vector<int> leaf_builder_id(t.left.size(), -1);
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    if (t.left[static_cast<size_t>(v)] < 0) {
      built[static_cast<size_t>(v)] = b.add_leaf(leaf_labels[leaf_i++]);
      continue;
    }
    if (!expanded) {
      stack.push_back({v, true});
      stack.push_back({t.right[static_cast<size_t>(v)], false});
      stack.push_back({t.left[static_cast<size_t>(v)], false});
    } else {
      built[static_cast<size_t>(v)] = b.add_node(built[static_cast<size_t>(t.left[static_cast<size_t>(v)])],
                                                 built[static_cast<size_t>(t.right[static_cast<size_t>(v)])]);
    }
  }
  return b.finish(built[static_cast<size_t>(t.root)]);
}

// Per-node log(c_eta + 1); the root's children combine to log c_r.
double log_root_configs(const RawTree& t) {
  std::vector<double> logcp(t.left.size(), 0.0);
  std::vector<std::pair<int, bool>> stack{{t.root, false}};
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    if (t.left[static_cast<size_t>(v)] < 0) continue;
    if (!expanded) {
      stack.push_back({v, true});
      stack.push_back({t.right[static_cast<size_t>(v)], false});
      stack.push_back({t.left[static_cast<size_t>(v)], false});
    } else {
      double lc = logcp[static_cast<size_t>(t.left[static_cast<size_t>(v)])] +
                  logcp[static_cast<size_t>(t.right[static_cast<size_t>(v)])];
      logcp[static_cast<size_t>(v)] = lc < 40 ? lc + std::log1p(std::exp(-lc)) : lc;
    }
  }
  if (t.left[static_cast<size_t>(t.root)] < 0) return -std::numeric_limits<double>::infinity();
  return logcp[static_cast<size_t>(t.left[static_cast<size_t>(t.root)])] +
         logcp[static_cast<size_t>(t.right[static_cast<size_t>(t.root)])];
}

std::vector<std::string> ordered_labels(int n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) labels.push_back(leaf_name(i));
  return labels;
}

}  // namespace

LabeledTopology sample_uniform_labeled(int n, Rng& rng) {
  if (n < 1) throw Error("sample_uniform_labeled requires n >= 1");
  RawTree t = raw_uniform_tree(n, rng);
  // The k-th inserted leaf carries the k-th label; relabel in leaf creation
  // order along the post-order walk.
  std::vector<std::string> by_creation = ordered_labels(n);
  // canonicalize() hands labels out in post-order leaf visitation, so map
  // creation order to that sequence first.
  std::vector<std::string> walk_labels;
  walk_labels.reserve(static_cast<size_t>(n));
  {
    std::vector<int> creation_rank(t.left.size(), -1);
    for (size_t k = 0; k < t.leaf_order.size(); ++k)
      creation_rank[static_cast<size_t>(t.leaf_order[k])] = static_cast<int>(k);
    std::vector<int> stack{t.root};
    std::vector<int> order;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (t.left[static_cast<size_t>(v)] < 0) {
        order.push_back(creation_rank[static_cast<size_t>(v)]);
        continue;
      }
      stack.push_back(t.right[static_cast<size_t>(v)]);
      stack.push_back(t.left[static_cast<size_t>(v)]);
    }
    for (int rank : order) walk_labels.push_back(by_creation[static_cast<size_t>(rank)]);
  }
  return canonicalize(t, walk_labels);
}

LabeledTopology sample_yule_labeled(int n, Rng& rng) {
  if (n < 1) throw Error("sample_yule_labeled requires n >= 1");
  RawTree t = raw_yule_tree(n, rng);
  // Uniformly random assignment of labels to leaves.
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    auto j = static_cast<size_t>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<size_t>(i)], perm[j]);
  }
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(n));
  // Leaves are visited left-to-right by canonicalize(); hand the k-th leaf
  // label perm[k].
  for (int i = 0; i < n; ++i) labels.push_back(leaf_name(perm[static_cast<size_t>(i)]));
  return canonicalize(t, labels);
}

// ---------------------------------------------------------------------------
// Split-size recursion sampler

RootCountSampler::RootCountSampler(int n, Model model) : n_(n), model_(model) {
  if (n < 1) throw Error("RootCountSampler requires n >= 1");
  if (model == Model::Uniform && n >= 2) {
    cum_.resize(static_cast<size_t>(n) + 1);
    std::vector<Int> cat(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) cat[static_cast<size_t>(i)] = catalan(static_cast<unsigned long>(i));
    for (int m = 2; m <= n; ++m) {
      auto& cm = cum_[static_cast<size_t>(m)];
      cm.reserve(static_cast<size_t>(m - 1));
      Int acc = 0;
      for (int j = 1; j < m; ++j) {
        acc += cat[static_cast<size_t>(j - 1)] * cat[static_cast<size_t>(m - j - 1)];
        cm.push_back(acc);
      }
    }
  }
}

namespace {

// Uniform random integer in [0, bound) assembled 64 bits at a time.
Int random_below(const Int& bound, Rng& rng) {
  size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  size_t words = (bits + 63) / 64;
  for (;;) {
    Int x = 0;
    for (size_t w = 0; w < words; ++w) {
      mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), 64);
      x += Int(static_cast<unsigned long>(rng.next()));
    }
    // Keep only `bits` bits so the acceptance rate stays >= 1/2.
    mpz_fdiv_r_2exp(x.get_mpz_t(), x.get_mpz_t(), bits);
    if (x < bound) return x;
  }
}

}  // namespace

int RootCountSampler::split_size(int m, Rng& rng) const {
  if (model_ == Model::YuleHarding)
    return 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - 1)));
  const auto& cm = cum_[static_cast<size_t>(m)];
  Int x = random_below(cm.back(), rng);
  auto it = std::upper_bound(cm.begin(), cm.end(), x);
  return 1 + static_cast<int>(it - cm.begin());
}

Int RootCountSampler::sample(Rng& rng) const {
  // Depth is at most n; fine for the sizes this sampler is meant for.
  std::function<Int(int)> rec = [&](int m) -> Int {
    if (m == 1) return 0;
    int j = split_size(m, rng);
    Int a = rec(j);
    Int b = rec(m - j);
    return (a + 1) * (b + 1);
  };
  return rec(n_);
}

Int sample_root_count(int n, Model model, Rng& rng) {
  return RootCountSampler(n, model).sample(rng);
}

// ---------------------------------------------------------------------------
// Empirical reporting

namespace {

// Neumaier-compensated accumulator.
struct Kahan {
  double sum = 0, comp = 0;
  void add(double x) {
    double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

double normal_cdf_d(double y) { return 0.5 * std::erfc(-y / std::sqrt(2.0)); }

}  // namespace

SampleReport empirical_report(int n, Model model, std::uint64_t trials,
                              const std::vector<double>& y_grid, std::uint64_t seed,
                              int lanes) {
  if (n < 2) throw Error("empirical_report requires n >= 2");
  if (trials < 1) throw Error("empirical_report requires trials >= 1");
  if (lanes < 1) lanes = 1;

  SampleReport rep;
  rep.model = model;
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;
  rep.lanes = lanes;
  rep.rng_algorithm = Rng::kAlgorithm;
  rep.y_grid = y_grid;

  Rng master(seed);
  std::vector<double> logs;
  logs.reserve(trials);
  Kahan sum_c, sum_c2;
  for (int lane = 0; lane < lanes; ++lane) {
    Rng rng = master.substream(static_cast<std::uint64_t>(lane));
    std::uint64_t lane_trials =
        trials / static_cast<std::uint64_t>(lanes) +
        (static_cast<std::uint64_t>(lane) < trials % static_cast<std::uint64_t>(lanes) ? 1 : 0);
    for (std::uint64_t i = 0; i < lane_trials; ++i) {
      RawTree t = model == Model::Uniform ? raw_uniform_tree(n, rng) : raw_yule_tree(n, rng);
      double lc = log_root_configs(t);
      logs.push_back(lc);
      double c = std::exp(lc);
      sum_c.add(c);
      sum_c2.add(c * c);
    }
  }

  auto N = static_cast<double>(trials);
  Kahan sum_l;
  for (double x : logs) sum_l.add(x);
  rep.mean_log_cr = sum_l.value() / N;
  Kahan sum_l2;
  for (double x : logs) sum_l2.add((x - rep.mean_log_cr) * (x - rep.mean_log_cr));
  rep.var_log_cr = trials > 1 ? sum_l2.value() / (N - 1) : 0.0;
  rep.mean_cr = sum_c.value() / N;
  rep.var_cr = trials > 1 ? (sum_c2.value() - N * rep.mean_cr * rep.mean_cr) / (N - 1) : 0.0;

  double sd = rep.var_log_cr > 0 ? std::sqrt(rep.var_log_cr) : 1.0;
  std::vector<double> z(logs.size());
  for (size_t i = 0; i < logs.size(); ++i) z[i] = (logs[i] - rep.mean_log_cr) / sd;
  std::sort(z.begin(), z.end());

  double sup = 0;
  for (size_t i = 0; i < z.size(); ++i) {
    double phi = normal_cdf_d(z[i]);
    sup = std::max(sup, std::fabs(static_cast<double>(i + 1) / N - phi));
    sup = std::max(sup, std::fabs(phi - static_cast<double>(i) / N));
  }
  rep.sup_dev_normal = sup;
  rep.dkw_epsilon = std::sqrt(std::log(2.0 / 1e-3) / (2.0 * N));

  rep.ecdf.reserve(y_grid.size());
  for (double y : y_grid) {
    auto it = std::upper_bound(z.begin(), z.end(), y);
    rep.ecdf.push_back(static_cast<double>(it - z.begin()) / N);
  }
  return rep;
}

}  // namespace confign
