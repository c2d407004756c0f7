#include "confign/configcore.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace confign {

const Int& root_config_count(ShapeRef s) { return s->root_configs(); }

namespace {

void profile_rec(ShapeRef s, ConfigProfile& out) {
  if (s->is_leaf()) return;
  out.internal_counts.push_back(s->root_configs());
  out.total += s->root_configs();
  profile_rec(s->left(), out);
  profile_rec(s->right(), out);
}

}  // namespace

ConfigProfile config_profile(ShapeRef s) {
  ConfigProfile out;
  out.total = 0;
  profile_rec(s, out);
  out.root = s->root_configs();
  return out;
}

namespace {

// Identifiers as integer codes during enumeration: leaf i -> i,
// internal preorder index k -> n + k.
struct Enumerator {
  int n;
  const std::vector<std::string>& labels;
  int next_leaf = 0;
  int next_internal = 0;

  using Config = std::vector<int>;

  // D(v) = C(v) plus the configuration {v} itself; the caller drops nothing
  // because the product construction needs both options for each child.
  std::vector<Config> descend(ShapeRef s) {
    if (s->is_leaf()) {
      int code = next_leaf++;
      return {{code}};
    }
    int code = n + next_internal++;
    std::vector<Config> l = descend(s->left());
    std::vector<Config> r = descend(s->right());
    std::vector<Config> out;
    out.reserve(l.size() * r.size() + 1);
    for (const Config& a : l)
      for (const Config& b : r) {
        Config m;
        m.reserve(a.size() + b.size());
        std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
        out.push_back(std::move(m));
      }
    out.push_back({code});
    return out;
  }

  std::string id_of(int code) const {
    if (code < n) return labels[static_cast<size_t>(code)];
    return "n" + std::to_string(code - n);
  }
};

}  // namespace

std::vector<Configuration> enumerate_root_configs(const LabeledTopology& t, int cap) {
  if (!t.shape) throw Error("empty topology");
  if (cap <= 0) cap = 16;
  if (t.size() > cap)
    throw CapError("enumerate_root_configs: n exceeds cap " + std::to_string(cap));
  if (t.shape->is_leaf()) return {};
  Enumerator en{t.size(), t.labels};
  // Build D(root) and drop the {root} element to recover C(root).
  auto with_root = en.descend(t.shape);
  with_root.pop_back();
  std::vector<Configuration> out;
  out.reserve(with_root.size());
  for (const auto& cfg : with_root) {
    Configuration c;
    c.ids.reserve(cfg.size());
    for (int code : cfg) c.ids.push_back(en.id_of(code));
    std::sort(c.ids.begin(), c.ids.end());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct NodeSpan {
  int leaf_lo, leaf_hi;  // leaves covered, [lo, hi)
};

void collect_spans(ShapeRef s, const std::vector<std::string>& labels, int& leaf_i,
                   int& internal_i, std::map<std::string, NodeSpan>& spans, bool is_root) {
  if (s->is_leaf()) {
    spans[labels[static_cast<size_t>(leaf_i)]] = NodeSpan{leaf_i, leaf_i + 1};
    ++leaf_i;
    return;
  }
  int my_internal = internal_i++;
  int lo = leaf_i;
  collect_spans(s->left(), labels, leaf_i, internal_i, spans, false);
  collect_spans(s->right(), labels, leaf_i, internal_i, spans, false);
  if (!is_root) spans["n" + std::to_string(my_internal)] = NodeSpan{lo, leaf_i};
}

}  // namespace

bool configuration_valid(const LabeledTopology& t, const Configuration& c) {
  if (!t.shape || t.shape->is_leaf()) return false;
  if (c.ids.empty()) return false;
  std::map<std::string, NodeSpan> spans;
  int leaf_i = 0, internal_i = 0;
  collect_spans(t.shape, t.labels, leaf_i, internal_i, spans, true);
  std::vector<NodeSpan> picked;
  std::set<std::string> seen;
  for (const auto& id : c.ids) {
    auto it = spans.find(id);
    if (it == spans.end()) return false;  // unknown id, or the root itself
    if (!seen.insert(id).second) return false;
    picked.push_back(it->second);
  }
  // Non-nesting and exact leaf coverage: the spans must partition [0, n).
  std::sort(picked.begin(), picked.end(),
            [](const NodeSpan& a, const NodeSpan& b) { return a.leaf_lo < b.leaf_lo; });
  int at = 0;
  for (const auto& sp : picked) {
    if (sp.leaf_lo != at) return false;
    at = sp.leaf_hi;
  }
  return at == t.size();
}

namespace {

// Antichains (including the empty one) of the pruned subtree rooted at an
// internal node: leaf children of the original tree are pruned away.
Int antichains_incl_empty(ShapeRef s) {
  Int prod = 1;
  if (!s->left()->is_leaf()) prod *= antichains_incl_empty(s->left());
  if (!s->right()->is_leaf()) prod *= antichains_incl_empty(s->right());
  return prod + 1;
}

}  // namespace

Int antichain_count(ShapeRef s) {
  if (s->size() < 2) throw Error("antichain_count requires n >= 2");
  return antichains_incl_empty(s) - 1;
}

int cherry_count(ShapeRef s) { return s->cherry_count(); }

ShapeRef caterpillar(int n) {
  if (n < 1) throw Error("caterpillar requires n >= 1");
  ShapeRef s = Shape::leaf();
  for (int k = 2; k <= n; ++k) s = Shape::node(s, Shape::leaf());
  return s;
}

namespace {

// Power of 2 nearest n/2; the larger power on ties (the two candidate shapes
// coincide in that case, so the rule only fixes the recursion path).
int nearest_power_of_two_to_half(int n) {
  int best = 1;
  double bestdist = std::abs(1.0 - n / 2.0);
  for (int p = 2; p <= n - 1; p *= 2) {
    double dist = std::abs(p - n / 2.0);
    if (dist < bestdist || (dist == bestdist && p > best)) {
      best = p;
      bestdist = dist;
    }
  }
  return best;
}

}  // namespace

ShapeRef balanced_family(int n) {
  if (n < 1) throw Error("balanced_family requires n >= 1");
  if (n == 1) return Shape::leaf();
  int d = nearest_power_of_two_to_half(n);
  return Shape::node(balanced_family(d), balanced_family(n - d));
}

Real max_family_growth_constant(mpfr_prec_t prec) {
  // x_k = c_r(t_{2^k}) + 1 satisfies x_{k+1} = x_k^2 + 1; the normalized
  // logs 2^-k ln x_k increase to ln k_0 with doubly-exponentially small
  // increments, so a few iterations pin k_0 far beyond `prec` bits.
  Int x = 2;
  int k = 1;
  for (; k < 13; ++k) x = x * x + 1;
  Real lnx = Real::log(Real::of(x, prec + 64));
  Real scaled = lnx / Real::of(pow2(static_cast<unsigned long>(k)), prec + 64);
  return Real::exp(scaled);
}

}  // namespace confign
