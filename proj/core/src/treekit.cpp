#include "confign/treekit.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <unordered_set>

namespace confign {

namespace {

constexpr int kDefaultEnumerateCap = 20;

bool valid_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

// ---------------------------------------------------------------------------
// Shape interning

struct ShapePool {
  std::mutex mu;
  std::deque<Shape> storage;
  std::unordered_map<std::uint64_t, ShapeRef> by_children;
  ShapeRef the_leaf = nullptr;

  static ShapePool& instance() {
    static ShapePool pool;
    return pool;
  }

  ShapeRef leaf() {
    std::lock_guard lock(mu);
    if (!the_leaf) {
      storage.emplace_back(Shape(nullptr, nullptr, 0));
      the_leaf = &storage.back();
    }
    return the_leaf;
  }

  ShapeRef node(ShapeRef l, ShapeRef r) {
    std::uint64_t key = (static_cast<std::uint64_t>(l->id()) << 32) | r->id();
    std::lock_guard lock(mu);
    auto it = by_children.find(key);
    if (it != by_children.end()) return it->second;
    auto id = static_cast<std::uint32_t>(storage.size());
    storage.emplace_back(Shape(l, r, id));
    ShapeRef s = &storage.back();
    by_children.emplace(key, s);
    return s;
  }
};

Shape::Shape(ShapeRef l, ShapeRef r, std::uint32_t id)
    : left_(l), right_(r), id_(id) {
  if (!l) {
    size_ = 1;
    cherries_ = 0;
    root_configs_ = 0;
    return;
  }
  size_ = l->size_ + r->size_;
  cherries_ = (l->is_leaf() && r->is_leaf()) ? 1 : l->cherries_ + r->cherries_;
  root_configs_ = (l->root_configs_ + 1) * (r->root_configs_ + 1);
}

ShapeRef Shape::leaf() { return ShapePool::instance().leaf(); }

ShapeRef Shape::node(ShapeRef a, ShapeRef b) {
  if (cmp(a, b) > 0) std::swap(a, b);
  return ShapePool::instance().node(a, b);
}

int Shape::cmp(ShapeRef a, ShapeRef b) {
  if (a == b) return 0;
  if (a->size_ != b->size_) return a->size_ > b->size_ ? -1 : 1;
  int c = cmp(a->left_, b->left_);
  if (c != 0) return c;
  return cmp(a->right_, b->right_);
}

// ---------------------------------------------------------------------------
// TreeBuilder / canonicalization

int TreeBuilder::add_leaf(std::string label) {
  nodes_.push_back(Raw{-1, -1, std::move(label)});
  return static_cast<int>(nodes_.size()) - 1;
}

int TreeBuilder::add_node(int left, int right) {
  nodes_.push_back(Raw{left, right, {}});
  return static_cast<int>(nodes_.size()) - 1;
}

namespace {

struct Canon {
  ShapeRef shape;
  std::vector<std::string> labels;
};

}  // namespace

LabeledTopology TreeBuilder::finish(int root) const {
  // Recursive canonicalization: order children by shape, breaking shape ties
  // by label sequence so renders are deterministic.
  auto rec = [&](auto&& self, int v) -> Canon {
    const Raw& rn = nodes_.at(static_cast<size_t>(v));
    if (rn.left < 0) return Canon{Shape::leaf(), {rn.label}};
    Canon a = self(self, rn.left);
    Canon b = self(self, rn.right);
    int c = Shape::cmp(a.shape, b.shape);
    if (c > 0 || (c == 0 && a.labels > b.labels)) std::swap(a, b);
    a.labels.insert(a.labels.end(), b.labels.begin(), b.labels.end());
    return Canon{Shape::node(a.shape, b.shape), std::move(a.labels)};
  };
  Canon c = rec(rec, root);
  LabeledTopology t{c.shape, std::move(c.labels)};
  std::unordered_set<std::string> seen;
  for (const auto& l : t.labels)
    if (!seen.insert(l).second) throw Error("duplicate leaf name: " + l);
  return t;
}

LabeledTopology TreeBuilder::finish() const {
  if (nodes_.empty()) throw Error("empty tree");
  return finish(static_cast<int>(nodes_.size()) - 1);
}

// ---------------------------------------------------------------------------
// Newick

namespace {

struct NewickParser {
  const std::string& text;
  size_t pos = 0;
  TreeBuilder builder;

  explicit NewickParser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

  int subtree() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    if (text[pos] == '(') {
      ++pos;
      int a = subtree();
      skip_ws();
      if (pos >= text.size() || text[pos] != ',') fail("non-binary node: expected ','");
      ++pos;
      int b = subtree();
      skip_ws();
      if (pos < text.size() && text[pos] == ',') fail("non-binary node: more than two children");
      if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
      ++pos;
      return builder.add_node(a, b);
    }
    size_t start = pos;
    while (pos < text.size() && valid_name_char(text[pos])) ++pos;
    if (pos == start) fail("expected a leaf name");
    return builder.add_leaf(text.substr(start, pos - start));
  }
};

}  // namespace

LabeledTopology parse_newick(const std::string& text) {
  NewickParser p(text);
  p.skip_ws();
  if (p.pos >= text.size() || text[p.pos] == ';') throw ParseError("empty tree", p.pos);
  int root = p.subtree();
  p.skip_ws();
  if (p.pos >= text.size() || text[p.pos] != ';') p.fail("expected ';'");
  ++p.pos;
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing characters after ';'");
  try {
    return p.builder.finish(root);
  } catch (const Error& e) {
    throw ParseError(e.what(), 0);
  }
}

namespace {

void render_rec(ShapeRef s, const std::vector<std::string>& labels, size_t& next,
                std::string& out) {
  if (s->is_leaf()) {
    out += labels[next++];
    return;
  }
  out += '(';
  render_rec(s->left(), labels, next, out);
  out += ',';
  render_rec(s->right(), labels, next, out);
  out += ')';
}

}  // namespace

std::string render_newick(const LabeledTopology& t) {
  if (!t.shape) throw Error("empty topology");
  std::string out;
  size_t next = 0;
  render_rec(t.shape, t.labels, next, out);
  out += ';';
  return out;
}

std::string leaf_name(int index) {
  std::string s;
  int i = index;
  while (i >= 0) {
    s.insert(s.begin(), static_cast<char>('a' + i % 26));
    i = i / 26 - 1;
  }
  return s;
}

LabeledTopology representative_labeling(ShapeRef s) {
  LabeledTopology t;
  t.shape = s;
  t.labels.reserve(static_cast<size_t>(s->size()));
  for (int i = 0; i < s->size(); ++i) t.labels.push_back(leaf_name(i));
  return t;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

std::mutex g_enum_mu;
std::map<int, std::vector<ShapeRef>> g_enum_cache;

const std::vector<ShapeRef>& enumerate_locked(int n) {
  auto it = g_enum_cache.find(n);
  if (it != g_enum_cache.end()) return it->second;
  std::vector<ShapeRef> out;
  if (n == 1) {
    out.push_back(Shape::leaf());
  } else {
    for (int k = n - 1; k > n - k; --k) {
      const auto& as = enumerate_locked(k);
      const auto& bs = enumerate_locked(n - k);
      for (ShapeRef a : as)
        for (ShapeRef b : bs) out.push_back(Shape::node(a, b));
    }
    if (n % 2 == 0) {
      const auto& hs = enumerate_locked(n / 2);
      for (size_t i = 0; i < hs.size(); ++i)
        for (size_t j = i; j < hs.size(); ++j) out.push_back(Shape::node(hs[i], hs[j]));
    }
  }
  return g_enum_cache.emplace(n, std::move(out)).first->second;
}

}  // namespace

std::vector<ShapeRef> enumerate_shapes(int n, int cap) {
  if (n < 1) throw Error("enumerate_shapes requires n >= 1");
  if (cap <= 0) cap = kDefaultEnumerateCap;
  if (n > cap) throw CapError("enumerate_shapes: n exceeds cap " + std::to_string(cap));
  std::lock_guard lock(g_enum_mu);
  return enumerate_locked(n);
}

// ---------------------------------------------------------------------------
// Counting formulas

ClassCount class_count(int n, TreeClass cls) {
  if (n < 1) throw Error("class_count requires n >= 1");
  auto un = static_cast<unsigned long>(n);
  Int v;
  switch (cls) {
    case TreeClass::LabeledTopologies:
      v = factorial(2 * un - 2) / (pow2(un - 1) * factorial(un - 1));
      break;
    case TreeClass::OrderedTopologies:
      v = catalan(un - 1);
      break;
    case TreeClass::LabeledHistories:
      v = factorial(un) * factorial(un - 1) / pow2(un - 1);
      break;
    case TreeClass::OrderedHistories:
      v = factorial(un - 1);
      break;
  }
  return ClassCount{cls, n, std::move(v)};
}

namespace {

// Lazy per-shape memo shared across operations; read-mostly.
struct ShapeMemo {
  std::shared_mutex mu;
  std::unordered_map<std::uint32_t, LabOr> lab_or;
  std::unordered_map<std::uint32_t, Int> dprod;

  static ShapeMemo& instance() {
    static ShapeMemo m;
    return m;
  }
};

LabOr lab_or_rec(ShapeRef s) {
  if (s->is_leaf()) return LabOr{1, 1};
  auto& memo = ShapeMemo::instance();
  {
    std::shared_lock lock(memo.mu);
    auto it = memo.lab_or.find(s->id());
    if (it != memo.lab_or.end()) return it->second;
  }
  LabOr l = lab_or_rec(s->left());
  LabOr r = lab_or_rec(s->right());
  int dup = s->left() == s->right() ? 2 : 1;
  LabOr out;
  out.labelings = l.labelings * r.labelings *
                  binomial(static_cast<unsigned long>(s->size()),
                           static_cast<unsigned long>(s->left()->size())) /
                  dup;
  out.orientations = l.orientations * r.orientations * 2 / dup;
  std::unique_lock lock(memo.mu);
  return memo.lab_or.emplace(s->id(), std::move(out)).first->second;
}

// prod_{r=3..n} (r-1)^{d_r(t)}: one factor (size-1) per internal node with
// at least three descendant taxa.
Int dprod_rec(ShapeRef s) {
  if (s->is_leaf()) return 1;
  auto& memo = ShapeMemo::instance();
  {
    std::shared_lock lock(memo.mu);
    auto it = memo.dprod.find(s->id());
    if (it != memo.dprod.end()) return it->second;
  }
  Int p = dprod_rec(s->left()) * dprod_rec(s->right());
  if (s->size() >= 3) p *= s->size() - 1;
  std::unique_lock lock(memo.mu);
  return memo.dprod.emplace(s->id(), std::move(p)).first->second;
}

}  // namespace

LabOr labelings_and_orientations(ShapeRef s) { return lab_or_rec(s); }

Int labeled_history_count(ShapeRef s) {
  return factorial(static_cast<unsigned long>(s->size() - 1)) / dprod_rec(s);
}

Rat yule_probability(ShapeRef s) {
  if (s->size() < 2) throw Error("yule_probability requires n >= 2");
  auto n = static_cast<unsigned long>(s->size());
  Rat p(pow2(n - 1), factorial(n) * dprod_rec(s));
  p.canonicalize();
  return p;
}

}  // namespace confign
