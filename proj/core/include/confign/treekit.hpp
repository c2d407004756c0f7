#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confign/errors.hpp"
#include "confign/numbers.hpp"

namespace confign {

class Shape;
using ShapeRef = const Shape*;

// Canonical rooted binary unlabeled topology. Instances are interned: equal
// shapes are the same pointer, so structural equality is pointer equality and
// the intern id doubles as a memoization key. Child order is canonical
// (larger subtree first, ties resolved structurally), immutable, and shared;
// construction is synchronized, reads are lock-free.
class Shape {
 public:
  static ShapeRef leaf();
  static ShapeRef node(ShapeRef a, ShapeRef b);

  bool is_leaf() const { return left_ == nullptr; }
  ShapeRef left() const { return left_; }
  ShapeRef right() const { return right_; }
  int size() const { return size_; }
  int cherry_count() const { return cherries_; }
  std::uint32_t id() const { return id_; }

  // Number of root ancestral configurations c_r of this shape (0 for a leaf).
  const Int& root_configs() const { return root_configs_; }

  // Canonical total order: 0 iff equal; negative when a precedes b.
  static int cmp(ShapeRef a, ShapeRef b);

 private:
  friend struct ShapePool;
  Shape(ShapeRef l, ShapeRef r, std::uint32_t id);

  ShapeRef left_;
  ShapeRef right_;
  int size_;
  int cherries_;
  std::uint32_t id_;
  Int root_configs_;
};

// Shape plus leaf names in left-to-right canonical traversal order.
struct LabeledTopology {
  ShapeRef shape = nullptr;
  std::vector<std::string> labels;

  int size() const { return shape ? shape->size() : 0; }
  bool operator==(const LabeledTopology& o) const {
    return shape == o.shape && labels == o.labels;
  }
};

// Incremental construction of a labeled tree in arbitrary child order; the
// result is canonicalized (children reordered, labels permuted consistently).
class TreeBuilder {
 public:
  int add_leaf(std::string label);
  int add_node(int left, int right);
  LabeledTopology finish(int root) const;
  LabeledTopology finish() const;  // root = last added node

 private:
  struct Raw {
    int left = -1, right = -1;
    std::string label;
  };
  std::vector<Raw> nodes_;
};

// Strictly binary rooted Newick, names [A-Za-z0-9_]+, no branch lengths,
// ';'-terminated. Duplicate names, unary/multifurcating nodes and syntax
// errors raise ParseError with the offending position.
LabeledTopology parse_newick(const std::string& text);

// Deterministic canonical Newick; children are emitted in canonical order.
std::string render_newick(const LabeledTopology& t);

// Leaf names a, b, ..., z, aa, ab, ... assigned in canonical traversal order.
LabeledTopology representative_labeling(ShapeRef s);
std::string leaf_name(int index);

// All canonical shapes with n leaves, each once, in a fixed deterministic
// order; the count is the Wedderburn-Etherington number.
std::vector<ShapeRef> enumerate_shapes(int n, int cap = 20);

enum class TreeClass {
  LabeledTopologies,
  OrderedTopologies,
  LabeledHistories,
  OrderedHistories,
};

struct ClassCount {
  TreeClass cls;
  int n;
  Int value;
};

ClassCount class_count(int n, TreeClass cls);

struct LabOr {
  Int labelings;
  Int orientations;
};

// Leaf labelings and planar orientations of a shape; they satisfy
// lab * 2^(n-1) == or * n! exactly.
LabOr labelings_and_orientations(ShapeRef s);

// Number of labeled histories sharing one labeled topology of this shape:
// (n-1)! / prod_{r=3..n} (r-1)^{d_r}.
Int labeled_history_count(ShapeRef s);

// Yule-Harding probability of one labeled topology with this shape; the
// shape-level mass is lab(s) times this.
Rat yule_probability(ShapeRef s);

}  // namespace confign
