#pragma once

#include <string>
#include <vector>

#include "confign/numbers.hpp"
#include "confign/real.hpp"
#include "confign/treekit.hpp"

namespace confign {

// Per-node configuration counts. Internal nodes are indexed in canonical
// preorder; leaves have no configurations and contribute 0 to the total.
struct ConfigProfile {
  std::vector<Int> internal_counts;  // c_eta, canonical preorder over internal nodes
  Int root;                          // c_r
  Int total;                         // c = sum over all 2n-1 nodes
};

// c_r of a shape: (c_L + 1)(c_R + 1) recursively, 0 at a leaf.
const Int& root_config_count(ShapeRef s);

ConfigProfile config_profile(ShapeRef s);

// A root ancestral configuration: a set of lineage identifiers. Pendant
// lineages are named by their leaf label; an internal lineage is named
// "n<k>" where k is the preorder index of its child node among the internal
// nodes of the canonical form.
struct Configuration {
  std::vector<std::string> ids;  // sorted
  bool operator==(const Configuration& o) const { return ids == o.ids; }
  bool operator<(const Configuration& o) const { return ids < o.ids; }
};

// The explicit set C(root); its cardinality equals root_config_count.
std::vector<Configuration> enumerate_root_configs(const LabeledTopology& t, int cap = 16);

// Checks the defining invariants of a configuration of t: identifiers exist,
// none is the root, no identifier is an ancestor of another, and every leaf
// is covered exactly once.
bool configuration_valid(const LabeledTopology& t, const Configuration& c);

// Number of non-empty antichains of the pruned binary tree of s (internal
// nodes of s under the ancestry order). Independent route to c_r via the
// antichain recursion A(v) = A(l)A(r) + 1, A(pruned leaf) = 2.
Int antichain_count(ShapeRef s);

int cherry_count(ShapeRef s);

// Extremal families: t_n = (t_d, t_{n-d}) with d the power of 2 nearest n/2
// (ties take the larger power), and the comb.
ShapeRef balanced_family(int n);
ShapeRef caterpillar(int n);

// Growth constant k_0 of the balanced family: lim (c_r(t_{2^k}) + 1)^(1/2^k),
// about 1.5028368.
Real max_family_growth_constant(mpfr_prec_t prec = 256);

}  // namespace confign
