#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "confign/treekit.hpp"

using namespace confign;

TEST_CASE("parse/render round trip on the worked example") {
  LabeledTopology t = parse_newick("(((a,b),(c,d)),(e,f));");
  CHECK(t.size() == 6);
  std::string s = render_newick(t);
  CHECK(s == "(((a,b),(c,d)),(e,f));");
  CHECK(parse_newick(s) == t);
}

TEST_CASE("parse handles the smallest tree and odd whitespace") {
  LabeledTopology t = parse_newick("(a,b);");
  CHECK(t.size() == 2);
  CHECK(render_newick(t) == "(a,b);");
  CHECK(parse_newick(" ( a , b ) ; ") == t);
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse_newick("((a),(b,c));"), ParseError);   // unary node
  CHECK_THROWS_AS(parse_newick("(a,b,c);"), ParseError);       // multifurcation
  CHECK_THROWS_AS(parse_newick("(a,a);"), ParseError);         // duplicate name
  CHECK_THROWS_AS(parse_newick(";"), ParseError);              // empty
  CHECK_THROWS_AS(parse_newick("(a,b)"), ParseError);          // missing ';'
  CHECK_THROWS_AS(parse_newick("(a,b); x"), ParseError);       // trailing junk
}

TEST_CASE("parse error reports a position") {
  try {
    parse_newick("(a,b,c);");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
}

TEST_CASE("canonicalization is label-order independent") {
  // Same abstract tree written with children swapped at every level.
  LabeledTopology a = parse_newick("((e,f),((c,d),(b,a)));");
  LabeledTopology b = parse_newick("(((a,b),(c,d)),(f,e));");
  CHECK(a == b);
  CHECK(render_newick(a) == render_newick(b));
}

TEST_CASE("canonical form puts the larger subtree first") {
  LabeledTopology t = parse_newick("((a,b),((c,d),(e,f)));");
  CHECK(render_newick(t) == "(((c,d),(e,f)),(a,b));");
}

TEST_CASE("enumerate_shapes matches Wedderburn-Etherington counts") {
  // 1, 1, 1, 2, 3, 6, 11, 23, 46, 98, 207, 451, 983, 2179, 4850
  const size_t expected[] = {1, 1, 1, 2, 3, 6, 11, 23, 46, 98, 207, 451, 983, 2179, 4850};
  for (int n = 1; n <= 15; ++n) {
    auto shapes = enumerate_shapes(n);
    CHECK(shapes.size() == expected[n - 1]);
    std::set<ShapeRef> dedup(shapes.begin(), shapes.end());
    CHECK(dedup.size() == shapes.size());
  }
  CHECK_THROWS_AS(enumerate_shapes(21), CapError);
}

TEST_CASE("class_count closed forms") {
  CHECK(class_count(4, TreeClass::LabeledTopologies).value == 15);
  CHECK(class_count(4, TreeClass::LabeledHistories).value == 18);
  CHECK(class_count(4, TreeClass::OrderedTopologies).value == 5);   // C_3
  CHECK(class_count(4, TreeClass::OrderedHistories).value == 6);    // 3!
  CHECK(class_count(1, TreeClass::LabeledTopologies).value == 1);
  // (2n-3)!! form for a couple of sizes
  CHECK(class_count(6, TreeClass::LabeledTopologies).value == 945);
  CHECK(class_count(15, TreeClass::LabeledTopologies).value == Int("213458046676875"));
}

TEST_CASE("labelings and orientations of the worked example") {
  ShapeRef s = parse_newick("(((a,b),(c,d)),(e,f));").shape;
  LabOr lo = labelings_and_orientations(s);
  CHECK(lo.orientations == 2);
  CHECK(lo.labelings == 45);
}

TEST_CASE("lab/or identity and per-size sums") {
  for (int n = 2; n <= 10; ++n) {
    Int lab_sum = 0, or_sum = 0, hist_sum = 0;
    Rat yule_sum(0);
    for (ShapeRef s : enumerate_shapes(n)) {
      LabOr lo = labelings_and_orientations(s);
      // Orientation/labeling exchange identity, exact.
      CHECK(lo.labelings * pow2(static_cast<unsigned long>(n - 1)) ==
            lo.orientations * factorial(static_cast<unsigned long>(n)));
      lab_sum += lo.labelings;
      or_sum += lo.orientations;
      hist_sum += lo.labelings * labeled_history_count(s);
      yule_sum += lo.labelings * yule_probability(s);
    }
    CHECK(lab_sum == class_count(n, TreeClass::LabeledTopologies).value);
    CHECK(or_sum == class_count(n, TreeClass::OrderedTopologies).value);
    CHECK(hist_sum == class_count(n, TreeClass::LabeledHistories).value);
    CHECK(yule_sum == 1);
  }
}

TEST_CASE("topology-distribution equivalence, shape by shape") {
  // or(t)/C_{n-1} == lab(t)/|T_n| exactly for every shape.
  for (int n = 2; n <= 10; ++n) {
    Int cat = class_count(n, TreeClass::OrderedTopologies).value;
    Int tn = class_count(n, TreeClass::LabeledTopologies).value;
    for (ShapeRef s : enumerate_shapes(n)) {
      LabOr lo = labelings_and_orientations(s);
      CHECK(lo.orientations * tn == lo.labelings * cat);
    }
  }
}

TEST_CASE("labeled history counts") {
  ShapeRef cat4 = parse_newick("(((a,b),c),d);").shape;
  ShapeRef bal4 = parse_newick("((a,b),(c,d));").shape;
  CHECK(labeled_history_count(cat4) == 1);
  CHECK(labeled_history_count(bal4) == 2);
}

TEST_CASE("yule probabilities at n = 4") {
  ShapeRef cat4 = parse_newick("(((a,b),c),d);").shape;
  ShapeRef bal4 = parse_newick("((a,b),(c,d));").shape;
  CHECK(yule_probability(bal4) == Rat(1, 9));
  CHECK(yule_probability(cat4) == Rat(1, 18));
  ShapeRef cherry = parse_newick("(a,b);").shape;
  CHECK(yule_probability(cherry) == 1);
}

namespace {

// Unlabeled-history equivalence needs real history enumeration. An ordered
// unlabeled history arises from a split sequence: at step k one of the k
// current leaves (by position) splits. A labeled history arises from a
// coalescent sequence: repeatedly merge an unordered pair of lineages.
// Both project to an unlabeled history key: the ranked shape up to
// reflection at every node.
struct RankedTree {
  // -1 children for leaves; internal nodes carry their split rank.
  std::vector<int> left, right, rank;
  int root = 0;

  std::string key(int v) const {
    if (left[static_cast<size_t>(v)] < 0) return "L";
    std::string a = key(left[static_cast<size_t>(v)]);
    std::string b = key(right[static_cast<size_t>(v)]);
    if (b < a) std::swap(a, b);
    return "(" + std::to_string(rank[static_cast<size_t>(v)]) + ":" + a + "," + b + ")";
  }
  std::string key() const { return key(root); }
};

void ordered_histories_rec(RankedTree& t, std::vector<int>& leaves, int step, int n,
                           std::map<std::string, Int>& acc) {
  if (step == n) {
    acc[t.key()] += 1;
    return;
  }
  for (size_t i = 0; i < leaves.size(); ++i) {
    int v = leaves[i];
    int a = static_cast<int>(t.left.size());
    t.left.push_back(-1); t.right.push_back(-1); t.rank.push_back(0);
    int b = static_cast<int>(t.left.size());
    t.left.push_back(-1); t.right.push_back(-1); t.rank.push_back(0);
    t.left[static_cast<size_t>(v)] = a;
    t.right[static_cast<size_t>(v)] = b;
    t.rank[static_cast<size_t>(v)] = step;
    int saved = leaves[i];
    leaves[i] = a;
    leaves.push_back(b);
    ordered_histories_rec(t, leaves, step + 1, n, acc);
    leaves.pop_back();
    leaves[i] = saved;
    t.left[static_cast<size_t>(v)] = -1;
    t.right[static_cast<size_t>(v)] = -1;
    for (int dropped = 0; dropped < 2; ++dropped) {
      t.left.pop_back(); t.right.pop_back(); t.rank.pop_back();
    }
  }
}

std::map<std::string, Int> ordered_histories_by_key(int n) {
  RankedTree t;
  t.left.push_back(-1); t.right.push_back(-1); t.rank.push_back(0);
  std::vector<int> leaves{0};
  std::map<std::string, Int> acc;
  ordered_histories_rec(t, leaves, 1, n, acc);
  return acc;
}

// Backward coalescent enumeration of labeled histories; the key ignores the
// labels, projecting down to the unlabeled history.
struct Lineage {
  std::string key;
};

void labeled_histories_rec(std::vector<std::string>& lineages, int next_rank,
                           std::map<std::string, Int>& acc) {
  size_t m = lineages.size();
  if (m == 1) {
    acc[lineages[0]] += 1;
    return;
  }
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      std::string a = lineages[i], b = lineages[j];
      if (b < a) std::swap(a, b);
      // ranks decrease toward the root during coalescence: next_rank counts
      // down so the root ends at rank 1
      std::string merged =
          "(" + std::to_string(next_rank) + ":" + a + "," + b + ")";
      std::vector<std::string> rest;
      for (size_t k = 0; k < m; ++k)
        if (k != i && k != j) rest.push_back(lineages[k]);
      rest.push_back(merged);
      labeled_histories_rec(rest, next_rank - 1, acc);
    }
}

std::map<std::string, Int> labeled_histories_by_key(int n) {
  std::vector<std::string> lineages(static_cast<size_t>(n), "L");
  std::map<std::string, Int> acc;
  labeled_histories_rec(lineages, n - 1, acc);
  return acc;
}

}  // namespace

TEST_CASE("history-distribution equivalence via brute-force enumeration") {
  // Per unlabeled history: orientations/(n-1)! == labelings/|H_n| exactly.
  for (int n = 3; n <= 7; ++n) {
    auto ordered = ordered_histories_by_key(n);
    auto labeled = labeled_histories_by_key(n);
    Int fn = class_count(n, TreeClass::OrderedHistories).value;
    Int hn = class_count(n, TreeClass::LabeledHistories).value;
    CHECK(ordered.size() == labeled.size());
    Int or_total = 0, lab_total = 0;
    for (const auto& [key, or_count] : ordered) {
      REQUIRE(labeled.count(key) == 1);
      const Int& lab_count = labeled.at(key);
      CHECK(or_count * hn == lab_count * fn);
      or_total += or_count;
      lab_total += lab_count;
    }
    CHECK(or_total == fn);
    CHECK(lab_total == hn);
  }
}

TEST_CASE("representative labeling and leaf names") {
  CHECK(leaf_name(0) == "a");
  CHECK(leaf_name(25) == "z");
  CHECK(leaf_name(26) == "aa");
  ShapeRef s = enumerate_shapes(5)[0];
  LabeledTopology t = representative_labeling(s);
  CHECK(t.labels == std::vector<std::string>{"a", "b", "c", "d", "e"});
  CHECK(parse_newick(render_newick(t)) == t);
}

TEST_CASE("TreeBuilder rejects duplicate labels") {
  TreeBuilder b;
  int x = b.add_leaf("x");
  int y = b.add_leaf("x");
  int r = b.add_node(x, y);
  CHECK_THROWS_AS(b.finish(r), Error);
}
