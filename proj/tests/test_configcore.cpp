#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "confign/configcore.hpp"

using namespace confign;

namespace {

const char* kFig1 = "(((a,b),(c,d)),(e,f));";

// Identifier of the internal node covering exactly `leaves` in t.
std::string internal_id_for(const LabeledTopology& t, const std::set<std::string>& leaves) {
  // Walk the canonical shape tracking leaf spans and internal preorder ids.
  struct Walk {
    const std::vector<std::string>& labels;
    int leaf_i = 0, internal_i = 0;
    std::string found;
    const std::set<std::string>& want;
    void go(ShapeRef s) {
      if (s->is_leaf()) {
        ++leaf_i;
        return;
      }
      int my_id = internal_i++;
      int lo = leaf_i;
      go(s->left());
      go(s->right());
      std::set<std::string> mine(labels.begin() + lo, labels.begin() + leaf_i);
      if (mine == want) found = "n" + std::to_string(my_id);
    }
  };
  Walk w{t.labels, 0, 0, "", leaves};
  w.go(t.shape);
  REQUIRE(!w.found.empty());
  return w.found;
}

}  // namespace

TEST_CASE("root counts: worked example, cherry, caterpillar, balanced") {
  CHECK(root_config_count(parse_newick(kFig1).shape) == 10);
  CHECK(root_config_count(parse_newick("(a,b);").shape) == 1);
  for (int n = 2; n <= 12; ++n)
    CHECK(root_config_count(caterpillar(n)) == n - 1);
  CHECK(root_config_count(balanced_family(2)) == 1);
  CHECK(root_config_count(balanced_family(15)) == 416);
}

TEST_CASE("config profile of the worked example") {
  ConfigProfile p = config_profile(parse_newick(kFig1).shape);
  CHECK(p.root == 10);
  CHECK(p.total == 17);
  std::multiset<Int> counts(p.internal_counts.begin(), p.internal_counts.end());
  CHECK(counts == std::multiset<Int>{1, 1, 1, 4, 10});
}

TEST_CASE("config profile of small trees") {
  CHECK(config_profile(parse_newick("(a,b);").shape).total == 1);
  ConfigProfile cat5 = config_profile(caterpillar(5));
  CHECK(cat5.total == 10);
  std::multiset<Int> counts(cat5.internal_counts.begin(), cat5.internal_counts.end());
  CHECK(counts == std::multiset<Int>{1, 2, 3, 4});
}

TEST_CASE("profile respects the root/total sandwich for all shapes up to 12") {
  for (int n = 2; n <= 12; ++n)
    for (ShapeRef s : enumerate_shapes(n)) {
      ConfigProfile p = config_profile(s);
      CHECK(p.root <= p.total);
      CHECK(p.total <= (2 * n - 1) * p.root);
      for (const Int& c : p.internal_counts) CHECK(c <= p.root);
    }
}

TEST_CASE("explicit root configurations of the worked example") {
  LabeledTopology t = parse_newick(kFig1);
  auto configs = enumerate_root_configs(t);
  REQUIRE(configs.size() == 10);

  std::string g = internal_id_for(t, {"a", "b"});
  std::string h = internal_id_for(t, {"c", "d"});
  std::string i = internal_id_for(t, {"e", "f"});
  std::string j = internal_id_for(t, {"a", "b", "c", "d"});

  auto cfg = [&](std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    return Configuration{ids};
  };
  std::set<Configuration> expected{
      cfg({j, i}),
      cfg({j, "e", "f"}),
      cfg({g, h, i}),
      cfg({g, h, "e", "f"}),
      cfg({"a", "b", h, i}),
      cfg({"a", "b", h, "e", "f"}),
      cfg({g, "c", "d", i}),
      cfg({g, "c", "d", "e", "f"}),
      cfg({"a", "b", "c", "d", i}),
      cfg({"a", "b", "c", "d", "e", "f"}),
  };
  CHECK(std::set<Configuration>(configs.begin(), configs.end()) == expected);
  for (const auto& c : configs) CHECK(configuration_valid(t, c));
}

TEST_CASE("explicit enumeration of tiny trees") {
  auto ch = enumerate_root_configs(parse_newick("(a,b);"));
  REQUIRE(ch.size() == 1);
  CHECK(ch[0].ids == std::vector<std::string>{"a", "b"});

  LabeledTopology t = parse_newick("((a,b),c);");
  auto configs = enumerate_root_configs(t);
  REQUIRE(configs.size() == 2);
  std::string g = internal_id_for(t, {"a", "b"});
  auto cfg = [](std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    return Configuration{ids};
  };
  std::set<Configuration> expected{cfg({"a", "b", "c"}), cfg({g, "c"})};
  CHECK(std::set<Configuration>(configs.begin(), configs.end()) == expected);
}

TEST_CASE("enumeration honors its size cap") {
  CHECK_THROWS_AS(enumerate_root_configs(representative_labeling(caterpillar(17))),
                  CapError);
}

TEST_CASE("configuration validity catches broken sets") {
  LabeledTopology t = parse_newick(kFig1);
  std::string g = internal_id_for(t, {"a", "b"});
  std::string j = internal_id_for(t, {"a", "b", "c", "d"});
  CHECK_FALSE(configuration_valid(t, Configuration{{}}));
  CHECK_FALSE(configuration_valid(t, Configuration{{"a", "b"}}));        // leaves e..f uncovered
  Configuration nested{{g, j, "e", "f"}};                                // g nested under j
  std::sort(nested.ids.begin(), nested.ids.end());
  CHECK_FALSE(configuration_valid(t, nested));
  CHECK_FALSE(configuration_valid(t, Configuration{{"a", "b", "c", "d", "e", "f", "z"}}));
}

namespace {

// Brute-force antichain counter over the pruned tree: internal nodes of s,
// ancestry as the order, all subsets filtered for pairwise incomparability.
int brute_force_antichains(ShapeRef s) {
  // collect internal nodes with (preorder id, ancestor bitmask)
  struct Node {
    unsigned mask_self;
    unsigned mask_ancestors;
  };
  std::vector<Node> nodes;
  struct Walk {
    std::vector<Node>& nodes;
    void go(ShapeRef v, unsigned ancestors) {
      if (v->is_leaf()) return;
      unsigned self = 1u << nodes.size();
      nodes.push_back(Node{self, ancestors});
      go(v->left(), ancestors | self);
      go(v->right(), ancestors | self);
    }
  };
  Walk w{nodes};
  w.go(s, 0);
  int count = 0;
  unsigned total = 1u << nodes.size();
  for (unsigned sub = 1; sub < total; ++sub) {
    bool ok = true;
    for (size_t i = 0; i < nodes.size() && ok; ++i)
      if ((sub >> i) & 1u)
        if (nodes[i].mask_ancestors & sub) ok = false;
    if (ok) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("antichain recursion agrees with brute force on small shapes") {
  for (int n = 2; n <= 10; ++n)
    for (ShapeRef s : enumerate_shapes(n))
      CHECK(antichain_count(s) == brute_force_antichains(s));
}

TEST_CASE("antichain examples") {
  CHECK(antichain_count(parse_newick(kFig1).shape) == 10);
  CHECK(antichain_count(parse_newick("(a,b);").shape) == 1);
  CHECK(antichain_count(parse_newick("((a,b),c);").shape) == 2);
  CHECK_THROWS_AS(antichain_count(Shape::leaf()), Error);
}

TEST_CASE("bijection: three independent routes to c_r agree for all n <= 12") {
  for (int n = 2; n <= 12; ++n)
    for (ShapeRef s : enumerate_shapes(n)) {
      const Int& direct = root_config_count(s);
      CHECK(antichain_count(s) == direct);
      auto configs = enumerate_root_configs(representative_labeling(s));
      CHECK(Int(static_cast<long>(configs.size())) == direct);
    }
}

TEST_CASE("every enumerated configuration is valid (n <= 9)") {
  for (int n = 2; n <= 9; ++n)
    for (ShapeRef s : enumerate_shapes(n)) {
      LabeledTopology t = representative_labeling(s);
      for (const auto& c : enumerate_root_configs(t)) CHECK(configuration_valid(t, c));
    }
}

TEST_CASE("cherry counts and the 2^ch lower bound") {
  CHECK(cherry_count(parse_newick(kFig1).shape) == 3);
  CHECK(root_config_count(parse_newick(kFig1).shape) >= pow2(3));
  for (int n = 2; n <= 12; ++n) CHECK(cherry_count(caterpillar(n)) == 1);
  CHECK(cherry_count(balanced_family(4)) == 2);
  for (int n = 3; n <= 12; ++n)
    for (ShapeRef s : enumerate_shapes(n))
      CHECK(root_config_count(s) >= pow2(static_cast<unsigned long>(cherry_count(s))));
}

TEST_CASE("extremal families") {
  CHECK(balanced_family(2) == parse_newick("(a,b);").shape);
  CHECK(root_config_count(caterpillar(5)) == 4);
  CHECK(root_config_count(balanced_family(15)) == 416);
  // t_15 = (t_8, t_7), and the family recursion matches sizes
  ShapeRef t15 = balanced_family(15);
  CHECK(t15->left()->size() == 8);
  CHECK(t15->right()->size() == 7);
  for (int n = 2; n <= 12; ++n) {
    Int lo = root_config_count(caterpillar(n));
    Int hi = root_config_count(balanced_family(n));
    for (ShapeRef s : enumerate_shapes(n)) {
      CHECK(root_config_count(s) >= lo);
      CHECK(root_config_count(s) <= hi);
    }
  }
}

TEST_CASE("k_0 pins the balanced-family growth") {
  Real k0 = max_family_growth_constant(256);
  // The paper states k_0 ~ 1.5028.
  CHECK(k0.to_double() == doctest::Approx(1.5028).epsilon(1e-4));
  CHECK(k0.str(8) == "1.5028368");
  // c_r(t_n) in [k_0^{n-1/4} - 1, k_0^n - 1]. The lower end fails for
  // n = 2 and 3 (k_0^{7/4} - 1 > 1 already), so the range starts at 4.
  Real one = Real::of(1L, 256);
  Real quarter = Real::of(Rat(1, 4), 256);
  for (int n = 4; n <= 20; ++n) {
    Real c = Real::of(root_config_count(balanced_family(n)), 256);
    Real nn = Real::of(static_cast<long>(n), 256);
    Real lo = Real::exp((nn - quarter) * Real::log(k0)) - one;
    Real hi = Real::exp(nn * Real::log(k0)) - one;
    CHECK(lo <= c);
    CHECK(c <= hi);
  }
}
