#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "confign/distribution.hpp"
#include "confign/treekit.hpp"

namespace confign {

// xoshiro256++ seeded through splitmix64. Lane substreams are derived
// deterministically from (seed, lane), so parallel reductions replay
// bit-exactly regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  // Unbiased uniform draw from [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);
  Rng substream(std::uint64_t lane) const;

  std::uint64_t seed() const { return seed_; }
  static constexpr const char* kAlgorithm = "xoshiro256++ (splitmix64-seeded)";

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_;
};

// Uniform labeled topology by sequential leaf insertion: leaf k+1 attaches
// to one of the 2k-1 edges (root edge included) uniformly.
LabeledTopology sample_uniform_labeled(int n, Rng& rng);

// Forward Yule process (split a uniformly chosen current leaf) plus a
// uniformly random leaf labeling; induces the Yule-Harding distribution.
LabeledTopology sample_yule_labeled(int n, Rng& rng);

// Samples R_n by recursing on split sizes only, never building a tree.
// Yule-Harding splits are uniform; uniform-model splits use exact Catalan
// inverse-CDF sampling (random integer below C_{n-1} against exact
// cumulative weights). Table construction costs O(n^2) big-integer sums,
// so reuse one sampler for repeated draws.
class RootCountSampler {
 public:
  RootCountSampler(int n, Model model);
  Int sample(Rng& rng) const;

 private:
  int split_size(int m, Rng& rng) const;
  int n_;
  Model model_;
  std::vector<std::vector<Int>> cum_;  // uniform model only
};

Int sample_root_count(int n, Model model, Rng& rng);

struct SampleReport {
  Model model = Model::YuleHarding;
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  int lanes = 1;
  std::string rng_algorithm;
  // Double-precision aggregates (Neumaier-compensated sums; lane partials
  // merge in lane order, so results are reproducible bit-exactly).
  double mean_cr = 0, var_cr = 0;
  double mean_log_cr = 0, var_log_cr = 0;
  std::vector<double> y_grid;
  std::vector<double> ecdf;  // empirical CDF of the standardized log c_r
  double sup_dev_normal = 0;  // sup |F^ - Phi| over the whole sample
  double dkw_epsilon = 0;     // DKW band at confidence 1e-3 for this trial count
};

SampleReport empirical_report(int n, Model model, std::uint64_t trials,
                              const std::vector<double>& y_grid, std::uint64_t seed,
                              int lanes = 8);

}  // namespace confign
