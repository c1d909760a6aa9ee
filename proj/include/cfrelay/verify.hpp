#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cfrelay/optimizer.hpp"
#include "cfrelay/pmf.hpp"

namespace cfrelay {

struct AlphabetSizes {
  int x = 2;
  int y = 2;
  int xi = 2;
  int yi = 2;
  int yhat = 2;
};

/// Seeded source of random channel instances. Conditional columns are normalized
/// independent uniform(0,1) weights; with probability `degenerate_ratio` a column
/// is replaced by a point mass so zero probabilities appear.
struct InstanceGenerator {
  Mode mode = Mode::Digital;
  int n = 2;
  AlphabetSizes alphabets;
  std::uint64_t seed = 0;
  double degenerate_ratio = 0.1;
  double max_rate = 0.5;  // rates / link capacities drawn uniformly from [0, max_rate]
};

struct Instance {
  ChannelSpec spec;
  std::vector<double> rates;  // link capacities (Digital) or an I-family rate vector (Full)
};

/// Per-instance stream derived from (seed, index) only.
std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index);
Instance generate_instance(const InstanceGenerator& gen, std::uint64_t index);

struct SuiteFailure {
  std::uint64_t seed = 0;
  std::uint64_t instance = 0;
  std::string check;
  std::vector<SubsetMask> subsets;
  double residual = 0.0;
  std::string detail;
};

struct CheckStats {
  std::uint64_t evaluated = 0;
  std::uint64_t failures = 0;
  std::uint64_t ties = 0;
  double max_residual = 0.0;  // identities: |lhs - rhs|; inequalities: worst shortfall
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::uint64_t instances = 0;
  std::map<std::string, CheckStats> checks;
  std::vector<SuiteFailure> failures;
  std::vector<std::string> notes;

  bool passed() const { return failures.empty(); }
  double max_residual() const;
};

/// Tolerances for identities and inequality slack.
constexpr double kIdentityTol = 1e-9;
constexpr double kInequalityTol = 1e-9;

SuiteReport run_lemma_suite(const InstanceGenerator& gen, std::uint64_t count, int threads = 1);
SuiteReport run_theorem_suite(const InstanceGenerator& gen, std::uint64_t count, int threads = 1);

struct OptimumPair {
  std::string name;
  ChannelSpec channel;
  SchemeId first;
  SchemeId second;
};

/// The fixed desk-scale channels used for the suprema comparison: a Digital n=1 and a
/// Full n=2 channel, all alphabets binary.
std::vector<OptimumPair> default_optimum_pairs();

/// Runs the optimizer on both schemes of every pair and passes when the best values
/// agree within 1e-3.
SuiteReport run_optimum_suite(const std::vector<OptimumPair>& pairs, const SearchConfig& base);

constexpr double kSupremumTol = 1e-3;

}  // namespace cfrelay
