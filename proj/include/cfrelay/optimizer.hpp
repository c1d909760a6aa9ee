#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfrelay/pmf.hpp"
#include "cfrelay/rate_schemes.hpp"

namespace cfrelay {

enum class FreeBlocks { Compressions, All };

struct SearchConfig {
  SchemeId scheme = SchemeId::CFJ;
  FreeBlocks free = FreeBlocks::Compressions;
  int restarts = 20;
  int iterations = 4000;  // proposals per restart
  double initial_step = 0.25;
  double decay = 0.5;     // step multiplier after a sweep without progress
  std::uint64_t seed = 0;
  double tolerance = 1e-7;
  bool enumerate_deterministic = false;
  int threads = 1;
};

struct RestartTrace {
  int restart = 0;
  double start_objective = 0.0;
  double final_objective = 0.0;
  int evaluations = 0;
  int accepted = 0;
  bool converged = false;
  std::vector<double> trace;  // objective after every accepted move
};

struct FeasibilityCheck {
  std::string family;  // "successive-rate-vector" or "J-nonnegative"
  bool satisfied = false;
  double worst_value = 0.0;  // most negative J(S), or LP infeasibility indicator
};

struct OptimizationResult {
  SchemeId scheme = SchemeId::CFJ;
  double best_objective = 0.0;  // -inf when nothing feasible was found
  ChannelSpec best_spec;
  int best_restart = -1;        // -1 when the deterministic baseline won
  double stochastic_best = 0.0;
  std::vector<RestartTrace> restarts;
  std::optional<double> deterministic_best;
  std::optional<ChannelSpec> deterministic_spec;
  std::uint64_t deterministic_maps = 0;
  FeasibilityCheck feasibility;
};

/// Objective of `scheme` on `spec`: the reported rate, or -inf when infeasible.
/// RUJ is evaluated with M = N.
double scheme_objective(const ChannelSpec& spec, SchemeId scheme);

/// Random-restart coordinate hill climbing over the free simplex blocks of `spec_template`.
OptimizationResult optimize(const ChannelSpec& spec_template, const SearchConfig& cfg);

/// Best value over every deterministic compression map (input laws kept from the template).
struct EnumerationResult {
  double best_objective;
  ChannelSpec best_spec;
  std::uint64_t maps;
};
EnumerationResult enumerate_deterministic_compressions(const ChannelSpec& spec_template,
                                                       SchemeId scheme);

/// Replace Yhat_i for i in `relays` by Yhat_i with probability p and a fresh erasure
/// symbol (appended as the last letter) with probability 1 - p.
ChannelSpec apply_erasure(const ChannelSpec& spec, SubsetMask relays, double p);

/// Successive-decoding feasibility at a fixed spec (rate-vector existence for CFS/CFJ,
/// J(S) >= -1e-6 for the backward / united schemes).
FeasibilityCheck successive_feasibility(const ChannelSpec& spec, SchemeId scheme);

}  // namespace cfrelay
