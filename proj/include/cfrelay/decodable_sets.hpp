#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfrelay/set_functions.hpp"

namespace cfrelay {

/// Margin separating "> 0" from ">= 0" in floating point.
constexpr double kStrictMargin = 1e-9;

enum class FeasibilityKind { I_NonStrict, J_NonStrict, K_Strict, K_NonStrict };

const char* to_string(FeasibilityKind kind);

/// family_{A,B}(S) for the set function underlying `kind`.
double family_value(const EvalContext& ctx, FeasibilityKind kind, SubsetMask a, SubsetMask b,
                    SubsetMask s);

/// Pass/fail of a single value: strict kinds need value > margin, the others value > -margin.
/// The empty S is never tested for strict kinds.
bool value_passes(FeasibilityKind kind, double value);

/// True when family_{A,F}(S) passes for every S subset of F (nonempty S for strict kinds).
bool is_feasible_set(const EvalContext& ctx, FeasibilityKind kind, SubsetMask a, SubsetMask f);
inline bool is_feasible_set(const EvalContext& ctx, FeasibilityKind kind, SubsetMask f) {
  return is_feasible_set(ctx, kind, SubsetMask::empty(), f);
}

/// The unique largest F subset of N with family_F feasible on all its subsets,
/// found as the union of every feasible subset by exhaustive enumeration.
/// Throws Error(Numerical) if that union is not itself feasible.
SubsetMask largest_feasible_set(const EvalContext& ctx, FeasibilityKind kind);

/// Feasibility flag of every F subset of N, indexed by F.bits().
std::vector<bool> feasible_set_table(const EvalContext& ctx, FeasibilityKind kind);

/// Constructive peeling: starting from B, repeatedly drop the lexicographically
/// smallest proper violating subset S_1 until family_{A,C} is feasible on all of C.
/// Returns nullopt when B is empty or the starting value family_{A,B}(B) fails.
std::optional<SubsetMask> peel_supported_subset(const EvalContext& ctx, FeasibilityKind kind,
                                                SubsetMask a, SubsetMask b);

enum class RelayClass { JointlyDecodable, Boundary, Undecodable };

const char* to_string(RelayClass c);

struct SubsetValue {
  SubsetMask subset;
  double value;
};

struct DecodabilityReport {
  SubsetMask d_j;        // strict K-family largest set
  SubsetMask d_j_prime;  // non-strict K-family largest set
  std::vector<RelayClass> classes;  // classes[i-1] for relay i
  std::vector<SubsetValue> k_values;  // K_N(S) for every S subset of N
  std::vector<SubsetValue> near_ties;  // K_N(S) with |value| <= margin, S nonempty
};

DecodabilityReport classify_relays(const EvalContext& ctx);

}  // namespace cfrelay
