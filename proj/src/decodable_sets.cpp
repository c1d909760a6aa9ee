#include "cfrelay/decodable_sets.hpp"

#include <cmath>

#include "cfrelay/error.hpp"

namespace cfrelay {

namespace {
bool is_strict(FeasibilityKind kind) { return kind == FeasibilityKind::K_Strict; }
}  // namespace

const char* to_string(FeasibilityKind kind) {
  switch (kind) {
    case FeasibilityKind::I_NonStrict:
      return "I";
    case FeasibilityKind::J_NonStrict:
      return "J";
    case FeasibilityKind::K_Strict:
      return "K-strict";
    case FeasibilityKind::K_NonStrict:
      return "K-nonstrict";
  }
  return "?";
}

const char* to_string(RelayClass c) {
  switch (c) {
    case RelayClass::JointlyDecodable:
      return "jointly-decodable";
    case RelayClass::Boundary:
      return "boundary";
    case RelayClass::Undecodable:
      return "undecodable";
  }
  return "?";
}

double family_value(const EvalContext& ctx, FeasibilityKind kind, SubsetMask a, SubsetMask b,
                    SubsetMask s) {
  switch (kind) {
    case FeasibilityKind::I_NonStrict:
      return eval_I(ctx, a, b, s);
    case FeasibilityKind::J_NonStrict:
      return eval_J(ctx, a, b, s);
    case FeasibilityKind::K_Strict:
    case FeasibilityKind::K_NonStrict:
      return eval_K(ctx, a, b, s);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown feasibility kind");
}

bool value_passes(FeasibilityKind kind, double value) {
  return is_strict(kind) ? value > kStrictMargin : value > -kStrictMargin;
}

bool is_feasible_set(const EvalContext& ctx, FeasibilityKind kind, SubsetMask a, SubsetMask f) {
  for (SubsetMask s : subsets_of(f)) {
    if (s.is_empty()) continue;  // 0 passes every non-strict test and is exempt from strict ones
    if (!value_passes(kind, family_value(ctx, kind, a, f, s))) return false;
  }
  return true;
}

std::vector<bool> feasible_set_table(const EvalContext& ctx, FeasibilityKind kind) {
  const auto all = subsets_of(ctx.all_relays());
  std::vector<bool> table(all.size(), false);
  for (SubsetMask f : all) table[f.bits()] = is_feasible_set(ctx, kind, f);
  return table;
}

SubsetMask largest_feasible_set(const EvalContext& ctx, FeasibilityKind kind) {
  const auto table = feasible_set_table(ctx, kind);
  SubsetMask u;
  for (std::uint32_t bits = 0; bits < table.size(); ++bits) {
    if (table[bits]) u = u | SubsetMask{bits};
  }
  if (!table[u.bits()]) {
    throw Error(ErrorCode::Numerical, std::string("union ") + u.to_string() + " of feasible " +
                                          to_string(kind) + " sets is not feasible");
  }
  return u;
}

std::optional<SubsetMask> peel_supported_subset(const EvalContext& ctx, FeasibilityKind kind,
                                                SubsetMask a, SubsetMask b) {
  if (b.is_empty()) return std::nullopt;
  if (!value_passes(kind, family_value(ctx, kind, a, b, b))) return std::nullopt;
  SubsetMask current = b;
  while (!current.is_empty()) {
    std::optional<SubsetMask> violator;
    for (SubsetMask s : subsets_of(current)) {
      if (s.is_empty() || s == current) continue;
      if (value_passes(kind, family_value(ctx, kind, a, current, s))) continue;
      if (!violator || lexicographically_less(s, *violator)) violator = s;
    }
    if (!violator) break;
    current = current - *violator;
  }
  if (current.is_empty()) return std::nullopt;
  if (!is_feasible_set(ctx, kind, a, current)) {
    throw Error(ErrorCode::Numerical, std::string("peeling stopped at ") + current.to_string() +
                                          ", which is not " + to_string(kind) + "-feasible");
  }
  return current;
}

DecodabilityReport classify_relays(const EvalContext& ctx) {
  if (ctx.mode() != Mode::Full) {
    throw Error(ErrorCode::ModeMismatch, "relay classification is defined for Full mode only");
  }
  DecodabilityReport r;
  r.d_j = largest_feasible_set(ctx, FeasibilityKind::K_Strict);
  r.d_j_prime = largest_feasible_set(ctx, FeasibilityKind::K_NonStrict);
  if (!r.d_j.subset_of(r.d_j_prime)) {
    throw Error(ErrorCode::Numerical, "strict decodable set " + r.d_j.to_string() +
                                          " is not contained in " + r.d_j_prime.to_string());
  }
  for (int i = 1; i <= ctx.relays(); ++i) {
    if (r.d_j.contains(i)) {
      r.classes.push_back(RelayClass::JointlyDecodable);
    } else if (r.d_j_prime.contains(i)) {
      r.classes.push_back(RelayClass::Boundary);
    } else {
      r.classes.push_back(RelayClass::Undecodable);
    }
  }
  const SubsetMask all = ctx.all_relays();
  for (SubsetMask s : subsets_of(all)) {
    const double v = eval_K(ctx, SubsetMask::empty(), all, s);
    r.k_values.push_back({s, v});
    if (!s.is_empty() && std::abs(v) <= kStrictMargin) r.near_ties.push_back({s, v});
  }
  return r;
}

}  // namespace cfrelay
