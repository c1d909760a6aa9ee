#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfrelay/decodable_sets.hpp"
#include "cfrelay/lp.hpp"
#include "cfrelay/set_functions.hpp"

namespace cfrelay {

/// Compress-and-forward schemes, named by encoding / decoding order / compression decoding:
///   CFS cumulative, forward, successive     CFJ cumulative, forward, joint
///   RUJ repetitive, all-blocks united, joint
///   CBS cumulative, backward, successive    CBJ cumulative, backward, joint
enum class SchemeId { CFS, CFJ, RUJ, CBS, CBJ };

const char* to_string(SchemeId id);
/// Accepts "cfs", "CFS", ... ; throws Error(InvalidArgument) otherwise.
SchemeId scheme_from_string(const std::string& name);

struct DiagnosticRow {
  std::string label;
  SubsetMask subset;
  double value;
};

struct SchemeReport {
  SchemeId scheme = SchemeId::CFS;
  std::optional<double> rate;  // nullopt means infeasible
  double raw_value = 0.0;      // objective before clamping at zero
  bool clamped = false;
  std::vector<SubsetMask> argmin_subsets;
  std::vector<double> witness_rates;  // CFS / CFJ rate vector
  SubsetMask relay_subset;            // M used by RUJ / CBJ
  std::optional<DecodabilityReport> decodability;  // CBJ
  std::vector<SubsetMask> violators;               // CFS digital / CBS
  std::vector<DiagnosticRow> diagnostics;
  std::vector<std::string> notes;
};

/// Tolerance used to collect argmin subsets and to compare rates.
constexpr double kRateTolerance = 1e-9;

// Full mode.
SchemeReport rate_cfs(const EvalContext& ctx);
SchemeReport rate_cfj(const EvalContext& ctx);
SchemeReport rate_ruj(const EvalContext& ctx, SubsetMask m);
SchemeReport rate_cbs(const EvalContext& ctx);
SchemeReport rate_cbj(const EvalContext& ctx);

// Digital mode, rates taken from the context (the link capacities).
SchemeReport rate_cfs_digital(const EvalContext& ctx);
SchemeReport rate_cfj_digital(const EvalContext& ctx);

/// Dispatches on the context mode: CFS / CFJ map to their digital variants in
/// Digital mode; RUJ / CBS / CBJ raise Error(ModeMismatch) there. RUJ uses `m`
/// when given and N otherwise.
SchemeReport compute_rate(const EvalContext& ctx, SchemeId scheme,
                          std::optional<SubsetMask> m = std::nullopt);

/// The MAC region sum_{S1} R_i <= I(X_{S1}; Y | X_{S1^c}) as LP rows over the first n variables.
std::vector<LinearConstraint> mac_constraints(const EvalContext& ctx, int total_variables);

/// Does some rate vector satisfy both the MAC rows and the successive-decoding rows
/// sum_S R_i >= I(Y_S; Yhat_S | Yhat_{S^c}, Y, X_N)? Full mode.
std::optional<std::vector<double>> successive_rate_vector(const EvalContext& ctx);

}  // namespace cfrelay
