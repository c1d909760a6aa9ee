#include "cfrelay/rate_schemes.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "cfrelay/error.hpp"

namespace cfrelay {

namespace {

void require_mode(const EvalContext& ctx, Mode mode, SchemeId id) {
  if (ctx.mode() == mode) return;
  throw Error(ErrorCode::ModeMismatch,
              std::string(to_string(id)) + (mode == Mode::Full
                                                ? " needs a Full-mode channel (relay inputs X_i)"
                                                : " digital variant needs a Digital-mode channel"));
}

// I(X; Yhat_N, Y | X_N) in Full mode, I(X; Yhat_N, Y) in Digital mode.
double full_information(const EvalContext& ctx) {
  const SubsetMask all = ctx.all_relays();
  const VarSet cond = ctx.mode() == Mode::Full ? VarSet::relay_inputs(all) : VarSet{};
  return ctx.cmi(VarSet::source(), VarSet::compressions(all) | VarSet::destination(), cond);
}

// I(Y_S; Yhat_S | Yhat_{S^c}, Y [, X_N]).
double compression_cost(const EvalContext& ctx, SubsetMask s) {
  const SubsetMask all = ctx.all_relays();
  VarSet cond = VarSet::compressions(all - s) | VarSet::destination();
  if (ctx.conditions_on_relay_inputs()) cond = cond | VarSet::relay_inputs(all);
  return ctx.cmi(VarSet::relay_outputs(s), VarSet::compressions(s), cond);
}

// Fills rate, raw value, clamp flag and argmin list from per-subset objective values.
void finish_min(SchemeReport& r, const std::vector<SubsetValue>& values, const char* label) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : values) best = std::min(best, v.value);
  for (const auto& v : values) {
    if (v.value <= best + kRateTolerance) r.argmin_subsets.push_back(v.subset);
    r.diagnostics.push_back({label, v.subset, v.value});
  }
  r.raw_value = best;
  r.clamped = best < 0.0;
  r.rate = std::max(best, 0.0);
  if (r.clamped) r.notes.push_back("minimum was negative and is clamped to 0");
}

}  // namespace

const char* to_string(SchemeId id) {
  switch (id) {
    case SchemeId::CFS:
      return "CFS";
    case SchemeId::CFJ:
      return "CFJ";
    case SchemeId::RUJ:
      return "RUJ";
    case SchemeId::CBS:
      return "CBS";
    case SchemeId::CBJ:
      return "CBJ";
  }
  return "?";
}

SchemeId scheme_from_string(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "cfs") return SchemeId::CFS;
  if (lower == "cfj") return SchemeId::CFJ;
  if (lower == "ruj") return SchemeId::RUJ;
  if (lower == "cbs") return SchemeId::CBS;
  if (lower == "cbj") return SchemeId::CBJ;
  throw Error(ErrorCode::InvalidArgument, "unknown scheme '" + name + "'");
}

std::vector<LinearConstraint> mac_constraints(const EvalContext& ctx, int total_variables) {
  if (ctx.mode() != Mode::Full) {
    throw Error(ErrorCode::ModeMismatch, "MAC constraints need relay inputs (Full mode)");
  }
  const SubsetMask all = ctx.all_relays();
  std::vector<LinearConstraint> rows;
  for (SubsetMask s1 : subsets_of(all)) {
    if (s1.is_empty()) continue;
    LinearConstraint row;
    row.coeffs.assign(static_cast<std::size_t>(total_variables), 0.0);
    for (int i : s1.indices()) row.coeffs[static_cast<std::size_t>(i - 1)] = 1.0;
    row.bound = ctx.cmi(VarSet::relay_inputs(s1), VarSet::destination(),
                        VarSet::relay_inputs(s1.complement(ctx.relays())));
    row.sense = Sense::LessEqual;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<std::vector<double>> successive_rate_vector(const EvalContext& ctx) {
  const int n = ctx.relays();
  LinearProgram lp;
  lp.objective.assign(static_cast<std::size_t>(n), 0.0);
  lp.constraints = mac_constraints(ctx, n);
  for (SubsetMask s : subsets_of(ctx.all_relays())) {
    if (s.is_empty()) continue;
    LinearConstraint row;
    row.coeffs.assign(static_cast<std::size_t>(n), 0.0);
    for (int i : s.indices()) row.coeffs[static_cast<std::size_t>(i - 1)] = 1.0;
    row.bound = compression_cost(ctx, s);
    row.sense = Sense::GreaterEqual;
    lp.constraints.push_back(std::move(row));
  }
  const LpResult res = solve_lp(lp);
  if (res.status == LpStatus::Unbounded) {
    throw Error(ErrorCode::Numerical, "successive-decoding feasibility LP reported unbounded");
  }
  if (res.status != LpStatus::Optimal) return std::nullopt;
  return res.witness;
}

SchemeReport rate_cfs(const EvalContext& ctx) {
  require_mode(ctx, Mode::Full, SchemeId::CFS);
  SchemeReport r;
  r.scheme = SchemeId::CFS;
  r.relay_subset = ctx.all_relays();
  for (SubsetMask s : subsets_of(ctx.all_relays())) {
    if (s.is_empty()) continue;
    r.diagnostics.push_back({"compression-cost", s, compression_cost(ctx, s)});
  }
  for (const auto& row : mac_constraints(ctx, ctx.relays())) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < row.coeffs.size(); ++i) {
      if (row.coeffs[i] != 0.0) idx.push_back(static_cast<int>(i) + 1);
    }
    r.diagnostics.push_back({"mac-capacity", SubsetMask::from_indices(idx), row.bound});
  }
  if (auto w = successive_rate_vector(ctx)) {
    r.witness_rates = *w;
    r.raw_value = full_information(ctx);
    r.rate = r.raw_value;
  } else {
    r.notes.push_back("no rate vector supports successive decoding of all compressions");
  }
  return r;
}

SchemeReport rate_cfj(const EvalContext& ctx) {
  require_mode(ctx, Mode::Full, SchemeId::CFJ);
  const int n = ctx.relays();
  const std::size_t t = static_cast<std::size_t>(n);
  const double base = full_information(ctx);
  const auto subsets = subsets_of(ctx.all_relays());

  LinearProgram lp;
  lp.objective.assign(t + 1, 0.0);
  lp.objective[t] = 1.0;
  lp.free_variable.assign(t + 1, false);
  lp.free_variable[t] = true;
  lp.constraints = mac_constraints(ctx, n + 1);
  std::vector<double> cost(subsets.size());
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    const SubsetMask s = subsets[k];
    cost[k] = compression_cost(ctx, s);
    LinearConstraint row;
    row.coeffs.assign(t + 1, 0.0);
    row.coeffs[t] = 1.0;
    for (int i : s.indices()) row.coeffs[static_cast<std::size_t>(i - 1)] = -1.0;
    row.bound = base - cost[k];
    row.sense = Sense::LessEqual;
    lp.constraints.push_back(std::move(row));
  }
  const LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) {
    throw Error(ErrorCode::Numerical, "max-min LP did not reach an optimum");
  }

  SchemeReport r;
  r.scheme = SchemeId::CFJ;
  r.relay_subset = ctx.all_relays();
  r.witness_rates.assign(res.witness.begin(), res.witness.begin() + n);
  std::vector<SubsetValue> values;
  const EvalContext at_witness = ctx.with_rates(r.witness_rates);
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    values.push_back({subsets[k], base - cost[k] + at_witness.rate_sum(subsets[k])});
  }
  finish_min(r, values, "penalized-rate");
  // The LP optimum and the minimum at its witness agree up to solver residual.
  r.raw_value = res.optimum;
  r.clamped = res.optimum < 0.0;
  r.rate = std::max(res.optimum, 0.0);
  return r;
}

SchemeReport rate_ruj(const EvalContext& ctx, SubsetMask m) {
  require_mode(ctx, Mode::Full, SchemeId::RUJ);
  if (!m.subset_of(ctx.all_relays())) {
    throw Error(ErrorCode::InvalidArgument, "relay set " + m.to_string() + " is not within N");
  }
  SchemeReport r;
  r.scheme = SchemeId::RUJ;
  r.relay_subset = m;
  std::vector<SubsetValue> values;
  for (SubsetMask s : subsets_of(m)) values.push_back({s, eval_R(ctx, m, s)});
  finish_min(r, values, "R");
  return r;
}

SchemeReport rate_cbs(const EvalContext& ctx) {
  require_mode(ctx, Mode::Full, SchemeId::CBS);
  SchemeReport r;
  r.scheme = SchemeId::CBS;
  r.relay_subset = ctx.all_relays();
  for (SubsetMask s : subsets_of(ctx.all_relays())) {
    const double j = eval_J(ctx, SubsetMask::empty(), ctx.all_relays(), s);
    r.diagnostics.push_back({"J", s, j});
    if (!value_passes(FeasibilityKind::J_NonStrict, j)) r.violators.push_back(s);
  }
  if (r.violators.empty()) {
    r.raw_value = full_information(ctx);
    r.rate = r.raw_value;
  } else {
    r.notes.push_back("some J(S) is negative: compressions are not successively decodable");
  }
  return r;
}

SchemeReport rate_cbj(const EvalContext& ctx) {
  require_mode(ctx, Mode::Full, SchemeId::CBJ);
  DecodabilityReport dec = classify_relays(ctx);
  SchemeReport r = rate_ruj(ctx, dec.d_j);
  r.scheme = SchemeId::CBJ;
  r.decodability = std::move(dec);
  return r;
}

SchemeReport rate_cfs_digital(const EvalContext& ctx) {
  require_mode(ctx, Mode::Digital, SchemeId::CFS);
  SchemeReport r;
  r.scheme = SchemeId::CFS;
  r.relay_subset = ctx.all_relays();
  r.witness_rates = ctx.rates();
  for (SubsetMask s : subsets_of(ctx.all_relays())) {
    const double surplus = eval_I(ctx, SubsetMask::empty(), ctx.all_relays(), s);
    r.diagnostics.push_back({"I", s, surplus});
    if (!value_passes(FeasibilityKind::I_NonStrict, surplus)) r.violators.push_back(s);
  }
  if (r.violators.empty()) {
    r.raw_value = full_information(ctx);
    r.rate = r.raw_value;
  } else {
    r.notes.push_back("link capacities cannot carry every compression");
  }
  return r;
}

SchemeReport rate_cfj_digital(const EvalContext& ctx) {
  require_mode(ctx, Mode::Digital, SchemeId::CFJ);
  SchemeReport r;
  r.scheme = SchemeId::CFJ;
  r.relay_subset = ctx.all_relays();
  r.witness_rates = ctx.rates();
  const double base = full_information(ctx);
  std::vector<SubsetValue> values;
  for (SubsetMask s : subsets_of(ctx.all_relays())) {
    values.push_back({s, base + eval_I(ctx, SubsetMask::empty(), ctx.all_relays(), s)});
  }
  finish_min(r, values, "penalized-rate");
  return r;
}

SchemeReport compute_rate(const EvalContext& ctx, SchemeId scheme, std::optional<SubsetMask> m) {
  if (ctx.mode() == Mode::Digital) {
    switch (scheme) {
      case SchemeId::CFS:
        return rate_cfs_digital(ctx);
      case SchemeId::CFJ:
        return rate_cfj_digital(ctx);
      default:
        throw Error(ErrorCode::ModeMismatch,
                    std::string(to_string(scheme)) +
                        " is defined for Full-mode channels only (the digital-link model has no "
                        "relay inputs)");
    }
  }
  switch (scheme) {
    case SchemeId::CFS:
      return rate_cfs(ctx);
    case SchemeId::CFJ:
      return rate_cfj(ctx);
    case SchemeId::RUJ:
      return rate_ruj(ctx, m.value_or(ctx.all_relays()));
    case SchemeId::CBS:
      return rate_cbs(ctx);
    case SchemeId::CBJ:
      return rate_cbj(ctx);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scheme");
}

}  // namespace cfrelay
