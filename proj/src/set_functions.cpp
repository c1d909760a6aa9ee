#include "cfrelay/set_functions.hpp"

#include <cmath>

#include "cfrelay/error.hpp"

namespace cfrelay {

namespace {

void check_rates(const std::vector<double>& rates, int n) {
  if (static_cast<int>(rates.size()) != n) {
    throw Error(ErrorCode::InvalidArgument, "rate vector has " + std::to_string(rates.size()) +
                                                " entries, expected " + std::to_string(n));
  }
  for (double r : rates) {
    if (!std::isfinite(r) || r < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "rates must be finite and nonnegative");
    }
  }
}

void check_within(const EvalContext& ctx, SubsetMask m, const char* what) {
  if (!m.subset_of(ctx.all_relays())) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " " + m.to_string() +
                                                " is not a subset of {1.." +
                                                std::to_string(ctx.relays()) + "}");
  }
}

void check_family_args(const EvalContext& ctx, SubsetMask a, SubsetMask b, SubsetMask s) {
  check_within(ctx, a, "A");
  check_within(ctx, b, "B");
  if (!a.disjoint(b)) {
    throw Error(ErrorCode::InvalidArgument,
                "A " + a.to_string() + " and B " + b.to_string() + " must be disjoint");
  }
  if (!s.subset_of(b)) {
    throw Error(ErrorCode::InvalidArgument,
                "S " + s.to_string() + " must be a subset of B " + b.to_string());
  }
}

void require_full(const EvalContext& ctx, const char* what) {
  if (ctx.mode() != Mode::Full) {
    throw Error(ErrorCode::ModeMismatch, std::string(what) + " is defined for Full mode only");
  }
}

VarSet xs(SubsetMask m) { return VarSet::relay_inputs(m); }
VarSet ys(SubsetMask m) { return VarSet::relay_outputs(m); }
VarSet hats(SubsetMask m) { return VarSet::compressions(m); }

}  // namespace

EvalContext::EvalContext(std::shared_ptr<const JointPmf> joint, Mode mode, int n,
                         std::vector<double> rates, bool condition_on_relay_inputs)
    : joint_(std::move(joint)),
      mode_(mode),
      n_(n),
      rates_(std::move(rates)),
      condition_on_relay_inputs_(condition_on_relay_inputs) {
  if (!joint_) throw Error(ErrorCode::InvalidArgument, "null joint distribution");
  if (n_ < 1 || n_ > kMaxRelays) throw Error(ErrorCode::InvalidArgument, "relay count out of range");
  check_rates(rates_, n_);
  if (condition_on_relay_inputs_ && mode_ != Mode::Full) {
    throw Error(ErrorCode::ModeMismatch, "Digital mode has no relay inputs to condition on");
  }
}

EvalContext EvalContext::from_spec(const ChannelSpec& spec, std::vector<double> rates) {
  auto joint = std::make_shared<const JointPmf>(build_joint(spec));
  if (rates.empty()) {
    rates = spec.mode == Mode::Digital ? spec.link_capacities
                                       : std::vector<double>(static_cast<std::size_t>(spec.n), 0.0);
  }
  return EvalContext(std::move(joint), spec.mode, spec.n, std::move(rates),
                     spec.mode == Mode::Full);
}

EvalContext EvalContext::with_rates(std::vector<double> rates) const {
  return EvalContext(joint_, mode_, n_, std::move(rates), condition_on_relay_inputs_);
}

double EvalContext::rate_sum(SubsetMask s) const {
  double sum = 0.0;
  for (int i : s.indices()) sum += rates_.at(static_cast<std::size_t>(i - 1));
  return sum;
}

double eval_I(const EvalContext& ctx, SubsetMask a, SubsetMask b, SubsetMask s) {
  check_family_args(ctx, a, b, s);
  VarSet cond = hats(a | (b - s)) | VarSet::destination();
  if (ctx.conditions_on_relay_inputs()) cond = cond | xs(ctx.all_relays());
  return ctx.rate_sum(s) - ctx.cmi(ys(s), hats(s), cond);
}

double eval_J(const EvalContext& ctx, SubsetMask a, SubsetMask b, SubsetMask s) {
  require_full(ctx, "J");
  check_family_args(ctx, a, b, s);
  const SubsetMask rest = b - s;
  const double gain =
      ctx.cmi(xs(s), hats(rest | a) | VarSet::destination(), xs(a | rest));
  const double cost =
      ctx.cmi(ys(s), hats(s), xs(a | b) | hats(a | rest) | VarSet::destination());
  return gain - cost;
}

double eval_K(const EvalContext& ctx, SubsetMask a, SubsetMask b, SubsetMask s) {
  require_full(ctx, "K");
  check_family_args(ctx, a, b, s);
  const SubsetMask rest = b - s;
  const double gain = ctx.cmi(xs(s), hats(rest | a) | VarSet::destination(),
                              VarSet::source() | xs(a | rest));
  const double cost = ctx.cmi(ys(s), hats(s),
                              VarSet::source() | xs(a | b) | hats(a | rest) | VarSet::destination());
  return gain - cost;
}

double eval_R(const EvalContext& ctx, SubsetMask b, SubsetMask s) {
  require_full(ctx, "R");
  check_family_args(ctx, SubsetMask::empty(), b, s);
  const SubsetMask rest = b - s;
  const double gain =
      ctx.cmi(VarSet::source() | xs(s), hats(rest) | VarSet::destination(), xs(rest));
  const double cost =
      ctx.cmi(ys(s), hats(s), VarSet::source() | xs(b) | hats(rest) | VarSet::destination());
  return gain - cost;
}

double eval_J_interaction(const EvalContext& ctx, SubsetMask a, SubsetMask b) {
  require_full(ctx, "J interaction");
  check_family_args(ctx, a, b, b);
  const SubsetMask rest = (a | b).complement(ctx.relays());
  return ctx.cmi(xs(a) | hats(a), xs(b) | hats(b), xs(rest) | hats(rest) | VarSet::destination());
}

double eval_I_interaction(const EvalContext& ctx, SubsetMask a, SubsetMask b) {
  check_family_args(ctx, a, b, b);
  const SubsetMask rest = (a | b).complement(ctx.relays());
  VarSet cond = hats(rest) | VarSet::destination();
  if (ctx.conditions_on_relay_inputs()) cond = cond | xs(ctx.all_relays());
  return ctx.cmi(hats(a), hats(b), cond);
}

}  // namespace cfrelay
