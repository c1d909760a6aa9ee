#pragma once

#include <memory>
#include <vector>

#include "cfrelay/pmf.hpp"
#include "cfrelay/subset.hpp"

namespace cfrelay {

/// Everything the subset-indexed information functions need: the joint law,
/// the relay rate vector R_1..R_n, and whether the I-family conditions on X_N.
class EvalContext {
 public:
  EvalContext(std::shared_ptr<const JointPmf> joint, Mode mode, int n, std::vector<double> rates,
              bool condition_on_relay_inputs);

  /// Uses `rates` when given (length must be n); otherwise the link capacities in
  /// Digital mode and zeros in Full mode.
  static EvalContext from_spec(const ChannelSpec& spec, std::vector<double> rates = {});

  const JointPmf& joint() const { return *joint_; }
  std::shared_ptr<const JointPmf> joint_ptr() const { return joint_; }
  Mode mode() const { return mode_; }
  int relays() const { return n_; }
  SubsetMask all_relays() const { return SubsetMask::full(n_); }
  const std::vector<double>& rates() const { return rates_; }
  bool conditions_on_relay_inputs() const { return condition_on_relay_inputs_; }

  EvalContext with_rates(std::vector<double> rates) const;

  double rate_sum(SubsetMask s) const;
  double cmi(const VarSet& a, const VarSet& b, const VarSet& c) const {
    return cond_mutual_info(*joint_, a, b, c);
  }

 private:
  std::shared_ptr<const JointPmf> joint_;
  Mode mode_;
  int n_;
  std::vector<double> rates_;
  bool condition_on_relay_inputs_;
};

/// I_{A,B}(S) = sum_{i in S} R_i - I(Y_S; Yhat_S | Yhat_A, Yhat_{B\S}, Y [, X_N]).
/// Requires A and B disjoint and S a subset of B.
double eval_I(const EvalContext& ctx, SubsetMask a, SubsetMask b, SubsetMask s);

/// J_{A,B}(S) = I(X_S; Yhat_{B\S}, Yhat_A, Y | X_A, X_{B\S})
///            - I(Y_S; Yhat_S | X_A, Yhat_A, Y, X_B, Yhat_{B\S}).  Full mode only.
double eval_J(const EvalContext& ctx, SubsetMask a, SubsetMask b, SubsetMask s);

/// K_{A,B}(S): J_{A,B}(S) with the source input X added to both conditioning sets.
double eval_K(const EvalContext& ctx, SubsetMask a, SubsetMask b, SubsetMask s);

/// R_B(S) = I(X, X_S; Yhat_{B\S}, Y | X_{B\S}) - I(Y_S; Yhat_S | X, X_B, Yhat_{B\S}, Y).
double eval_R(const EvalContext& ctx, SubsetMask b, SubsetMask s);

/// J(A o B) = I(X_A, Yhat_A; X_B, Yhat_B | X_rest, Yhat_rest, Y), rest = (A u B)^c.
double eval_J_interaction(const EvalContext& ctx, SubsetMask a, SubsetMask b);

/// I(Yhat_A; Yhat_B | Yhat_rest, Y), rest = (A u B)^c.
double eval_I_interaction(const EvalContext& ctx, SubsetMask a, SubsetMask b);

}  // namespace cfrelay
