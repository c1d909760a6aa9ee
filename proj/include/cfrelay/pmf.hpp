#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cfrelay/subset.hpp"

namespace cfrelay {

enum class Mode { Full, Digital };

/// A multiple-relay channel together with the input laws and relay compressions.
///
/// Conditional laws are flat row-major arrays with the conditioning variables
/// outermost:
///   channel          Full:    [x][x_1]..[x_n][y][y_1]..[y_n]
///                    Digital: [x][y][y_1]..[y_n]
///   compressions[i]  Full:    [x_i][y_i][yhat_i]
///                    Digital: [y_i][yhat_i]
struct ChannelSpec {
  Mode mode = Mode::Full;
  int n = 1;
  int alphabet_x = 1;
  int alphabet_y = 1;
  std::vector<int> alphabet_xi;      // Full mode only
  std::vector<int> alphabet_yi;
  std::vector<int> alphabet_yhat_i;
  std::vector<double> channel;
  std::vector<double> p_x;
  std::vector<std::vector<double>> p_xi;  // Full mode only
  std::vector<std::vector<double>> compressions;
  std::vector<double> link_capacities;    // Digital mode only

  /// Number of conditioning configurations (columns) of relay i's compression.
  int compression_columns(int relay) const;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

/// Every dimension, sign and normalization problem, with element coordinates.
/// An empty result means the spec is valid.
std::vector<ValidationIssue> validate(const ChannelSpec& spec);

/// Throws Error(Validation) carrying the first few issues when the spec is invalid.
void require_valid(const ChannelSpec& spec);

/// Selects random variables by group: X, Y, and per-relay X_i, Y_i, Yhat_i.
struct VarSet {
  bool x = false;
  bool y = false;
  SubsetMask xs;
  SubsetMask ys;
  SubsetMask yhats;

  static VarSet source() {
    VarSet v;
    v.x = true;
    return v;
  }
  static VarSet destination() {
    VarSet v;
    v.y = true;
    return v;
  }
  static VarSet relay_inputs(SubsetMask s) { return VarSet{false, false, s, {}, {}}; }
  static VarSet relay_outputs(SubsetMask s) { return VarSet{false, false, {}, s, {}}; }
  static VarSet compressions(SubsetMask s) { return VarSet{false, false, {}, {}, s}; }

  VarSet operator|(const VarSet& o) const {
    return VarSet{x || o.x, y || o.y, xs | o.xs, ys | o.ys, yhats | o.yhats};
  }
  bool is_empty() const {
    return !x && !y && xs.is_empty() && ys.is_empty() && yhats.is_empty();
  }
  bool disjoint(const VarSet& o) const {
    return !(x && o.x) && !(y && o.y) && xs.disjoint(o.xs) && ys.disjoint(o.ys) &&
           yhats.disjoint(o.yhats);
  }
  std::string to_string() const;
};

enum class VarKind : std::uint8_t { Source, RelayInput, Destination, RelayOutput, Compression };

struct VarId {
  VarKind kind;
  int relay = 0;  // 1-based for per-relay kinds, 0 otherwise
  bool operator==(const VarId&) const = default;
  std::string name() const;
};

/// Canonical variable order: (X, X_1..X_n, Y, Y_1..Y_n, Yhat_1..Yhat_n); Digital mode drops X_i.
std::vector<VarId> canonical_order(Mode mode, int n);

namespace detail {
struct EntropyCache;
}

/// Dense joint distribution over an ordered variable list, row-major in that order.
/// Immutable after construction. Marginal entropies are memoized per instance and
/// the memo is safe for concurrent use.
class JointPmf {
 public:
  JointPmf(std::vector<VarId> vars, std::vector<int> cards, std::vector<double> probs);

  const std::vector<VarId>& variables() const { return vars_; }
  const std::vector<int>& cardinalities() const { return cards_; }
  const std::vector<double>& probs() const { return probs_; }

  /// Position of `v` in the variable list, or -1.
  int position(VarId v) const;
  bool has(const VarSet& s) const;
  /// Bitmask over positions; throws Error(InvalidArgument) if `s` names absent variables.
  std::uint32_t position_mask(const VarSet& s) const;

  JointPmf marginalize(const VarSet& keep) const;

  /// H of the marginal on the given positions, in bits. Memoized.
  double entropy_of_positions(std::uint32_t positions) const;

 private:
  std::vector<double> marginal_probs(std::uint32_t positions) const;

  std::vector<VarId> vars_;
  std::vector<int> cards_;
  std::vector<double> probs_;
  std::shared_ptr<detail::EntropyCache> cache_;
};

/// p(x) prod p(x_i) p(y, y_N | x, x_N) prod p(yhat_i | x_i, y_i), in canonical order.
JointPmf build_joint(const ChannelSpec& spec);

JointPmf marginalize(const JointPmf& joint, const VarSet& keep);

/// H(A | C) in bits; H(A | {}) = H(A).
double cond_entropy(const JointPmf& joint, const VarSet& a, const VarSet& c);

/// I(A; B | C) in bits. Empty A or B gives exactly 0. Values in [-1e-12, 0) are
/// clamped to 0; anything more negative raises Error(Numerical).
double cond_mutual_info(const JointPmf& joint, const VarSet& a, const VarSet& b,
                        const VarSet& c = {});

}  // namespace cfrelay
