#include "cfrelay/pmf.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "cfrelay/error.hpp"

namespace cfrelay {

namespace {

constexpr double kSliceTol = 1e-12;
constexpr double kNegativeTol = 1e-15;
// The joint is a product of up to 3n+2 factors, each normalized to kSliceTol.
constexpr double kJointTol = 1e-9;
constexpr double kCmiClampTol = 1e-12;
constexpr std::size_t kMaxJointEntries = std::size_t{1} << 24;

std::size_t product(const std::vector<int>& v) {
  std::size_t p = 1;
  for (int c : v) p *= static_cast<std::size_t>(c);
  return p;
}

// Mixed-radix digits of `index` over `radices` (first radix is most significant).
std::vector<int> digits_of(std::size_t index, const std::vector<int>& radices) {
  std::vector<int> d(radices.size());
  for (std::size_t k = radices.size(); k-- > 0;) {
    d[k] = static_cast<int>(index % static_cast<std::size_t>(radices[k]));
    index /= static_cast<std::size_t>(radices[k]);
  }
  return d;
}

std::string coordinates(const std::vector<std::string>& names, const std::vector<int>& digits) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (k) os << ", ";
    os << names[k] << "=" << digits[k];
  }
  os << ")";
  return os.str();
}

class IssueSink {
 public:
  void add(std::string field, std::string message) {
    issues_.push_back({std::move(field), std::move(message)});
  }
  std::vector<ValidationIssue> take() { return std::move(issues_); }
  std::size_t size() const { return issues_.size(); }

 private:
  std::vector<ValidationIssue> issues_;
};

void check_entries(IssueSink& sink, const std::string& field, const std::vector<double>& v) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k])) {
      sink.add(field, "entry " + std::to_string(k) + " is not finite");
    } else if (v[k] < -kNegativeTol) {
      std::ostringstream os;
      os << "entry " << k << " is negative (" << v[k] << ")";
      sink.add(field, os.str());
    }
  }
}

// Checks that each of `rows` consecutive blocks of length `width` sums to one.
void check_rows(IssueSink& sink, const std::string& field, const std::vector<double>& v,
                std::size_t width, const std::vector<int>& row_radices,
                const std::vector<std::string>& row_names) {
  const std::size_t rows = v.size() / width;
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < width; ++c) sum += v[r * width + c];
    if (std::abs(sum - 1.0) > kSliceTol) {
      std::ostringstream os;
      os.precision(15);
      if (row_names.empty()) {
        os << "distribution sums to " << sum << " (expected 1)";
      } else {
        os << "row " << coordinates(row_names, digits_of(r, row_radices)) << " sums to " << sum
           << " (expected 1)";
      }
      sink.add(field, os.str());
    }
  }
}

bool check_alphabets(IssueSink& sink, const std::string& field, const std::vector<int>& a, int n) {
  if (static_cast<int>(a.size()) != n) {
    sink.add(field, "expected " + std::to_string(n) + " entries, found " + std::to_string(a.size()));
    return false;
  }
  bool ok = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 1) {
      sink.add(field, "relay " + std::to_string(i + 1) + " alphabet size must be >= 1");
      ok = false;
    }
  }
  return ok;
}

}  // namespace

int ChannelSpec::compression_columns(int relay) const {
  const int yi = alphabet_yi.at(relay - 1);
  return mode == Mode::Full ? alphabet_xi.at(relay - 1) * yi : yi;
}

std::vector<ValidationIssue> validate(const ChannelSpec& s) {
  IssueSink sink;
  if (s.n < 1 || s.n > kMaxRelays) {
    sink.add("n", "relay count must be in [1, " + std::to_string(kMaxRelays) + "]");
    return sink.take();
  }
  if (s.alphabet_x < 1) sink.add("alphabet_x", "alphabet size must be >= 1");
  if (s.alphabet_y < 1) sink.add("alphabet_y", "alphabet size must be >= 1");
  bool dims_ok = s.alphabet_x >= 1 && s.alphabet_y >= 1;
  dims_ok &= check_alphabets(sink, "alphabet_yi", s.alphabet_yi, s.n);
  dims_ok &= check_alphabets(sink, "alphabet_yhat_i", s.alphabet_yhat_i, s.n);

  const bool full = s.mode == Mode::Full;
  if (full) {
    dims_ok &= check_alphabets(sink, "alphabet_xi", s.alphabet_xi, s.n);
    if (!s.link_capacities.empty()) {
      sink.add("link_capacities", "only allowed in digital mode");
    }
  } else {
    if (!s.alphabet_xi.empty()) sink.add("alphabet_xi", "not allowed in digital mode");
    if (!s.p_xi.empty()) sink.add("p_xi", "not allowed in digital mode");
    if (static_cast<int>(s.link_capacities.size()) != s.n) {
      sink.add("link_capacities", "expected " + std::to_string(s.n) + " entries, found " +
                                      std::to_string(s.link_capacities.size()));
    } else {
      for (int i = 0; i < s.n; ++i) {
        const double r = s.link_capacities[i];
        if (!std::isfinite(r) || r < 0.0) {
          sink.add("link_capacities", "relay " + std::to_string(i + 1) +
                                          " capacity must be a finite nonnegative number");
        }
      }
    }
  }
  if (!dims_ok) return sink.take();

  // Input laws.
  if (static_cast<int>(s.p_x.size()) != s.alphabet_x) {
    sink.add("p_x", "expected " + std::to_string(s.alphabet_x) + " entries, found " +
                        std::to_string(s.p_x.size()));
  } else {
    check_entries(sink, "p_x", s.p_x);
    check_rows(sink, "p_x", s.p_x, s.p_x.size(), {}, {});
  }
  if (full) {
    if (static_cast<int>(s.p_xi.size()) != s.n) {
      sink.add("p_xi", "expected " + std::to_string(s.n) + " distributions, found " +
                           std::to_string(s.p_xi.size()));
    } else {
      for (int i = 0; i < s.n; ++i) {
        const std::string field = "p_xi[" + std::to_string(i) + "]";
        if (static_cast<int>(s.p_xi[i].size()) != s.alphabet_xi[i]) {
          sink.add(field, "expected " + std::to_string(s.alphabet_xi[i]) + " entries, found " +
                              std::to_string(s.p_xi[i].size()));
        } else {
          check_entries(sink, field, s.p_xi[i]);
          check_rows(sink, field, s.p_xi[i], s.p_xi[i].size(), {}, {});
        }
      }
    }
  }

  // Channel law.
  std::vector<int> in_radices{s.alphabet_x};
  std::vector<std::string> in_names{"x"};
  if (full) {
    for (int i = 0; i < s.n; ++i) {
      in_radices.push_back(s.alphabet_xi[i]);
      in_names.push_back("x" + std::to_string(i + 1));
    }
  }
  std::vector<int> out_radices{s.alphabet_y};
  for (int i = 0; i < s.n; ++i) out_radices.push_back(s.alphabet_yi[i]);
  const std::size_t rows = product(in_radices);
  const std::size_t width = product(out_radices);
  if (rows * width * product(s.alphabet_yhat_i) > kMaxJointEntries) {
    sink.add("n", "joint distribution would exceed " + std::to_string(kMaxJointEntries) +
                      " entries");
    return sink.take();
  }
  if (s.channel.size() != rows * width) {
    sink.add("channel", "expected " + std::to_string(rows * width) + " entries (" +
                            std::to_string(rows) + " rows of " + std::to_string(width) +
                            "), found " + std::to_string(s.channel.size()));
  } else {
    check_entries(sink, "channel", s.channel);
    check_rows(sink, "channel", s.channel, width, in_radices, in_names);
  }

  // Compressions.
  if (static_cast<int>(s.compressions.size()) != s.n) {
    sink.add("compressions", "expected " + std::to_string(s.n) + " conditionals, found " +
                                 std::to_string(s.compressions.size()));
  } else {
    for (int i = 0; i < s.n; ++i) {
      const std::string field = "compressions[" + std::to_string(i) + "]";
      const std::string r = std::to_string(i + 1);
      std::vector<int> radices;
      std::vector<std::string> names;
      if (full) {
        radices.push_back(s.alphabet_xi[i]);
        names.push_back("x" + r);
      }
      radices.push_back(s.alphabet_yi[i]);
      names.push_back("y" + r);
      const std::size_t cols = product(radices);
      const std::size_t yhat = static_cast<std::size_t>(s.alphabet_yhat_i[i]);
      if (s.compressions[i].size() != cols * yhat) {
        sink.add(field, "expected " + std::to_string(cols * yhat) + " entries, found " +
                            std::to_string(s.compressions[i].size()));
      } else {
        check_entries(sink, field, s.compressions[i]);
        check_rows(sink, field, s.compressions[i], yhat, radices, names);
      }
    }
  }
  return sink.take();
}

void require_valid(const ChannelSpec& spec) {
  const auto issues = validate(spec);
  if (issues.empty()) return;
  std::string msg = "invalid channel spec: ";
  for (std::size_t k = 0; k < issues.size() && k < 3; ++k) {
    if (k) msg += "; ";
    msg += issues[k].field + ": " + issues[k].message;
  }
  if (issues.size() > 3) msg += "; ... (" + std::to_string(issues.size()) + " issues)";
  throw Error(ErrorCode::Validation, msg);
}

std::string VarSet::to_string() const {
  std::string s;
  auto add = [&](const std::string& part) {
    if (!s.empty()) s += ",";
    s += part;
  };
  if (x) add("X");
  if (y) add("Y");
  if (!xs.is_empty()) add("X" + xs.to_string());
  if (!ys.is_empty()) add("Y" + ys.to_string());
  if (!yhats.is_empty()) add("Yhat" + yhats.to_string());
  return s.empty() ? "{}" : s;
}

std::string VarId::name() const {
  switch (kind) {
    case VarKind::Source:
      return "X";
    case VarKind::RelayInput:
      return "X" + std::to_string(relay);
    case VarKind::Destination:
      return "Y";
    case VarKind::RelayOutput:
      return "Y" + std::to_string(relay);
    case VarKind::Compression:
      return "Yhat" + std::to_string(relay);
  }
  return "?";
}

std::vector<VarId> canonical_order(Mode mode, int n) {
  std::vector<VarId> v{{VarKind::Source, 0}};
  if (mode == Mode::Full) {
    for (int i = 1; i <= n; ++i) v.push_back({VarKind::RelayInput, i});
  }
  v.push_back({VarKind::Destination, 0});
  for (int i = 1; i <= n; ++i) v.push_back({VarKind::RelayOutput, i});
  for (int i = 1; i <= n; ++i) v.push_back({VarKind::Compression, i});
  return v;
}

namespace detail {
struct EntropyCache {
  std::mutex mutex;
  std::unordered_map<std::uint32_t, double> values;
};
}  // namespace detail

JointPmf::JointPmf(std::vector<VarId> vars, std::vector<int> cards, std::vector<double> probs)
    : vars_(std::move(vars)),
      cards_(std::move(cards)),
      probs_(std::move(probs)),
      cache_(std::make_shared<detail::EntropyCache>()) {
  if (vars_.size() != cards_.size() || vars_.size() > 32) {
    throw Error(ErrorCode::InvalidArgument, "variable list and cardinalities disagree");
  }
  for (int c : cards_) {
    if (c < 1) throw Error(ErrorCode::InvalidArgument, "cardinality must be >= 1");
  }
  if (product(cards_) != probs_.size()) {
    throw Error(ErrorCode::Validation, "probability array length " +
                                           std::to_string(probs_.size()) +
                                           " does not match the declared alphabets");
  }
  double sum = 0.0;
  for (double& p : probs_) {
    if (!(p >= -kNegativeTol)) {
      throw Error(ErrorCode::Validation, "joint distribution has a negative or non-finite entry");
    }
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kJointTol) {
    std::ostringstream os;
    os.precision(15);
    os << "joint distribution sums to " << sum;
    throw Error(ErrorCode::Validation, os.str());
  }
}

int JointPmf::position(VarId v) const {
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    if (vars_[k] == v) return static_cast<int>(k);
  }
  return -1;
}

namespace {
template <typename F>
void for_each_var(const VarSet& s, F&& f) {
  if (s.x) f(VarId{VarKind::Source, 0});
  if (s.y) f(VarId{VarKind::Destination, 0});
  for (int i : s.xs.indices()) f(VarId{VarKind::RelayInput, i});
  for (int i : s.ys.indices()) f(VarId{VarKind::RelayOutput, i});
  for (int i : s.yhats.indices()) f(VarId{VarKind::Compression, i});
}
}  // namespace

bool JointPmf::has(const VarSet& s) const {
  bool ok = true;
  for_each_var(s, [&](VarId v) { ok = ok && position(v) >= 0; });
  return ok;
}

std::uint32_t JointPmf::position_mask(const VarSet& s) const {
  std::uint32_t mask = 0;
  for_each_var(s, [&](VarId v) {
    const int p = position(v);
    if (p < 0) {
      throw Error(ErrorCode::InvalidArgument, "variable " + v.name() + " is not in the joint");
    }
    mask |= 1u << p;
  });
  return mask;
}

std::vector<double> JointPmf::marginal_probs(std::uint32_t positions) const {
  const std::size_t nv = vars_.size();
  std::vector<std::size_t> out_stride(nv, 0);
  std::size_t out_size = 1;
  for (std::size_t k = nv; k-- > 0;) {
    if ((positions >> k) & 1u) {
      out_stride[k] = out_size;
      out_size *= static_cast<std::size_t>(cards_[k]);
    }
  }
  std::vector<double> out(out_size, 0.0);
  std::vector<int> idx(nv, 0);
  std::size_t off = 0;
  for (double p : probs_) {
    out[off] += p;
    for (std::size_t k = nv; k-- > 0;) {
      if (++idx[k] < cards_[k]) {
        off += out_stride[k];
        break;
      }
      off -= out_stride[k] * static_cast<std::size_t>(cards_[k] - 1);
      idx[k] = 0;
    }
  }
  return out;
}

double JointPmf::entropy_of_positions(std::uint32_t positions) const {
  // Singleton alphabets carry no information; dropping them makes keys canonical.
  for (std::size_t k = 0; k < cards_.size(); ++k) {
    if (cards_[k] == 1) positions &= ~(1u << k);
  }
  if (positions == 0) return 0.0;
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->values.find(positions); it != cache_->values.end()) return it->second;
  }
  const auto marginal = marginal_probs(positions);
  double h = 0.0;
  for (double p : marginal) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  std::lock_guard lock(cache_->mutex);
  cache_->values.emplace(positions, h);
  return h;
}

JointPmf JointPmf::marginalize(const VarSet& keep) const {
  const std::uint32_t mask = position_mask(keep);
  std::vector<VarId> vars;
  std::vector<int> cards;
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    if ((mask >> k) & 1u) {
      vars.push_back(vars_[k]);
      cards.push_back(cards_[k]);
    }
  }
  return JointPmf(std::move(vars), std::move(cards), marginal_probs(mask));
}

JointPmf marginalize(const JointPmf& joint, const VarSet& keep) { return joint.marginalize(keep); }

JointPmf build_joint(const ChannelSpec& s) {
  require_valid(s);
  const bool full = s.mode == Mode::Full;
  const int n = s.n;

  std::vector<int> in_radices{s.alphabet_x};
  if (full) in_radices.insert(in_radices.end(), s.alphabet_xi.begin(), s.alphabet_xi.end());
  std::vector<int> out_radices{s.alphabet_y};
  out_radices.insert(out_radices.end(), s.alphabet_yi.begin(), s.alphabet_yi.end());
  const std::vector<int>& hat_radices = s.alphabet_yhat_i;

  const std::size_t rows = product(in_radices);
  const std::size_t width = product(out_radices);
  const std::size_t hats = product(hat_radices);

  std::vector<int> cards = in_radices;
  cards.insert(cards.end(), out_radices.begin(), out_radices.end());
  cards.insert(cards.end(), hat_radices.begin(), hat_radices.end());

  auto clamp = [](double p) { return p < 0.0 ? 0.0 : p; };

  std::vector<double> probs(rows * width * hats, 0.0);
  std::size_t flat = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto in = digits_of(r, in_radices);
    double p_in = clamp(s.p_x[in[0]]);
    if (full) {
      for (int i = 0; i < n; ++i) p_in *= clamp(s.p_xi[i][in[i + 1]]);
    }
    for (std::size_t c = 0; c < width; ++c) {
      const auto out = digits_of(c, out_radices);
      const double p_ch = p_in * clamp(s.channel[r * width + c]);
      // Offset of each relay's compression row for (x_i, y_i) or y_i.
      std::vector<std::size_t> comp_row(n);
      for (int i = 0; i < n; ++i) {
        const std::size_t yi = static_cast<std::size_t>(out[i + 1]);
        const std::size_t col = full ? static_cast<std::size_t>(in[i + 1]) * s.alphabet_yi[i] + yi : yi;
        comp_row[i] = col * static_cast<std::size_t>(s.alphabet_yhat_i[i]);
      }
      for (std::size_t h = 0; h < hats; ++h, ++flat) {
        if (p_ch == 0.0) continue;
        const auto hat = digits_of(h, hat_radices);
        double p = p_ch;
        for (int i = 0; i < n; ++i) p *= clamp(s.compressions[i][comp_row[i] + hat[i]]);
        probs[flat] = p;
      }
    }
  }
  return JointPmf(canonical_order(s.mode, n), std::move(cards), std::move(probs));
}

namespace {
double clamp_information(double v, const char* what) {
  if (v >= 0.0) return v;
  if (v >= -kCmiClampTol) return 0.0;
  std::ostringstream os;
  os << what << " evaluated to " << v << " (below the clamp tolerance)";
  throw Error(ErrorCode::Numerical, os.str());
}
}  // namespace

double cond_entropy(const JointPmf& joint, const VarSet& a, const VarSet& c) {
  if (!a.disjoint(c)) {
    throw Error(ErrorCode::InvalidArgument, "conditional entropy arguments overlap");
  }
  const std::uint32_t ma = joint.position_mask(a);
  const std::uint32_t mc = joint.position_mask(c);
  if (ma == 0) return 0.0;
  const double v = joint.entropy_of_positions(ma | mc) - joint.entropy_of_positions(mc);
  return clamp_information(v, "conditional entropy");
}

double cond_mutual_info(const JointPmf& joint, const VarSet& a, const VarSet& b, const VarSet& c) {
  if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c)) {
    throw Error(ErrorCode::InvalidArgument, "mutual information arguments overlap: (" +
                                                a.to_string() + "; " + b.to_string() + " | " +
                                                c.to_string() + ")");
  }
  const std::uint32_t ma = joint.position_mask(a);
  const std::uint32_t mb = joint.position_mask(b);
  const std::uint32_t mc = joint.position_mask(c);
  if (ma == 0 || mb == 0) return 0.0;
  const double v = joint.entropy_of_positions(ma | mc) + joint.entropy_of_positions(mb | mc) -
                   joint.entropy_of_positions(ma | mb | mc) - joint.entropy_of_positions(mc);
  return clamp_information(v, "conditional mutual information");
}

}  // namespace cfrelay
