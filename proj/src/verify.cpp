#include "cfrelay/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cfrelay/decodable_sets.hpp"
#include "cfrelay/error.hpp"
#include "internal.hpp"

namespace cfrelay {

namespace {

constexpr std::size_t kMaxStoredFailures = 200;

std::vector<double> random_column(std::size_t size, double degenerate_ratio, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> col(size, 0.0);
  if (unit(rng) < degenerate_ratio) {
    std::uniform_int_distribution<std::size_t> pick(0, size - 1);
    col[pick(rng)] = 1.0;
    return col;
  }
  double sum = 0.0;
  for (auto& w : col) {
    w = unit(rng);
    sum += w;
  }
  for (auto& w : col) w /= sum;
  return col;
}

std::vector<double> random_conditional(std::size_t rows, std::size_t size, double ratio,
                                       std::mt19937_64& rng) {
  std::vector<double> out;
  out.reserve(rows * size);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto col = random_column(size, ratio, rng);
    out.insert(out.end(), col.begin(), col.end());
  }
  return out;
}

// Collects one instance's checks; merged into the report in index order.
class InstanceLog {
 public:
  InstanceLog(std::uint64_t seed, std::uint64_t instance) : seed_(seed), instance_(instance) {}

  void identity(const std::string& name, double lhs, double rhs, std::vector<SubsetMask> sets,
                double tol = kIdentityTol) {
    const double r = std::abs(lhs - rhs);
    auto& st = stats(name);
    st.max_residual = std::max(st.max_residual, r);
    if (!(r <= tol)) fail(name, std::move(sets), r, describe(lhs, rhs, "=="));
  }

  void at_least(const std::string& name, double lhs, double rhs, std::vector<SubsetMask> sets,
                double tol = kInequalityTol) {
    const double shortfall = rhs - lhs;
    auto& st = stats(name);
    st.max_residual = std::max(st.max_residual, std::max(shortfall, 0.0));
    if (!(shortfall <= tol)) fail(name, std::move(sets), shortfall, describe(lhs, rhs, ">="));
  }

  void condition(const std::string& name, bool ok, std::vector<SubsetMask> sets,
                 const std::string& detail, double residual = 0.0) {
    auto& st = stats(name);
    st.max_residual = std::max(st.max_residual, residual);
    if (!ok) fail(name, std::move(sets), residual, detail);
  }

  void tie(const std::string& name) { ++checks_[name].ties; }
  void touch(const std::string& name) { checks_[name]; }

  std::map<std::string, CheckStats> checks_;
  std::vector<SuiteFailure> failures_;

 private:
  CheckStats& stats(const std::string& name) {
    auto& st = checks_[name];
    ++st.evaluated;
    return st;
  }

  static std::string describe(double lhs, double rhs, const char* op) {
    std::ostringstream os;
    os.precision(17);
    os << "lhs " << lhs << " " << op << " rhs " << rhs;
    return os.str();
  }

  void fail(const std::string& name, std::vector<SubsetMask> sets, double residual,
            const std::string& detail) {
    ++checks_[name].failures;
    failures_.push_back({seed_, instance_, name, std::move(sets), residual, detail});
  }

  std::uint64_t seed_;
  std::uint64_t instance_;
};

void merge(SuiteReport& report, InstanceLog&& log) {
  for (auto& [name, st] : log.checks_) {
    auto& dst = report.checks[name];
    dst.evaluated += st.evaluated;
    dst.failures += st.failures;
    dst.ties += st.ties;
    dst.max_residual = std::max(dst.max_residual, st.max_residual);
  }
  for (auto& f : log.failures_) {
    if (report.failures.size() < kMaxStoredFailures) report.failures.push_back(std::move(f));
  }
}

struct DisjointPair {
  SubsetMask a;
  SubsetMask b;
};

std::vector<DisjointPair> disjoint_pairs(SubsetMask all) {
  std::vector<DisjointPair> out;
  for (SubsetMask a : subsets_of(all)) {
    for (SubsetMask b : subsets_of(all - a)) out.push_back({a, b});
  }
  return out;
}

// Superadditivity F_{A u B}(S) >= F_A(S n A) + F_{A,B}(S n B) for a family of kind `kind`.
void check_superadditivity(InstanceLog& log, const EvalContext& ctx, FeasibilityKind kind,
                           const std::string& name) {
  const SubsetMask none;
  for (const auto& [a, b] : disjoint_pairs(ctx.all_relays())) {
    for (SubsetMask s : subsets_of(a | b)) {
      const double lhs = family_value(ctx, kind, none, a | b, s);
      const double rhs =
          family_value(ctx, kind, none, a, s & a) + family_value(ctx, kind, a, b, s & b);
      log.at_least(name, lhs, rhs, {a, b, s});
    }
  }
}

// Union closure, largest-set agreement and peeling for one feasibility kind.
void check_feasible_sets(InstanceLog& log, const EvalContext& ctx, FeasibilityKind kind) {
  const std::string tag = to_string(kind);
  const auto table = feasible_set_table(ctx, kind);
  SubsetMask uni;
  for (std::uint32_t f1 = 0; f1 < table.size(); ++f1) {
    if (!table[f1]) continue;
    uni = uni | SubsetMask{f1};
    for (std::uint32_t f2 = f1 + 1; f2 < table.size(); ++f2) {
      if (!table[f2]) continue;
      log.condition("union-closure-" + tag, table[f1 | f2], {SubsetMask{f1}, SubsetMask{f2}},
                    "union of two feasible sets is infeasible");
    }
  }
  SubsetMask largest;
  try {
    largest = largest_feasible_set(ctx, kind);
    log.condition("largest-set-" + tag, largest == uni, {largest, uni},
                  "largest feasible set differs from the union of feasible sets");
  } catch (const Error& e) {
    log.condition("largest-set-" + tag, false, {uni}, e.what());
  }

  for (const auto& [a, b] : disjoint_pairs(ctx.all_relays())) {
    if (b.is_empty()) continue;
    const bool pre = value_passes(kind, family_value(ctx, kind, a, b, b));
    if (!pre) continue;
    try {
      const auto c = peel_supported_subset(ctx, kind, a, b);
      const bool ok = c && !c->is_empty() && c->subset_of(b) && is_feasible_set(ctx, kind, a, *c);
      log.condition("peeling-" + tag, ok, {a, b, c.value_or(SubsetMask{})},
                    c ? "peeled set is not feasible" : "peeling exhausted B");
      if (ok && a.is_empty() && b == ctx.all_relays()) {
        log.condition("peeling-within-largest-" + tag, c->subset_of(largest), {*c, largest},
                      "peeled set is not inside the largest feasible set");
      }
    } catch (const Error& e) {
      log.condition("peeling-" + tag, false, {a, b}, e.what());
    }
  }
}

// When the largest set D misses relays, F(D^c) must be negative.
void check_negative_certificate(InstanceLog& log, const EvalContext& ctx, FeasibilityKind kind) {
  const std::string name = std::string("negative-certificate-") + to_string(kind);
  SubsetMask d;
  try {
    d = largest_feasible_set(ctx, kind);
  } catch (const Error&) {
    return;  // reported by check_feasible_sets
  }
  const SubsetMask dc = d.complement(ctx.relays());
  if (dc.is_empty()) {
    log.touch(name);
    return;
  }
  const double v = family_value(ctx, kind, SubsetMask{}, ctx.all_relays(), dc);
  if (v < -kStrictMargin) {
    log.condition(name, true, {dc}, "");
  } else if (v <= kStrictMargin) {
    log.condition(name, true, {dc}, "");
    log.tie(name);
  } else {
    log.condition(name, false, {dc}, "value of the complement is positive", v);
  }
}

void lemma_checks(InstanceLog& log, const EvalContext& ctx) {
  const SubsetMask none;
  const SubsetMask all = ctx.all_relays();
  auto I = [&](SubsetMask s) { return eval_I(ctx, none, all, s); };

  if (ctx.mode() == Mode::Digital) {
    for (const auto& [a, b] : disjoint_pairs(all)) {
      log.identity("i-interaction-identity", I(a) + I(b), I(a | b) + eval_I_interaction(ctx, a, b),
                   {a, b});
    }
  }
  check_superadditivity(log, ctx, FeasibilityKind::I_NonStrict, "superadditivity-I");
  check_feasible_sets(log, ctx, FeasibilityKind::I_NonStrict);
  check_negative_certificate(log, ctx, FeasibilityKind::I_NonStrict);
  if (ctx.mode() != Mode::Full) return;

  auto J = [&](SubsetMask s) { return eval_J(ctx, none, all, s); };
  for (const auto& [a, b] : disjoint_pairs(all)) {
    log.identity("j-interaction-identity", J(a) + J(b), J(a | b) + eval_J_interaction(ctx, a, b),
                 {a, b});
    for (SubsetMask s : subsets_of(a | b)) {
      const SubsetMask s1 = s & a;
      const SubsetMask s2 = s & b;
      const double lhs = eval_R(ctx, a | b, s);
      log.at_least("r-split-lower-bound", lhs, eval_R(ctx, a, s1) + eval_K(ctx, none, a | b, s2),
                   {a, b, s});
      if (s2 == b) {
        log.identity("r-split-identity", lhs, eval_R(ctx, a, s1) + eval_K(ctx, a, b, b), {a, b, s});
      }
    }
  }
  check_superadditivity(log, ctx, FeasibilityKind::J_NonStrict, "superadditivity-J");
  check_superadditivity(log, ctx, FeasibilityKind::K_NonStrict, "superadditivity-K");
  check_feasible_sets(log, ctx, FeasibilityKind::J_NonStrict);
  check_feasible_sets(log, ctx, FeasibilityKind::K_Strict);
  check_feasible_sets(log, ctx, FeasibilityKind::K_NonStrict);
  check_negative_certificate(log, ctx, FeasibilityKind::J_NonStrict);
  try {
    const auto dec = classify_relays(ctx);
    log.condition("decodable-nesting", dec.d_j.subset_of(dec.d_j_prime), {dec.d_j, dec.d_j_prime},
                  "D_J is not inside D'_J");
  } catch (const Error& e) {
    log.condition("decodable-nesting", false, {}, e.what());
  }
}

// D^c attains min_S F(S) whenever the largest feasible set D is proper.
void check_part_i(InstanceLog& log, const EvalContext& ctx, FeasibilityKind kind) {
  const std::string name = std::string("complement-attains-min-") + to_string(kind);
  SubsetMask d;
  try {
    d = largest_feasible_set(ctx, kind);
  } catch (const Error& e) {
    log.condition(name, false, {}, e.what());
    return;
  }
  const SubsetMask dc = d.complement(ctx.relays());
  if (dc.is_empty()) {
    log.touch(name);
    return;
  }
  const SubsetMask all = ctx.all_relays();
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> values;
  const auto subsets = subsets_of(all);
  for (SubsetMask s : subsets) {
    values.push_back(family_value(ctx, kind, SubsetMask{}, all, s));
    best = std::min(best, values.back());
  }
  const double at_dc = values[dc.bits()];
  log.at_least(name, best + kInequalityTol, at_dc, {dc});
  // D^c should also be the intersection of the argmin sets; near-ties can blur this.
  SubsetMask meet = all;
  for (SubsetMask s : subsets) {
    if (values[s.bits()] <= best + kInequalityTol) meet = meet & s;
  }
  if (meet != dc) log.tie(name);
}

void theorem_checks(InstanceLog& log, const EvalContext& ctx) {
  const SubsetMask all = ctx.all_relays();
  check_part_i(log, ctx, FeasibilityKind::I_NonStrict);
  if (ctx.mode() == Mode::Digital) {
    const auto cfs = rate_cfs_digital(ctx);
    const auto cfj = rate_cfj_digital(ctx);
    if (cfs.rate) log.identity("cfs-implies-cfj-equal", *cfj.rate, *cfs.rate, {});
    return;
  }
  check_part_i(log, ctx, FeasibilityKind::J_NonStrict);

  // Best relay subset for united decoding.
  const auto dec = classify_relays(ctx);
  const auto subsets = subsets_of(all);
  std::vector<double> value(subsets.size());
  double best = -std::numeric_limits<double>::infinity();
  double best_rate = 0.0;
  for (SubsetMask m : subsets) {
    const auto r = rate_ruj(ctx, m);
    value[m.bits()] = r.raw_value;
    best = std::max(best, r.raw_value);
    best_rate = std::max(best_rate, *r.rate);
  }
  log.identity("best-subset-at-DJ", value[dec.d_j.bits()], best, {dec.d_j});
  log.identity("best-subset-at-DJprime", value[dec.d_j_prime.bits()], best, {dec.d_j_prime});
  bool tie = false;
  for (SubsetMask m : subsets) {
    if (m.subset_of(dec.d_j_prime)) continue;
    if (!(value[m.bits()] < best - kInequalityTol)) tie = true;
  }
  log.condition("strict-outside-DJprime", true, {dec.d_j_prime}, "");
  if (tie) log.tie("strict-outside-DJprime");

  const auto cbj = rate_cbj(ctx);
  log.identity("cbj-equals-max-ruj", *cbj.rate, best_rate, {dec.d_j});

  const auto cfs = rate_cfs(ctx);
  const auto cbs = rate_cbs(ctx);
  if (cfs.rate) log.identity("cfs-implies-cfj-equal", *rate_cfj(ctx).rate, *cfs.rate, {});
  if (cbs.rate) log.identity("cbs-implies-ruj-equal", *rate_ruj(ctx, all).rate, *cbs.rate, {});
  if (cfs.rate && cbs.rate) log.at_least("cbs-at-least-cfs", *cbs.rate, *cfs.rate, {});
}

template <typename Checks>
SuiteReport run_instances(const std::string& suite, const InstanceGenerator& gen,
                          std::uint64_t count, int threads, Checks checks) {
  SuiteReport report;
  report.suite = suite;
  report.seed = gen.seed;
  report.instances = count;
  std::vector<InstanceLog> logs;
  logs.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) logs.emplace_back(gen.seed, i);
  detail::parallel_for(count, threads, [&](std::size_t i) {
    InstanceLog& log = logs[i];
    try {
      const Instance inst = generate_instance(gen, i);
      checks(log, EvalContext::from_spec(inst.spec, inst.rates));
    } catch (const Error& e) {
      log.condition("engine-error", false, {}, e.what());
    }
  });
  std::uint64_t dropped = 0;
  for (auto& log : logs) {
    const std::size_t before = report.failures.size();
    const std::size_t incoming = log.failures_.size();
    merge(report, std::move(log));
    dropped += incoming - (report.failures.size() - before);
  }
  if (dropped > 0) {
    report.notes.push_back(std::to_string(dropped) + " further failures counted but not listed");
  }
  return report;
}

ChannelSpec optimum_digital_channel() {
  // X uniform; destination sees X through a BSC(0.25), the relay through a BSC(0.1).
  ChannelSpec s;
  s.mode = Mode::Digital;
  s.n = 1;
  s.alphabet_x = 2;
  s.alphabet_y = 2;
  s.alphabet_yi = {2};
  s.alphabet_yhat_i = {2};
  s.p_x = {0.5, 0.5};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int y1 = 0; y1 < 2; ++y1) {
        s.channel.push_back((y == x ? 0.75 : 0.25) * (y1 == x ? 0.9 : 0.1));
      }
    }
  }
  s.compressions = {{1.0, 0.0, 0.0, 1.0}};
  s.link_capacities = {0.35};
  return s;
}

ChannelSpec optimum_full_channel() {
  // Relays observe X through BSC(0.1) and BSC(0.2); the destination sees, with equal
  // probability, X through a BSC(0.2) or the XOR of the relay inputs.
  ChannelSpec s;
  s.mode = Mode::Full;
  s.n = 2;
  s.alphabet_x = 2;
  s.alphabet_y = 2;
  s.alphabet_xi = {2, 2};
  s.alphabet_yi = {2, 2};
  s.alphabet_yhat_i = {2, 2};
  s.p_x = {0.5, 0.5};
  s.p_xi = {{0.5, 0.5}, {0.5, 0.5}};
  for (int x = 0; x < 2; ++x) {
    for (int x1 = 0; x1 < 2; ++x1) {
      for (int x2 = 0; x2 < 2; ++x2) {
        for (int y = 0; y < 2; ++y) {
          const double py = 0.5 * (y == x ? 0.8 : 0.2) + 0.5 * (y == (x1 ^ x2) ? 1.0 : 0.0);
          for (int y1 = 0; y1 < 2; ++y1) {
            for (int y2 = 0; y2 < 2; ++y2) {
              s.channel.push_back(py * (y1 == x ? 0.9 : 0.1) * (y2 == x ? 0.8 : 0.2));
            }
          }
        }
      }
    }
  }
  const std::vector<double> identity = {1, 0, 0, 1, 1, 0, 0, 1};
  s.compressions = {identity, identity};
  return s;
}

}  // namespace

double SuiteReport::max_residual() const {
  double m = 0.0;
  for (const auto& [name, st] : checks) m = std::max(m, st.max_residual);
  return m;
}

std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index) {
  return detail::derive_seed(seed, index);
}

Instance generate_instance(const InstanceGenerator& gen, std::uint64_t index) {
  if (gen.n < 1 || gen.n > kMaxRelays) throw Error(ErrorCode::InvalidArgument, "n out of range");
  const auto& al = gen.alphabets;
  if (al.x < 1 || al.y < 1 || al.xi < 1 || al.yi < 1 || al.yhat < 1) {
    throw Error(ErrorCode::InvalidArgument, "alphabet sizes must be >= 1");
  }
  if (!(gen.degenerate_ratio >= 0.0 && gen.degenerate_ratio <= 1.0) || !(gen.max_rate >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "degenerate ratio must lie in [0,1], max rate >= 0");
  }
  std::mt19937_64 rng(instance_seed(gen.seed, index));
  const double ratio = gen.degenerate_ratio;
  const bool full = gen.mode == Mode::Full;
  const auto n = static_cast<std::size_t>(gen.n);

  ChannelSpec s;
  s.mode = gen.mode;
  s.n = gen.n;
  s.alphabet_x = al.x;
  s.alphabet_y = al.y;
  s.alphabet_yi.assign(n, al.yi);
  s.alphabet_yhat_i.assign(n, al.yhat);
  if (full) s.alphabet_xi.assign(n, al.xi);

  s.p_x = random_column(static_cast<std::size_t>(al.x), ratio, rng);
  if (full) {
    for (std::size_t i = 0; i < n; ++i) {
      s.p_xi.push_back(random_column(static_cast<std::size_t>(al.xi), ratio, rng));
    }
  }
  std::size_t rows = static_cast<std::size_t>(al.x);
  if (full) {
    for (std::size_t i = 0; i < n; ++i) rows *= static_cast<std::size_t>(al.xi);
  }
  std::size_t width = static_cast<std::size_t>(al.y);
  for (std::size_t i = 0; i < n; ++i) width *= static_cast<std::size_t>(al.yi);
  s.channel = random_conditional(rows, width, ratio, rng);
  const std::size_t cols = static_cast<std::size_t>(full ? al.xi * al.yi : al.yi);
  for (std::size_t i = 0; i < n; ++i) {
    s.compressions.push_back(
        random_conditional(cols, static_cast<std::size_t>(al.yhat), ratio, rng));
  }
  std::uniform_real_distribution<double> rate(0.0, gen.max_rate);
  std::vector<double> rates(n);
  for (auto& r : rates) r = rate(rng);
  if (!full) s.link_capacities = rates;
  return {std::move(s), std::move(rates)};
}

SuiteReport run_lemma_suite(const InstanceGenerator& gen, std::uint64_t count, int threads) {
  return run_instances("lemmas", gen, count, threads, lemma_checks);
}

SuiteReport run_theorem_suite(const InstanceGenerator& gen, std::uint64_t count, int threads) {
  return run_instances("theorems", gen, count, threads, theorem_checks);
}

std::vector<OptimumPair> default_optimum_pairs() {
  return {
      {"digital-n1-cfs-vs-cfj", optimum_digital_channel(), SchemeId::CFS, SchemeId::CFJ},
      {"full-n2-ruj-vs-cbs", optimum_full_channel(), SchemeId::RUJ, SchemeId::CBS},
  };
}

SuiteReport run_optimum_suite(const std::vector<OptimumPair>& pairs, const SearchConfig& base) {
  SuiteReport report;
  report.suite = "optima";
  report.seed = base.seed;
  report.instances = pairs.size();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& pair = pairs[k];
    InstanceLog log(base.seed, k);
    SearchConfig cfg = base;
    cfg.scheme = pair.first;
    const auto first = optimize(pair.channel, cfg);
    cfg.scheme = pair.second;
    const auto second = optimize(pair.channel, cfg);
    log.identity("suprema-" + pair.name, first.best_objective, second.best_objective, {},
                 kSupremumTol);
    std::ostringstream note;
    note.precision(12);
    note << pair.name << ": " << to_string(pair.first) << " " << first.best_objective << ", "
         << to_string(pair.second) << " " << second.best_objective;
    for (const auto* r : {&first, &second}) {
      if (!r->deterministic_best) continue;
      log.at_least("deterministic-below-stochastic-" + pair.name,
                   r->stochastic_best + kSupremumTol, *r->deterministic_best, {});
      note << "; " << to_string(r->scheme) << " deterministic " << *r->deterministic_best
           << " over " << r->deterministic_maps << " maps";
    }
    for (const auto* r : {&first, &second}) {
      note << "; " << to_string(r->scheme) << " optimum " << r->feasibility.family << " "
           << (r->feasibility.satisfied ? "satisfied" : "violated");
    }
    report.notes.push_back(note.str());
    merge(report, std::move(log));
  }
  return report;
}

}  // namespace cfrelay
