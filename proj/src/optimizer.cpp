#include "cfrelay/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "cfrelay/error.hpp"
#include "internal.hpp"

namespace cfrelay {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMinStep = 1e-6;
constexpr double kFeasibilitySlack = 1e-6;
constexpr double kPenalty = 2.0;
constexpr double kActive = 0.01;  // active-piece window, relative to the step
constexpr std::uint64_t kMaxDeterministicMaps = std::uint64_t{1} << 20;

enum class Block { Compression, SourceLaw, RelayLaw };

// One probability column inside a spec: a contiguous simplex slice.
struct Column {
  Block block;
  int relay;  // 1-based for Compression and RelayLaw
  std::size_t offset;
  std::size_t size;
};

std::vector<double>& column_vector(ChannelSpec& s, const Column& c) {
  switch (c.block) {
    case Block::Compression:
      return s.compressions[static_cast<std::size_t>(c.relay - 1)];
    case Block::SourceLaw:
      return s.p_x;
    case Block::RelayLaw:
      return s.p_xi[static_cast<std::size_t>(c.relay - 1)];
  }
  throw Error(ErrorCode::InvalidArgument, "unknown block");
}

const std::vector<double>& column_vector(const ChannelSpec& s, const Column& c) {
  return column_vector(const_cast<ChannelSpec&>(s), c);
}

// Columns with at least two letters; singleton columns have nothing to search.
std::vector<Column> free_columns(const ChannelSpec& s, FreeBlocks free) {
  std::vector<Column> cols;
  for (int i = 1; i <= s.n; ++i) {
    const auto size = static_cast<std::size_t>(s.alphabet_yhat_i[static_cast<std::size_t>(i - 1)]);
    if (size < 2) continue;
    for (int c = 0; c < s.compression_columns(i); ++c) {
      cols.push_back({Block::Compression, i, static_cast<std::size_t>(c) * size, size});
    }
  }
  if (free == FreeBlocks::All) {
    if (s.alphabet_x > 1) {
      cols.push_back({Block::SourceLaw, 0, 0, static_cast<std::size_t>(s.alphabet_x)});
    }
    if (s.mode == Mode::Full) {
      for (int i = 1; i <= s.n; ++i) {
        const int a = s.alphabet_xi[static_cast<std::size_t>(i - 1)];
        if (a > 1) cols.push_back({Block::RelayLaw, i, 0, static_cast<std::size_t>(a)});
      }
    }
  }
  return cols;
}

bool normalize(std::vector<double>& v, std::size_t offset, std::size_t size) {
  double sum = 0.0;
  for (std::size_t k = 0; k < size; ++k) sum += v[offset + k];
  if (!(sum > 0.0)) return false;
  for (std::size_t k = 0; k < size; ++k) v[offset + k] /= sum;
  return true;
}

// Deficit of the successive-decoding rate region: the least uniform relaxation u
// such that some MAC-feasible R has sum_S R_i + u >= I(Y_S; Yhat_S | ...) for all S.
double successive_deficit(const EvalContext& ctx) {
  const int n = ctx.relays();
  const std::size_t u = static_cast<std::size_t>(n);
  LinearProgram lp;
  lp.objective.assign(u + 1, 0.0);
  lp.objective[u] = -1.0;
  lp.constraints = mac_constraints(ctx, n + 1);
  const SubsetMask all = ctx.all_relays();
  for (SubsetMask s : subsets_of(all)) {
    if (s.is_empty()) continue;
    LinearConstraint row;
    row.coeffs.assign(u + 1, 0.0);
    for (int i : s.indices()) row.coeffs[static_cast<std::size_t>(i - 1)] = 1.0;
    row.coeffs[u] = 1.0;
    row.bound = ctx.rate_sum(s) - eval_I(ctx, SubsetMask::empty(), all, s);
    row.sense = Sense::GreaterEqual;
    lp.constraints.push_back(std::move(row));
  }
  const LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) {
    throw Error(ErrorCode::Numerical, "relaxed successive-decoding LP failed");
  }
  return -res.optimum;
}

FeasibilityCheck feasibility_of(const EvalContext& ctx, SchemeId scheme) {
  FeasibilityCheck f;
  const SubsetMask all = ctx.all_relays();
  if (scheme == SchemeId::CFS || scheme == SchemeId::CFJ) {
    if (ctx.mode() == Mode::Full) {
      f.family = "successive-rate-vector";
      f.worst_value = -successive_deficit(ctx);
    } else {
      f.family = "link-capacity";
      f.worst_value = 0.0;
      for (SubsetMask s : subsets_of(all)) {
        f.worst_value = std::min(f.worst_value, eval_I(ctx, SubsetMask::empty(), all, s));
      }
    }
  } else {
    if (ctx.mode() != Mode::Full) {
      throw Error(ErrorCode::ModeMismatch,
                  std::string(to_string(scheme)) + " is defined for Full-mode channels only");
    }
    f.family = "J-nonnegative";
    f.worst_value = 0.0;
    for (SubsetMask s : subsets_of(all)) {
      f.worst_value = std::min(f.worst_value, eval_J(ctx, SubsetMask::empty(), all, s));
    }
  }
  f.satisfied = f.worst_value >= -kFeasibilitySlack;
  return f;
}

// Unclamped objective used for climbing; max(0, score) is the reported rate, so
// both have the same maximizers while the score still has slope below zero.
double search_score(const ChannelSpec& spec, SchemeId scheme) {
  const auto ctx = EvalContext::from_spec(spec);
  const SchemeReport r = compute_rate(ctx, scheme);
  return r.rate ? r.raw_value : kNegInf;
}

struct Evaluation {
  double score;  // climbed by the search
  double value;  // search_score: -inf when infeasible
};

double full_information(const EvalContext& ctx) {
  const SubsetMask all = ctx.all_relays();
  VarSet cond;
  if (ctx.mode() == Mode::Full) cond = VarSet::relay_inputs(all);
  return ctx.cmi(VarSet::source(), VarSet::compressions(all) | VarSet::destination(), cond);
}

// Smooth functions whose minimum is the climbing score, for the schemes whose
// objective has that shape; empty otherwise.
// Infeasible points of the successive schemes score the full-information rate less
// kPenalty times the constraint violation. The joint-decoding rates are that rate less
// one times the violation, and share the successive schemes' suprema, so any weight
// above one keeps the surrogate's suprema at feasible points.
std::vector<double> score_pieces(const EvalContext& ctx, SchemeId scheme) {
  const SubsetMask all = ctx.all_relays();
  std::vector<double> pieces;
  const bool full = ctx.mode() == Mode::Full;
  if (scheme == SchemeId::RUJ) {
    for (SubsetMask s : subsets_of(all)) pieces.push_back(eval_R(ctx, all, s));
  } else if (scheme == SchemeId::CBS || (!full && scheme == SchemeId::CFS)) {
    const double info = full_information(ctx);
    pieces.push_back(info);
    for (SubsetMask s : subsets_of(all)) {
      if (s.is_empty()) continue;
      const double c = full ? eval_J(ctx, SubsetMask::empty(), all, s) : eval_I(ctx, SubsetMask::empty(), all, s);
      pieces.push_back(info + kPenalty * c);
    }
  } else if (!full && scheme == SchemeId::CFJ) {
    const double info = full_information(ctx);
    for (SubsetMask s : subsets_of(all)) pieces.push_back(info + eval_I(ctx, SubsetMask::empty(), all, s));
  }
  return pieces;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

Evaluation evaluate(const ChannelSpec& spec, SchemeId scheme) {
  const auto ctx = EvalContext::from_spec(spec);
  const SchemeReport r = compute_rate(ctx, scheme);
  const double value = r.rate ? r.raw_value : kNegInf;
  const auto pieces = score_pieces(ctx, scheme);
  if (!pieces.empty()) return {min_of(pieces), value};
  if (r.rate) return {value, value};
  const double violation = std::max(0.0, -feasibility_of(ctx, scheme).worst_value);
  return {full_information(ctx) - kPenalty * violation, kNegInf};
}

double rate_of_score(double score) { return score == kNegInf ? kNegInf : std::max(score, 0.0); }

// Mixes the compression columns toward "always emit letter 0", which is feasible
// for every scheme.
ChannelSpec contracted(const ChannelSpec& start, double lambda) {
  ChannelSpec spec = start;
  for (std::size_t rel = 0; rel < spec.compressions.size(); ++rel) {
    auto& comp = spec.compressions[rel];
    const auto size = static_cast<std::size_t>(spec.alphabet_yhat_i[rel]);
    for (std::size_t off = 0; off < comp.size(); off += size) {
      for (std::size_t j = 0; j < size; ++j) {
        comp[off + j] = (1.0 - lambda) * comp[off + j] + (j == 0 ? lambda : 0.0);
      }
    }
  }
  return spec;
}

// Pulls an infeasible candidate back to the feasible region with the smallest
// contraction found by bisection, so moves can slide along the constraint boundary.
double repair(ChannelSpec& spec, SchemeId scheme, int& evaluations) {
  constexpr int kSteps = 12;
  double lo = 0.0;
  double hi = 1.0;
  ChannelSpec best = contracted(spec, hi);
  double best_score = search_score(best, scheme);
  ++evaluations;
  for (int k = 0; k < kSteps && best_score != kNegInf; ++k) {
    const double mid = 0.5 * (lo + hi);
    ChannelSpec cand = contracted(spec, mid);
    const double s = search_score(cand, scheme);
    ++evaluations;
    if (s == kNegInf) {
      lo = mid;
    } else {
      hi = mid;
      best = std::move(cand);
      best_score = s;
    }
  }
  spec = std::move(best);
  return best_score;
}

void randomize(ChannelSpec& spec, const std::vector<Column>& cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const Column& c : cols) {
    auto& v = column_vector(spec, c);
    for (std::size_t k = 0; k < c.size; ++k) v[c.offset + k] = unit(rng);
    normalize(v, c.offset, c.size);
  }
}

// Moves every free column by alpha * dir (dir indexed by flat coordinate) and
// renormalizes; false when a column loses all its mass.
bool shift(ChannelSpec& spec, const std::vector<Column>& cols, const std::vector<double>& dir, double alpha) {
  std::size_t flat = 0;
  for (const Column& c : cols) {
    auto& v = column_vector(spec, c);
    for (std::size_t k = 0; k < c.size; ++k, ++flat) {
      v[c.offset + k] = std::max(0.0, v[c.offset + k] + alpha * dir[flat]);
    }
    if (!normalize(v, c.offset, c.size)) return false;
  }
  return true;
}

// Ascent direction for a minimum of smooth pieces: finite-difference gradients of
// the pieces within `active` of the minimum, then the direction in the unit box
// that maximizes the worst directional slope. Empty when no piece-wise form exists
// or no direction raises every active piece.
std::vector<double> ridge_direction(const ChannelSpec& cur, const std::vector<Column>& cols, SchemeId scheme,
                                    double active, int& evaluations) {
  constexpr double kDiff = 1e-7;
  const auto base = score_pieces(EvalContext::from_spec(cur), scheme);
  ++evaluations;
  if (base.empty()) return {};
  const double low = min_of(base);
  std::vector<std::size_t> act;
  for (std::size_t j = 0; j < base.size(); ++j) {
    if (base[j] <= low + active) act.push_back(j);
  }
  std::size_t coords = 0;
  for (const Column& c : cols) coords += c.size;
  // One degree of freedom per letter other than the column's largest: mass moves
  // between the two. Letters at zero may only gain mass.
  constexpr double kAtBound = 1e-9;
  std::vector<std::vector<double>> basis;
  std::vector<bool> at_bound;
  std::size_t flat = 0;
  for (const Column& c : cols) {
    const auto& v = column_vector(cur, c);
    const auto first = v.begin() + static_cast<std::ptrdiff_t>(c.offset);
    const auto ref = static_cast<std::size_t>(std::max_element(first, first + static_cast<std::ptrdiff_t>(c.size)) - first);
    for (std::size_t k = 0; k < c.size; ++k) {
      if (k == ref) continue;
      std::vector<double> e(coords, 0.0);
      e[flat + ref] = -1.0;
      e[flat + k] = 1.0;
      basis.push_back(std::move(e));
      at_bound.push_back(v[c.offset + k] < kAtBound);
    }
    flat += c.size;
  }
  const std::size_t dofs = basis.size();
  std::vector<std::vector<double>> grad(act.size(), std::vector<double>(dofs, 0.0));
  for (std::size_t q = 0; q < dofs; ++q) {
    ChannelSpec probe = cur;
    if (!shift(probe, cols, basis[q], kDiff)) continue;
    const auto moved = score_pieces(EvalContext::from_spec(probe), scheme);
    ++evaluations;
    for (std::size_t a = 0; a < act.size(); ++a) grad[a][q] = (moved[act[a]] - base[act[a]]) / kDiff;
  }

  LinearProgram lp;
  lp.objective.assign(dofs + 1, 0.0);
  lp.objective[dofs] = 1.0;
  lp.free_variable.assign(dofs + 1, true);
  for (const auto& g : grad) {
    LinearConstraint row;
    row.coeffs = g;
    row.coeffs.push_back(-1.0);
    row.bound = 0.0;
    row.sense = Sense::GreaterEqual;
    lp.constraints.push_back(std::move(row));
  }
  for (std::size_t q = 0; q < dofs; ++q) {
    for (Sense sense : {Sense::LessEqual, Sense::GreaterEqual}) {
      LinearConstraint row;
      row.coeffs.assign(dofs + 1, 0.0);
      row.coeffs[q] = 1.0;
      row.bound = sense == Sense::LessEqual ? 1.0 : (at_bound[q] ? 0.0 : -1.0);
      row.sense = sense;
      lp.constraints.push_back(std::move(row));
    }
  }
  const LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal || !(res.optimum > 1e-9)) return {};
  std::vector<double> dir(coords, 0.0);
  for (std::size_t q = 0; q < dofs; ++q) {
    for (std::size_t f = 0; f < coords; ++f) dir[f] += res.witness[q] * basis[q][f];
  }
  return dir;
}

struct RestartOutcome {
  RestartTrace trace;
  ChannelSpec spec;
  double score = kNegInf;
};

RestartOutcome run_restart(const ChannelSpec& tmpl, const SearchConfig& cfg, int index,
                           const std::vector<Column>& cols) {
  std::mt19937_64 rng(detail::derive_seed(cfg.seed, static_cast<std::uint64_t>(index)));
  RestartOutcome out;
  out.trace.restart = index;
  ChannelSpec cur = tmpl;
  if (index > 0) randomize(cur, cols, rng);
  const Evaluation first = evaluate(cur, cfg.scheme);
  double score = first.score;
  ChannelSpec best = cur;
  double best_value = first.value;
  out.trace.evaluations = 1;
  out.trace.start_objective = rate_of_score(first.value);

  std::size_t coords = 0;
  for (const Column& c : cols) coords += c.size;
  double step = cfg.initial_step;
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto try_candidate = [&](ChannelSpec& cand) {
    ++out.trace.evaluations;
    const Evaluation ev = evaluate(cand, cfg.scheme);
    if (ev.value > best_value) {
      best_value = ev.value;
      best = cand;
    }
    if (ev.score > score) {
      const double gain = ev.score - score;
      score = ev.score;
      cur = std::move(cand);
      ++out.trace.accepted;
      out.trace.trace.push_back(rate_of_score(best_value));
      return gain;
    }
    return 0.0;
  };

  while (coords > 0 && out.trace.evaluations < cfg.iterations && step >= kMinStep) {
    double progress = 0.0;
    // Coordinate moves in a shuffled order.
    std::vector<std::size_t> order(coords * 2);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t move : order) {
      if (out.trace.evaluations >= cfg.iterations) break;
      std::size_t flat = move / 2;
      const double sign = (move % 2) ? -1.0 : 1.0;
      std::size_t ci = 0;
      while (flat >= cols[ci].size) flat -= cols[ci++].size;
      const Column& c = cols[ci];
      ChannelSpec cand = cur;
      auto& v = column_vector(cand, c);
      v[c.offset + flat] = std::max(0.0, v[c.offset + flat] + sign * step);
      if (!normalize(v, c.offset, c.size)) continue;
      progress += try_candidate(cand);
    }
    // Random joint directions get past kinks of the min-type objectives.
    for (std::size_t trial = 0; trial < coords && out.trace.evaluations < cfg.iterations; ++trial) {
      ChannelSpec cand = cur;
      bool ok = true;
      for (const Column& c : cols) {
        auto& v = column_vector(cand, c);
        for (std::size_t k = 0; k < c.size; ++k) {
          v[c.offset + k] = std::max(0.0, v[c.offset + k] + step * gauss(rng));
        }
        ok = ok && normalize(v, c.offset, c.size);
      }
      if (ok) progress += try_candidate(cand);
    }
    // Along a ridge where several pieces tie, step in the direction that raises all of them.
    if (progress <= cfg.tolerance) {
      while (out.trace.evaluations < cfg.iterations) {
        const auto dir = ridge_direction(cur, cols, cfg.scheme, kActive * step, out.trace.evaluations);
        if (dir.empty()) break;
        double gain = 0.0;
        for (double alpha = 2.0 * step; alpha > 1e-10 && out.trace.evaluations < cfg.iterations; alpha *= 0.5) {
          ChannelSpec cand = cur;
          if (!shift(cand, cols, dir, alpha)) continue;
          gain = try_candidate(cand);
          if (gain > 0.0) break;
        }
        progress += gain;
        if (gain <= cfg.tolerance) break;
      }
    }
    if (progress <= cfg.tolerance) step *= cfg.decay;
  }
  out.trace.converged = coords == 0 || step < kMinStep;
  // A search that ends outside the feasible region contracts back into it.
  if (search_score(cur, cfg.scheme) == kNegInf) {
    const double repaired = repair(cur, cfg.scheme, out.trace.evaluations);
    if (repaired > best_value) {
      best_value = repaired;
      best = cur;
    }
  }
  out.trace.final_objective = rate_of_score(best_value);
  out.spec = std::move(best);
  out.score = best_value;
  return out;
}

}  // namespace

double scheme_objective(const ChannelSpec& spec, SchemeId scheme) {
  return rate_of_score(search_score(spec, scheme));
}

FeasibilityCheck successive_feasibility(const ChannelSpec& spec, SchemeId scheme) {
  return feasibility_of(EvalContext::from_spec(spec), scheme);
}

OptimizationResult optimize(const ChannelSpec& spec_template, const SearchConfig& cfg) {
  require_valid(spec_template);
  if (cfg.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  if (cfg.iterations < 1) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");
  if (!(cfg.initial_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
  if (!(cfg.decay > 0.0 && cfg.decay < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "decay must lie in (0, 1)");
  }
  const auto cols = free_columns(spec_template, cfg.free);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  detail::parallel_for(outcomes.size(), cfg.threads, [&](std::size_t i) {
    outcomes[i] = run_restart(spec_template, cfg, static_cast<int>(i), cols);
  });

  OptimizationResult res;
  res.scheme = cfg.scheme;
  std::size_t best = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].score > outcomes[best].score) best = i;
    res.restarts.push_back(outcomes[i].trace);
  }
  res.best_restart = static_cast<int>(best);
  res.best_spec = outcomes[best].spec;
  res.best_objective = rate_of_score(outcomes[best].score);
  res.stochastic_best = res.best_objective;

  if (cfg.enumerate_deterministic) {
    auto en = enumerate_deterministic_compressions(spec_template, cfg.scheme);
    res.deterministic_best = en.best_objective;
    res.deterministic_spec = en.best_spec;
    res.deterministic_maps = en.maps;
    if (en.best_objective > res.best_objective) {
      res.best_objective = en.best_objective;
      res.best_spec = en.best_spec;
      res.best_restart = -1;
    }
  }
  if (res.best_objective != kNegInf) res.feasibility = successive_feasibility(res.best_spec, cfg.scheme);
  return res;
}

EnumerationResult enumerate_deterministic_compressions(const ChannelSpec& spec_template,
                                                       SchemeId scheme) {
  require_valid(spec_template);
  // Every (relay, column) pair picks one output letter.
  std::vector<std::pair<int, int>> slots;  // (relay, column)
  std::vector<int> radices;
  std::uint64_t maps = 1;
  for (int i = 1; i <= spec_template.n; ++i) {
    const int size = spec_template.alphabet_yhat_i[static_cast<std::size_t>(i - 1)];
    for (int c = 0; c < spec_template.compression_columns(i); ++c) {
      slots.emplace_back(i, c);
      radices.push_back(size);
      if (maps > kMaxDeterministicMaps / static_cast<std::uint64_t>(size)) {
        throw Error(ErrorCode::InvalidArgument, "too many deterministic compression maps to enumerate");
      }
      maps *= static_cast<std::uint64_t>(size);
    }
  }
  EnumerationResult out{kNegInf, spec_template, maps};
  ChannelSpec spec = spec_template;
  std::vector<int> digit(slots.size(), 0);
  for (std::uint64_t m = 0; m < maps; ++m) {
    for (std::size_t k = 0; k < slots.size(); ++k) {
      const auto [relay, col] = slots[k];
      auto& comp = spec.compressions[static_cast<std::size_t>(relay - 1)];
      const std::size_t size = static_cast<std::size_t>(radices[k]);
      for (std::size_t j = 0; j < size; ++j) {
        comp[static_cast<std::size_t>(col) * size + j] = static_cast<int>(j) == digit[k] ? 1.0 : 0.0;
      }
    }
    const double v = scheme_objective(spec, scheme);
    if (v > out.best_objective) {
      out.best_objective = v;
      out.best_spec = spec;
    }
    for (std::size_t k = slots.size(); k-- > 0;) {
      if (++digit[k] < radices[k]) break;
      digit[k] = 0;
    }
  }
  return out;
}

ChannelSpec apply_erasure(const ChannelSpec& spec, SubsetMask relays, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "erasure probability must lie in [0, 1]");
  }
  if (!relays.subset_of(SubsetMask::full(spec.n))) {
    throw Error(ErrorCode::InvalidArgument, "erasure relays " + relays.to_string() + " are not within N");
  }
  require_valid(spec);
  ChannelSpec out = spec;
  for (int i : relays.indices()) {
    const auto r = static_cast<std::size_t>(i - 1);
    const auto size = static_cast<std::size_t>(spec.alphabet_yhat_i[r]);
    const auto& old = spec.compressions[r];
    std::vector<double> comp;
    comp.reserve(old.size() / size * (size + 1));
    for (std::size_t off = 0; off < old.size(); off += size) {
      for (std::size_t j = 0; j < size; ++j) comp.push_back(p * old[off + j]);
      comp.push_back(1.0 - p);
    }
    out.compressions[r] = std::move(comp);
    out.alphabet_yhat_i[r] = static_cast<int>(size) + 1;
  }
  return out;
}

}  // namespace cfrelay
