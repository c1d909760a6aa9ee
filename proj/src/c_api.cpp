#include "cfrelay/cfrelay.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "cfrelay/decodable_sets.hpp"
#include "cfrelay/error.hpp"
#include "cfrelay/optimizer.hpp"
#include "cfrelay/rate_schemes.hpp"
#include "cfrelay/report_json.hpp"
#include "cfrelay/spec_io.hpp"
#include "cfrelay/verify.hpp"

struct cfr_spec {
  cfrelay::ChannelSpec spec;
};

struct cfr_context {
  cfrelay::EvalContext ctx;
};

namespace {

using namespace cfrelay;
using nlohmann::json;

thread_local std::string g_last_error;

cfr_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return CFR_ERR_ARGUMENT;
    case ErrorCode::Validation:
      return CFR_ERR_INVALID_SPEC;
    case ErrorCode::Parse:
      return CFR_ERR_PARSE;
    case ErrorCode::Io:
      return CFR_ERR_IO;
    case ErrorCode::ModeMismatch:
      return CFR_ERR_MODE;
    case ErrorCode::Numerical:
      return CFR_ERR_NUMERICAL;
  }
  return CFR_ERR_INTERNAL;
}

template <typename F>
cfr_status guarded(F&& body) {
  try {
    body();
    return CFR_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return CFR_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

VarSet to_varset(const cfr_varset& v) {
  return VarSet{v.x != 0, v.y != 0, SubsetMask{v.xs}, SubsetMask{v.ys}, SubsetMask{v.yhats}};
}

FeasibilityKind to_kind(cfr_feasibility k) {
  switch (k) {
    case CFR_I_NONSTRICT:
      return FeasibilityKind::I_NonStrict;
    case CFR_J_NONSTRICT:
      return FeasibilityKind::J_NonStrict;
    case CFR_K_STRICT:
      return FeasibilityKind::K_Strict;
    case CFR_K_NONSTRICT:
      return FeasibilityKind::K_NonStrict;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown feasibility kind");
}

Mode mode_from_string(const std::string& m) {
  if (m == "digital") return Mode::Digital;
  if (m == "full") return Mode::Full;
  throw Error(ErrorCode::InvalidArgument, "mode must be \"digital\", \"full\" or \"both\"");
}

json quantities(const EvalContext& ctx) {
  const SubsetMask all = ctx.all_relays();
  const VarSet x = VarSet::source();
  const VarSet y = VarSet::destination();
  json q;
  q["I(X;Y)"] = ctx.cmi(x, y, {});
  if (ctx.mode() == Mode::Full) {
    q["I(X;Y|X_N)"] = ctx.cmi(x, y, VarSet::relay_inputs(all));
    q["I(X;Yhat_N,Y|X_N)"] = ctx.cmi(x, VarSet::compressions(all) | y, VarSet::relay_inputs(all));
  } else {
    q["I(X;Yhat_N,Y)"] = ctx.cmi(x, VarSet::compressions(all) | y, {});
  }
  return q;
}

json report_header(const EvalContext& ctx) {
  return {{"mode", ctx.mode() == Mode::Full ? "full" : "digital"},
          {"n", ctx.relays()},
          {"rates", ctx.rates()}};
}

json family_sets(const EvalContext& ctx, FeasibilityKind kind) {
  const auto table = feasible_set_table(ctx, kind);
  json feasible = json::array();
  for (std::uint32_t f = 0; f < table.size(); ++f) {
    if (table[f]) feasible.push_back(subset_json(SubsetMask{f}));
  }
  const auto peeled = peel_supported_subset(ctx, kind, SubsetMask{}, ctx.all_relays());
  json values = json::array();
  for (SubsetMask s : subsets_of(ctx.all_relays())) {
    values.push_back({{"subset", subset_json(s)},
                      {"value", family_value(ctx, kind, SubsetMask{}, ctx.all_relays(), s)}});
  }
  return {{"largest", subset_json(largest_feasible_set(ctx, kind))},
          {"feasible_sets", feasible},
          {"peeled", peeled ? subset_json(*peeled) : json(nullptr)},
          {"values", values}};
}

void prefix_into(SuiteReport& dst, const SuiteReport& src, const std::string& prefix) {
  dst.instances += src.instances;
  for (const auto& [name, st] : src.checks) dst.checks[prefix + name] = st;
  for (auto f : src.failures) {
    f.check = prefix + f.check;
    dst.failures.push_back(std::move(f));
  }
  for (const auto& n : src.notes) dst.notes.push_back(prefix + n);
}

}  // namespace

extern "C" {

const char* cfr_version(void) { return "1.0.0"; }

const char* cfr_last_error(void) { return g_last_error.c_str(); }

const char* cfr_status_name(cfr_status status) {
  switch (status) {
    case CFR_OK:
      return "ok";
    case CFR_ERR_IO:
      return "io";
    case CFR_ERR_PARSE:
      return "parse";
    case CFR_ERR_INVALID_SPEC:
      return "invalid-spec";
    case CFR_ERR_MODE:
      return "mode";
    case CFR_ERR_ARGUMENT:
      return "argument";
    case CFR_ERR_NUMERICAL:
      return "numerical";
    case CFR_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

void cfr_string_free(char* s) { std::free(s); }

cfr_status cfr_spec_load_file(const char* path, cfr_spec** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    *out = new cfr_spec{load_spec_file(path)};
  });
}

cfr_status cfr_spec_parse(const char* json_text, cfr_spec** out) {
  return guarded([&] {
    require(json_text && out, "null argument");
    *out = nullptr;
    *out = new cfr_spec{parse_spec(json_text)};
  });
}

void cfr_spec_free(cfr_spec* spec) { delete spec; }

cfr_status cfr_spec_validate(const cfr_spec* spec, char** issues_json) {
  bool valid = false;
  const cfr_status st = guarded([&] {
    require(spec, "null spec");
    if (issues_json) *issues_json = nullptr;
    const auto issues = validate(spec->spec);
    if (issues_json) *issues_json = copy_string(dump_report(to_json(issues)));
    valid = issues.empty();
    if (!valid) g_last_error = issues.front().field + ": " + issues.front().message;
  });
  if (st != CFR_OK) return st;
  return valid ? CFR_OK : CFR_ERR_INVALID_SPEC;
}

cfr_status cfr_spec_to_json(const cfr_spec* spec, char** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = copy_string(dump_report(spec_to_json(spec->spec)));
  });
}

cfr_status cfr_spec_save_file(const cfr_spec* spec, const char* path) {
  return guarded([&] {
    require(spec && path, "null argument");
    save_spec_file(spec->spec, path);
  });
}

int cfr_spec_relays(const cfr_spec* spec) { return spec ? spec->spec.n : 0; }

int cfr_spec_is_digital(const cfr_spec* spec) {
  return spec && spec->spec.mode == Mode::Digital ? 1 : 0;
}

cfr_status cfr_apply_erasure(const cfr_spec* spec, uint32_t relays, double p, cfr_spec** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = nullptr;
    *out = new cfr_spec{apply_erasure(spec->spec, SubsetMask{relays}, p)};
  });
}

cfr_status cfr_context_create(const cfr_spec* spec, const double* rates, int n_rates,
                              cfr_context** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = nullptr;
    std::vector<double> r;
    if (rates) {
      require(n_rates >= 0, "negative rate count");
      r.assign(rates, rates + n_rates);
      if (r.empty()) throw Error(ErrorCode::InvalidArgument, "rate vector must have n entries");
    }
    *out = new cfr_context{EvalContext::from_spec(spec->spec, std::move(r))};
  });
}

void cfr_context_free(cfr_context* ctx) { delete ctx; }

cfr_status cfr_cond_mutual_info(const cfr_context* ctx, cfr_varset a, cfr_varset b, cfr_varset c,
                                double* out) {
  return guarded([&] {
    require(ctx && out, "null argument");
    *out = ctx->ctx.cmi(to_varset(a), to_varset(b), to_varset(c));
  });
}

cfr_status cfr_cond_entropy(const cfr_context* ctx, cfr_varset a, cfr_varset c, double* out) {
  return guarded([&] {
    require(ctx && out, "null argument");
    *out = cond_entropy(ctx->ctx.joint(), to_varset(a), to_varset(c));
  });
}

cfr_status cfr_set_function(const cfr_context* ctx, cfr_family family, uint32_t a, uint32_t b,
                            uint32_t s, double* out) {
  return guarded([&] {
    require(ctx && out, "null argument");
    const SubsetMask A{a}, B{b}, S{s};
    switch (family) {
      case CFR_FAMILY_I:
        *out = eval_I(ctx->ctx, A, B, S);
        return;
      case CFR_FAMILY_J:
        *out = eval_J(ctx->ctx, A, B, S);
        return;
      case CFR_FAMILY_K:
        *out = eval_K(ctx->ctx, A, B, S);
        return;
      case CFR_FAMILY_R:
        *out = eval_R(ctx->ctx, B, S);
        return;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown set-function family");
  });
}

cfr_status cfr_largest_feasible_set(const cfr_context* ctx, cfr_feasibility kind, uint32_t* out) {
  return guarded([&] {
    require(ctx && out, "null argument");
    *out = largest_feasible_set(ctx->ctx, to_kind(kind)).bits();
  });
}

cfr_status cfr_peel_supported_subset(const cfr_context* ctx, cfr_feasibility kind, uint32_t a,
                                     uint32_t b, uint32_t* out, int* found) {
  return guarded([&] {
    require(ctx && out && found, "null argument");
    const auto c = peel_supported_subset(ctx->ctx, to_kind(kind), SubsetMask{a}, SubsetMask{b});
    *found = c ? 1 : 0;
    *out = c ? c->bits() : 0;
  });
}

cfr_status cfr_rates_report(const cfr_context* ctx, const char* scheme, const uint32_t* m,
                            char** json_out) {
  return guarded([&] {
    require(ctx && scheme && json_out, "null argument");
    const EvalContext& c = ctx->ctx;
    const std::string name = scheme;
    std::optional<SubsetMask> relay_set;
    if (m) relay_set = SubsetMask{*m};
    std::vector<SchemeId> ids;
    if (name == "all") {
      ids = c.mode() == Mode::Full
                ? std::vector<SchemeId>{SchemeId::CFS, SchemeId::CFJ, SchemeId::RUJ, SchemeId::CBS,
                                        SchemeId::CBJ}
                : std::vector<SchemeId>{SchemeId::CFS, SchemeId::CFJ};
    } else {
      ids = {scheme_from_string(name)};
    }
    json doc = report_header(c);
    doc["quantities"] = quantities(c);
    json reports = json::array();
    for (SchemeId id : ids) reports.push_back(to_json(compute_rate(c, id, relay_set)));
    doc["schemes"] = reports;
    *json_out = copy_string(dump_report(doc));
  });
}

cfr_status cfr_sets_report(const cfr_context* ctx, char** json_out) {
  return guarded([&] {
    require(ctx && json_out, "null argument");
    const EvalContext& c = ctx->ctx;
    json doc = report_header(c);
    json families;
    families["I"] = family_sets(c, FeasibilityKind::I_NonStrict);
    if (c.mode() == Mode::Full) {
      families["J"] = family_sets(c, FeasibilityKind::J_NonStrict);
      families["K-strict"] = family_sets(c, FeasibilityKind::K_Strict);
      families["K-nonstrict"] = family_sets(c, FeasibilityKind::K_NonStrict);
      doc["decodability"] = to_json(classify_relays(c));
    }
    doc["families"] = families;
    *json_out = copy_string(dump_report(doc));
  });
}

void cfr_search_config_default(cfr_search_config* cfg) {
  if (!cfg) return;
  const SearchConfig d;
  cfg->scheme = "cfj";
  cfg->free_all = 0;
  cfg->restarts = d.restarts;
  cfg->iterations = d.iterations;
  cfg->initial_step = d.initial_step;
  cfg->decay = d.decay;
  cfg->seed = d.seed;
  cfg->tolerance = d.tolerance;
  cfg->enumerate_deterministic = 0;
  cfg->threads = d.threads;
}

cfr_status cfr_optimize(const cfr_spec* spec_template, const cfr_search_config* cfg,
                        char** result_json, cfr_spec** best) {
  return guarded([&] {
    require(spec_template && cfg && cfg->scheme && result_json, "null argument");
    if (best) *best = nullptr;
    SearchConfig sc;
    sc.scheme = scheme_from_string(cfg->scheme);
    sc.free = cfg->free_all ? FreeBlocks::All : FreeBlocks::Compressions;
    sc.restarts = cfg->restarts;
    sc.iterations = cfg->iterations;
    sc.initial_step = cfg->initial_step;
    sc.decay = cfg->decay;
    sc.seed = cfg->seed;
    sc.tolerance = cfg->tolerance;
    sc.enumerate_deterministic = cfg->enumerate_deterministic != 0;
    sc.threads = cfg->threads;
    // Reject scheme / mode mismatches before searching.
    if (spec_template->spec.mode == Mode::Digital && sc.scheme != SchemeId::CFS &&
        sc.scheme != SchemeId::CFJ) {
      throw Error(ErrorCode::ModeMismatch, std::string(to_string(sc.scheme)) +
                                               " is defined for Full-mode channels only");
    }
    const auto result = optimize(spec_template->spec, sc);
    *result_json = copy_string(dump_report(to_json(result)));
    if (best) *best = new cfr_spec{result.best_spec};
  });
}

void cfr_verify_config_default(cfr_verify_config* cfg) {
  if (!cfg) return;
  const InstanceGenerator g;
  const SearchConfig s;
  cfg->suite = "lemmas";
  cfg->mode = "digital";
  cfg->n = g.n;
  cfg->alphabet_x = g.alphabets.x;
  cfg->alphabet_y = g.alphabets.y;
  cfg->alphabet_xi = g.alphabets.xi;
  cfg->alphabet_yi = g.alphabets.yi;
  cfg->alphabet_yhat = g.alphabets.yhat;
  cfg->seed = 0;
  cfg->instances = 50;
  cfg->degenerate_ratio = g.degenerate_ratio;
  cfg->max_rate = g.max_rate;
  cfg->threads = 1;
  cfg->restarts = s.restarts;
  cfg->iterations = s.iterations;
}

cfr_status cfr_verify(const cfr_verify_config* cfg, char** report_json, int* passed) {
  return guarded([&] {
    require(cfg && cfg->suite && cfg->mode && report_json && passed, "null argument");
    const std::string suite = cfg->suite;
    const std::string mode = cfg->mode;
    SuiteReport report;
    if (suite == "optima") {
      SearchConfig sc;
      sc.restarts = cfg->restarts;
      sc.iterations = cfg->iterations;
      sc.seed = cfg->seed;
      sc.threads = cfg->threads;
      sc.enumerate_deterministic = true;
      report = run_optimum_suite(default_optimum_pairs(), sc);
    } else {
      if (suite != "lemmas" && suite != "theorems") {
        throw Error(ErrorCode::InvalidArgument, "suite must be lemmas, theorems or optima");
      }
      InstanceGenerator gen;
      gen.n = cfg->n;
      gen.alphabets = {cfg->alphabet_x, cfg->alphabet_y, cfg->alphabet_xi, cfg->alphabet_yi,
                       cfg->alphabet_yhat};
      gen.seed = cfg->seed;
      gen.degenerate_ratio = cfg->degenerate_ratio;
      gen.max_rate = cfg->max_rate;
      auto run = [&](Mode m) {
        gen.mode = m;
        return suite == "lemmas" ? run_lemma_suite(gen, cfg->instances, cfg->threads)
                                 : run_theorem_suite(gen, cfg->instances, cfg->threads);
      };
      if (mode == "both") {
        report.suite = suite;
        report.seed = cfg->seed;
        prefix_into(report, run(Mode::Digital), "digital/");
        prefix_into(report, run(Mode::Full), "full/");
      } else {
        report = run(mode_from_string(mode));
      }
    }
    *report_json = copy_string(dump_report(to_json(report)));
    *passed = report.passed() ? 1 : 0;
  });
}

}  // extern "C"
