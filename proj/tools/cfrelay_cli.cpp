#include <cfrelay/cfrelay.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

// Exit code for a failed library call: unreadable or malformed input is 2, the rest 1.
int fail(cfr_status st) {
  std::cerr << "error (" << cfr_status_name(st) << "): " << cfr_last_error() << "\n";
  return st == CFR_ERR_IO || st == CFR_ERR_PARSE ? kExitIo : kExitDomain;
}

struct SpecDeleter {
  void operator()(cfr_spec* s) const { cfr_spec_free(s); }
};
struct ContextDeleter {
  void operator()(cfr_context* c) const { cfr_context_free(c); }
};
using SpecPtr = std::unique_ptr<cfr_spec, SpecDeleter>;
using ContextPtr = std::unique_ptr<cfr_context, ContextDeleter>;

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  cfr_string_free(s);
  return out;
}

std::string fmt(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v.get<double>());
    return buf;
  }
  return v.dump();
}

std::string subset_text(const json& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(s[k].get<int>());
  }
  return out + "}";
}

std::string subsets_text(const json& arr) {
  std::string out;
  for (const auto& s : arr) {
    if (!out.empty()) out += " ";
    out += subset_text(s);
  }
  return out.empty() ? "-" : out;
}

// Accepts "", "1,3", "[1,3]" or "{1, 3}".
bool parse_subset(const std::string& text, std::uint32_t& mask) {
  mask = 0;
  std::string cleaned;
  for (char c : text) {
    if (c == '[' || c == ']' || c == '{' || c == '}' || c == ' ') continue;
    cleaned += c;
  }
  if (cleaned.empty()) return true;
  std::stringstream ss(cleaned);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int r = std::stoi(item, &used);
      if (used != item.size() || r < 1 || r > 32) return false;
      mask |= 1u << (r - 1);
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

int load(const std::string& path, SpecPtr& out) {
  cfr_spec* raw = nullptr;
  const cfr_status st = cfr_spec_load_file(path.c_str(), &raw);
  if (st != CFR_OK) return fail(st);
  out.reset(raw);
  return kExitOk;
}

int make_context(const cfr_spec* spec, ContextPtr& out) {
  cfr_context* raw = nullptr;
  const cfr_status st = cfr_context_create(spec, nullptr, 0, &raw);
  if (st != CFR_OK) return fail(st);
  out.reset(raw);
  return kExitOk;
}

void print_header(const json& doc) {
  std::cout << "mode " << doc["mode"].get<std::string>() << ", n = " << doc["n"].get<int>()
            << ", relay rates [";
  for (std::size_t k = 0; k < doc["rates"].size(); ++k) {
    std::cout << (k ? ", " : "") << fmt(doc["rates"][k]);
  }
  std::cout << "]\n";
}

void render_rates(const json& doc) {
  print_header(doc);
  for (const auto& [name, value] : doc["quantities"].items()) {
    std::cout << "  " << name << " = " << fmt(value) << "\n";
  }
  std::cout << "\n";
  std::printf("%-6s %-12s %-12s %-10s %-18s %s\n", "scheme", "rate", "raw", "relays", "argmin S",
              "violators");
  for (const auto& r : doc["schemes"]) {
    std::printf("%-6s %-12s %-12s %-10s %-18s %s\n", r["scheme"].get<std::string>().c_str(),
                fmt(r["rate"]).c_str(), fmt(r["raw_value"]).c_str(),
                subset_text(r["relay_subset"]).c_str(), subsets_text(r["argmin_subsets"]).c_str(),
                subsets_text(r["violators"]).c_str());
  }
  for (const auto& r : doc["schemes"]) {
    if (!r.contains("decodability")) continue;
    const auto& d = r["decodability"];
    std::cout << "\nD_J = " << subset_text(d["d_j"]) << ", D'_J = " << subset_text(d["d_j_prime"])
              << "\n";
    for (const auto& c : d["classes"]) {
      std::cout << "  relay " << c["relay"].get<int>() << ": " << c["class"].get<std::string>()
                << "\n";
    }
  }
  for (const auto& r : doc["schemes"]) {
    for (const auto& n : r["notes"]) {
      std::cout << "note [" << r["scheme"].get<std::string>() << "]: " << n.get<std::string>()
                << "\n";
    }
  }
}

void render_sets(const json& doc) {
  print_header(doc);
  std::printf("\n%-12s %-10s %-10s %s\n", "family", "largest", "peeled", "feasible sets");
  for (const auto& [name, f] : doc["families"].items()) {
    std::printf("%-12s %-10s %-10s %s\n", name.c_str(), subset_text(f["largest"]).c_str(),
                f["peeled"].is_null() ? "-" : subset_text(f["peeled"]).c_str(),
                subsets_text(f["feasible_sets"]).c_str());
  }
  if (doc.contains("decodability")) {
    const auto& d = doc["decodability"];
    std::cout << "\nD_J = " << subset_text(d["d_j"]) << ", D'_J = " << subset_text(d["d_j_prime"])
              << "\n";
    for (const auto& c : d["classes"]) {
      std::cout << "  relay " << c["relay"].get<int>() << ": " << c["class"].get<std::string>()
                << "\n";
    }
    std::cout << "K_N(S):";
    for (const auto& v : d["k_values"]) {
      std::cout << " " << subset_text(v["subset"]) << "=" << fmt(v["value"]);
    }
    std::cout << "\n";
  }
}

void render_optimize(const json& doc) {
  std::cout << "scheme " << doc["scheme"].get<std::string>() << ": best "
            << fmt(doc["best_objective"]) << " (restart " << doc["best_restart"].get<int>()
            << ", stochastic best " << fmt(doc["stochastic_best"]) << ")\n";
  if (!doc["deterministic"].is_null()) {
    std::cout << "deterministic maps: " << doc["deterministic"]["maps"].get<std::uint64_t>()
              << ", best " << fmt(doc["deterministic"]["best_objective"]) << "\n";
  }
  const auto& f = doc["feasibility"];
  if (!f["family"].get<std::string>().empty()) {
    std::cout << "feasibility at optimum (" << f["family"].get<std::string>()
              << "): " << (f["satisfied"].get<bool>() ? "satisfied" : "violated")
              << ", worst value " << fmt(f["worst_value"]) << "\n";
  }
  std::printf("\n%-8s %-12s %-12s %-12s %-9s %s\n", "restart", "start", "final", "evaluations",
              "accepted", "converged");
  for (const auto& r : doc["restarts"]) {
    std::printf("%-8d %-12s %-12s %-12d %-9d %s\n", r["restart"].get<int>(),
                fmt(r["start_objective"]).c_str(), fmt(r["final_objective"]).c_str(),
                r["evaluations"].get<int>(), r["accepted"].get<int>(),
                r["converged"].get<bool>() ? "yes" : "no");
  }
}

void render_verify(const json& doc) {
  std::cout << "suite " << doc["suite"].get<std::string>() << ", seed "
            << doc["seed"].get<std::uint64_t>() << ", instances "
            << doc["instances"].get<std::uint64_t>() << ": "
            << (doc["passed"].get<bool>() ? "PASS" : "FAIL") << "\n\n";
  std::printf("%-44s %-10s %-9s %-6s %s\n", "check", "evaluated", "failures", "ties",
              "max residual");
  for (const auto& [name, st] : doc["checks"].items()) {
    char resid[32];
    std::snprintf(resid, sizeof resid, "%.3e", st["max_residual"].is_null() ? 0.0
                                                   : st["max_residual"].get<double>());
    std::printf("%-44s %-10llu %-9llu %-6llu %s\n", name.c_str(),
                static_cast<unsigned long long>(st["evaluated"].get<std::uint64_t>()),
                static_cast<unsigned long long>(st["failures"].get<std::uint64_t>()),
                static_cast<unsigned long long>(st["ties"].get<std::uint64_t>()), resid);
  }
  for (const auto& f : doc["failures"]) {
    std::cout << "failure: " << f["check"].get<std::string>() << " seed "
              << f["seed"].get<std::uint64_t>() << " instance "
              << f["instance"].get<std::uint64_t>() << " subsets " << subsets_text(f["subsets"])
              << " residual " << fmt(f["residual"]) << ": " << f["detail"].get<std::string>()
              << "\n";
  }
  for (const auto& n : doc["notes"]) std::cout << "note: " << n.get<std::string>() << "\n";
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return static_cast<bool>(out);
}

// Emits the JSON text or a rendered table, and optionally a copy of the JSON.
template <typename Render>
int emit(const std::string& text, bool as_json, const std::string& report_path, Render render) {
  if (!report_path.empty() && !write_file(report_path, text)) {
    std::cerr << "error: cannot write '" << report_path << "'\n";
    return kExitIo;
  }
  if (as_json) {
    std::cout << text;
  } else {
    render(json::parse(text));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compress-and-forward relay rate evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cfr_version()));

  std::string spec_path;
  bool as_json = false;
  std::string report_path;

  auto* validate = app.add_subcommand("validate", "Check a channel spec file");
  validate->add_option("spec", spec_path, "Channel spec JSON file")->required();
  validate->add_flag("--json", as_json, "Print the issue list as JSON");

  std::string scheme = "all";
  std::string m_text;
  auto* rates = app.add_subcommand("rates", "Achievable rates of the relay schemes");
  rates->add_option("spec", spec_path, "Channel spec JSON file")->required();
  rates->add_option("--scheme", scheme, "all, cfs, cfj, ruj, cbs or cbj")
      ->check(CLI::IsMember({"all", "cfs", "cfj", "ruj", "cbs", "cbj"}));
  auto* m_opt = rates->add_option("--m", m_text, "Relay subset for RUJ, e.g. \"1,3\" or \"\"");
  rates->add_flag("--json", as_json, "Print the JSON report");
  rates->add_option("--report", report_path, "Also write the JSON report to this file");

  auto* sets = app.add_subcommand("sets", "Largest decodable relay subsets");
  sets->add_option("spec", spec_path, "Channel spec JSON file")->required();
  sets->add_flag("--json", as_json, "Print the JSON report");
  sets->add_option("--report", report_path, "Also write the JSON report to this file");

  cfr_search_config search;
  cfr_search_config_default(&search);
  std::string opt_scheme = "cfj";
  std::string free_blocks = "compressions";
  std::string out_path;
  bool enumerate = false;
  auto* optimize = app.add_subcommand("optimize", "Search compression distributions");
  optimize->add_option("spec", spec_path, "Template channel spec JSON file")->required();
  optimize->add_option("--scheme", opt_scheme, "cfs, cfj, ruj, cbs or cbj")
      ->check(CLI::IsMember({"cfs", "cfj", "ruj", "cbs", "cbj"}));
  optimize->add_option("--restarts", search.restarts, "Random restarts")->check(CLI::PositiveNumber);
  optimize->add_option("--iters", search.iterations, "Evaluations per restart")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--seed", search.seed, "Random seed")->required();
  optimize->add_option("--free", free_blocks, "Free blocks: compressions or all")
      ->check(CLI::IsMember({"compressions", "all"}));
  optimize->add_flag("--enumerate-deterministic", enumerate,
                     "Also evaluate every deterministic compression map");
  optimize->add_option("--threads", search.threads, "Worker threads")->check(CLI::PositiveNumber);
  optimize->add_option("--out", out_path, "Write the best spec to this file");
  optimize->add_flag("--json", as_json, "Print the JSON report");
  optimize->add_option("--report", report_path, "Also write the JSON report to this file");

  cfr_verify_config verify_cfg;
  cfr_verify_config_default(&verify_cfg);
  std::string suite = "lemmas";
  std::string mode = "digital";
  std::string alphabets = "2";
  auto* verify = app.add_subcommand("verify", "Randomized property suites");
  verify->add_option("--suite", suite, "lemmas, theorems or optima")
      ->check(CLI::IsMember({"lemmas", "theorems", "optima"}));
  verify->add_option("--instances", verify_cfg.instances, "Number of random instances");
  verify->add_option("--seed", verify_cfg.seed, "Random seed")->required();
  verify->add_option("--n", verify_cfg.n, "Relay count")->check(CLI::Range(1, 8));
  verify->add_option("--alphabets", alphabets,
                     "One size for every alphabet, or x,y,xi,yi,yhat");
  verify->add_option("--mode", mode, "digital, full or both")
      ->check(CLI::IsMember({"digital", "full", "both"}));
  verify->add_option("--degenerate-ratio", verify_cfg.degenerate_ratio,
                     "Share of point-mass columns")
      ->check(CLI::Range(0.0, 1.0));
  verify->add_option("--max-rate", verify_cfg.max_rate, "Upper end of the random relay rates")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--threads", verify_cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--restarts", verify_cfg.restarts, "Optimizer restarts (optima suite)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--iters", verify_cfg.iterations, "Evaluations per restart (optima suite)")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--json", as_json, "Print the JSON report");
  verify->add_option("--report", report_path, "Also write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  }

  if (validate->parsed()) {
    SpecPtr spec;
    if (int rc = load(spec_path, spec)) return rc;
    char* issues = nullptr;
    const cfr_status st = cfr_spec_validate(spec.get(), &issues);
    const std::string text = take(issues);
    if (st != CFR_OK && st != CFR_ERR_INVALID_SPEC) return fail(st);
    if (as_json) {
      std::cout << text;
    } else if (st == CFR_OK) {
      std::cout << spec_path << ": valid\n";
    } else {
      for (const auto& i : json::parse(text)) {
        std::cout << i["field"].get<std::string>() << ": " << i["message"].get<std::string>()
                  << "\n";
      }
    }
    return st == CFR_OK ? kExitOk : kExitDomain;
  }

  if (rates->parsed() || sets->parsed()) {
    SpecPtr spec;
    if (int rc = load(spec_path, spec)) return rc;
    ContextPtr ctx;
    if (int rc = make_context(spec.get(), ctx)) return rc;
    char* out = nullptr;
    cfr_status st;
    if (rates->parsed()) {
      std::uint32_t m = 0;
      const bool has_m = m_opt->count() > 0;
      if (has_m && !parse_subset(m_text, m)) {
        std::cerr << "error: cannot parse relay subset '" << m_text << "'\n";
        return kExitIo;
      }
      st = cfr_rates_report(ctx.get(), scheme.c_str(), has_m ? &m : nullptr, &out);
    } else {
      st = cfr_sets_report(ctx.get(), &out);
    }
    if (st != CFR_OK) return fail(st);
    const std::string text = take(out);
    if (rates->parsed()) {
      if (int rc = emit(text, as_json, report_path, render_rates)) return rc;
      // A single requested scheme that turns out infeasible is a domain failure.
      const json doc = json::parse(text);
      if (scheme != "all" && doc["schemes"][0]["rate"].is_string()) return kExitDomain;
      return kExitOk;
    }
    return emit(text, as_json, report_path, render_sets);
  }

  if (optimize->parsed()) {
    SpecPtr spec;
    if (int rc = load(spec_path, spec)) return rc;
    search.scheme = opt_scheme.c_str();
    search.free_all = free_blocks == "all" ? 1 : 0;
    search.enumerate_deterministic = enumerate ? 1 : 0;
    char* out = nullptr;
    cfr_spec* best_raw = nullptr;
    const cfr_status st = cfr_optimize(spec.get(), &search, &out, &best_raw);
    if (st != CFR_OK) return fail(st);
    SpecPtr best(best_raw);
    const std::string text = take(out);
    if (!out_path.empty()) {
      const cfr_status save = cfr_spec_save_file(best.get(), out_path.c_str());
      if (save != CFR_OK) return fail(save);
    }
    if (int rc = emit(text, as_json, report_path, render_optimize)) return rc;
    return json::parse(text)["best_objective"].is_null() ? kExitDomain : kExitOk;
  }

  if (verify->parsed()) {
    std::vector<int> sizes;
    {
      std::stringstream ss(alphabets);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          sizes.push_back(std::stoi(item));
        } catch (const std::exception&) {
          sizes.clear();
          break;
        }
      }
    }
    if (sizes.size() == 1) sizes.assign(5, sizes[0]);
    if (sizes.size() != 5) {
      std::cerr << "error: --alphabets takes one size or five comma-separated sizes\n";
      return kExitIo;
    }
    verify_cfg.alphabet_x = sizes[0];
    verify_cfg.alphabet_y = sizes[1];
    verify_cfg.alphabet_xi = sizes[2];
    verify_cfg.alphabet_yi = sizes[3];
    verify_cfg.alphabet_yhat = sizes[4];
    verify_cfg.suite = suite.c_str();
    verify_cfg.mode = mode.c_str();
    char* out = nullptr;
    int passed = 0;
    const cfr_status st = cfr_verify(&verify_cfg, &out, &passed);
    if (st != CFR_OK) return fail(st);
    if (int rc = emit(take(out), as_json, report_path, render_verify)) return rc;
    return passed ? kExitOk : kExitDomain;
  }
  return kExitIo;
}
