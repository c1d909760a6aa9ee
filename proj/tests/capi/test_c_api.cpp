#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cfrelay/cfrelay.h>

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace {

std::string spec_file(const char* name) { return std::string(CFRELAY_SPEC_DIR) + "/" + name; }

std::string take(char* s) {
  std::string out = s ? s : "";
  cfr_string_free(s);
  return out;
}

cfr_spec* load(const char* name) {
  cfr_spec* s = nullptr;
  REQUIRE(cfr_spec_load_file(spec_file(name).c_str(), &s) == CFR_OK);
  return s;
}

}  // namespace

TEST_CASE("spec lifecycle and errors") {
  cfr_spec* s = nullptr;
  CHECK(cfr_spec_load_file("/nonexistent.json", &s) == CFR_ERR_IO);
  CHECK(std::string(cfr_last_error()).find("nonexistent") != std::string::npos);
  CHECK(cfr_spec_parse("{", &s) == CFR_ERR_PARSE);
  CHECK(cfr_spec_load_file(spec_file("digital_n2.json").c_str(), nullptr) == CFR_ERR_ARGUMENT);

  s = load("digital_n2.json");
  CHECK(cfr_spec_relays(s) == 2);
  CHECK(cfr_spec_is_digital(s) == 1);
  char* issues = nullptr;
  CHECK(cfr_spec_validate(s, &issues) == CFR_OK);
  CHECK(take(issues) == "[]\n");

  char* text = nullptr;
  REQUIRE(cfr_spec_to_json(s, &text) == CFR_OK);
  auto doc = nlohmann::json::parse(take(text));
  doc["p_x"] = {0.5, 0.4};
  cfr_spec* bad = nullptr;
  REQUIRE(cfr_spec_parse(doc.dump().c_str(), &bad) == CFR_OK);
  CHECK(cfr_spec_validate(bad, &issues) == CFR_ERR_INVALID_SPEC);
  CHECK(take(issues).find("p_x") != std::string::npos);
  cfr_context* ctx = nullptr;
  CHECK(cfr_context_create(bad, nullptr, 0, &ctx) == CFR_ERR_INVALID_SPEC);
  cfr_spec_free(bad);
  cfr_spec_free(s);
  cfr_spec_free(nullptr);
}

TEST_CASE("information quantities through the C interface") {
  cfr_spec* s = load("full_n2_fine.json");
  cfr_context* ctx = nullptr;
  REQUIRE(cfr_context_create(s, nullptr, 0, &ctx) == CFR_OK);
  const cfr_varset x{1, 0, 0, 0, 0};
  const cfr_varset y{0, 1, 0, 0, 0};
  const cfr_varset none{0, 0, 0, 0, 0};
  double hx = 0.0;
  REQUIRE(cfr_cond_entropy(ctx, x, none, &hx) == CFR_OK);
  CHECK(hx == doctest::Approx(1.0));
  double ixy = 0.0;
  REQUIRE(cfr_cond_mutual_info(ctx, x, y, none, &ixy) == CFR_OK);
  CHECK(ixy > 0.0);

  double k = 0.0;
  REQUIRE(cfr_set_function(ctx, CFR_FAMILY_K, 0, 3, 2, &k) == CFR_OK);
  CHECK(k < 0.0);
  CHECK(cfr_set_function(ctx, CFR_FAMILY_J, 1, 3, 1, &k) == CFR_ERR_ARGUMENT);

  uint32_t dj = 0;
  REQUIRE(cfr_largest_feasible_set(ctx, CFR_K_STRICT, &dj) == CFR_OK);
  CHECK(dj == 1u);
  uint32_t peeled = 0;
  int found = -1;
  REQUIRE(cfr_peel_supported_subset(ctx, CFR_J_NONSTRICT, 0, 1, &peeled, &found) == CFR_OK);
  CHECK(found == 1);
  CHECK(peeled == 1u);

  double r[2] = {0.1, 0.2};
  cfr_context* bad = nullptr;
  CHECK(cfr_context_create(s, r, 1, &bad) == CFR_ERR_ARGUMENT);
  cfr_context_free(ctx);
  cfr_spec_free(s);
}

TEST_CASE("rates report") {
  cfr_spec* s = load("full_n2_fine.json");
  cfr_context* ctx = nullptr;
  REQUIRE(cfr_context_create(s, nullptr, 0, &ctx) == CFR_OK);
  char* out = nullptr;
  REQUIRE(cfr_rates_report(ctx, "all", nullptr, &out) == CFR_OK);
  const auto doc = nlohmann::json::parse(take(out));
  REQUIRE(doc["schemes"].size() == 5);
  CHECK(doc["schemes"][0]["rate"] == "infeasible");
  CHECK(doc["schemes"][3]["rate"] == "infeasible");
  CHECK(doc["schemes"][4]["d_j"] == nlohmann::json::array({1}));

  const uint32_t empty = 0;
  REQUIRE(cfr_rates_report(ctx, "ruj", &empty, &out) == CFR_OK);
  const auto ruj = nlohmann::json::parse(take(out));
  CHECK(std::abs(ruj["schemes"][0]["rate"].get<double>() - doc["quantities"]["I(X;Y)"].get<double>()) < 1e-12);
  CHECK(cfr_rates_report(ctx, "bogus", nullptr, &out) == CFR_ERR_ARGUMENT);
  cfr_context_free(ctx);
  cfr_spec_free(s);

  s = load("digital_n2.json");
  REQUIRE(cfr_context_create(s, nullptr, 0, &ctx) == CFR_OK);
  CHECK(cfr_rates_report(ctx, "cbs", nullptr, &out) == CFR_ERR_MODE);
  REQUIRE(cfr_rates_report(ctx, "all", nullptr, &out) == CFR_OK);
  CHECK(nlohmann::json::parse(take(out))["schemes"].size() == 2);
  REQUIRE(cfr_sets_report(ctx, &out) == CFR_OK);
  CHECK(nlohmann::json::parse(take(out)).contains("families"));
  cfr_context_free(ctx);
  cfr_spec_free(s);
}

TEST_CASE("optimize and verify") {
  cfr_spec* s = load("digital_n1_erasure.json");
  cfr_search_config cfg;
  cfr_search_config_default(&cfg);
  cfg.scheme = "cfj";
  cfg.restarts = 2;
  cfg.iterations = 200;
  cfg.seed = 4;
  char* out = nullptr;
  cfr_spec* best = nullptr;
  REQUIRE(cfr_optimize(s, &cfg, &out, &best) == CFR_OK);
  const std::string first = take(out);
  REQUIRE(cfr_optimize(s, &cfg, &out, nullptr) == CFR_OK);
  CHECK(take(out) == first);
  CHECK(best != nullptr);
  cfr_spec_free(best);
  cfg.scheme = "cbs";
  CHECK(cfr_optimize(s, &cfg, &out, nullptr) == CFR_ERR_MODE);
  cfr_spec_free(s);

  cfr_verify_config v;
  cfr_verify_config_default(&v);
  v.instances = 10;
  v.seed = 7;
  int passed = 0;
  REQUIRE(cfr_verify(&v, &out, &passed) == CFR_OK);
  CHECK(passed == 1);
  const auto doc = nlohmann::json::parse(take(out));
  CHECK(doc["suite"] == "lemmas");
  v.suite = "bogus";
  CHECK(cfr_verify(&v, &out, &passed) == CFR_ERR_ARGUMENT);
}
