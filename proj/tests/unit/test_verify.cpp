#include <doctest.h>

#include "cfrelay/report_json.hpp"
#include "cfrelay/verify.hpp"
#include "fixtures.hpp"

using namespace cfrelay;

namespace {

InstanceGenerator gen(Mode mode, int n, std::uint64_t seed) {
  InstanceGenerator g;
  g.mode = mode;
  g.n = n;
  g.seed = seed;
  return g;
}

}  // namespace

TEST_CASE("instance streams depend only on seed and index") {
  const auto g = gen(Mode::Full, 2, 5);
  const auto a = generate_instance(g, 7);
  const auto b = generate_instance(g, 7);
  CHECK(a.spec.channel == b.spec.channel);
  CHECK(a.rates == b.rates);
  CHECK(generate_instance(g, 8).spec.channel != a.spec.channel);
  CHECK(validate(a.spec).empty());
}

TEST_CASE("degenerate columns appear when requested") {
  auto g = gen(Mode::Digital, 1, 3);
  g.degenerate_ratio = 1.0;
  const auto inst = generate_instance(g, 0);
  for (double p : inst.spec.p_x) CHECK((p == 0.0 || p == 1.0));
}

TEST_CASE("lemma suite passes on both modes") {
  for (auto mode : {Mode::Digital, Mode::Full}) {
    const auto rep = run_lemma_suite(gen(mode, 2, 7), 25);
    CHECK(rep.passed());
    CHECK(rep.instances == 25);
    CHECK(rep.max_residual() < 1e-9);
    CHECK(rep.checks.count(mode == Mode::Digital ? "i-interaction-identity" : "j-interaction-identity") == 1);
  }
}

TEST_CASE("theorem suite passes on full n=3") {
  const auto rep = run_theorem_suite(gen(Mode::Full, 3, 7), 20);
  CHECK(rep.passed());
  CHECK(rep.checks.at("best-subset-at-DJ").evaluated == 20);
}

TEST_CASE("suite reports are identical for any thread count") {
  const auto g = gen(Mode::Full, 2, 13);
  const auto one = dump_report(to_json(run_lemma_suite(g, 30, 1)));
  const auto four = dump_report(to_json(run_lemma_suite(g, 30, 4)));
  CHECK(one == four);
  CHECK(one == dump_report(to_json(run_lemma_suite(g, 30, 1))));
  const auto parsed = nlohmann::json::parse(one);
  CHECK(dump_report(parsed) == one);
}
