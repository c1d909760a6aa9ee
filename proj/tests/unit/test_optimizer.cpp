#include <doctest.h>

#include <cmath>

#include "cfrelay/optimizer.hpp"
#include "cfrelay/report_json.hpp"
#include "cfrelay/spec_io.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace cfrelay;

namespace {

SearchConfig quick(SchemeId scheme, std::uint64_t seed) {
  SearchConfig cfg;
  cfg.scheme = scheme;
  cfg.seed = seed;
  cfg.restarts = 4;
  cfg.iterations = 600;
  return cfg;
}

}  // namespace

TEST_CASE("zero-dimensional search returns the fixed rate") {
  const auto spec = load_spec_file(fixtures::spec_path("full_n2_constant.json"));
  const auto res = optimize(spec, quick(SchemeId::CFJ, 1));
  CHECK(res.best_objective == scheme_objective(spec, SchemeId::CFJ));
  for (const auto& r : res.restarts) CHECK(r.final_objective == res.best_objective);
}

TEST_CASE("roomy link: CFS approaches I(X;Y_1,Y)") {
  const auto s = fixtures::make_digital(
      1, 2, 2, 2, 2,
      [](int x, int y, const std::vector<int>& ys) { return fixtures::bsc(0.25, x, y) * fixtures::bsc(0.1, x, ys[0]); },
      [](int, int, int) { return 0.5; }, {1.0});
  const auto o = oracle::naive_joint(s);
  const auto L = oracle::layout_of(s);
  const double target = oracle::cmi(o, {L.x()}, {L.yi(1), L.y()});
  const auto res = optimize(s, quick(SchemeId::CFS, 5));
  CHECK(res.best_objective >= target - 1e-3);
  CHECK(res.best_objective <= target + 1e-9);
}

TEST_CASE("deterministic enumeration on one binary relay") {
  for (std::uint64_t k = 0; k < 5; ++k) {
    const auto inst = fixtures::random_instance(Mode::Full, 1, 91, k);
    const auto res = enumerate_deterministic_compressions(inst.spec, SchemeId::CFJ);
    CHECK(res.maps == 16);
    // Exhaustive oracle over the 16 maps (x_1, y_1) -> yhat_1 via the closed form.
    double best = -1.0;
    for (int map = 0; map < 16; ++map) {
      auto s = inst.spec;
      for (int col = 0; col < 4; ++col) {
        const int out = (map >> (3 - col)) & 1;
        s.compressions[0][static_cast<std::size_t>(2 * col)] = out == 0 ? 1.0 : 0.0;
        s.compressions[0][static_cast<std::size_t>(2 * col + 1)] = out == 1 ? 1.0 : 0.0;
      }
      const auto o = oracle::naive_joint(s);
      best = std::max(best, std::max(0.0, oracle::single_relay_joint_rate(o, oracle::layout_of(s))));
    }
    CHECK(std::abs(res.best_objective - best) <= 1e-12);
  }
}

TEST_CASE("erasure perturbation endpoints") {
  const auto inst = fixtures::random_instance(Mode::Full, 2, 101, 0);
  const auto same = apply_erasure(inst.spec, SubsetMask::full(2), 1.0);
  CHECK(same.alphabet_yhat_i[0] == inst.spec.alphabet_yhat_i[0] + 1);
  for (auto id : {SchemeId::CFJ, SchemeId::RUJ, SchemeId::CBJ}) {
    CHECK(std::abs(scheme_objective(same, id) - scheme_objective(inst.spec, id)) <= 1e-12);
  }
  const auto erased = apply_erasure(inst.spec, SubsetMask::single(2), 0.0);
  const auto ctx = EvalContext::from_spec(erased);
  const auto o = oracle::naive_joint(erased);
  const auto L = oracle::layout_of(erased);
  CHECK(std::abs(oracle::cmi(o, {L.yi(2)}, {L.yhat(2)})) <= 1e-12);
  CHECK(std::abs(oracle::cmi(o, {L.yi(1)}, {L.yhat(1)}) - oracle::cmi(oracle::naive_joint(inst.spec), {L.yi(1)}, {L.yhat(1)})) <= 1e-12);
  CHECK(validate(erased).empty());
  CHECK(ctx.relays() == 2);
}

TEST_CASE("optimization is reproducible and thread-count independent") {
  const auto spec = load_spec_file(fixtures::spec_path("full_n2_fine.json"));
  auto cfg = quick(SchemeId::RUJ, 77);
  const auto a = dump_report(to_json(optimize(spec, cfg)));
  const auto b = dump_report(to_json(optimize(spec, cfg)));
  cfg.threads = 3;
  const auto c = dump_report(to_json(optimize(spec, cfg)));
  CHECK(a == b);
  CHECK(a == c);
  cfg.seed = 78;
  CHECK(a != dump_report(to_json(optimize(spec, cfg))));
}

TEST_CASE("reported optimum re-evaluates to the same rate") {
  const auto spec = load_spec_file(fixtures::spec_path("digital_n2.json"));
  const auto res = optimize(spec, quick(SchemeId::CFJ, 9));
  CHECK(scheme_objective(res.best_spec, SchemeId::CFJ) == res.best_objective);
  CHECK(res.best_objective >= scheme_objective(spec, SchemeId::CFJ));
  CHECK(validate(res.best_spec).empty());
}
