#include <doctest.h>

#include <cmath>

#include "cfrelay/error.hpp"
#include "cfrelay/set_functions.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace cfrelay;

namespace {

SubsetMask M(std::uint32_t bits) { return SubsetMask{bits}; }

}  // namespace

TEST_CASE("empty S gives exactly zero") {
  const auto inst = fixtures::random_instance(Mode::Full, 2, 3, 1);
  const auto ctx = EvalContext::from_spec(inst.spec, inst.rates);
  const auto all = ctx.all_relays();
  CHECK(eval_I(ctx, M(0), all, M(0)) == 0.0);
  CHECK(eval_J(ctx, M(0), all, M(0)) == 0.0);
  CHECK(eval_K(ctx, M(0), all, M(0)) == 0.0);
}

TEST_CASE("set functions match oracle compositions") {
  for (auto mode : {Mode::Digital, Mode::Full}) {
    for (std::uint64_t k = 0; k < 6; ++k) {
      const auto inst = fixtures::random_instance(mode, 2, 8, k);
      const auto ctx = EvalContext::from_spec(inst.spec, inst.rates);
      const auto o = oracle::naive_joint(inst.spec);
      const auto L = oracle::layout_of(inst.spec);
      for (std::uint32_t a = 0; a < 4; ++a) {
        for (std::uint32_t b = 0; b < 4; ++b) {
          if (a & b) continue;
          for (std::uint32_t s = b;; s = (s - 1) & b) {
            CHECK(std::abs(eval_I(ctx, M(a), M(b), M(s)) - oracle::I_fn(o, L, inst.rates, a, b, s)) <= 1e-10);
            if (mode == Mode::Full) {
              CHECK(std::abs(eval_J(ctx, M(a), M(b), M(s)) - oracle::JK_fn(o, L, a, b, s, false)) <= 1e-10);
              CHECK(std::abs(eval_K(ctx, M(a), M(b), M(s)) - oracle::JK_fn(o, L, a, b, s, true)) <= 1e-10);
              if (a == 0) CHECK(std::abs(eval_R(ctx, M(b), M(s)) - oracle::R_fn(o, L, b, s)) <= 1e-10);
            }
            if (s == 0) break;
          }
        }
      }
    }
  }
}

TEST_CASE("constant compressions cost nothing") {
  const auto inst = fixtures::random_instance(Mode::Digital, 2, 4, 0);
  const auto s = fixtures::with_constant_compressions(inst.spec);
  const auto ctx = EvalContext::from_spec(s, {0.3, 0.45});
  CHECK(eval_I(ctx, M(0), M(3), M(1)) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(eval_I(ctx, M(0), M(3), M(3)) == doctest::Approx(0.75).epsilon(1e-12));

  const auto full = fixtures::with_constant_compressions(fixtures::random_instance(Mode::Full, 2, 4, 0).spec);
  const auto fctx = EvalContext::from_spec(full);
  const auto o = oracle::naive_joint(full);
  const auto L = oracle::layout_of(full);
  // J(S) = I(X_S; Yhat_{S^c}, Y | X_{S^c}) >= 0 when the compression term vanishes.
  const double j2 = eval_J(fctx, M(0), M(3), M(2));
  CHECK(j2 >= 0.0);
  CHECK(std::abs(j2 - oracle::cmi(o, {L.xi(2)}, {L.yhat(1), L.y()}, {L.xi(1)})) <= 1e-10);
}

TEST_CASE("K with a source independent of the relays") {
  // Y depends on X_1, X_2 only; Yhat constant.
  const auto s = fixtures::with_constant_compressions(fixtures::make_full(
      2, 2, 2, 2, 2, 2,
      [](int, const std::vector<int>& xs, int y, const std::vector<int>& ys) {
        return fixtures::bsc(0.15, xs[0] ^ xs[1], y) * fixtures::bsc(0.3, xs[0], ys[0]) * fixtures::bsc(0.2, xs[1], ys[1]);
      },
      [](int, int, int, int) { return 0.5; }));
  const auto ctx = EvalContext::from_spec(s);
  const auto o = oracle::naive_joint(s);
  const auto L = oracle::layout_of(s);
  CHECK(std::abs(eval_K(ctx, M(0), M(3), M(1)) - oracle::cmi(o, {L.xi(1)}, {L.y()}, {L.x(), L.xi(2)})) <= 1e-10);
}

TEST_CASE("R reduces to the treat-as-noise and full-information forms") {
  const auto inst = fixtures::random_instance(Mode::Full, 2, 9, 2);
  const auto ctx = EvalContext::from_spec(inst.spec);
  const auto o = oracle::naive_joint(inst.spec);
  const auto L = oracle::layout_of(inst.spec);
  CHECK(std::abs(eval_R(ctx, M(0), M(0)) - oracle::cmi(o, {L.x()}, {L.y()})) <= 1e-10);
  CHECK(std::abs(eval_R(ctx, M(3), M(0)) -
                 oracle::cmi(o, {L.x()}, {L.yhat(1), L.yhat(2), L.y()}, {L.xi(1), L.xi(2)})) <= 1e-10);
}

TEST_CASE("interaction terms") {
  const auto inst = fixtures::random_instance(Mode::Full, 3, 12, 0);
  const auto ctx = EvalContext::from_spec(inst.spec);
  const auto o = oracle::naive_joint(inst.spec);
  const auto L = oracle::layout_of(inst.spec);
  const double expected = oracle::cmi(o, {L.xi(1), L.yhat(1)}, {L.xi(2), L.yhat(2)}, {L.xi(3), L.yhat(3), L.y()});
  CHECK(std::abs(eval_J_interaction(ctx, M(1), M(2)) - expected) <= 1e-10);
  const double expected_i = oracle::cmi(o, {L.yhat(1)}, {L.yhat(2)}, {L.yhat(3), L.y(), L.xi(1), L.xi(2), L.xi(3)});
  CHECK(std::abs(eval_I_interaction(ctx, M(1), M(2)) - expected_i) <= 1e-10);
}

TEST_CASE("argument checks") {
  const auto inst = fixtures::random_instance(Mode::Full, 2, 1, 0);
  const auto ctx = EvalContext::from_spec(inst.spec);
  CHECK_THROWS_AS(eval_J(ctx, M(1), M(3), M(2)), Error);
  CHECK_THROWS_AS(eval_J(ctx, M(0), M(1), M(2)), Error);
  CHECK_THROWS_AS(EvalContext::from_spec(inst.spec, {0.1}), Error);
  CHECK_THROWS_AS(EvalContext::from_spec(inst.spec, {0.1, -0.2}), Error);

  const auto dig = fixtures::random_instance(Mode::Digital, 2, 1, 0);
  const auto dctx = EvalContext::from_spec(dig.spec);
  try {
    eval_J(dctx, M(0), M(3), M(1));
    FAIL("expected a mode error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ModeMismatch);
  }
}
