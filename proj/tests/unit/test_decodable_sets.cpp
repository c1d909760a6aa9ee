#include <doctest.h>

#include "cfrelay/decodable_sets.hpp"
#include "cfrelay/spec_io.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace cfrelay;

namespace {

// Feasibility of every F, straight from the oracle set functions.
std::vector<bool> oracle_table(const Instance& inst, FeasibilityKind kind) {
  const auto o = oracle::naive_joint(inst.spec);
  const auto L = oracle::layout_of(inst.spec);
  const std::uint32_t full = (1u << inst.spec.n) - 1u;
  std::vector<bool> ok(full + 1, true);
  for (std::uint32_t f = 0; f <= full; ++f) {
    for (std::uint32_t s = f; s != 0; s = (s - 1) & f) {
      double v = 0.0;
      bool strict = false;
      switch (kind) {
        case FeasibilityKind::I_NonStrict: v = oracle::I_fn(o, L, inst.rates, 0, f, s); break;
        case FeasibilityKind::J_NonStrict: v = oracle::JK_fn(o, L, 0, f, s, false); break;
        case FeasibilityKind::K_Strict: v = oracle::JK_fn(o, L, 0, f, s, true); strict = true; break;
        case FeasibilityKind::K_NonStrict: v = oracle::JK_fn(o, L, 0, f, s, true); break;
      }
      if (strict ? !(v > kStrictMargin) : !(v > -kStrictMargin)) ok[f] = false;
    }
  }
  return ok;
}

}  // namespace

TEST_CASE("largest feasible set agrees with exhaustive oracle checks") {
  for (std::uint64_t k = 0; k < 12; ++k) {
    const auto inst = fixtures::random_instance(Mode::Full, 3, 31, k);
    const auto ctx = EvalContext::from_spec(inst.spec, inst.rates);
    for (auto kind : {FeasibilityKind::I_NonStrict, FeasibilityKind::J_NonStrict, FeasibilityKind::K_Strict,
                      FeasibilityKind::K_NonStrict}) {
      const auto table = oracle_table(inst, kind);
      CHECK(feasible_set_table(ctx, kind) == table);
      std::uint32_t uni = 0;
      for (std::uint32_t f = 0; f < table.size(); ++f) {
        if (table[f]) uni |= f;
      }
      CHECK(largest_feasible_set(ctx, kind).bits() == uni);
    }
  }
}

TEST_CASE("constant compressions make every relay boundary-decodable") {
  const auto inst = fixtures::random_instance(Mode::Full, 2, 6, 0);
  const auto s = fixtures::with_constant_compressions(inst.spec);
  const auto ctx = EvalContext::from_spec(s);
  CHECK(largest_feasible_set(ctx, FeasibilityKind::J_NonStrict) == SubsetMask::full(2));
  CHECK(classify_relays(ctx).d_j_prime == SubsetMask::full(2));
}

TEST_CASE("a relay cut off from source and destination is undecodable") {
  // Y depends on X only; Y_1 is pure noise independent of X; Yhat_1 = Y_1.
  const auto s = fixtures::make_full(
      1, 2, 2, 2, 2, 2,
      [](int x, const std::vector<int>&, int y, const std::vector<int>& ys) {
        return fixtures::bsc(0.1, x, y) * (ys[0] == 0 ? 0.3 : 0.7);
      },
      [](int, int, int yi, int yh) { return fixtures::identity(yi, yh); });
  const auto ctx = EvalContext::from_spec(s);
  const auto rep = classify_relays(ctx);
  CHECK(rep.d_j.is_empty());
  CHECK(rep.d_j_prime.is_empty());
  REQUIRE(rep.classes.size() == 1);
  CHECK(rep.classes[0] == RelayClass::Undecodable);
  const auto o = oracle::naive_joint(s);
  CHECK(oracle::JK_fn(o, oracle::layout_of(s), 0, 1, 1, true) < 0.0);
}

TEST_CASE("peeling returns an exhaustively feasible subset") {
  int found = 0;
  for (std::uint64_t k = 0; k < 40; ++k) {
    const auto inst = fixtures::random_instance(Mode::Full, 3, 41, k);
    const auto ctx = EvalContext::from_spec(inst.spec, inst.rates);
    const auto all = ctx.all_relays();
    for (auto kind : {FeasibilityKind::I_NonStrict, FeasibilityKind::J_NonStrict}) {
      const auto c = peel_supported_subset(ctx, kind, SubsetMask::empty(), all);
      const bool pre = value_passes(kind, family_value(ctx, kind, SubsetMask::empty(), all, all));
      CHECK(c.has_value() == pre);
      if (!c) continue;
      ++found;
      CHECK_FALSE(c->is_empty());
      CHECK(c->subset_of(all));
      CHECK(feasible_set_table(ctx, kind)[c->bits()]);
      if (feasible_set_table(ctx, kind)[all.bits()]) CHECK(*c == all);
    }
  }
  CHECK(found > 0);
}

TEST_CASE("shipped fine-compression spec") {
  const auto spec = load_spec_file(fixtures::spec_path("full_n2_fine.json"));
  const auto ctx = EvalContext::from_spec(spec);
  const auto rep = classify_relays(ctx);
  CHECK(rep.d_j == SubsetMask::single(1));
  CHECK(rep.classes[1] == RelayClass::Undecodable);
  const auto o = oracle::naive_joint(spec);
  const auto L = oracle::layout_of(spec);
  CHECK(oracle::JK_fn(o, L, 0, 3, 2, true) < -0.1);
  CHECK(oracle::JK_fn(o, L, 0, 1, 1, true) > 0.1);
}
