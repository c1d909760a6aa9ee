#include <doctest.h>

#include <cmath>

#include "cfrelay/error.hpp"
#include "cfrelay/pmf.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace cfrelay;

namespace {

VarSet X() { return VarSet::source(); }
VarSet Y() { return VarSet::destination(); }

JointPmf two_variable(const std::vector<double>& probs) {
  return JointPmf({{VarKind::Source, 0}, {VarKind::Destination, 0}}, {2, 2}, probs);
}

bool has_issue(const ChannelSpec& s, const std::string& needle) {
  for (const auto& i : validate(s)) {
    if ((i.field + ": " + i.message).find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("canonical order drops relay inputs in digital mode") {
  const auto full = canonical_order(Mode::Full, 2);
  REQUIRE(full.size() == 8);
  CHECK(full[1] == VarId{VarKind::RelayInput, 1});
  CHECK(full[3] == VarId{VarKind::Destination, 0});
  CHECK(full[7] == VarId{VarKind::Compression, 2});
  const auto dig = canonical_order(Mode::Digital, 2);
  REQUIRE(dig.size() == 6);
  CHECK(dig[1] == VarId{VarKind::Destination, 0});
}

TEST_CASE("uniform digital n=1 joint is flat") {
  const auto s = fixtures::make_digital(
      1, 2, 2, 2, 2, [](int, int, const std::vector<int>&) { return 0.25; },
      [](int, int, int) { return 0.5; }, {0.3});
  const auto j = build_joint(s);
  REQUIRE(j.probs().size() == 16);
  for (double p : j.probs()) CHECK(p == doctest::Approx(1.0 / 16).epsilon(1e-15));
}

TEST_CASE("deterministic wiring gives four cells of 1/4") {
  const auto s = fixtures::make_full(
      1, 2, 2, 2, 2, 2,
      [](int x, const std::vector<int>&, int y, const std::vector<int>& ys) {
        return fixtures::identity(x, y) * fixtures::identity(x, ys[0]);
      },
      [](int, int, int yi, int yh) { return fixtures::identity(yi, yh); });
  const auto j = build_joint(s);
  int nonzero = 0;
  for (double p : j.probs()) {
    if (p != 0.0) {
      ++nonzero;
      CHECK(p == 0.25);
    }
  }
  CHECK(nonzero == 4);
}

TEST_CASE("joint tensor matches the nested-loop oracle") {
  for (auto mode : {Mode::Digital, Mode::Full}) {
    for (std::uint64_t k = 0; k < 10; ++k) {
      const auto inst = fixtures::random_instance(mode, 2, 11, k);
      const auto j = build_joint(inst.spec);
      const auto o = oracle::naive_joint(inst.spec);
      REQUIRE(j.probs().size() == o.cells.size());
      CHECK(j.cardinalities() == o.cards);
      for (std::size_t c = 0; c < o.cells.size(); ++c) {
        CHECK(std::abs(j.probs()[c] - o.cells[c].second) <= 1e-15);
      }
    }
  }
}

TEST_CASE("marginalization") {
  const auto inst = fixtures::random_instance(Mode::Full, 2, 5, 3);
  const auto j = build_joint(inst.spec);

  const auto mx = marginalize(j, X());
  REQUIRE(mx.probs().size() == inst.spec.p_x.size());
  for (std::size_t k = 0; k < mx.probs().size(); ++k) CHECK(std::abs(mx.probs()[k] - inst.spec.p_x[k]) <= 1e-15);

  const VarSet all = X() | Y() | VarSet::relay_inputs(SubsetMask::full(2)) |
                     VarSet::relay_outputs(SubsetMask::full(2)) | VarSet::compressions(SubsetMask::full(2));
  CHECK(marginalize(j, all).probs() == j.probs());

  // {Y, Yhat_1}: positions 3 and 6 in the full n=2 order.
  const auto m = marginalize(j, Y() | VarSet::compressions(SubsetMask::single(1)));
  const auto o = oracle::marginal(oracle::naive_joint(inst.spec), {3, 6});
  REQUIRE(m.probs().size() == o.size());
  std::size_t k = 0;
  for (const auto& [t, p] : o) CHECK(std::abs(m.probs()[k++] - p) <= 1e-15);
}

TEST_CASE("entropy and mutual information on small channels") {
  const auto uniform_copy = two_variable({0.5, 0.0, 0.0, 0.5});
  CHECK(cond_entropy(uniform_copy, X(), {}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cond_entropy(uniform_copy, Y(), X()) == doctest::Approx(0.0));
  CHECK(cond_mutual_info(uniform_copy, X(), Y()) == doctest::Approx(1.0).epsilon(1e-15));

  const auto independent = two_variable({0.06, 0.14, 0.24, 0.56});
  CHECK(std::abs(cond_mutual_info(independent, X(), Y())) <= 1e-15);

  const double eps = 0.11;
  const auto flip = two_variable({0.5 * (1 - eps), 0.5 * eps, 0.5 * eps, 0.5 * (1 - eps)});
  const double expected = 1.0 - oracle::h2(eps);
  CHECK(std::abs(cond_mutual_info(flip, X(), Y()) - expected) <= 1e-12);
  CHECK(expected == doctest::Approx(0.5001).epsilon(1e-3));

  CHECK(cond_mutual_info(flip, {}, Y()) == 0.0);
}

TEST_CASE("entropy matches the oracle on random n=1 joints") {
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto inst = fixtures::random_instance(Mode::Full, 1, 21, k, 3);
    const auto j = build_joint(inst.spec);
    const auto o = oracle::naive_joint(inst.spec);
    const VarSet all = X() | Y() | VarSet::relay_inputs(SubsetMask::single(1)) |
                       VarSet::relay_outputs(SubsetMask::single(1)) | VarSet::compressions(SubsetMask::single(1));
    CHECK(std::abs(cond_entropy(j, all, {}) - oracle::entropy(o, {0, 1, 2, 3, 4})) <= 1e-10);
    CHECK(std::abs(cond_entropy(j, Y(), X()) - (oracle::entropy(o, {0, 2}) - oracle::entropy(o, {0}))) <= 1e-10);
  }
}

TEST_CASE("overlapping arguments and absent variables") {
  const auto inst = fixtures::random_instance(Mode::Digital, 1, 2, 0);
  const auto j = build_joint(inst.spec);
  CHECK_THROWS_AS(cond_mutual_info(j, X(), X()), Error);
  CHECK_THROWS_AS(cond_mutual_info(j, VarSet::relay_inputs(SubsetMask::single(1)), Y()), Error);
}

TEST_CASE("validation names the offending row") {
  auto s = fixtures::make_digital(
      1, 2, 2, 2, 2,
      [](int x, int y, const std::vector<int>& ys) { return fixtures::bsc(0.2, x, y) * fixtures::bsc(0.1, x, ys[0]); },
      [](int, int yi, int yh) { return fixtures::identity(yi, yh); }, {0.5});
  CHECK(validate(s).empty());

  auto row = s;
  row.compressions[0] = {0.9, 0.0, 0.0, 1.0};
  CHECK(has_issue(row, "compressions[0]"));
  CHECK(has_issue(row, "0.9"));
  CHECK_THROWS_AS(require_valid(row), Error);

  auto dims = s;
  dims.alphabet_y = 3;
  CHECK_FALSE(validate(dims).empty());

  auto neg = s;
  neg.p_x = {1.2, -0.2};
  CHECK_FALSE(validate(neg).empty());

  auto tiny = s;
  tiny.p_x = {1.0 + 1e-16, -1e-16};
  CHECK(validate(tiny).empty());

  auto mixed = s;
  mixed.p_xi = {{0.5, 0.5}};
  CHECK_FALSE(validate(mixed).empty());
}
