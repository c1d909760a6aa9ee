#include <doctest.h>

#include <cmath>
#include <random>

#include "cfrelay/lp.hpp"
#include "oracle.hpp"

using namespace cfrelay;

TEST_CASE("max-min of two caps") {
  LinearProgram lp;
  lp.objective = {1.0};
  lp.free_variable = {true};
  lp.constraints = {{{1.0}, 3.0, Sense::LessEqual}, {{1.0}, 5.0, Sense::LessEqual}};
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.optimum == doctest::Approx(3.0));
  CHECK(r.witness[0] == doctest::Approx(3.0));
}

TEST_CASE("infeasible rate region") {
  LinearProgram lp;
  lp.objective = {0.0, 0.0};
  lp.constraints = {{{1.0, 1.0}, 1.0, Sense::LessEqual}, {{1.0, 0.0}, 2.0, Sense::GreaterEqual}};
  CHECK(solve_lp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded objective is reported") {
  LinearProgram lp;
  lp.objective = {1.0};
  lp.constraints = {{{1.0}, 0.0, Sense::GreaterEqual}};
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("equality rows and negative bounds") {
  LinearProgram lp;
  lp.objective = {1.0, 2.0};
  lp.constraints = {{{1.0, 1.0}, 1.0, Sense::Equal}, {{-1.0, 0.0}, -0.25, Sense::LessEqual}};
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.optimum == doctest::Approx(1.75));
  CHECK(r.max_residual <= 1e-9);
}

TEST_CASE("random bounded LPs agree with vertex enumeration") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 1.0);
  int optimal = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 3;
    LinearProgram lp;
    for (int k = 0; k < d; ++k) lp.objective.push_back(coef(rng));
    lp.free_variable.assign(static_cast<std::size_t>(d), false);
    if (trial % 4 == 0) lp.free_variable[0] = true;
    // A box keeps every instance bounded.
    for (int k = 0; k < d; ++k) {
      LinearConstraint up;
      up.coeffs.assign(static_cast<std::size_t>(d), 0.0);
      up.coeffs[static_cast<std::size_t>(k)] = 1.0;
      up.bound = 2.0;
      lp.constraints.push_back(up);
      LinearConstraint down = up;
      down.bound = -2.0;
      down.sense = Sense::GreaterEqual;
      lp.constraints.push_back(down);
    }
    const int extra = 1 + trial % 4;
    for (int e = 0; e < extra; ++e) {
      LinearConstraint c;
      for (int k = 0; k < d; ++k) c.coeffs.push_back(coef(rng));
      c.bound = coef(rng);
      c.sense = e % 3 == 0 ? Sense::GreaterEqual : Sense::LessEqual;
      lp.constraints.push_back(c);
    }
    const auto r = solve_lp(lp);
    const auto o = oracle::lp_by_vertices(lp);
    if (!o) {
      CHECK(r.status == LpStatus::Infeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(r.status == LpStatus::Optimal);
    ++optimal;
    CHECK(std::abs(r.optimum - *o) <= 1e-9);
    CHECK(r.max_residual <= 1e-9);
  }
  CHECK(optimal > 100);
  CHECK(infeasible > 0);
}
