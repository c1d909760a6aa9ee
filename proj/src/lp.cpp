#include "cfrelay/lp.hpp"

#include <algorithm>
#include <cmath>

#include "cfrelay/error.hpp"

namespace cfrelay {

namespace {

constexpr double kPivotEps = 1e-11;

// Dense tableau: rows 0..m-1 are constraints, row m is the objective row holding
// reduced costs (negative entries can still improve a maximization).
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& obj(std::size_t c) { return at(rows_, c); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t k = 0; k <= cols_; ++k) at(r, k) /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k <= cols_; ++k) at(i, k) -= f * at(r, k);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Loads maximize cost . x into the objective row and prices out the basis.
  void set_objective(const std::vector<double>& cost) {
    for (std::size_t c = 0; c <= cols_; ++c) obj(c) = c < cost.size() ? -cost[c] : 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double f = obj(basis_[r]);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k <= cols_; ++k) obj(k) -= f * at(r, k);
    }
  }

  // Bland's rule simplex. Returns false when unbounded.
  bool optimize(std::size_t allowed_cols) {
    while (true) {
      std::size_t enter = allowed_cols;
      for (std::size_t c = 0; c < allowed_cols; ++c) {
        if (obj(c) < -kPivotEps) {
          enter = c;
          break;
        }
      }
      if (enter == allowed_cols) return true;
      std::size_t leave = rows_;
      double best = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotEps) continue;
        const double ratio = rhs(r) / a;
        if (leave == rows_ || ratio < best - 1e-15 ||
            (ratio <= best + 1e-15 && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
    }
  }

  void drop_row(std::size_t r) {
    for (std::size_t i = r; i < rows_; ++i) {
      for (std::size_t k = 0; k <= cols_; ++k) at(i, k) = at(i + 1, k);
    }
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
    a_.resize((rows_ + 1) * (cols_ + 1));
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double feasibility_tol) {
  const std::size_t nv = lp.objective.size();
  if (!lp.free_variable.empty() && lp.free_variable.size() != nv) {
    throw Error(ErrorCode::InvalidArgument, "free_variable flags do not match the variables");
  }
  for (const auto& row : lp.constraints) {
    if (row.coeffs.size() != nv) {
      throw Error(ErrorCode::InvalidArgument, "constraint row length does not match the variables");
    }
  }
  auto is_free = [&](std::size_t j) { return !lp.free_variable.empty() && lp.free_variable[j]; };

  // Structural columns: one per variable plus a negative part for free ones.
  std::vector<std::size_t> neg_col(nv, 0);
  std::size_t ncols = nv;
  for (std::size_t j = 0; j < nv; ++j) {
    if (is_free(j)) neg_col[j] = ncols++;
  }
  const std::size_t structural = ncols;

  const std::size_t m = lp.constraints.size();
  std::vector<double> sign(m, 1.0);
  std::vector<Sense> sense(m);
  std::size_t slack_count = 0;
  std::size_t art_count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sense[i] = lp.constraints[i].sense;
    if (lp.constraints[i].bound < 0.0) {
      sign[i] = -1.0;
      if (sense[i] == Sense::LessEqual) {
        sense[i] = Sense::GreaterEqual;
      } else if (sense[i] == Sense::GreaterEqual) {
        sense[i] = Sense::LessEqual;
      }
    }
    if (sense[i] != Sense::Equal) ++slack_count;
    if (sense[i] != Sense::LessEqual) ++art_count;
  }
  const std::size_t art_begin = structural + slack_count;
  Tableau t(m, art_begin + art_count);

  std::size_t next_slack = structural;
  std::size_t next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.constraints[i];
    for (std::size_t j = 0; j < nv; ++j) {
      t.at(i, j) = sign[i] * row.coeffs[j];
      if (is_free(j)) t.at(i, neg_col[j]) = -sign[i] * row.coeffs[j];
    }
    t.rhs(i) = sign[i] * row.bound;
    if (sense[i] == Sense::LessEqual) {
      t.at(i, next_slack) = 1.0;
      t.basis()[i] = next_slack++;
    } else {
      if (sense[i] == Sense::GreaterEqual) t.at(i, next_slack++) = -1.0;
      t.at(i, next_art) = 1.0;
      t.basis()[i] = next_art++;
    }
  }

  LpResult result;
  if (art_count > 0) {
    std::vector<double> phase1(t.cols(), 0.0);
    for (std::size_t c = art_begin; c < t.cols(); ++c) phase1[c] = -1.0;
    t.set_objective(phase1);
    t.optimize(t.cols());
    if (-t.obj(t.cols()) > feasibility_tol) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive remaining artificials out of the basis, dropping redundant rows.
    for (std::size_t r = 0; r < t.rows();) {
      if (t.basis()[r] < art_begin) {
        ++r;
        continue;
      }
      std::size_t c = 0;
      for (; c < art_begin; ++c) {
        if (std::abs(t.at(r, c)) > 1e-9) break;
      }
      if (c < art_begin) {
        t.pivot(r, c);
        ++r;
      } else {
        t.drop_row(r);
      }
    }
  }

  std::vector<double> cost(t.cols(), 0.0);
  for (std::size_t j = 0; j < nv; ++j) {
    cost[j] = lp.objective[j];
    if (is_free(j)) cost[neg_col[j]] = -lp.objective[j];
  }
  t.set_objective(cost);
  if (!t.optimize(art_begin)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  std::vector<double> values(t.cols(), 0.0);
  for (std::size_t r = 0; r < t.rows(); ++r) values[t.basis()[r]] = t.rhs(r);
  result.status = LpStatus::Optimal;
  result.witness.assign(nv, 0.0);
  for (std::size_t j = 0; j < nv; ++j) {
    result.witness[j] = values[j] - (is_free(j) ? values[neg_col[j]] : 0.0);
    if (!is_free(j) && result.witness[j] < 0.0) {
      result.max_residual = std::max(result.max_residual, -result.witness[j]);
      result.witness[j] = 0.0;
    }
  }
  for (std::size_t j = 0; j < nv; ++j) result.optimum += lp.objective[j] * result.witness[j];
  for (const auto& row : lp.constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < nv; ++j) lhs += row.coeffs[j] * result.witness[j];
    double violation = 0.0;
    if (row.sense != Sense::GreaterEqual) violation = std::max(violation, lhs - row.bound);
    if (row.sense != Sense::LessEqual) violation = std::max(violation, row.bound - lhs);
    result.max_residual = std::max(result.max_residual, violation);
  }
  return result;
}

}  // namespace cfrelay
