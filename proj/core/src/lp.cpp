#include "conecert/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conecert/errors.hpp"
#include "conecert/tolerances.hpp"

namespace conecert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_program(const LinearProgram& p) {
  const int n = p.variable_count();
  const int m = p.row_count();
  if (static_cast<int>(p.lower_bounds.size()) != n) {
    throw InputError("lp: lower_bounds length differs from objective length");
  }
  if (p.constraints.rows() != m || (m > 0 && p.constraints.cols() != n)) {
    throw InputError("lp: constraint matrix shape does not match objective/rhs");
  }
  for (double v : p.objective)
    if (!std::isfinite(v)) throw InputError("lp: non-finite objective entry");
  for (double v : p.rhs)
    if (!std::isfinite(v)) throw InputError("lp: non-finite rhs entry");
  if (!p.constraints.all_finite()) throw InputError("lp: non-finite constraint entry");
  for (double v : p.lower_bounds) {
    if (std::isnan(v) || v == kInf) throw InputError("lp: lower bound must be finite or -inf");
  }
}

// Simplex tableau over the equality form E y = b, y >= 0, kept row-reduced
// with respect to the current basis.
struct Tableau {
  int rows = 0;
  int cols = 0;  // structural + slack + artificial
  std::vector<Vector> t;  // rows x (cols + 1); last column is the rhs
  std::vector<int> basis;
  Vector cost;            // reduced-cost row, length cols
  long pivots = 0;

  double& at(int i, int j) { return t[i][j]; }
  double& rhs(int i) { return t[i][cols]; }

  void pivot(int row, int col) {
    if (++pivots > tol::kLpPivotCap) {
      throw NumericalError("lp: pivot budget exceeded");
    }
    const double inv = 1.0 / t[row][col];
    for (double& v : t[row]) v *= inv;
    t[row][col] = 1.0;
    for (int i = 0; i < rows; ++i) {
      if (i == row) continue;
      const double f = t[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[row][j];
      t[i][col] = 0.0;
      if (t[i][cols] < 0.0 && t[i][cols] > -1e-11) t[i][cols] = 0.0;
    }
    const double cf = cost[col];
    if (cf != 0.0) {
      for (int j = 0; j < cols; ++j) cost[j] -= cf * t[row][j];
      cost[col] = 0.0;
    }
    basis[row] = col;
  }

  // Returns false when an entering column proves the problem unbounded; the
  // column index comes back through `unbounded_col`.
  bool run(int allowed_cols, int* unbounded_col) {
    while (true) {
      int entering = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (cost[j] < -tol::kLpReducedCostTol) {
          entering = j;  // Bland: smallest index wins
          break;
        }
      }
      if (entering < 0) return true;

      int leaving = -1;
      double best_ratio = kInf;
      for (int i = 0; i < rows; ++i) {
        const double a = t[i][entering];
        if (a <= tol::kLpPivotTol) continue;
        const double ratio = std::max(0.0, t[i][cols]) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && (leaving < 0 || basis[i] < basis[leaving]))) {
          best_ratio = ratio;
          leaving = i;
        }
      }
      if (leaving < 0) {
        if (unbounded_col) *unbounded_col = entering;
        return false;
      }
      pivot(leaving, entering);
    }
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& p) {
  validate_program(p);

  const int n = p.variable_count();
  const int m = p.row_count();

  // Shift finite lower bounds to zero; split free variables into a
  // difference of two nonnegative columns.
  std::vector<std::pair<int, double>> col_of;  // (original var, sign)
  Vector shift(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (p.lower_bounds[j] == -kInf) {
      col_of.push_back({j, 1.0});
      col_of.push_back({j, -1.0});
    } else {
      shift[j] = p.lower_bounds[j];
      col_of.push_back({j, 1.0});
    }
  }
  const int ny = static_cast<int>(col_of.size());

  Vector h(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double s = p.rhs[i];
    for (int j = 0; j < n; ++j) s -= p.constraints(i, j) * shift[j];
    h[i] = s;
  }

  // Columns: structural | slack | artificial (artificials only for rows
  // whose rhs had to be flipped nonnegative).
  std::vector<int> art_rows;
  for (int i = 0; i < m; ++i)
    if (h[i] < 0.0) art_rows.push_back(i);
  const int na = static_cast<int>(art_rows.size());

  Tableau tab;
  tab.rows = m;
  tab.cols = ny + m + na;
  tab.t.assign(m, Vector(tab.cols + 1, 0.0));
  tab.basis.assign(m, -1);

  int art_cursor = 0;
  for (int i = 0; i < m; ++i) {
    const double sign = h[i] < 0.0 ? -1.0 : 1.0;
    for (int k = 0; k < ny; ++k) {
      tab.at(i, k) = sign * p.constraints(i, col_of[k].first) * col_of[k].second;
    }
    tab.at(i, ny + i) = sign;  // slack
    tab.rhs(i) = sign * h[i];
    if (sign < 0.0) {
      const int art_col = ny + m + art_cursor++;
      tab.at(i, art_col) = 1.0;
      tab.basis[i] = art_col;
    } else {
      tab.basis[i] = ny + i;
    }
  }

  // Phase 1: drive the artificials to zero.
  if (na > 0) {
    tab.cost.assign(tab.cols, 0.0);
    for (int a = 0; a < na; ++a) tab.cost[ny + m + a] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] >= ny + m) {
        for (int j = 0; j < tab.cols; ++j) tab.cost[j] -= tab.t[i][j];
      }
    }
    tab.run(tab.cols, nullptr);  // bounded below by zero, cannot be unbounded

    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i)
      if (tab.basis[i] >= ny + m) infeasibility += std::max(0.0, tab.rhs(i));
    double h_scale = 1.0;
    for (double v : h) h_scale = std::max(h_scale, std::abs(v));
    if (infeasibility > 0.1 * tol::kLpFeasRel * h_scale) {
      return {LpStatus::Infeasible, {}, 0.0, {}};
    }

    // Pivot leftover zero-level artificials out; rows that offer no pivot
    // are redundant and get dropped.
    for (int i = 0; i < tab.rows; ++i) {
      if (tab.basis[i] < ny + m) continue;
      int col = -1;
      for (int j = 0; j < ny + m; ++j) {
        if (std::abs(tab.t[i][j]) > tol::kLpPivotTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(i, col);
      }
    }
    for (int i = tab.rows - 1; i >= 0; --i) {
      if (tab.basis[i] >= ny + m) {
        tab.t.erase(tab.t.begin() + i);
        tab.basis.erase(tab.basis.begin() + i);
        --tab.rows;
      }
    }
  }

  // Phase 2 over structural + slack columns only.
  Vector cy(tab.cols, 0.0);
  for (int k = 0; k < ny; ++k) cy[k] = p.objective[col_of[k].first] * col_of[k].second;
  tab.cost = cy;
  for (int i = 0; i < tab.rows; ++i) {
    const double cb = cy[tab.basis[i]];
    if (cb == 0.0) continue;
    for (int j = 0; j < tab.cols; ++j) tab.cost[j] -= cb * tab.t[i][j];
  }

  int unbounded_col = -1;
  const bool optimal = tab.run(ny + m, &unbounded_col);

  if (!optimal) {
    Vector dy(ny + m, 0.0);
    dy[unbounded_col] = 1.0;
    for (int i = 0; i < tab.rows; ++i) {
      if (tab.basis[i] < ny + m) dy[tab.basis[i]] = -tab.t[i][unbounded_col];
    }
    Vector ray(n, 0.0);
    for (int k = 0; k < ny; ++k) ray[col_of[k].first] += col_of[k].second * dy[k];
    return {LpStatus::Unbounded, {}, 0.0, std::move(ray)};
  }

  Vector y(tab.cols, 0.0);
  for (int i = 0; i < tab.rows; ++i) y[tab.basis[i]] = std::max(0.0, tab.rhs(i));
  Vector x = shift;
  for (int k = 0; k < ny; ++k) x[col_of[k].first] += col_of[k].second * y[k];

  double objective = 0.0;
  for (int j = 0; j < n; ++j) objective += p.objective[j] * x[j];
  return {LpStatus::Optimal, std::move(x), objective, {}};
}

}  // namespace conecert
