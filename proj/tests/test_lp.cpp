#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "conecert/errors.hpp"
#include "conecert/lp.hpp"

using namespace conecert;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Brute-force oracle: enumerate every basic solution from n active rows out
// of {constraint rows} + {bound rows}, keep the feasible ones, minimize.
struct VertexOracle {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
};

VertexOracle enumerate_vertices(const LinearProgram& p) {
  const int n = p.variable_count();
  const int m = p.row_count();
  // Rows: 0..m-1 from G, m..m+n-1 are x_j = lb_j activities.
  const int total = m + n;
  std::vector<int> pick(n);
  VertexOracle best;

  auto try_combo = [&](const std::vector<int>& rows) {
    // Solve the active set as a dense square system by elimination.
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int r = 0; r < n; ++r) {
      const int row = rows[r];
      if (row < m) {
        for (int j = 0; j < n; ++j) a[r][j] = p.constraints(row, j);
        a[r][n] = p.rhs[row];
      } else {
        const int j = row - m;
        if (p.lower_bounds[j] == kNegInf) return;
        a[r][j] = 1.0;
        a[r][n] = p.lower_bounds[j];
      }
    }
    for (int col = 0; col < n; ++col) {
      int piv = -1;
      for (int r = col; r < n; ++r)
        if (piv < 0 || std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      if (piv < 0 || std::abs(a[piv][col]) < 1e-10) return;
      std::swap(a[col], a[piv]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        for (int j = col; j <= n; ++j) a[r][j] -= f * a[col][j];
      }
    }
    Vector x(n);
    for (int j = 0; j < n; ++j) x[j] = a[j][n] / a[j][j];
    for (int i = 0; i < m; ++i) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += p.constraints(i, j) * x[j];
      if (lhs > p.rhs[i] + 1e-7) return;
    }
    for (int j = 0; j < n; ++j)
      if (p.lower_bounds[j] != kNegInf && x[j] < p.lower_bounds[j] - 1e-7) return;
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += p.objective[j] * x[j];
    best.feasible = true;
    best.objective = std::min(best.objective, obj);
  };

  std::vector<int> combo;
  auto recurse = [&](auto&& self, int from) -> void {
    if (static_cast<int>(combo.size()) == n) {
      try_combo(combo);
      return;
    }
    for (int r = from; r < total; ++r) {
      combo.push_back(r);
      self(self, r + 1);
      combo.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

}  // namespace

TEST_CASE("simple bounded minimum") {
  // min x subject to x >= 3 (as -x <= -3, lower bound 0)
  LinearProgram p;
  p.objective = {1.0};
  p.constraints = Matrix::from_rows({{-1.0}});
  p.rhs = {-3.0};
  p.lower_bounds = {0.0};
  const LpSolution sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(3.0));
  CHECK(sol.objective == doctest::Approx(3.0));
}

TEST_CASE("scalar certificate program has the closed-form optimum") {
  // Variables (p, gamma): 0.5 p - p + 1 <= 0 and p - gamma <= 0, p >= 1e-6.
  LinearProgram lp;
  lp.objective = {0.0, 1.0};
  lp.constraints = Matrix::from_rows({{-0.5, 0.0}, {1.0, -1.0}});
  lp.rhs = {-1.0, 0.0};
  lp.lower_bounds = {1e-6, 0.0};
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("infeasible system is classified") {
  // x <= -1 with x >= 0
  LinearProgram p;
  p.objective = {1.0};
  p.constraints = Matrix::from_rows({{1.0}});
  p.rhs = {-1.0};
  p.lower_bounds = {0.0};
  CHECK(solve_lp(p).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded problem reports a ray") {
  // min -x, x >= 0, no upper constraint
  LinearProgram p;
  p.objective = {-1.0};
  p.constraints = Matrix(0, 1);
  p.rhs = {};
  p.lower_bounds = {0.0};
  const LpSolution sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Unbounded);
  REQUIRE(sol.ray.size() == 1);
  CHECK(sol.ray[0] > 0.0);
}

TEST_CASE("free variables work through the split") {
  // min x + y with x free, y >= 0, x >= -5 via constraint -x <= 5.
  LinearProgram p;
  p.objective = {1.0, 1.0};
  p.constraints = Matrix::from_rows({{-1.0, 0.0}});
  p.rhs = {5.0};
  p.lower_bounds = {kNegInf, 0.0};
  const LpSolution sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(-5.0));
  CHECK(sol.x[1] == doctest::Approx(0.0));
}

TEST_CASE("degenerate duplicated rows do not cycle") {
  LinearProgram p;
  p.objective = {0.0, 1.0};
  Matrix g(6, 2);
  Vector h(6);
  for (int i = 0; i < 6; ++i) {
    g(i, 0) = -0.5;
    g(i, 1) = 0.0;
    h[i] = -1.0;  // six copies of the same binding row
  }
  g(5, 0) = 1.0;
  g(5, 1) = -1.0;
  h[5] = 0.0;
  p.constraints = g;
  p.rhs = h;
  p.lower_bounds = {0.0, 0.0};
  const LpSolution sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("input validation") {
  LinearProgram p;
  p.objective = {1.0, 2.0};
  p.constraints = Matrix::from_rows({{1.0}});
  p.rhs = {1.0};
  p.lower_bounds = {0.0, 0.0};
  CHECK_THROWS_AS(solve_lp(p), InputError);

  LinearProgram q;
  q.objective = {std::numeric_limits<double>::quiet_NaN()};
  q.constraints = Matrix(0, 1);
  q.rhs = {};
  q.lower_bounds = {0.0};
  CHECK_THROWS_AS(solve_lp(q), InputError);
}

TEST_CASE("simplex matches brute-force vertex enumeration on random programs") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.2, 1.5);
  int optimal_cases = 0;

  for (int trial = 0; trial < 80; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const int extra = 1 + static_cast<int>(rng() % 3);
    const int m = n + extra;  // upper-bound rows per variable keep it bounded
    LinearProgram p;
    p.objective.resize(n);
    for (double& c : p.objective) c = coef(rng);
    p.lower_bounds.assign(n, 0.0);
    p.constraints = Matrix(m, n);
    p.rhs.assign(m, 0.0);
    for (int j = 0; j < n; ++j) {
      p.constraints(j, j) = 1.0;
      p.rhs[j] = pos(rng);  // x_j <= u_j
    }
    for (int i = n; i < m; ++i) {
      for (int j = 0; j < n; ++j) p.constraints(i, j) = coef(rng);
      p.rhs[i] = coef(rng);
    }

    const VertexOracle oracle = enumerate_vertices(p);
    const LpSolution sol = solve_lp(p);
    if (oracle.feasible) {
      REQUIRE_MESSAGE(sol.status == LpStatus::Optimal, "trial ", trial);
      CHECK_MESSAGE(sol.objective ==
                        doctest::Approx(oracle.objective).epsilon(1e-7).scale(1.0),
                    "trial ", trial);
      // Reported point satisfies every row to the promised residual.
      double h_scale = 1.0;
      for (double v : p.rhs) h_scale = std::max(h_scale, std::abs(v));
      for (int i = 0; i < m; ++i) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) lhs += p.constraints(i, j) * sol.x[j];
        CHECK(lhs <= p.rhs[i] + 1e-8 * h_scale);
      }
      ++optimal_cases;
    } else {
      CHECK(sol.status == LpStatus::Infeasible);
    }
  }
  CHECK(optimal_cases >= 30);
}
