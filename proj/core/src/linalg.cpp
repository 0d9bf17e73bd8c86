#include "conecert/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <random>

#include "conecert/errors.hpp"
#include "conecert/tolerances.hpp"

namespace conecert {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

void require_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("symmetric eigensolver needs a square matrix");
  if (!is_symmetric(m)) throw InputError("matrix asymmetry exceeds the symmetry tolerance");
}

// One two-sided rotation in the (p,q) plane, accumulated into v.
void jacobi_rotate(Matrix& a, Matrix& v, int p, int q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);

  const double app = a(p, p);
  const double aqq = a(q, q);
  a(p, p) = app - t * apq;
  a(q, q) = aqq + t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  const int n = a.rows();
  for (int r = 0; r < n; ++r) {
    if (r != p && r != q) {
      const double arp = a(r, p);
      const double arq = a(r, q);
      a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
      a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
    }
    const double vrp = v(r, p);
    const double vrq = v(r, q);
    v(r, p) = vrp - s * (vrq + tau * vrp);
    v(r, q) = vrq + s * (vrp - tau * vrq);
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(const Matrix& m) {
  require_symmetric(m);
  Matrix a = symmetrized(m);
  const int n = a.rows();
  Matrix v = Matrix::identity(n);

  const double target = tol::kJacobiOffRel * a.frobenius_norm();
  // Rotations on entries already below this cannot move the off-diagonal
  // norm past the target; skipping them keeps sweeps cheap near convergence.
  const double skip = n > 1 ? target / (n * n) : 0.0;

  bool converged = off_diagonal_norm(a) <= target;
  for (int sweep = 0; sweep < tol::kJacobiMaxSweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::abs(a(p, q)) > skip) jacobi_rotate(a, v, p, q);
    converged = off_diagonal_norm(a) <= target;
  }
  if (!converged) throw NumericalError("Jacobi eigensolver did not converge within the sweep cap");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (int r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

Vector symmetric_eigenvalues(const Matrix& m) { return symmetric_eigen(m).values; }

CholeskyResult cholesky(const Matrix& m) {
  require_symmetric(m);
  const int n = m.rows();
  CholeskyResult result;
  result.factor = Matrix(n, n);
  Matrix& l = result.factor;

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.5 * (m(i, j) + m(j, i));
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0) {
          result.positive_definite = false;
          result.failed_pivot = i;
          result.factor = Matrix();
          return result;
        }
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  result.positive_definite = true;
  return result;
}

Vector solve_linear(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols()) throw InputError("solve_linear needs a square matrix");
  if (static_cast<int>(b.size()) != a.rows()) throw InputError("right-hand side length mismatch");

  const int n = a.rows();
  const double pivot_floor = tol::kSingularPivotRel * a.inf_norm();
  Matrix work = a;
  Vector rhs = b;

  for (int col = 0; col < n; ++col) {
    int pivot_row = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(work(r, col)) > std::abs(work(pivot_row, col))) pivot_row = r;
    if (std::abs(work(pivot_row, col)) <= pivot_floor) {
      throw NumericalError("solve_linear: matrix is singular to working precision");
    }
    if (pivot_row != col) {
      for (int c = col; c < n; ++c) std::swap(work(col, c), work(pivot_row, c));
      std::swap(rhs[col], rhs[pivot_row]);
    }
    const double inv = 1.0 / work(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = work(r, col) * inv;
      if (f == 0.0) continue;
      work(r, col) = 0.0;
      for (int c = col + 1; c < n; ++c) work(r, c) -= f * work(col, c);
      rhs[r] -= f * rhs[col];
    }
  }

  Vector x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < n; ++c) s -= work(r, c) * x[c];
    x[r] = s / work(r, r);
  }
  return x;
}

namespace {

// Power iteration on the Gram operator v -> M^T (M v).
double gram_power_iteration(const Matrix& m) {
  const int dim = m.cols();
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double best = 0.0;
  const int restarts = 3;
  const int per_restart = tol::kPowerIterCap / restarts;
  for (int attempt = 0; attempt < restarts; ++attempt) {
    Vector v(dim);
    for (double& x : v) x = gauss(rng);
    const double nv = norm2(v);
    if (nv == 0.0) continue;
    for (double& x : v) x /= nv;

    double lambda = 0.0;
    for (int it = 0; it < per_restart; ++it) {
      Vector w = transpose_times(m, m * v);
      const double nw = norm2(w);
      if (nw == 0.0) {
        lambda = 0.0;
        break;
      }
      const double next = dot(v, w);  // Rayleigh quotient for M^T M
      for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
      if (it > 0 && std::abs(next - lambda) <= tol::kPowerIterRel * std::max(1e-300, next)) {
        lambda = next;
        break;
      }
      lambda = next;
    }
    best = std::max(best, lambda);
  }
  return std::sqrt(std::max(0.0, best));
}

}  // namespace

double max_singular_value(const Matrix& m) {
  if (m.empty()) return 0.0;
  if (m.max_abs() == 0.0) return 0.0;

  const int small_side = std::min(m.rows(), m.cols());
  if (small_side <= tol::kJacobiSizeLimit) {
    // Gram matrix on the smaller side keeps the Jacobi problem tight.
    const Matrix g = m.rows() >= m.cols() ? m.transposed() * m : m * m.transposed();
    const Vector eigs = symmetric_eigenvalues(symmetrized(g));
    return std::sqrt(std::max(0.0, eigs.back()));
  }
  return gram_power_iteration(m);
}

}  // namespace conecert
