#include <doctest.h>

#include <cmath>
#include <random>

#include "conecert/errors.hpp"
#include "conecert/linalg.hpp"
#include "conecert/models.hpp"
#include "test_support.hpp"

using namespace conecert;
using conecert::testing::random_symmetric;

TEST_CASE("jacobi eigenvalues on hand-solved matrices") {
  SUBCASE("2x2 with known eigenvectors") {
    const Vector eigs = symmetric_eigenvalues(Matrix::from_rows({{0.6, 0.4}, {0.4, 0.6}}));
    REQUIRE(eigs.size() == 2);
    CHECK(eigs[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(eigs[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("diagonal comes back sorted") {
    const Vector eigs = symmetric_eigenvalues(Matrix::from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}));
    CHECK(eigs == Vector{1.0, 2.0, 3.0});
  }
  SUBCASE("virus mode m1") {
    const SystemDescription s = build_virus_example();
    const Vector eigs = symmetric_eigenvalues(s.modes[0].a);
    // Invariant-subspace factorization: lambda^2 - 0.9 lambda - 0.42 plus the
    // eigenvalue 0.2 on (0, 1, -1).
    const double root_hi = (0.9 + std::sqrt(2.49)) / 2.0;
    const double root_lo = (0.9 - std::sqrt(2.49)) / 2.0;
    REQUIRE(eigs.size() == 3);
    CHECK(eigs[0] == doctest::Approx(root_lo).epsilon(1e-3));
    CHECK(eigs[1] == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(eigs[2] == doctest::Approx(root_hi).epsilon(1e-3));
  }
}

TEST_CASE("jacobi rejects asymmetric input") {
  CHECK_THROWS_AS(symmetric_eigenvalues(Matrix::from_rows({{1, 2}, {0, 1}})), InputError);
  CHECK_THROWS_AS(symmetric_eigenvalues(Matrix::from_rows({{1, 2, 3}, {4, 5, 6}})), InputError);
}

TEST_CASE("jacobi eigenvectors reconstruct the matrix") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const Matrix m = random_symmetric(rng, n);
    const SymmetricEigen eig = symmetric_eigen(m);
    Matrix rebuilt(n, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          rebuilt(i, j) += eig.values[k] * eig.vectors(i, k) * eig.vectors(j, k);
    CHECK((rebuilt - m).max_abs() < 1e-9 * std::max(1.0, m.max_abs()));
  }
}

TEST_CASE("jacobi preserves trace and frobenius norm") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const Matrix m = random_symmetric(rng, n);
    const Vector eigs = symmetric_eigenvalues(m);
    double trace = 0.0;
    double sq = 0.0;
    for (int i = 0; i < n; ++i) trace += m(i, i);
    for (double l : eigs) sq += l * l;
    double eig_sum = 0.0;
    for (double l : eigs) eig_sum += l;
    const double f = m.frobenius_norm();
    CHECK(eig_sum == doctest::Approx(trace).epsilon(1e-9));
    CHECK(std::sqrt(sq) == doctest::Approx(f).epsilon(1e-9));
  }
}

TEST_CASE("cholesky on hand-solved matrices") {
  SUBCASE("identity") {
    const CholeskyResult res = cholesky(Matrix::identity(3));
    REQUIRE(res.positive_definite);
    CHECK((res.factor - Matrix::identity(3)).max_abs() == 0.0);
  }
  SUBCASE("2x2 factorization") {
    const CholeskyResult res = cholesky(Matrix::from_rows({{4, 2}, {2, 2}}));
    REQUIRE(res.positive_definite);
    CHECK(res.factor(0, 0) == doctest::Approx(2.0));
    CHECK(res.factor(1, 0) == doctest::Approx(1.0));
    CHECK(res.factor(1, 1) == doctest::Approx(1.0));
    CHECK(res.factor(0, 1) == 0.0);
  }
  SUBCASE("indefinite fails at the second pivot") {
    const CholeskyResult res = cholesky(Matrix::from_rows({{1, 2}, {2, 1}}));
    REQUIRE_FALSE(res.positive_definite);
    CHECK(res.failed_pivot == 1);
  }
}

TEST_CASE("cholesky succeeds exactly when the minimum eigenvalue is positive") {
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const Matrix m = random_symmetric(rng, n);
    const double min_eig = symmetric_eigenvalues(m).front();
    if (std::abs(min_eig) <= 1e-8) continue;
    ++checked;
    CHECK(cholesky(m).positive_definite == (min_eig > 0.0));
  }
  CHECK(checked >= 40);
}

TEST_CASE("solve_linear") {
  SUBCASE("identity") {
    CHECK(solve_linear(Matrix::identity(2), {1, 2}) == Vector{1, 2});
  }
  SUBCASE("diagonal") {
    const Vector x = solve_linear(Matrix::from_rows({{2, 0}, {0, 4}}), {2, 4});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));
  }
  SUBCASE("row swap") {
    const Vector x = solve_linear(Matrix::from_rows({{0, 1}, {1, 0}}), {3, 5});
    CHECK(x[0] == doctest::Approx(5.0));
    CHECK(x[1] == doctest::Approx(3.0));
  }
  SUBCASE("singular matrix raises") {
    CHECK_THROWS_AS(solve_linear(Matrix::from_rows({{1, 1}, {1, 1}}), {1, 2}), NumericalError);
  }
  SUBCASE("residual contract on random systems") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 8);
      Matrix a(n, n);
      Vector b(n);
      for (int i = 0; i < n; ++i) {
        b[i] = dist(rng);
        for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
        a(i, i) += 2.0;  // keep it comfortably nonsingular
      }
      const Vector x = solve_linear(a, b);
      Vector resid = a * x;
      for (int i = 0; i < n; ++i) resid[i] -= b[i];
      CHECK(max_abs(resid) <= 1e-9 * (a.inf_norm() * max_abs(x) + max_abs(b)));
    }
  }
}

TEST_CASE("max_singular_value") {
  CHECK(max_singular_value(Matrix::identity(4)) == doctest::Approx(1.0));
  CHECK(max_singular_value(Matrix::from_rows({{0, 2}, {0, 0}})) == doctest::Approx(2.0));
  CHECK(max_singular_value(Matrix(3, 3)) == 0.0);

  SUBCASE("random sampling never beats the reported value") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const int rows = 1 + static_cast<int>(rng() % 6);
      const int cols = 1 + static_cast<int>(rng() % 6);
      Matrix m(rows, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
      const double sigma = max_singular_value(m);
      for (int sample = 0; sample < 100; ++sample) {
        Vector v(cols);
        for (double& x : v) x = dist(rng);
        const double nv = norm2(v);
        if (nv == 0.0) continue;
        CHECK(norm2(m * v) / nv <= sigma * (1.0 + 1e-6));
      }
    }
  }
}
