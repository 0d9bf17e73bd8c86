#include <doctest.h>

#include <random>

#include "conecert/cone.hpp"
#include "conecert/errors.hpp"
#include "test_support.hpp"

using namespace conecert;
using conecert::testing::random_symmetric;

TEST_CASE("orthant membership") {
  const ConeId orthant = ConeId::nonneg_orthant(2);
  CHECK(in_cone(orthant, Vector{0.0, 0.0}, 0.0));
  CHECK_FALSE(in_cone(orthant, Vector{1.0, -1e-3}, 1e-6));
  CHECK(in_cone(orthant, Vector{1.0, -1e-9}, 1e-6));
}

TEST_CASE("psd membership") {
  const ConeId psd = ConeId::psd(2);
  // Eigenvalues 3 and -1.
  CHECK_FALSE(in_cone(psd, Matrix::from_rows({{1, 2}, {2, 1}}), 1e-9));
  CHECK(in_cone(psd, Matrix::identity(2), 0.0));
}

TEST_CASE("dual interior") {
  CHECK(in_dual_interior(ConeId::nonneg_orthant(3), Vector{1, 1, 1}, 1e-6));
  CHECK_FALSE(in_dual_interior(ConeId::nonneg_orthant(3), Vector{1, 0, 1}, 1e-6));
  CHECK(in_dual_interior(ConeId::psd(2), Matrix::identity(2), 0.5));
  CHECK_FALSE(in_dual_interior(ConeId::psd(2), Matrix::from_rows({{1, 0}, {0, 0}}), 1e-9));
}

TEST_CASE("input errors") {
  CHECK_THROWS_AS(ConeId::nonneg_orthant(0), InputError);
  CHECK_THROWS_AS(in_cone(ConeId::nonneg_orthant(2), Vector{1.0}, 0.0), InputError);
  CHECK_THROWS_AS(in_cone(ConeId::nonneg_orthant(2), Matrix::identity(2), 0.0), InputError);
  CHECK_THROWS_AS(in_cone(ConeId::psd(2), Matrix::identity(3), 0.0), InputError);
  CHECK_THROWS_AS(in_cone(ConeId::psd(2), Vector{1.0, 1.0}, 0.0), InputError);
  CHECK_THROWS_AS(in_cone(ConeId::psd(2), Matrix::from_rows({{1, 1}, {0, 1}}), 0.0), InputError);
  CHECK_THROWS_AS(in_dual_interior(ConeId::psd(2), Matrix::identity(2), 0.0), InputError);
  CHECK_THROWS_AS(in_cone(ConeId::psd(2), Matrix::identity(2), -1.0), InputError);
}

TEST_CASE("dual interior implies membership, and membership is scale invariant") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);

  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 5);
    if (trial % 2 == 0) {
      const ConeId cone = ConeId::nonneg_orthant(dim);
      Vector v(dim);
      for (double& x : v) x = dist(rng);
      if (in_dual_interior(cone, v, 1e-9)) CHECK(in_cone(cone, v, 0.0));
      const double alpha = scale(rng);
      Vector scaled = v;
      for (double& x : scaled) x *= alpha;
      CHECK(in_cone(cone, v, 0.0) == in_cone(cone, scaled, 0.0));
    } else {
      const ConeId cone = ConeId::psd(dim);
      const Matrix m = random_symmetric(rng, dim);
      if (in_dual_interior(cone, m, 1e-9)) CHECK(in_cone(cone, m, 0.0));
      CHECK(in_cone(cone, m, 0.0) == in_cone(cone, scale(rng) * m, 0.0));
    }
  }
}
