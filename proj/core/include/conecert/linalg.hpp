#pragma once

#include "conecert/matrix.hpp"

namespace conecert {

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column k pairs with values[k]
};

// Cyclic Jacobi on the symmetrized input. Throws InputError when the input
// asymmetry exceeds the symmetry tolerance, NumericalError when the sweep cap
// is reached before the off-diagonal norm target.
Vector symmetric_eigenvalues(const Matrix& m);
SymmetricEigen symmetric_eigen(const Matrix& m);

struct CholeskyResult {
  bool positive_definite = false;
  Matrix factor;         // lower triangular, valid when positive_definite
  int failed_pivot = -1;  // 0-based pivot index that went nonpositive
};

CholeskyResult cholesky(const Matrix& m);

// Gaussian elimination with partial pivoting. Throws NumericalError when a
// pivot falls below tol::kSingularPivotRel * ||A||_inf.
Vector solve_linear(const Matrix& a, const Vector& b);

// Largest singular value: Jacobi on the Gram matrix for small inputs, power
// iteration on M^T M beyond tol::kJacobiSizeLimit.
double max_singular_value(const Matrix& m);

}  // namespace conecert
