#pragma once

#include <variant>

#include "conecert/matrix.hpp"

namespace conecert {

// The two self-dual cones the toolkit works on: the nonnegative orthant of a
// given dimension and the cone of symmetric positive semidefinite matrices.
class ConeId {
 public:
  enum class Kind { NonnegOrthant, Psd };

  static ConeId nonneg_orthant(int dim);
  static ConeId psd(int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

 private:
  ConeId(Kind kind, int dim);

  Kind kind_;
  int dim_;
};

// Vector for the orthant, symmetric matrix for the PSD cone.
using ConeElement = std::variant<Vector, Matrix>;

// Orthant: every entry >= -tol. Psd: min eigenvalue of the symmetrized input
// >= -tol; inputs more asymmetric than the symmetry tolerance are rejected.
bool in_cone(const ConeId& cone, const ConeElement& v, double tol);

// Self-duality makes the dual-interior test an interior test on the same
// cone: entries (orthant) or eigenvalues (Psd) at least `margin` > 0.
bool in_dual_interior(const ConeId& cone, const ConeElement& v, double margin);

}  // namespace conecert
