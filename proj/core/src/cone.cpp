#include "conecert/cone.hpp"

#include <algorithm>

#include "conecert/errors.hpp"
#include "conecert/linalg.hpp"

namespace conecert {

ConeId::ConeId(Kind kind, int dim) : kind_(kind), dim_(dim) {
  if (dim < 1) throw InputError("cone dimension must be at least 1");
}

ConeId ConeId::nonneg_orthant(int dim) { return ConeId(Kind::NonnegOrthant, dim); }
ConeId ConeId::psd(int dim) { return ConeId(Kind::Psd, dim); }

namespace {

const Vector& orthant_element(const ConeId& cone, const ConeElement& v) {
  const Vector* vec = std::get_if<Vector>(&v);
  if (!vec) throw InputError("orthant cone expects a vector element");
  if (static_cast<int>(vec->size()) != cone.dim()) {
    throw InputError("vector length does not match the cone dimension");
  }
  return *vec;
}

const Matrix& psd_element(const ConeId& cone, const ConeElement& v) {
  const Matrix* mat = std::get_if<Matrix>(&v);
  if (!mat) throw InputError("PSD cone expects a matrix element");
  if (mat->rows() != cone.dim() || mat->cols() != cone.dim()) {
    throw InputError("matrix shape does not match the cone dimension");
  }
  if (!is_symmetric(*mat)) throw InputError("PSD cone element is not symmetric within tolerance");
  return *mat;
}

double min_entry(const Vector& v) {
  double m = v.empty() ? 0.0 : v.front();
  for (double x : v) m = std::min(m, x);
  return m;
}

double min_eigenvalue(const Matrix& m) { return symmetric_eigenvalues(symmetrized(m)).front(); }

}  // namespace

bool in_cone(const ConeId& cone, const ConeElement& v, double tol) {
  if (tol < 0.0) throw InputError("cone membership tolerance must be nonnegative");
  switch (cone.kind()) {
    case ConeId::Kind::NonnegOrthant:
      return min_entry(orthant_element(cone, v)) >= -tol;
    case ConeId::Kind::Psd:
      return min_eigenvalue(psd_element(cone, v)) >= -tol;
  }
  return false;
}

bool in_dual_interior(const ConeId& cone, const ConeElement& v, double margin) {
  if (margin <= 0.0) throw InputError("dual-interior margin must be positive");
  switch (cone.kind()) {
    case ConeId::Kind::NonnegOrthant:
      return min_entry(orthant_element(cone, v)) >= margin;
    case ConeId::Kind::Psd:
      return min_eigenvalue(psd_element(cone, v)) >= margin;
  }
  return false;
}

}  // namespace conecert
