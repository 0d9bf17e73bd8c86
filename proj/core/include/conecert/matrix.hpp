#pragma once

#include <initializer_list>
#include <vector>

namespace conecert {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled
  Matrix(int rows, int cols, Vector entries);

  static Matrix identity(int n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(int r, int c) { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }

  const Vector& entries() const { return entries_; }

  Matrix transposed() const;

  bool all_finite() const;
  double max_abs() const;         // max_ij |M(i,j)|
  double inf_norm() const;        // max absolute row sum
  double frobenius_norm() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  Vector entries_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& m);
Vector operator*(const Matrix& m, const Vector& v);

// m^T v without forming the transpose.
Vector transpose_times(const Matrix& m, const Vector& v);

double dot(const Vector& a, const Vector& b);
double sum(const Vector& v);
double max_abs(const Vector& v);
double norm2(const Vector& v);
Matrix outer(const Vector& a, const Vector& b);

// max_ij |M(i,j) - M(j,i)|, zero for non-square inputs of matching shape.
double asymmetry(const Matrix& m);
Matrix symmetrized(const Matrix& m);  // (M + M^T) / 2

// Symmetric within tol::kSymmetryRel * max(1, max_abs).
bool is_symmetric(const Matrix& m);

}  // namespace conecert
