#pragma once

#include <cstddef>
#include <vector>

namespace sesop {

/// Dense vector in R^n. Components are finite doubles at API boundaries.
using Vector = std::vector<double>;

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& d);
};

bool all_finite(const Vector& v);

namespace kernels {

/// <a, b>. Throws std::invalid_argument on dimension mismatch.
double dot(const Vector& a, const Vector& b);

double nrm2(const Vector& a);

/// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);

void scal(double alpha, Vector& x);

/// y = M x. Parallel over output rows; each row is a serial sum, so the
/// result is bitwise identical to ref::matvec for any thread count.
void matvec(const Matrix& m, const Vector& x, Vector& y);

/// B^T B (symmetric). Parallel over output rows, same determinism contract.
Matrix gram(const Matrix& b);

/// In-place lower-triangular Cholesky factorization of a symmetric matrix.
/// Returns false if a non-positive pivot is hit (A not positive definite).
bool cholesky_factor(Matrix& a);

/// Solves L L^T x = rhs given the factor from cholesky_factor.
void cholesky_solve(const Matrix& chol, const Vector& rhs, Vector& x);

namespace ref {

/// Serial reference implementations of the OpenMP kernels above.
double dot(const Vector& a, const Vector& b);
void matvec(const Matrix& m, const Vector& x, Vector& y);
Matrix gram(const Matrix& b);

}  // namespace ref

}  // namespace kernels
}  // namespace sesop
