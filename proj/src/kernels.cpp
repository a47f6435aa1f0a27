#include "sesop/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace sesop {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

namespace kernels {

namespace {
void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}
}  // namespace

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm2(const Vector& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const Vector& x, Vector& y) {
  require_same_dim(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scal(double alpha, Vector& x) {
  for (double& v : x) v *= alpha;
}

void matvec(const Matrix& m, const Vector& x, Vector& y) {
  require_same_dim(m.cols, x.size(), "matvec");
  y.resize(m.rows);
  const std::int64_t rows = static_cast<std::int64_t>(m.rows);
  const std::size_t cols = m.cols;
  const double* data = m.data.data();
#pragma omp parallel for schedule(static) if (m.rows * cols > 16384)
  for (std::int64_t i = 0; i < rows; ++i) {
    const double* row = data + static_cast<std::size_t>(i) * cols;
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
    y[static_cast<std::size_t>(i)] = s;
  }
}

Matrix gram(const Matrix& b) {
  const std::size_t n = b.cols;
  const std::size_t m = b.rows;
  Matrix c(n, n);
  const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8) if (n * n * m > 65536)
  for (std::int64_t i = 0; i < ni; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    double* out = c.data.data() + ui * n;
    for (std::size_t k = 0; k < m; ++k) {
      const double bki = b(k, ui);
      if (bki == 0.0) continue;
      const double* brow = b.data.data() + k * n;
      for (std::size_t j = ui; j < n; ++j) out[j] += bki * brow[j];
    }
  }
  // mirror the strict lower triangle
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) c(i, j) = c(j, i);
  return c;
}

bool cholesky_factor(Matrix& a) {
  if (a.rows != a.cols) throw std::invalid_argument("cholesky_factor: square matrix required");
  const std::size_t n = a.rows;
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  // zero the (now meaningless) strict upper triangle
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
  return true;
}

void cholesky_solve(const Matrix& chol, const Vector& rhs, Vector& x) {
  require_same_dim(chol.rows, rhs.size(), "cholesky_solve");
  const std::size_t n = chol.rows;
  x = rhs;
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= chol(i, k) * x[k];
    x[i] = s / chol(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= chol(k, ii) * x[k];
    x[ii] = s / chol(ii, ii);
  }
}

namespace ref {

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("ref::dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void matvec(const Matrix& m, const Vector& x, Vector& y) {
  if (m.cols != x.size()) throw std::invalid_argument("ref::matvec: dimension mismatch");
  y.resize(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double* row = m.data.data() + i * m.cols;
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

Matrix gram(const Matrix& b) {
  const std::size_t n = b.cols;
  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double* out = c.data.data() + i * n;
    for (std::size_t k = 0; k < b.rows; ++k) {
      const double bki = b(k, i);
      if (bki == 0.0) continue;
      const double* brow = b.data.data() + k * n;
      for (std::size_t j = i; j < n; ++j) out[j] += bki * brow[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) c(i, j) = c(j, i);
  return c;
}

}  // namespace ref
}  // namespace kernels
}  // namespace sesop
