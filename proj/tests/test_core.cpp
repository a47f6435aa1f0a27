#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sesop/kernels.hpp"
#include "sesop/omega.hpp"
#include "sesop/rng.hpp"
#include "sesop/trace.hpp"

using namespace sesop;

TEST_CASE("omega recursion values") {
  CHECK(omega(0) == 1.0);
  // omega_1 = 1/2 + sqrt(1/4 + 1) = (1 + sqrt 5)/2
  CHECK(omega(1) == doctest::Approx(1.6180339887498949).epsilon(1e-14));
  OmegaSequence w;
  CHECK(w(3) == doctest::Approx(0.5 + std::sqrt(0.25 + w(2) * w(2))).epsilon(1e-15));
}

TEST_CASE("omega bounds (k+1)/2 <= w_k <= k+1 up to 1e4") {
  OmegaSequence w;
  for (std::size_t k = 0; k <= 10000; ++k) {
    const double wk = w(k);
    CHECK(wk >= (k + 1) / 2.0);
    CHECK(wk <= static_cast<double>(k + 1));
  }
}

TEST_CASE("omega square identity and increment range") {
  OmegaSequence w;
  for (std::size_t k = 1; k <= 10000; ++k) {
    const double wk = w(k), wp = w(k - 1);
    const double identity_err = std::abs(wk * wk - wp * wp - wk);
    CHECK(identity_err <= 1e-9 * wk);
    const double inc = wk - wp;
    CHECK(inc >= 0.5);
    CHECK(inc <= 1.0 + 1e-15);
  }
}

TEST_CASE("dot examples and dimension check") {
  CHECK(kernels::dot({1, 0}, {0, 1}) == 0.0);
  CHECK(kernels::dot({1, 2}, {3, 4}) == 11.0);
  Rng rng(5);
  Vector x(37);
  for (double& v : x) v = rng.uniform_pm1();
  CHECK(kernels::dot(x, x) >= 0.0);
  CHECK(kernels::dot(x, x) == doctest::Approx(kernels::nrm2(x) * kernels::nrm2(x)));
  CHECK_THROWS_AS(kernels::dot({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("openmp kernels match serial references bitwise") {
  Rng rng(17);
  for (std::size_t n : {std::size_t(1), std::size_t(7), std::size_t(64), std::size_t(153)}) {
    Matrix b(n, n);
    for (double& v : b.data) v = rng.uniform_pm1();
    Vector x(n);
    for (double& v : x) v = rng.uniform_pm1();

    const Matrix a = kernels::gram(b);
    const Matrix a_ref = kernels::ref::gram(b);
    REQUIRE(a.data.size() == a_ref.data.size());
    for (std::size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == a_ref.data[i]);

    Vector y, y_ref;
    kernels::matvec(a, x, y);
    kernels::ref::matvec(a_ref, x, y_ref);
    for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == y_ref[i]);
  }
}

TEST_CASE("gram output is symmetric") {
  Rng rng(3);
  Matrix b(19, 19);
  for (double& v : b.data) v = rng.uniform_pm1();
  const Matrix a = kernels::gram(b);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(a(i, j) == a(j, i));
}

TEST_CASE("cholesky solves an SPD system") {
  Rng rng(23);
  const std::size_t n = 24;
  Matrix b(n, n);
  for (double& v : b.data) v = rng.uniform_pm1();
  Matrix a = kernels::gram(b);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 1.0;  // keep it comfortably PD
  Vector rhs(n);
  for (double& v : rhs) v = rng.uniform_pm1();

  Matrix chol = a;
  REQUIRE(kernels::cholesky_factor(chol));
  Vector x;
  kernels::cholesky_solve(chol, rhs, x);
  Vector ax;
  kernels::matvec(a, x, ax);
  for (std::size_t i = 0; i < n; ++i) CHECK(ax[i] == doctest::Approx(rhs[i]).epsilon(1e-9));
}

TEST_CASE("cholesky rejects an indefinite matrix") {
  Matrix m = Matrix::diagonal({1.0, -2.0, 3.0});
  CHECK_FALSE(kernels::cholesky_factor(m));
}

TEST_CASE("trace CSV schema and empty-field sentinels") {
  Trace t;
  IterationRecord r0;
  r0.k = 0;
  r0.f_gap = 1.5;
  r0.grad_norm = 2.0;
  r0.g_norm = 2.25;
  r0.w_k = 1.0;
  r0.W_k = 2.25;
  r0.dist_to_opt = 1.0;
  IterationRecord r1;
  r1.k = 1;
  r1.grad_norm = 0.5;  // everything optional left empty
  t.records = {r0, r1};

  const std::string csv = trace_to_csv(t);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "k,f_gap,grad_norm,g_norm,w_k,W_k,ip_d2,ip_d1,sub_gap,dist_to_opt");
  CHECK(csv.find("1,,0.5,,,,,,,\n") != std::string::npos);

  const Trace back = trace_from_csv_string(csv);
  REQUIRE(back.records.size() == 2);
  CHECK(back.records[0].f_gap == 1.5);
  CHECK(back.records[0].W_k == 2.25);
  CHECK_FALSE(back.records[1].f_gap.has_value());
  CHECK_FALSE(back.records[1].ip_d2.has_value());
}

TEST_CASE("trace CSV round-trips doubles exactly") {
  Trace t;
  IterationRecord r;
  r.k = 0;
  r.f_gap = 0.1 + 0.2;
  r.grad_norm = 1.2345678901234567e-101;
  r.dist_to_opt = 3.0000000000000004;
  t.records = {r};
  const Trace back = trace_from_csv_string(trace_to_csv(t));
  CHECK(*back.records[0].f_gap == *t.records[0].f_gap);
  CHECK(back.records[0].grad_norm == t.records[0].grad_norm);
  CHECK(*back.records[0].dist_to_opt == *t.records[0].dist_to_opt);
}

TEST_CASE("trace CSV rejects malformed input") {
  CHECK_THROWS(trace_from_csv_string("wrong,header\n"));
  const std::string good_header =
      "k,f_gap,grad_norm,g_norm,w_k,W_k,ip_d2,ip_d1,sub_gap,dist_to_opt\n";
  CHECK_THROWS(trace_from_csv_string(good_header + "0,1,2\n"));
  CHECK_THROWS(trace_from_csv_string(good_header + "5,,1,,,,,,,\n"));  // k gap
}

TEST_CASE("rng determinism and uniform range") {
  Rng a(99), b(99);
  for (int i = 0; i < 1000; ++i) {
    const double va = a.uniform_pm1();
    CHECK(va == b.uniform_pm1());
    CHECK(va >= -1.0);
    CHECK(va <= 1.0);
  }
}
