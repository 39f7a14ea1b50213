#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "gpsrad/symmetric_eigen.hpp"

using Catch::Approx;
using gpsrad::DenseMatrix;
using gpsrad::SymmetricMatrix;
using gpsrad::eigh;

namespace {

SymmetricMatrix<double> random_symmetric(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  DenseMatrix<double> m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = nd(rng);
  return SymmetricMatrix<double>(std::move(m));
}

}  // namespace

TEST_CASE("eigh: 2x2 closed form", "[eigen]") {
  DenseMatrix<double> m(2);
  m(0, 0) = 2; m(0, 1) = 1;
  m(1, 0) = 1; m(1, 1) = 2;
  const auto dec = eigh(SymmetricMatrix<double>(m));
  CHECK(dec.eigenvalues()[0] == Approx(1.0).epsilon(1e-15));
  CHECK(dec.eigenvalues()[1] == Approx(3.0).epsilon(1e-15));
  const double s = 1 / std::sqrt(2.0);
  CHECK(dec(0, 1) == Approx(s).epsilon(1e-14));
  CHECK(dec(1, 1) == Approx(s).epsilon(1e-14));
  CHECK(dec(0, 0) == Approx(s).epsilon(1e-14));
  CHECK(dec(1, 0) == Approx(-s).epsilon(1e-14));
}

TEST_CASE("eigh: identity", "[eigen]") {
  DenseMatrix<double> m(5);
  for (std::size_t i = 0; i < 5; ++i) m(i, i) = 1;
  const SymmetricMatrix<double> h(m);
  const auto dec = eigh(h);
  for (double v : dec.eigenvalues()) CHECK(v == 1.0);
  CHECK(gpsrad::assess(h, dec).max_orthonormality_error <= 1e-12);
}

TEST_CASE("eigh: 1x1 and diagonal input", "[eigen]") {
  DenseMatrix<double> one(1);
  one(0, 0) = -4.5;
  const auto d1 = eigh(SymmetricMatrix<double>(one));
  CHECK(d1.eigenvalues()[0] == -4.5);
  CHECK(d1(0, 0) == 1.0);

  DenseMatrix<double> diag(4);
  const double vals[] = {3.0, -1.0, 7.0, 0.5};
  for (std::size_t i = 0; i < 4; ++i) diag(i, i) = vals[i];
  const auto d4 = eigh(SymmetricMatrix<double>(diag));
  CHECK(d4.eigenvalues() == std::vector<double>{-1.0, 0.5, 3.0, 7.0});
}

TEST_CASE("eigh: random 50x50 reconstruction", "[eigen][property]") {
  const auto h = random_symmetric(50, 12345);
  const auto dec = eigh(h);
  const double fro = h.frobenius_norm();

  // || V diag(lambda) V^T - H ||_F, assembled here from the returned vectors
  double err = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    for (std::size_t j = 0; j < 50; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < 50; ++k) s += dec(i, k) * dec.eigenvalues()[k] * dec(j, k);
      err += (s - h(i, j)) * (s - h(i, j));
    }
  }
  CHECK(std::sqrt(err) <= 1e-11 * fro);

  const auto q = gpsrad::assess(h, dec);
  CHECK(q.max_residual <= 1e-12 * fro);
  CHECK(q.max_orthonormality_error <= 1e-12);
  CHECK(q.trace_error <= 1e-11 * fro);
  for (std::size_t k = 1; k < 50; ++k) CHECK(dec.eigenvalues()[k] >= dec.eigenvalues()[k - 1]);
}

TEST_CASE("eigh: agrees with an extended-precision run", "[eigen]") {
  const auto h = random_symmetric(30, 99);
  DenseMatrix<long double> ml(30);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 30; ++j) ml(i, j) = h(i, j);
  const auto dd = eigh(h);
  const auto dl = eigh(SymmetricMatrix<long double>(std::move(ml)));
  for (std::size_t k = 0; k < 30; ++k) {
    CHECK(std::abs(dd.eigenvalues()[k] - static_cast<double>(dl.eigenvalues()[k])) <=
          1e-13 * h.frobenius_norm());
  }
}

TEST_CASE("eigh: sign convention and determinism", "[eigen]") {
  const auto h = random_symmetric(40, 4242);
  const auto a = eigh(h);
  const auto b = eigh(h);
  CHECK(std::memcmp(a.eigenvalues().data(), b.eigenvalues().data(), 40 * sizeof(double)) == 0);
  for (std::size_t k = 0; k < 40; ++k) {
    const auto va = a.vector(k);
    const auto vb = b.vector(k);
    CHECK(std::memcmp(va.data(), vb.data(), 40 * sizeof(double)) == 0);
    for (double x : va) {
      if (std::abs(x) > 1e-8) {
        CHECK(x > 0);
        break;
      }
    }
  }
}

TEST_CASE("SymmetricMatrix: validates input", "[eigen]") {
  DenseMatrix<double> m(3);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0 + 1e-16 * 4;
  CHECK_THROWS_AS(SymmetricMatrix<double>(m), std::invalid_argument);

  DenseMatrix<double> nan(2);
  nan(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymmetricMatrix<double>(nan), std::invalid_argument);

  CHECK_THROWS_AS(SymmetricMatrix<double>(DenseMatrix<double>(0)), std::invalid_argument);
}
