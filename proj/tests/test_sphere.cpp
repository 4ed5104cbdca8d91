#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mgl/error.hpp"
#include "mgl/orthopoly.hpp"
#include "mgl/sphere.hpp"

using namespace mgl;
using doctest::Approx;

TEST_CASE("streams are reproducible and children independent of parent use") {
  RngStream a(5, 1), b(5, 1), c(5, 2);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
  RngStream p(9, 0), q(9, 0);
  p.normal();
  p.normal();
  CHECK(p.child(3).uniform() == q.child(3).uniform());
}

TEST_CASE("unit sphere samples") {
  RngStream rng(1, 0);
  for (int i = 0; i < 20; ++i) {
    const Vec s = sphere::sample_unit_sphere(1, rng);
    CHECK(std::abs(s[0]) == 1.0);
  }
  const Vec x = sphere::sample_unit_sphere(3, rng);
  CHECK(x.norm() == Approx(1.0).epsilon(1e-12));
  RngStream r1(77, 4), r2(77, 4);
  CHECK((sphere::sample_unit_sphere(3, r1) - sphere::sample_unit_sphere(3, r2)).norm() == 0.0);

  const int n = 100000, d = 5;
  Vec mean = Vec::Zero(d);
  for (int i = 0; i < n; ++i) mean += sphere::sample_unit_sphere(d, rng);
  mean /= n;
  // each coordinate has variance 1/d
  const double tol = 3.0 / std::sqrt(static_cast<double>(n) * d);
  for (int j = 0; j < d; ++j) CHECK(std::abs(mean[j]) <= tol);
}

TEST_CASE("band samples") {
  RngStream rng(2, 0);
  const Vec e = sphere::sample_unit_sphere(6, rng);
  CHECK((sphere::sample_band(e, 1.0, rng) - e).norm() <= 1e-12);
  const Vec e3 = Vec::Unit(3, 2);
  const Vec x = sphere::sample_band(e3, 0.0, rng);
  CHECK(std::abs(x.dot(e3)) <= 1e-9);
  CHECK(x.norm() == Approx(1.0));

  // <x, v> for v orthogonal to e at height a: mean 0, second moment (1 - a^2) / (d - 1)
  const int d = 6, n = 40000;
  const double a = 0.3;
  const Mat H = sphere::orthonormal_completion(e);
  const Vec v = H.col(2);
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec y = sphere::sample_band(H, e, a, rng);
    CHECK(y.dot(e) == Approx(a).epsilon(1e-12));
    m1 += y.dot(v);
    m2 += y.dot(v) * y.dot(v);
  }
  m1 /= n;
  m2 /= n;
  const double want = (1 - a * a) / (d - 1);
  CHECK(std::abs(m1) <= 4.0 * std::sqrt(want / n));
  CHECK(std::abs(m2 - want) <= 0.05 * want);
}

TEST_CASE("orthonormal completion") {
  RngStream rng(3, 0);
  const Vec e = sphere::sample_unit_sphere(7, rng);
  const Mat H = sphere::orthonormal_completion(e);
  CHECK((H.transpose() * H - Mat::Identity(7, 7)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(std::abs(H.col(0).dot(e)) - 1.0) <= 1e-12);
}

TEST_CASE("haar orthogonal matrices") {
  RngStream rng(4, 0);
  const Mat A = sphere::haar_orthogonal(8, rng);
  CHECK((A.transpose() * A - Mat::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-10);

  int plus = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) plus += sphere::haar_orthogonal(1, rng)(0, 0) > 0;
  CHECK(std::abs(plus - n / 2.0) <= 3.0 * std::sqrt(n * 0.25));

  const Vec x = sphere::sample_unit_sphere(4, rng);
  Vec mean = Vec::Zero(4);
  const int m = 20000;
  for (int i = 0; i < m; ++i) mean += sphere::haar_orthogonal(4, rng) * x;
  mean /= m;
  for (int j = 0; j < 4; ++j) CHECK(std::abs(mean[j]) <= 4.0 * std::sqrt(0.25 / m));
}

TEST_CASE("harmonic dimensions and areas") {
  CHECK(sphere::harmonic_dim(7, 0) == 1);
  CHECK(sphere::harmonic_dim(3, 2) == 5);
  for (int d = 2; d <= 30; ++d) CHECK(sphere::harmonic_dim(d, 1) == static_cast<std::uint64_t>(d));
  for (int n = 0; n < 20; ++n) CHECK(sphere::harmonic_dim(3, n) == static_cast<std::uint64_t>(2 * n + 1));
  CHECK_THROWS_AS(sphere::harmonic_dim(60, 500), OverflowError);
  CHECK(sphere::sphere_area(1) == Approx(2.0));
  CHECK(sphere::sphere_area(2) == Approx(2 * std::numbers::pi));
  CHECK(sphere::sphere_area(3) == Approx(4 * std::numbers::pi));
}

TEST_CASE("band averages") {
  RngStream rng(5, 0);
  const Vec e = Vec::Unit(6, 0);
  const auto c = sphere::band_average([](const Vec&) { return 3.0; }, e, 0.2, 200, rng);
  CHECK(c.mean == Approx(3.0));
  CHECK(c.std_err == Approx(0.0));
  const auto lin = sphere::band_average([&](const Vec& x) { return x.dot(e); }, e, 0.4, 200, rng);
  CHECK(lin.mean == Approx(0.4));
  CHECK(lin.std_err <= 1e-12);

  // zonal product identity: mean of P_{d,n}(<v,x>) over the band at a is P_{d,n}(<v,e>) P_{d,n}(a)
  const Vec v = sphere::sample_unit_sphere(6, rng);
  const auto z = sphere::band_average([&](const Vec& x) { return orthopoly::legendre(6, 3, v.dot(x)); }, e, 0.5,
                                      20000, rng);
  const double want = orthopoly::legendre(6, 3, v.dot(e)) * orthopoly::legendre(6, 3, 0.5);
  CHECK(std::abs(z.mean - want) <= 4.0 * z.std_err);
}
