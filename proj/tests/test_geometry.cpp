#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mgl/error.hpp"
#include "mgl/geometry.hpp"

using namespace mgl;
using doctest::Approx;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

}  // namespace

TEST_CASE("symmetric MVEE of the cross polytope and the square") {
  const double eps = 1e-4;
  const auto cross = geometry::mvee({v2(1, 0), v2(0, 1)}, true, eps);
  CHECK((cross.shape - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 2e-3);
  CHECK(cross.center.norm() == 0.0);

  const auto square = geometry::mvee({v2(1, 1), v2(1, -1), v2(-1, 1), v2(-1, -1)}, true, eps);
  CHECK((square.shape - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-3);
  CHECK(geometry::max_gauge(square, {v2(1, 1), v2(1, -1)}, true) <= 1 + eps + 1e-12);
}

TEST_CASE("non-symmetric MVEE of a triangle") {
  // equilateral triangle on the unit circle: circumscribed disc, centre 0
  std::vector<Vec> tri;
  for (int k = 0; k < 3; ++k) tri.push_back(v2(std::cos(2 * std::numbers::pi * k / 3), std::sin(2 * std::numbers::pi * k / 3)));
  const auto E = geometry::mvee(tri, false, 1e-5);
  CHECK(E.center.norm() <= 1e-3);
  CHECK((E.shape - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 2e-3);
  CHECK(geometry::max_gauge(E, tri, false) <= 1 + 1e-5 + 1e-12);
}

TEST_CASE("rank deficiency") {
  CHECK_THROWS_AS(geometry::mvee({v2(1, 1), v2(2, 2), v2(-1, -1)}, true), RankDeficiencyError);
  try {
    geometry::mvee({v2(1, 1), v2(2, 2)}, true);
    FAIL("rank-deficient input accepted");
  } catch (const RankDeficiencyError& e) {
    CHECK(e.span_dim() == 1);
    CHECK(e.ambient_dim() == 2);
  }
}

TEST_CASE("convex decomposition") {
  const std::vector<Vec> pts{v2(0, 0), v2(2, 0), v2(0, 2), v2(2, 2)};
  const auto w0 = geometry::convex_decompose(pts[2], pts);
  CHECK(w0[2] == Approx(1.0));
  const auto mid = geometry::convex_decompose(v2(1, 0), {v2(0, 0), v2(2, 0)});
  CHECK(mid[0] == Approx(0.5));
  CHECK(mid[1] == Approx(0.5));

  RngStream rng(40, 0);
  for (int i = 0; i < 20; ++i) {
    const Vec t = v2(2 * rng.uniform(), 2 * rng.uniform());
    const auto w = geometry::convex_decompose(t, pts);
    Vec back = Vec::Zero(2);
    double s = 0.0;
    int nz = 0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      CHECK(w[j] >= 0.0);
      back += w[j] * pts[j];
      s += w[j];
      nz += w[j] > 0;
    }
    CHECK((back - t).norm() <= 1e-9);
    CHECK(s == Approx(1.0));
    CHECK(nz <= 3);
  }
  CHECK_THROWS_AS(geometry::convex_decompose(v2(3, 3), pts), InfeasibleError);
}

TEST_CASE("noise measure in one dimension") {
  // psi(x) = <x, e>: the John interval is the hull of the extreme probes
  RngStream rng(41, 0);
  const int d = 4;
  std::vector<Vec> probes;
  for (int i = 0; i < 200; ++i) probes.push_back(sphere::sample_unit_sphere(d, rng));
  const auto psi = [](const Vec& x) -> Vec { return Vec::Constant(1, x[0]); };
  const auto nm = geometry::build_noise_measure(psi, probes, 1, 1e-6);
  double extreme = 0.0;
  for (const auto& p : probes) extreme = std::max(extreme, std::abs(p[0]));
  CHECK(nm.inner_product(0, 0) == Approx(1.0 / (extreme * extreme)).epsilon(1e-4));
  CHECK(nm.mu.total_weight() == Approx(1.0));
  for (const auto& a : nm.mu.atoms) CHECK(std::abs(a.point[0]) >= 0.9 * extreme);
  for (double w : {0.5, 3.0, 40.0}) {
    const double norm = std::abs(w) / std::sqrt(nm.inner_product(0, 0));
    CHECK(geometry::hinge_error(nm.mu, psi, Vec::Constant(1, w)) >= norm / 2 - 1e-9);
  }
}

TEST_CASE("noise measure certificate for a random linear map") {
  RngStream rng(42, 0);
  const int d = 5, m = 2;
  Mat A(m, d);
  for (Eigen::Index j = 0; j < A.size(); ++j) A.data()[j] = rng.normal();
  const auto psi = [A](const Vec& x) -> Vec { return A * x; };
  std::vector<Vec> probes;
  for (int i = 0; i < 100; ++i) probes.push_back(sphere::sample_unit_sphere(d, rng));
  const auto nm = geometry::build_noise_measure(psi, probes, m);
  const Mat Minv = nm.inner_product.inverse();
  for (int k = 0; k < 100; ++k) {
    const Vec w = 20.0 * (rng.uniform() + 0.01) * v2(rng.normal(), rng.normal());
    const double norm = std::sqrt(w.dot(Minv * w));
    CHECK(geometry::hinge_error(nm.mu, psi, w) >= norm / (2 * std::pow(m, 1.5)) - 1e-9);
  }
  const auto zero = [](const Vec&) -> Vec { return Vec::Zero(2); };
  CHECK_THROWS_AS(geometry::build_noise_measure(zero, probes, 2), RankDeficiencyError);
}
