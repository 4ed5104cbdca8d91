#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mgl/error.hpp"
#include "mgl/kernels.hpp"

using namespace mgl;
using doctest::Approx;

TEST_CASE("profiles at the diagonal and at orthogonal points") {
  CHECK(kernels::sss_kernel().kappa(1.0) == Approx(1.0));
  CHECK(kernels::sss_kernel(false).kappa(1.0) == Approx(2.0));
  CHECK(kernels::rbf_kernel(0.7).kappa(1.0) == Approx(1.0));
  CHECK(kernels::rbf_kernel(2.0).kappa(0.0) == Approx(std::exp(-0.25)));
  CHECK(kernels::poly_kernel(3).kappa(0.0) == Approx(0.125));
  const Vec x = Vec::Unit(4, 0), y = Vec::Unit(4, 1);
  CHECK(kernels::linear_kernel()(x, y) == 0.0);
  CHECK_THROWS_AS(kernels::linear_kernel()(x, Vec::Unit(3, 0)), DomainError);
  CHECK_THROWS(kernels::make_kernel("nope"));
}

TEST_CASE("gram matrices") {
  const Vec x = Vec::Unit(3, 0);
  const Mat G = kernels::gram(kernels::sss_kernel(), {x, x});
  CHECK((G - Mat::Constant(2, 2, 1.0)).cwiseAbs().maxCoeff() <= 1e-15);
  const Mat I = kernels::gram(kernels::linear_kernel(), {Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 2)});
  CHECK((I - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);

  RngStream rng(20, 0);
  std::vector<Vec> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(sphere::sample_unit_sphere(6, rng));
  Mat S = kernels::gram(kernels::sss_kernel(), pts);
  CHECK(Eigen::SelfAdjointEigenSolver<Mat>(S).eigenvalues().minCoeff() >= -1e-8);
  const auto check = kernels::ensure_psd(kernels::sss_kernel(), S, 6);
  CHECK(check.method == "eigen");

  const Mat C = kernels::cross_gram(kernels::rbf_kernel(1.0), pts, {pts[3], pts[7]});
  CHECK(C(3, 0) == Approx(1.0));
  CHECK(C(10, 1) == Approx(kernels::rbf_kernel(1.0)(pts[10], pts[7])));
}

TEST_CASE("ensure_psd rejects indefinite matrices") {
  Mat bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(kernels::ensure_psd(kernels::linear_kernel(), bad, 3), InvalidKernelError);
  Mat tiny(2, 2);
  tiny << 1.0, 1.0 + 1e-12, 1.0 + 1e-12, 1.0;
  const auto r = kernels::ensure_psd(kernels::linear_kernel(), tiny, 3);
  CHECK(r.jitter > 0.0);
}

TEST_CASE("legendre coefficients of profiles") {
  for (int d : {3, 5, 9}) {
    const auto b = kernels::profile_to_legendre([](double s) { return s; }, d);
    CHECK(b[1] == Approx(1.0));
    for (std::size_t n = 0; n < b.size(); ++n)
      if (n != 1) CHECK(std::abs(b[n]) <= 1e-12);
  }
  const auto sq = kernels::profile_to_legendre([](double s) { return s * s; }, 3);
  CHECK(sq[0] == Approx(1.0 / 3));
  CHECK(sq[2] == Approx(2.0 / 3));

  const auto sss = RkhsProfile::from_kernel(kernels::sss_kernel(), 5);
  for (double v : sss.b) CHECK(v >= -1e-10);
  CHECK(sss.total() == Approx(1.0).epsilon(1e-6));

  // a profile with a kink does not converge at 64 terms
  CHECK_THROWS_AS(kernels::profile_to_legendre([](double s) { return std::abs(s); }, 5), ConvergenceError);
}

TEST_CASE("rkhs norms of zonal functions") {
  const auto lin = RkhsProfile::from_kernel(kernels::linear_kernel(), 6);
  CHECK(kernels::rkhs_norm_symmetric(orthopoly::PolyCoeffs(6, {0.0, 1.0}), lin) == Approx(1.0));
  CHECK_THROWS_AS(kernels::rkhs_norm_symmetric(orthopoly::PolyCoeffs(6, {0.0, 0.0, 1.0}), lin), InfiniteNormError);

  const auto rbf = RkhsProfile::from_kernel(kernels::rbf_kernel(1.0), 6);
  std::vector<double> a(rbf.b.size());
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = rbf.in_index_set(static_cast<int>(n)) ? rbf.b[n] : 0.0;
  CHECK(kernels::rkhs_norm_symmetric(orthopoly::PolyCoeffs(6, a), rbf) == Approx(1.0).epsilon(1e-6));

  // sum over I of N_{d,n} / (|S^{d-1}| a_n^2) = sum b_n = 1
  double s = 0.0;
  for (int n = 0; n < static_cast<int>(rbf.b.size()); ++n)
    if (rbf.in_index_set(n)) s += static_cast<double>(sphere::harmonic_dim(6, n)) / (sphere::sphere_area(6) * rbf.a_sq(n));
  CHECK(s == Approx(1.0).epsilon(1e-6));
  CHECK(std::isinf(lin.a_sq(3)));
}

TEST_CASE("symmetrization") {
  RngStream rng(21, 0);
  const auto k = kernels::rbf_kernel(1.0);
  const auto sym = kernels::symmetrize_mc(k, 5, 64, rng);
  for (std::size_t j = 0; j < sym.table.s.size(); ++j)
    CHECK(std::abs(sym.table.value[j] - k.kappa(sym.table.s[j])) <= 3 * sym.table.std_err[j] + 1e-12);

  const Vec v = sphere::sample_unit_sphere(5, rng);
  const auto r1 = kernels::feature_map_kernel([v](const Vec& x) -> Vec { return Vec::Constant(1, v.dot(x)); }, 1, 5, false);
  const auto s1 = kernels::symmetrize_mc(r1, 5, 4096, rng);
  int misses = 0;
  for (std::size_t j = 0; j < s1.table.s.size(); ++j)
    misses += std::abs(s1.table.value[j] - s1.table.s[j] / 5) > 3 * s1.table.std_err[j];
  CHECK(misses == 0);
  // sup of the diagonal does not grow
  CHECK(s1.table(1.0) <= 1.0 + 3 * s1.table.std_err.front());
  CHECK(s1.kernel(v, v) == Approx(s1.table(1.0)));
  CHECK_THROWS_AS(kernels::symmetrize_mc(r1, 5, 8, rng), DomainError);
}

TEST_CASE("chebyshev grid") {
  const auto g = kernels::chebyshev_grid();
  REQUIRE(g.size() == 257);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == -1.0);
  CHECK(g[128] == Approx(0.0).epsilon(1e-15));
}
