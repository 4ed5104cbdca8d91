#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mgl/error.hpp"
#include "mgl/lemma_lab.hpp"

using namespace mgl;
using doctest::Approx;

TEST_CASE("band gap of the linear zonal function") {
  const auto lin = RkhsProfile::from_kernel(kernels::linear_kernel(), 8);
  const auto r = lemma_lab::check_band_gap(orthopoly::PolyCoeffs(8, {0.0, 1.0}), 0.03, 5, &lin);
  CHECK(r.gap == Approx(0.06));
  CHECK(r.bound >= 0.06);
  CHECK(r.holds);
  CHECK(r.coeff_bound == Approx(1.0));
}

TEST_CASE("band gap of a kernel section") {
  const int d = 10;
  const auto prof = RkhsProfile::from_kernel(kernels::sss_kernel(), d);
  // k(., x0) around e with <x0, e> = 0.3: coefficients b_n P_{d,n}(0.3)
  std::vector<double> a(prof.b.size());
  for (std::size_t n = 0; n < a.size(); ++n)
    a[n] = prof.in_index_set(static_cast<int>(n)) ? prof.b[n] * orthopoly::legendre(d, static_cast<int>(n), 0.3) : 0.0;
  const auto r = lemma_lab::check_band_gap(orthopoly::PolyCoeffs(d, a), 0.01, 20, &prof);
  CHECK(r.holds);
}

TEST_CASE("random zonal functions of bounded norm") {
  RngStream rng(50, 0);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    const int d = i % 2 ? 6 : 10;
    const auto prof = RkhsProfile::from_kernel(kernels::rbf_kernel(1.0), d);
    std::vector<double> a(prof.b.size(), 0.0);
    double nrm2 = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
      if (prof.in_index_set(static_cast<int>(n))) {
        a[n] = rng.normal() * prof.b[n];
        nrm2 += a[n] * a[n] / prof.b[n];
      }
    const double scale = 10.0 * rng.uniform() / std::sqrt(nrm2);
    for (double& v : a) v *= scale;
    const auto r = lemma_lab::check_band_gap(orthopoly::PolyCoeffs(d, a), 0.01, 5, &prof);
    CHECK(r.coeff_bound <= 10.0 + 1e-9);
    violations += !r.holds;
  }
  CHECK(violations == 0);
}

TEST_CASE("band gap of trained models") {
  AdversarialSpec spec;
  spec.d = 8;
  spec.gamma = 0.05;
  spec.lambda3 = 0.1;
  RngStream rng(51, 0);
  const auto data = measures::sample_dataset(spec, 200, rng);
  SolverOptions o;
  o.eps_opt = 1e-2;
  const auto model = learners::train_kernel_program(data, kernels::sss_kernel(), make_loss("hinge"), 10.0, o);
  const auto exact = lemma_lab::check_band_gap(model, spec.direction(), spec.gamma, 3, 1000, rng);
  CHECK(exact.method == "exact");
  CHECK(exact.holds);

  // exact expansion agrees with a Monte-Carlo band average
  const auto fplus = sphere::band_average([&](const Vec& x) { return model.score(x) - model.b; }, spec.direction(),
                                          spec.gamma, 4000, rng);
  CHECK(std::abs(fplus.mean - exact.f_bar_plus) <= 4 * fplus.std_err + 1e-9);

  Mat A(3, spec.d);
  for (Eigen::Index j = 0; j < A.size(); ++j) A.data()[j] = rng.normal();
  const auto fk = kernels::feature_map_kernel([A](const Vec& x) -> Vec { return A * x; }, 3, spec.d);
  const auto fm = learners::train_kernel_program(data, fk, make_loss("hinge"), 10.0, o);
  const auto mc = lemma_lab::check_band_gap(fm, spec.direction(), spec.gamma, 3, 2000, rng);
  CHECK(mc.method == "monte-carlo");
  CHECK(mc.tolerance > 0.0);
  CHECK(mc.holds);
  CHECK_THROWS_AS(lemma_lab::check_band_gap(fm, Vec::Unit(4, 0), spec.gamma, 3, 100, rng), DomainError);
}

TEST_CASE("stabilizer symmetrization") {
  RngStream rng(52, 0);
  const int d = 6;
  const Vec e = sphere::sample_unit_sphere(d, rng);
  const Mat H = sphere::orthonormal_completion(e);
  const Mat R = lemma_lab::stabilizer_rotation(H, rng);
  CHECK((R * e - e).norm() <= 1e-12);
  CHECK((R.transpose() * R - Mat::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-12);

  const auto zonal = [&](const Vec& x) { return std::exp(x.dot(e)); };
  const auto z = lemma_lab::symmetrize_function(zonal, e, 64, rng);
  for (std::size_t j = 0; j < z.a.size(); ++j) CHECK(z.value[j] == Approx(std::exp(z.a[j])));

  const Vec v = H.col(3);
  const auto odd = lemma_lab::symmetrize_function([&](const Vec& x) { return x.dot(v); }, e, 2000, rng);
  for (std::size_t j = 0; j < odd.a.size(); ++j) CHECK(std::abs(odd.value[j]) <= 4 * odd.std_err[j] + 1e-12);

  const Vec w = sphere::sample_unit_sphere(d, rng);
  const auto pz = lemma_lab::symmetrize_function([&](const Vec& x) { return orthopoly::legendre(d, 2, w.dot(x)); }, e,
                                                 4000, rng, {-0.5, 0.0, 0.7});
  for (std::size_t j = 0; j < pz.a.size(); ++j) {
    const double want = orthopoly::legendre(d, 2, w.dot(e)) * orthopoly::legendre(d, 2, pz.a[j]);
    CHECK(std::abs(pz.value[j] - want) <= 4 * pz.std_err[j] + 1e-12);
  }
}
