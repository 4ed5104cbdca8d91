#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mgl/error.hpp"
#include "mgl/measures.hpp"
#include "mgl/orthopoly.hpp"

using namespace mgl;
using doctest::Approx;

namespace {

AdversarialSpec base_spec(int d = 6) {
  AdversarialSpec s;
  s.d = d;
  s.gamma = 0.05;
  s.theta = 0.7;
  return s;
}

}  // namespace

TEST_CASE("theta choice satisfies the strict inequality") {
  for (const char* name : {"hinge", "squared", "absolute", "logistic"}) {
    const auto loss = make_loss(name);
    const auto c = measures::choose_theta(loss);
    CAPTURE(name);
    const double lhs = (1 - c.theta) * loss.value(-c.beta) + c.theta * loss.value(c.beta);
    const double rhs = c.theta * loss.value(c.alpha);
    CHECK(lhs < rhs);
    CHECK(c.slack == Approx(rhs - lhs));
  }
  const auto h = measures::choose_theta(make_loss("hinge"));
  CHECK(h.alpha == 0.5);
  CHECK(h.beta == 1.0);
  CHECK(h.theta == 0.9);
}

TEST_CASE("arcsine density, cdf and samples") {
  CHECK(measures::arcsine_density(0.0) == Approx(8.0 / std::numbers::pi));
  CHECK(measures::arcsine_density(0.2) == 0.0);
  CHECK(measures::arcsine_cdf(0.0) == Approx(0.5));
  CHECK(measures::arcsine_cdf(0.125) == Approx(1.0));
  // total mass by Gauss-Chebyshev: integral of the density times sqrt(1 - (8t)^2) is 8/pi * 2/8
  const auto q = orthopoly::arcsine_quadrature(64);
  CHECK(q.integrate([](double) { return 1.0; }) == Approx(1.0).epsilon(1e-9));

  RngStream rng(8, 0);
  const int n = 50000;
  int below = 0;
  double m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = measures::sample_arcsine(rng);
    CHECK(std::abs(t) <= 0.125);
    below += t < 0.05;
    m2 += t * t;
  }
  const double p = measures::arcsine_cdf(0.05);
  CHECK(std::abs(below / double(n) - p) <= 4.0 * std::sqrt(p * (1 - p) / n));
  CHECK(m2 / n == Approx(1.0 / 128).epsilon(0.03));
}

TEST_CASE("clean mixture sits on the margin") {
  auto spec = base_spec();
  RngStream rng(9, 0);
  const auto data = measures::sample_dataset(spec, 20000, rng);
  const Vec e = spec.direction();
  int plus = 0;
  for (const auto& p : data) {
    const double t = p.x.dot(e);
    CHECK(std::abs(std::abs(t) - spec.gamma) <= 1e-12);
    CHECK(p.y == (t > 0 ? 1 : -1));
    plus += p.y > 0;
  }
  CHECK(std::abs(plus / 20000.0 - 0.7) <= 4.0 * std::sqrt(0.21 / 20000));
}

TEST_CASE("pure arcsine component has uniform labels") {
  auto spec = base_spec();
  spec.lambda3 = 1.0;
  RngStream rng(10, 0);
  const auto data = measures::sample_dataset(spec, 20000, rng);
  int pos = 0;
  for (const auto& p : data) {
    CHECK(std::abs(p.x.dot(spec.direction())) <= 0.125 + 1e-12);
    pos += p.y > 0;
  }
  // chi-square with one degree of freedom below 10.83 (p = 0.001)
  const double chi = std::pow(pos - 10000.0, 2) / 10000.0 * 2.0;
  CHECK(chi < 10.83);
}

TEST_CASE("samplers work on the circle") {
  auto spec = base_spec(2);
  spec.lambda3 = 0.3;
  RngStream rng(11, 0);
  for (const auto& p : measures::sample_dataset(spec, 500, rng)) CHECK(p.x.norm() == Approx(1.0));
}

TEST_CASE("certified margin bound") {
  auto spec = base_spec();
  CHECK(measures::certified_margin_bound(spec).value == 0.0);
  spec.lambda2 = 0.02;
  CHECK(measures::certified_margin_bound(spec).value == Approx(0.02));
  spec.lambda2 = 0.0;
  spec.lambda3 = 0.1;
  CHECK(measures::certified_margin_bound(spec).value == Approx(0.0631).epsilon(1e-3));
  spec.gamma = 0.01;
  spec.lambda3 = 0.02;
  CHECK(measures::certified_margin_bound(spec).value == Approx(0.02 * (0.5 + std::asin(0.08) / std::numbers::pi)));
  spec.boundary_counts = true;
  CHECK(measures::certified_margin_bound(spec).warning.has_value());
}

TEST_CASE("empirical margin error of the reference halfspace") {
  auto spec = base_spec();
  RngStream rng(12, 0);
  const auto clean = measures::sample_dataset(spec, 2000, rng);
  const Vec e = spec.direction();
  CHECK(measures::empirical_margin_error(clean, e, 0.0, spec.gamma, false) == 0.0);
  CHECK(measures::empirical_margin_error(clean, e, 0.0, spec.gamma, true) == 1.0);

  spec.lambda2 = 0.05;
  spec.lambda3 = 0.2;
  const int n = 40000;
  const auto mixed = measures::sample_dataset(spec, n, rng);
  const double p = measures::certified_margin_bound(spec).value;
  CHECK(std::abs(measures::empirical_margin_error(mixed, e, 0.0, spec.gamma, false) - p) <=
        3.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("spec validation") {
  auto spec = base_spec();
  spec.lambda2 = 0.7;
  spec.lambda3 = 0.5;
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec = base_spec();
  spec.gamma = 0.2;
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec = base_spec();
  spec.lambdaN = 0.1;
  CHECK_THROWS_AS(spec.validate(), DomainError);  // no noise atoms attached
}
