#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mgl/error.hpp"
#include "mgl/learners.hpp"

using namespace mgl;
using doctest::Approx;

namespace {

std::vector<LabeledPoint> mu1_sample(double gamma, int n, std::uint64_t seed, int d = 5) {
  AdversarialSpec s;
  s.d = d;
  s.gamma = gamma;
  s.theta = 0.7;
  RngStream rng(seed, 0);
  return measures::sample_dataset(s, n, rng);
}

SolverOptions tight(double eps = 1e-4) {
  SolverOptions o;
  o.eps_opt = eps;
  o.max_iters = 400000;
  return o;
}

}  // namespace

TEST_CASE("loss values and derivatives") {
  const auto hinge = make_loss("hinge");
  CHECK(hinge.value(0.0) == 1.0);
  CHECK(hinge.d_plus_at_0() == -1.0);
  CHECK(hinge.lipschitz() == 1.0);
  CHECK(make_loss("absolute").value(3.0) == 2.0);
  CHECK(make_loss("squared").value(-1.0) == 4.0);
  CHECK(std::isinf(make_loss("squared").lipschitz()));
  const auto logistic = make_loss("logistic");
  CHECK(logistic.value(0.0) == Approx(1.0));
  CHECK(logistic.d_plus_at_0() == Approx(-0.5 / std::log(2.0)));
  const auto lg = make_loss("margin_loss", 0.1, 10.0);
  CHECK(lg.value(1.0) == Approx(0.9));
  CHECK(lg.value(-1.0) == Approx(2.0));
  CHECK_THROWS_AS(make_loss("margin_loss", 0.1, 0.0), DomainError);
  CHECK_THROWS_AS(make_loss("cubic"), DomainError);
}

TEST_CASE("losses dominate the 0-1 loss and conjugates satisfy Fenchel-Young") {
  for (const char* name : {"hinge", "absolute", "squared", "logistic"}) {
    const auto l = make_loss(name);
    for (double x = -3.0; x <= 3.0; x += 0.125) {
      CHECK(l.value(x) >= zero_one(x));
      for (double v = -2.0; v <= 0.0; v += 0.25) {
        const double c = l.conjugate(v);
        if (std::isfinite(c)) CHECK(l.value(x) + c >= x * v - 1e-12);
      }
    }
  }
}

TEST_CASE("truncated margin loss is hinge at a scaled score") {
  const double Cg = 20.0;
  const auto star = make_loss("truncated_margin", 0.05, Cg);
  const auto hinge = make_loss("hinge");
  RngStream rng(30, 0);
  for (int i = 0; i < 100; ++i) {
    const double f = 4.0 * rng.uniform() - 2.0;
    const int y = rng.sign();
    CHECK(std::abs(star.value(y * f) - hinge.value(y * Cg * f)) <= 1e-12);
  }
}

TEST_CASE("kernel program on tiny instances") {
  const auto hinge = make_loss("hinge");
  const Vec x0 = Vec::Unit(3, 0);
  const auto one = learners::train_kernel_program({{x0, 1}}, kernels::linear_kernel(), hinge, 1.0, tight());
  CHECK(one.cert.objective <= 1e-4);
  CHECK(one.cert.converged);

  const auto two = learners::train_kernel_program({{x0, 1}, {x0, -1}}, kernels::linear_kernel(), hinge, 1.0, tight());
  CHECK(two.cert.objective == Approx(1.0).epsilon(1e-4));
  CHECK(two.norm <= 1.0 * (1 + 1e-9));
}

TEST_CASE("separable clean sample is fit exactly when C gamma >= 1") {
  const double gamma = 0.05;
  const auto data = mu1_sample(gamma, 300, 31);
  const auto m = learners::train_kernel_program(data, kernels::linear_kernel(), make_loss("hinge"), 2.0 / gamma,
                                                tight(1e-4));
  CHECK(m.cert.objective <= 1e-3);
  CHECK(m.norm <= 2.0 / gamma * (1 + 1e-9));
  const auto ev = learners::evaluate(m, data, make_loss("hinge"), gamma);
  CHECK(ev.err01 == 0.0);
}

TEST_CASE("kernel program agrees with the grid oracle in one dimension") {
  // rank-one kernel <x, e><y, e>: the RKHS is {a <e, .>} with norm |a|
  const int d = 4;
  const auto psi = [](const Vec& x) -> Vec { return Vec::Constant(1, x[0]); };
  const auto k = kernels::feature_map_kernel(psi, 1, d, false);
  const Mat H = sphere::orthonormal_completion(Vec::Unit(d, 0));
  const double gamma = 0.05, theta = 0.7;
  std::vector<learners::Atom1d> atoms{{gamma, 1, theta}, {-gamma, -1, 1 - theta}};
  std::vector<LabeledPoint> data;
  SolverOptions o = tight(1e-5);
  for (const auto& a : atoms) {
    data.push_back({a.t * H.col(0) + std::sqrt(1 - a.t * a.t) * H.col(1), a.y});
    o.weights.push_back(a.w);
  }
  const auto hinge = make_loss("hinge");
  const auto sep = learners::brute_force_1d(atoms, hinge, 2.0 / gamma);
  CHECK(sep.objective <= 1e-9);
  const auto flat = learners::brute_force_1d(atoms, hinge, 1.0);
  CHECK(flat.objective == Approx(2 * (1 - theta) * (1 - gamma)).epsilon(1e-6));
  const auto m = learners::train_kernel_program(data, k, hinge, 1.0, o);
  CHECK(std::abs(m.cert.objective - flat.objective) <= 1e-3);
  // C = 0: bias-only problem, min_b 0.7 l(b) + 0.3 l(-b) = 2 (1 - theta) at b = 1
  CHECK(learners::brute_force_1d(atoms, hinge, 0.0).objective == Approx(2 * (1 - theta)));
}

TEST_CASE("finite program") {
  const double gamma = 0.05;
  const auto data = mu1_sample(gamma, 200, 32, 3);
  const auto id = [](const Vec& x) -> Vec { return x; };
  const auto hinge = make_loss("hinge");
  const auto sep = learners::train_finite_program(data, id, BallKind::L2, 1.0 / gamma, hinge, tight());
  CHECK(sep.cert.objective <= 1e-3);
  CHECK(sep.w.norm() <= 1.0 / gamma * (1 + 1e-9));

  const auto zero = learners::train_finite_program(data, id, BallKind::L1, 0.0, hinge, tight());
  CHECK(zero.w.norm() == 0.0);
  double pos = 0;
  for (const auto& p : data) pos += p.y > 0;
  pos /= data.size();
  // min_b mean (1 - y b)_+ is 2 min(pos, 1 - pos)
  CHECK(zero.cert.objective == Approx(2 * std::min(pos, 1 - pos)).epsilon(1e-4));

  const Vec v = (Vec(5) << 0.5, -2.0, 0.1, 3.0, -0.2).finished();
  const Vec p = learners::project_l1_ball(v, 2.0);
  CHECK(p.lpNorm<1>() == Approx(2.0));
  CHECK(p[3] == Approx(1.5));
  CHECK(p[1] == Approx(-0.5));
  CHECK(p[0] == 0.0);
  CHECK(learners::project_l1_ball(v, 100.0) == v);
}

TEST_CASE("finite program matches a 2-D grid search") {
  RngStream rng(33, 0);
  std::vector<LabeledPoint> data;
  for (int i = 0; i < 8; ++i) data.push_back({sphere::sample_unit_sphere(2, rng), rng.sign()});
  const auto id = [](const Vec& x) -> Vec { return x; };
  const auto hinge = make_loss("hinge");
  const auto m = learners::train_finite_program(data, id, BallKind::L2, 1.0, hinge, tight());
  double best = 1e300;
  auto obj = [&](double w0, double w1, double b) {
    double s = 0.0;
    for (const auto& p : data) s += hinge.value(p.y * (w0 * p.x[0] + w1 * p.x[1] + b));
    return s / data.size();
  };
  // polar grid over the unit disc, then one refinement around the incumbent
  double br = 0, ba = 0, bb = 0;
  auto scan = [&](double r0, double dr, int nr, double a0, double da, int na, double b0, double db, int nb) {
    for (int i = 0; i <= nr; ++i)
      for (int j = 0; j <= na; ++j)
        for (int k = 0; k <= nb; ++k) {
          const double r = std::clamp(r0 + i * dr, 0.0, 1.0), a = a0 + j * da, b = b0 + k * db;
          const double v = obj(r * std::cos(a), r * std::sin(a), b);
          if (v < best) best = v, br = r, ba = a, bb = b;
        }
  };
  const double deg = std::numbers::pi / 180;
  scan(0.0, 0.01, 100, 0.0, deg, 360, -2.0, 0.01, 400);
  scan(br - 0.01, 0.0002, 100, ba - deg, deg / 50, 100, bb - 0.01, 0.0002, 100);
  CHECK(std::abs(m.cert.objective - best) <= 1e-3);
}

TEST_CASE("evaluation") {
  const double gamma = 0.05;
  const auto data = mu1_sample(gamma, 20000, 34);
  const auto hinge = make_loss("hinge");
  std::vector<double> ones(data.size(), 1.0);
  const auto c = learners::evaluate_scores(ones, data, 0.0, hinge, gamma, false);
  CHECK(c.err01 == Approx(0.3).epsilon(0.05));
  CHECK(c.err01 <= c.err_surrogate);

  std::vector<double> perfect;
  for (const auto& p : data) perfect.push_back(p.x[0] / gamma);
  const auto ev = learners::evaluate_scores(perfect, data, 0.0, hinge, gamma, false);
  CHECK(ev.err01 == 0.0);
  CHECK(ev.err_surrogate <= 1e-12);
}

TEST_CASE("objective is monotone in C and respects the norm constraint") {
  const auto data = mu1_sample(0.05, 200, 35);
  double prev = 1e300;
  for (double C : {0.5, 2.0, 8.0}) {
    const auto m = learners::train_kernel_program(data, kernels::rbf_kernel(1.0), make_loss("hinge"), C, tight(1e-3));
    CHECK(m.norm <= C * (1 + 1e-9));
    CHECK(m.cert.objective <= prev + 2e-3);
    prev = m.cert.objective;
  }
}
