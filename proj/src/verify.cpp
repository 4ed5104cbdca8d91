#include "mgl/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "mgl/error.hpp"
#include "mgl/geometry.hpp"
#include "mgl/kernels.hpp"
#include "mgl/learners.hpp"
#include "mgl/lemma_lab.hpp"
#include "mgl/orthopoly.hpp"

namespace mgl::verify {

using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

// Accumulates one check; keeps the first counterexample and the largest violation.
class Tally {
 public:
  explicit Tally(std::string name) : start_(Clock::now()) { r_.name = std::move(name); }

  void pass() { ++r_.cases; }
  void expect(bool ok, double violation, const json& cx) {
    ++r_.cases;
    if (ok) return;
    ++r_.failures;
    r_.passed = false;
    if (r_.counterexample.is_null()) r_.counterexample = cx;
    r_.worst = std::max(r_.worst, violation);
  }
  // Check a <= b + tol; violation is a - b.
  void le(double a, double b, double tol, json cx) {
    const bool ok = a <= b + tol;
    if (!ok) {
      cx["lhs"] = a;
      cx["rhs"] = b;
    }
    expect(ok, a - b, cx);
  }
  void error(const std::exception& e, json cx) {
    cx["exception"] = e.what();
    expect(false, std::numeric_limits<double>::infinity(), cx);
  }
  CheckResult done() {
    r_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return std::move(r_);
  }

 private:
  CheckResult r_;
  Clock::time_point start_;
};

SuiteReport finish(std::string name, std::vector<CheckResult> checks, Clock::time_point start) {
  SuiteReport s;
  s.suite = std::move(name);
  s.checks = std::move(checks);
  s.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return s;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec lift(double t, const Mat& H) {
  return t * H.col(0) + std::sqrt(std::max(0.0, 1.0 - t * t)) * H.col(1);
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

SuiteReport verify_orthopoly(const LegendreEval& eval_in, std::uint64_t seed) {
  const auto start = Clock::now();
  const LegendreEval P = eval_in ? eval_in : LegendreEval(orthopoly::legendre);
  const std::vector<int> dims{3, 5, 8, 12};
  const auto tgrid = grid(-1.0, 1.0, 401);
  std::vector<CheckResult> out;

  {
    Tally t("legendre sup norm <= 1");
    for (int d : dims)
      for (int n = 0; n <= 40; ++n)
        for (double x : tgrid) t.le(std::abs(P(d, n, x)), 1.0, 1e-9, {{"d", d}, {"n", n}, {"t", x}});
    out.push_back(t.done());
  }
  {
    Tally t("legendre value at 1");
    for (int d : dims)
      for (int n = 0; n <= 40; ++n) {
        const double v = P(d, n, 1.0);
        t.expect(std::abs(v - 1.0) <= 1e-9, std::abs(v - 1.0), {{"d", d}, {"n", n}, {"value", v}});
      }
    out.push_back(t.done());
  }
  {
    Tally t("legendre orthogonality");
    for (int d : dims) {
      const auto q = orthopoly::gegenbauer_quadrature(d, 64);
      for (int n = 0; n <= 40; ++n)
        for (int m = 0; m < n; ++m) {
          const double v = q.integrate([&](double x) { return P(d, n, x) * P(d, m, x); });
          t.expect(std::abs(v) <= 1e-6, std::abs(v), {{"d", d}, {"n", n}, {"m", m}, {"integral", v}});
        }
    }
    out.push_back(t.done());
  }
  {
    Tally t("legendre pointwise bound");
    for (int d : {5, 8, 12})
      for (int n = 1; n <= 40; ++n)
        for (double x : tgrid) {
          if (std::abs(x) >= 1.0) continue;  // outside the bound's domain
          t.le(std::abs(P(d, n, x)), orthopoly::legendre_bound(d, n, x), 1e-12, {{"d", d}, {"n", n}, {"t", x}});
        }
    out.push_back(t.done());
  }
  {
    Tally t("legendre tail bound");
    const auto band = grid(-orthopoly::kArcsineHalfWidth, orthopoly::kArcsineHalfWidth, 41);
    for (int d : {5, 8, 12})
      for (double x : band) {
        std::vector<double> suffix(orthopoly::kMaxDegree + 2, 0.0);
        for (int n = orthopoly::kMaxDegree; n >= 0; --n) suffix[n] = suffix[n + 1] + std::abs(P(d, n, x));
        for (int K = 1; K <= 40; ++K)
          t.le(suffix[K], orthopoly::legendre_tail_bound(K, d), 1e-12, {{"d", d}, {"K", K}, {"t", x}});
      }
    out.push_back(t.done());
  }
  {
    Tally t("chebyshev derivative T_n' = n U_{n-1}");
    const double h = 1e-6;
    for (int n = 1; n <= 40; ++n)
      for (int i = 1; i <= 64; ++i) {
        const double x = -0.95 + 1.9 * i / 65.0;
        const double fd = (orthopoly::chebyshev(orthopoly::ChebyshevKind::First, n, x + h) -
                           orthopoly::chebyshev(orthopoly::ChebyshevKind::First, n, x - h)) / (2 * h);
        const double exact = n * orthopoly::chebyshev(orthopoly::ChebyshevKind::Second, n - 1, x);
        const double rel = std::abs(fd - exact) / std::max(std::abs(exact), 1.0);
        t.expect(rel <= 1e-5, rel, {{"n", n}, {"t", x}, {"finite_difference", fd}, {"n_U", exact}});
      }
    out.push_back(t.done());
  }
  {
    Tally t("chebyshev |U_n|_inf = n + 1");
    const auto g = grid(-1.0, 1.0, 1001);
    for (int n = 0; n <= 40; ++n) {
      double sup = 0.0;
      for (double x : g) sup = std::max(sup, std::abs(orthopoly::chebyshev(orthopoly::ChebyshevKind::Second, n, x)));
      t.expect(std::abs(sup - (n + 1)) <= 1e-9, std::abs(sup - (n + 1)), {{"n", n}, {"sup", sup}});
    }
    out.push_back(t.done());
  }
  {
    Tally t("arcsine orthonormality");
    const auto q = orthopoly::arcsine_quadrature(256);
    for (int n = 0; n <= 30; ++n)
      for (int m = 0; m <= n; ++m) {
        const double v = q.integrate([&](double x) { return orthopoly::arcsine_orthopoly(n, x) * orthopoly::arcsine_orthopoly(m, x); });
        const double err = std::abs(v - (n == m ? 1.0 : 0.0));
        t.expect(err <= 1e-8, err, {{"n", n}, {"m", m}, {"integral", v}});
      }
    out.push_back(t.done());
  }
  {
    Tally t("L1-L2 lemma");
    RngStream rng(seed, 1);
    for (int i = 0; i < 500; ++i) {
      const int K = 1 + static_cast<int>(rng.index(20));
      std::vector<double> c(K);
      for (double& v : c) v = rng.normal();
      auto f = [&](double x) {
        double s = 0.0;
        for (int n = 0; n < K; ++n) s += c[n] * orthopoly::arcsine_orthopoly(n, x);
        return s;
      };
      const double l1 = orthopoly::arcsine_norm(f, 1), l2 = orthopoly::arcsine_norm(f, 2);
      t.le(l2, std::sqrt(2.0 * K) * l1, 1e-12, {{"K", K}, {"coeffs", c}});
    }
    out.push_back(t.done());
  }
  return finish("orthopoly", std::move(out), start);
}

SuiteReport verify_changes_slowly(int n_functions, std::uint64_t seed) {
  const auto start = Clock::now();
  Tally t("band gap <= changes-slowly bound");
  RngStream rng(seed, 2);
  const int per = std::max(1, n_functions / 8);
  for (int d : {5, 8})
    for (int K : {5, 15})
      for (double gamma : {0.01, 0.05})
        for (int i = 0; i < per; ++i) {
          const int deg = 1 + static_cast<int>(rng.index(60));
          const double decay = 0.5 + 0.5 * rng.uniform();
          std::vector<double> a(deg + 1);
          for (int n = 0; n <= deg; ++n) a[n] = rng.normal() * std::pow(decay, rng.uniform() * n);
          orthopoly::PolyCoeffs f(d, a);
          try {
            const auto sc = orthopoly::changes_slowly_gap(f, gamma, K);
            t.le(sc.gap, sc.bound, 0.0, {{"d", d}, {"K", K}, {"gamma", gamma}, {"coeffs", a}});
          } catch (const std::exception& e) {
            t.error(e, {{"d", d}, {"K", K}, {"gamma", gamma}, {"coeffs", a}});
          }
        }
  std::vector<CheckResult> out;
  out.push_back(t.done());
  return finish("changes_slowly", std::move(out), start);
}

SuiteReport verify_kernels(std::uint64_t seed) {
  const auto start = Clock::now();
  std::vector<CheckResult> out;
  RngStream rng(seed, 3);
  const std::vector<std::pair<std::string, std::map<std::string, double>>> zonal{
      {"linear", {}}, {"sss", {}}, {"rbf", {{"sigma", 0.5}}}, {"rbf", {{"sigma", 1.0}}},
      {"rbf", {{"sigma", 2.0}}}, {"poly", {{"degree", 2}}}, {"poly", {{"degree", 3}}}};

  {
    Tally t("gram min eigenvalue >= -1e-8");
    for (int set = 0; set < 100; ++set) {
      const int d = std::vector<int>{3, 5, 10}[rng.index(3)];
      const int n = 10 + static_cast<int>(rng.index(51));
      std::vector<Vec> pts;
      for (int i = 0; i < n; ++i) pts.push_back(sphere::sample_unit_sphere(d, rng));
      std::vector<KernelSpec> ks;
      for (const auto& [name, p] : zonal) ks.push_back(kernels::make_kernel(name, p));
      ks.push_back(kernels::legendre_series_kernel(d, {0.2, 0.3, 0.0, 0.5}));
      Mat A(4, d);
      for (Eigen::Index j = 0; j < A.size(); ++j) A.data()[j] = rng.normal();
      ks.push_back(kernels::feature_map_kernel([A](const Vec& x) -> Vec { return A * x; }, 4, d));
      for (const auto& k : ks) {
        const Mat G = kernels::gram(k, pts);
        const double lo = Eigen::SelfAdjointEigenSolver<Mat>(G, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
        t.expect(lo >= -1e-8, -lo, {{"kernel", k.name}, {"params", k.params}, {"d", d}, {"n", n}, {"set", set},
                                    {"min_eigenvalue", lo}});
      }
    }
    out.push_back(t.done());
  }

  Tally schoen("legendre coefficients >= -1e-8, sum = kappa(1)");
  Tally repro("reproducing norm |k(., x0)| = 1");
  for (const auto& [name, p] : zonal) {
    if (name == "linear") continue;
    const KernelSpec k = kernels::make_kernel(name, p);
    for (int d : {3, 5, 10}) {
      const json cx{{"kernel", name}, {"params", p}, {"d", d}};
      try {
        const auto prof = RkhsProfile::from_kernel(k, d);
        double lo = 0.0;
        for (double b : prof.b) lo = std::min(lo, b);
        const double sum_err = std::abs(prof.total() - k.kappa(1.0));
        json c = cx;
        c["min_b"] = lo;
        c["sum_error"] = sum_err;
        schoen.expect(lo >= -1e-8 && sum_err <= 1e-6, std::max(-lo, sum_err), c);
        std::vector<double> a(prof.b.size());
        for (std::size_t n = 0; n < a.size(); ++n) a[n] = prof.in_index_set(static_cast<int>(n)) ? prof.b[n] : 0.0;
        const double nrm = kernels::rkhs_norm_symmetric(orthopoly::PolyCoeffs(d, a), prof);
        c["norm"] = nrm;
        repro.expect(std::abs(nrm - 1.0) <= 1e-6, std::abs(nrm - 1.0), c);
      } catch (const std::exception& e) {
        schoen.error(e, cx);
      }
    }
  }
  out.push_back(schoen.done());
  out.push_back(repro.done());

  {
    // f = sum_i alpha_i k(., s_i e) with s_i = +-1 is zonal around e.
    Tally t("rkhs norm matches Gram form");
    for (int trial = 0; trial < 40; ++trial) {
      const auto& [name, p] = zonal[1 + rng.index(zonal.size() - 1)];
      const KernelSpec k = kernels::make_kernel(name, p);
      const int d = std::vector<int>{3, 5, 10}[rng.index(3)];
      const int n = 1 + static_cast<int>(rng.index(20));
      const auto prof = RkhsProfile::from_kernel(k, d);
      Vec alpha(n);
      std::vector<int> s(n);
      for (int i = 0; i < n; ++i) {
        alpha[i] = rng.normal();
        s[i] = rng.sign();
      }
      Mat G(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = k.kappa(static_cast<double>(s[i] * s[j]));
      double plus = 0.0, minus = 0.0;
      for (int i = 0; i < n; ++i) (s[i] > 0 ? plus : minus) += alpha[i];
      std::vector<double> c(prof.b.size());
      for (std::size_t m = 0; m < c.size(); ++m)
        c[m] = prof.in_index_set(static_cast<int>(m)) ? prof.b[m] * (plus + (m % 2 ? -minus : minus)) : 0.0;
      const double a = kernels::rkhs_norm_symmetric(orthopoly::PolyCoeffs(d, c), prof);
      const double b = std::sqrt(std::max(0.0, alpha.dot(G * alpha)));
      const double err = std::abs(a - b) / std::max(1.0, b);
      t.expect(err <= 1e-6, err, {{"kernel", name}, {"d", d}, {"n", n}, {"series", a}, {"gram", b}});
    }
    out.push_back(t.done());
  }
  {
    Tally t("rank-one symmetrization = <x,y>/d");
    const int d = 5;
    const Vec v = sphere::sample_unit_sphere(d, rng);
    const auto k = kernels::feature_map_kernel([v](const Vec& x) -> Vec { return Vec::Constant(1, v.dot(x)); }, 1, d, false);
    const auto sym = kernels::symmetrize_mc(k, d, 4096, rng);
    for (std::size_t j = 0; j < sym.table.s.size(); ++j) {
      const double want = sym.table.s[j] / d;
      const double dev = std::abs(sym.table.value[j] - want);
      t.le(dev, 3.0 * sym.table.std_err[j], 1e-12, {{"s", sym.table.s[j]}, {"value", sym.table.value[j]},
                                                  {"std_err", sym.table.std_err[j]}});
    }
    out.push_back(t.done());
  }
  {
    Tally t("zonal kernel is a symmetrization fixed point");
    const int d = 5;
    const auto k = kernels::rbf_kernel(1.0);
    const auto sym = kernels::symmetrize_mc(k, d, 256, rng);
    for (std::size_t j = 0; j < sym.table.s.size(); ++j) {
      const double dev = std::abs(sym.table.value[j] - k.kappa(sym.table.s[j]));
      t.le(dev, 3.0 * sym.table.std_err[j], 1e-12, {{"s", sym.table.s[j]}});
    }
    out.push_back(t.done());
  }
  return finish("kernels", std::move(out), start);
}

SuiteReport verify_solver(int n_instances, std::uint64_t seed) {
  const auto start = Clock::now();
  std::vector<CheckResult> out;
  RngStream rng(seed, 4);
  const int d = 4;
  const Mat H = sphere::orthonormal_completion(Vec::Unit(d, 0));
  const auto psi = [](const Vec& x) -> Vec { return Vec::Constant(1, x[0]); };
  const KernelSpec proj = kernels::feature_map_kernel(psi, 1, d, false);
  const std::vector<std::string> names{"hinge", "absolute", "squared", "logistic"};

  Tally kt("kernel program vs 1-D grid oracle");
  Tally ft("finite program vs 1-D grid oracle");
  for (int inst = 0; inst < n_instances; ++inst) {
    const int n = 1 + static_cast<int>(rng.index(5));
    const std::string lname = names[rng.index(names.size())];
    const double C = std::vector<double>{0.5, 1.0, 2.0, 5.0}[rng.index(4)];
    const SurrogateLoss loss = make_loss(lname);
    std::vector<learners::Atom1d> atoms;
    std::vector<LabeledPoint> data;
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      atoms.push_back({2.0 * rng.uniform() - 1.0, rng.sign(), 0.1 + rng.uniform()});
      wsum += atoms.back().w;
    }
    SolverOptions opts;
    opts.eps_opt = 1e-4;
    opts.max_iters = 400000;
    for (auto& a : atoms) {
      a.w /= wsum;
      // Rotate the orthogonal part so the lifted points are distinct on the sphere.
      data.push_back({lift(a.t, H), a.y});
      opts.weights.push_back(a.w);
    }
    json cx{{"loss", lname}, {"C", C}};
    for (const auto& a : atoms) cx["atoms"].push_back({a.t, a.y, a.w});
    const auto oracle = learners::brute_force_1d(atoms, loss, C);
    cx["oracle"] = oracle.objective;
    try {
      const auto km = learners::train_kernel_program(data, proj, loss, C, opts);
      double obj = 0.0;
      for (std::size_t i = 0; i < data.size(); ++i) obj += atoms[i].w * loss.value(data[i].y * km.score(data[i].x));
      json c = cx;
      c["solver"] = obj;
      kt.expect(std::abs(obj - oracle.objective) <= 1e-3 && km.norm <= C * (1 + 1e-9), std::abs(obj - oracle.objective), c);
    } catch (const std::exception& e) {
      kt.error(e, cx);
    }
    try {
      const auto fm = learners::train_finite_program(data, psi, BallKind::L2, C, loss, opts);
      double obj = 0.0;
      for (std::size_t i = 0; i < data.size(); ++i) obj += atoms[i].w * loss.value(data[i].y * fm.score(data[i].x));
      json c = cx;
      c["solver"] = obj;
      ft.expect(std::abs(obj - oracle.objective) <= 1e-3, std::abs(obj - oracle.objective), c);
    } catch (const std::exception& e) {
      ft.error(e, cx);
    }
  }
  out.push_back(kt.done());
  out.push_back(ft.done());

  // l*_gamma at radius 1 against hinge at radius C(gamma): the same program after scaling f.
  const double gamma = 0.05, Cg = 1.0 / gamma;
  AdversarialSpec spec;
  spec.d = 5;
  spec.gamma = gamma;
  spec.theta = 0.7;
  spec.lambda3 = 0.2;
  RngStream data_rng(seed, 5);
  const auto data = measures::sample_dataset(spec, 40, data_rng);
  const auto lin = kernels::linear_kernel();
  const auto star = make_loss("truncated_margin", gamma, Cg);
  const auto hinge = make_loss("hinge");
  {
    Tally t("loss scaling pointwise identity");
    for (int i = 0; i < 100; ++i) {
      const double f = 4.0 * rng.uniform() - 2.0;
      const int y = rng.sign();
      const double diff = std::abs(star.value(y * f) - hinge.value(y * Cg * f));
      t.expect(diff <= 1e-12, diff, {{"f", f}, {"y", y}});
    }
    out.push_back(t.done());
  }
  {
    Tally t("loss scaling program optimum");
    SolverOptions opts;
    opts.eps_opt = 2e-7;
    opts.max_iters = 2000000;
    try {
      const auto a = learners::train_kernel_program(data, lin, star, 1.0, opts);
      const auto b = learners::train_kernel_program(data, lin, hinge, Cg, opts);
      const double diff = std::abs(a.cert.objective - b.cert.objective);
      t.expect(diff <= 1e-6, diff, {{"truncated_margin", a.cert.objective}, {"hinge", b.cert.objective},
                                    {"gap_a", a.cert.gap}, {"gap_b", b.cert.gap}});
    } catch (const std::exception& e) {
      t.error(e, {});
    }
    out.push_back(t.done());
  }
  {
    Tally t("objective nonincreasing in C");
    SolverOptions opts;
    opts.eps_opt = 1e-4;
    opts.max_iters = 400000;
    double prev = std::numeric_limits<double>::infinity();
    for (double C : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto m = learners::train_kernel_program(data, lin, hinge, C, opts);
      t.le(m.cert.objective, prev, 2 * opts.eps_opt, {{"C", C}});
      prev = m.cert.objective;
    }
    out.push_back(t.done());
  }
  return finish("solver", std::move(out), start);
}

SuiteReport verify_geometry(std::uint64_t seed) {
  const auto start = Clock::now();
  std::vector<CheckResult> out;
  RngStream rng(seed, 6);
  const double eps = 1e-3;
  Tally contain("MVEE containment");
  Tally john("John ratio support function");
  for (int m : {2, 3, 5, 10}) {
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<Vec> pts;
      Vec stretch(m);
      for (int j = 0; j < m; ++j) stretch[j] = 1.0 + 4.0 * rng.uniform();
      for (int i = 0; i < 3 * m + 4; ++i) {
        Vec p(m);
        for (int j = 0; j < m; ++j) p[j] = rng.normal() * stretch[j];
        pts.push_back(p);
      }
      for (bool sym : {true, false}) {
        const json cx{{"m", m}, {"symmetric", sym}, {"rep", rep}};
        try {
          const auto E = geometry::mvee(pts, sym, eps);
          json c = cx;
          const double g = geometry::max_gauge(E, pts, sym);
          c["max_gauge"] = g;
          contain.le(g, 1.0 + eps, 1e-9, c);
          if (!sym) continue;
          const Mat Minv = E.shape.inverse();
          for (int k = 0; k < 200; ++k) {
            Vec u(m);
            for (int j = 0; j < m; ++j) u[j] = rng.normal();
            u.normalize();
            double h = 0.0;
            for (const auto& p : pts) h = std::max(h, std::abs(p.dot(u)));
            const double need = std::sqrt(u.dot(Minv * u)) / std::sqrt(m * (1.0 + eps));
            json cu = cx;
            cu["u"] = vec_json(u);
            john.le(need, h, 1e-12, cu);
          }
        } catch (const std::exception& e) {
          contain.error(e, cx);
        }
      }
    }
  }
  out.push_back(contain.done());
  out.push_back(john.done());

  Tally cert("noise measure hinge certificate");
  Tally mass("noise measure is a probability measure");
  for (int m : {2, 3, 5}) {
    const int d = 6;
    Mat A(m, d);
    for (Eigen::Index j = 0; j < A.size(); ++j) A.data()[j] = rng.normal();
    A /= Eigen::JacobiSVD<Mat>(A).singularValues()[0];
    const auto psi = [A](const Vec& x) -> Vec { return A * x; };
    std::vector<Vec> probes;
    for (int i = 0; i < 50 * m; ++i) probes.push_back(sphere::sample_unit_sphere(d, rng));
    try {
      const auto nm = geometry::build_noise_measure(psi, probes, m, eps);
      const double tw = nm.mu.total_weight();
      mass.expect(std::abs(tw - 1.0) <= 1e-9, std::abs(tw - 1.0), {{"m", m}, {"total", tw}});
      const Mat L = Eigen::LLT<Mat>(nm.inner_product).matrixL();
      for (double norm : {1.0, 10.0, 100.0})
        for (int k = 0; k < 100; ++k) {
          Vec u(m);
          for (int j = 0; j < m; ++j) u[j] = rng.normal();
          const Vec w = norm * (L * u.normalized());
          const double err = geometry::hinge_error(nm.mu, psi, w);
          const double need = norm / (2.0 * std::pow(m, 1.5));
          cert.le(need, err, 1e-9, {{"m", m}, {"norm", norm}, {"w", vec_json(w)}});
        }
    } catch (const std::exception& e) {
      cert.error(e, {{"m", m}});
    }
  }
  out.push_back(cert.done());
  out.push_back(mass.done());
  return finish("geometry", std::move(out), start);
}

SuiteReport verify_band(std::uint64_t seed) {
  const auto start = Clock::now();
  std::vector<CheckResult> out;
  AdversarialSpec spec;
  spec.d = 8;
  spec.gamma = 0.05;
  spec.theta = 0.7;
  spec.lambda3 = 0.1;
  RngStream rng(seed, 7);
  const auto data = measures::sample_dataset(spec, 300, rng);
  const Vec e = spec.direction();
  SolverOptions opts;
  opts.eps_opt = 1e-2;
  const auto hinge = make_loss("hinge");

  Tally exact("trained zonal models (exact expansion)");
  for (const auto& [name, p] : std::vector<std::pair<std::string, std::map<std::string, double>>>{
           {"linear", {}}, {"sss", {}}, {"rbf", {{"sigma", 1.0}}}, {"poly", {{"degree", 3}}}}) {
    const auto k = kernels::make_kernel(name, p);
    const auto model = learners::train_kernel_program(data, k, hinge, 10.0, opts);
    for (int K : {3, 5, 8}) {
      const auto r = lemma_lab::check_band_gap(model, e, spec.gamma, K, 2000, rng);
      exact.expect(r.holds, r.gap - r.bound, {{"kernel", name}, {"K", K}, {"gap", r.gap}, {"bound", r.bound}});
    }
    const auto search = lemma_lab::search_directions(model, spec.gamma, 3, 20, 2000, rng);
    exact.expect(search.worst.holds, search.worst.gap - search.worst.bound,
                 {{"kernel", name}, {"direction", vec_json(search.worst_direction)}});
  }
  out.push_back(exact.done());

  Tally mc("trained feature-map model (Monte Carlo)");
  Mat A(4, spec.d);
  for (Eigen::Index j = 0; j < A.size(); ++j) A.data()[j] = rng.normal();
  const auto fk = kernels::feature_map_kernel([A](const Vec& x) -> Vec { return A * x; }, 4, spec.d);
  const auto model = learners::train_kernel_program(data, fk, hinge, 10.0, opts);
  for (int K : {3, 5}) {
    const auto r = lemma_lab::check_band_gap(model, e, spec.gamma, K, 4000, rng);
    mc.expect(r.holds, r.gap - r.bound - r.tolerance, {{"K", K}, {"gap", r.gap}, {"bound", r.bound}});
  }
  out.push_back(mc.done());
  return finish("band", std::move(out), start);
}

std::vector<SuiteReport> verify_lemmas(const std::string& suite) {
  std::vector<SuiteReport> out;
  const bool all = suite == "all";
  bool known = all;
  auto want = [&](const char* name) {
    if (all || suite == name) {
      known = true;
      return true;
    }
    return false;
  };
  if (want("orthopoly")) out.push_back(verify_orthopoly());
  if (want("changes_slowly")) out.push_back(verify_changes_slowly());
  if (want("kernels")) out.push_back(verify_kernels());
  if (want("solver")) out.push_back(verify_solver());
  if (want("geometry")) out.push_back(verify_geometry());
  if (want("band")) out.push_back(verify_band());
  if (!known) throw DomainError("unknown verification suite: " + suite);
  return out;
}

json to_json(const SuiteReport& r) {
  json j{{"suite", r.suite}, {"passed", r.passed()}, {"seconds", r.seconds}, {"checks", json::array()}};
  for (const auto& c : r.checks) {
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"cases", c.cases}, {"failures", c.failures},
                           {"worst", c.worst}, {"counterexample", c.counterexample}});
  }
  return j;
}

std::string summary_line(const CheckResult& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s  %-48s %ld/%ld cases", c.passed ? "ok  " : "FAIL", c.name.c_str(),
                c.cases - c.failures, c.cases);
  return buf;
}

}  // namespace mgl::verify
