#include "mgl/orthopoly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mgl/error.hpp"

namespace mgl::orthopoly {
namespace {

constexpr double kDomainSlack = 1e-12;

void check_dimension(int d) {
  if (d < 2) throw DomainError("Legendre polynomials need d >= 2, got d = " + std::to_string(d));
}

void check_degree(int n) {
  if (n < 0 || n > kMaxDegree)
    throw DomainError("degree must lie in [0, " + std::to_string(kMaxDegree) + "], got " +
                      std::to_string(n));
}

double clamp_unit(double t) {
  if (!(std::abs(t) <= 1.0 + kDomainSlack))
    throw DomainError("argument outside [-1, 1]: " + std::to_string(t));
  return std::clamp(t, -1.0, 1.0);
}

}  // namespace

double legendre(int d, int n, double t) {
  check_dimension(d);
  check_degree(n);
  t = clamp_unit(t);
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k + d - 4) * t * cur - (k - 1.0) * prev) / (k + d - 3.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> legendre_all(int d, int nmax, double t) {
  check_dimension(d);
  check_degree(nmax);
  t = clamp_unit(t);
  std::vector<double> p(static_cast<std::size_t>(nmax) + 1);
  p[0] = 1.0;
  if (nmax >= 1) p[1] = t;
  for (int k = 2; k <= nmax; ++k)
    p[k] = ((2.0 * k + d - 4) * t * p[k - 1] - (k - 1.0) * p[k - 2]) / (k + d - 3.0);
  return p;
}

double chebyshev(ChebyshevKind kind, int n, double t) {
  check_degree(n);
  t = clamp_unit(t);
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = kind == ChebyshevKind::First ? t : 2.0 * t;
  for (int k = 2; k <= n; ++k) {
    const double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double LegendreBoundBranches::min() const {
  double m = std::min(gamma_branch, power_branch);
  if (product_branch) m = std::min(m, *product_branch);
  return m;
}

LegendreBoundBranches legendre_bound_branches(int d, int n, double t) {
  if (d < 5) throw DomainError("Legendre bound requires d >= 5");
  if (n < 1) throw DomainError("Legendre bound requires n >= 1");
  if (!(std::abs(t) < 1.0)) throw DomainError("Legendre bound requires |t| < 1");
  const double at = std::abs(t);
  const double half_exp = 0.5 * (d - 2);

  LegendreBoundBranches br{};
  br.gamma_branch = std::exp(std::lgamma(0.5 * (d - 1)) - 0.5 * std::log(std::numbers::pi) +
                             half_exp * std::log(4.0 / (n * (1.0 - t * t))));
  const double base = static_cast<double>(n) / (n + d - 2.0) + 2.0 * at;
  br.power_branch = std::pow(base, 0.5 * n);
  if (base <= 1.0) {
    double log_prod = 0.0;
    for (int i = 1; i <= n; ++i) log_prod += std::log(static_cast<double>(i) / (i + d - 2.0) + 2.0 * at);
    br.product_branch = std::exp(0.5 * log_prod);
  }
  return br;
}

double legendre_bound(int d, int n, double t) { return legendre_bound_branches(d, n, t).min(); }

double TailConstants::E() { return 12.0; }
double TailConstants::r() { return std::sqrt(0.75); }
double TailConstants::s() { return std::sqrt(4.07 / (2.0 * std::numbers::e)); }

double legendre_tail_bound(int K, int d) {
  if (d < 5) throw DomainError("tail bound requires d >= 5");
  if (K < 1) throw DomainError("tail bound requires K >= 1");
  const double r = TailConstants::r();
  const double s = TailConstants::s();
  return std::pow(r, K) / (1.0 - r) + TailConstants::E() * std::pow(s, d - 2);
}

PolyCoeffs::PolyCoeffs(int dim, std::vector<double> coeffs) : d(dim), alpha(std::move(coeffs)) {
  validate();
}

void PolyCoeffs::validate() const {
  check_dimension(d);
  if (static_cast<int>(alpha.size()) > kMaxDegree + 1) throw DomainError("too many coefficients");
  for (double a : alpha)
    if (!std::isfinite(a)) throw DomainError("non-finite Legendre coefficient");
}

double PolyCoeffs::operator()(double t) const {
  if (alpha.empty()) return 0.0;
  const auto p = legendre_all(d, degree(), t);
  double s = 0.0;
  for (std::size_t n = 0; n < alpha.size(); ++n) s += alpha[n] * p[n];
  return s;
}

double PolyCoeffs::sup_coeff() const {
  double c = 0.0;
  for (double a : alpha) c = std::max(c, std::abs(a));
  return c;
}

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
  return s;
}

QuadratureRule arcsine_quadrature(int n) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  QuadratureRule q;
  q.nodes.resize(n);
  q.weights.assign(n, 1.0 / n);
  for (int k = 0; k < n; ++k)
    q.nodes[k] = kArcsineHalfWidth * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
  return q;
}

QuadratureRule gegenbauer_quadrature(int d, int n) {
  check_dimension(d);
  if (n < 1) throw DomainError("quadrature needs at least one node");
  QuadratureRule q;
  if (d == 2) {
    q.nodes.resize(n);
    q.weights.assign(n, std::numbers::pi / n);
    for (int k = 0; k < n; ++k)
      q.nodes[k] = std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
    return q;
  }
  // Golub-Welsch on the monic Jacobi recurrence with alpha = beta = mu.
  const double mu = 0.5 * (d - 3);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) {
    const double b = k * (k + 2.0 * mu) / ((2.0 * k + 2.0 * mu + 1.0) * (2.0 * k + 2.0 * mu - 1.0));
    off[k - 1] = std::sqrt(b);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  const double mass = std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(mu + 1.0) -
                               std::lgamma(mu + 1.5));
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    q.weights[i] = mass * v0 * v0;
  }
  return q;
}

double arcsine_norm(const std::function<double(double)>& f, int p, int nodes) {
  if (p != 1 && p != 2) throw DomainError("arcsine_norm supports p = 1 or p = 2");
  const auto q = arcsine_quadrature(nodes);
  if (p == 1) return q.integrate([&](double x) { return std::abs(f(x)); });
  return std::sqrt(q.integrate([&](double x) {
    const double v = f(x);
    return v * v;
  }));
}

double arcsine_orthopoly(int n, double x) {
  check_degree(n);
  if (!(std::abs(x) <= kArcsineHalfWidth + kDomainSlack))
    throw DomainError("arcsine orthopolynomials live on [-1/8, 1/8]");
  if (n == 0) return 1.0;
  const double u = std::clamp(x / kArcsineHalfWidth, -1.0, 1.0);
  return std::numbers::sqrt2 * chebyshev(ChebyshevKind::First, n, u);
}

double band_difference_bound(double gamma, int K, int d, double l1_norm, double coeff_bound) {
  const double lead = 32.0 * gamma * std::pow(static_cast<double>(K), 3.5);
  return lead * l1_norm + (lead + 2.0) * coeff_bound * legendre_tail_bound(K, d);
}

SlowChange changes_slowly_gap(const PolyCoeffs& f, double gamma, int K) {
  if (!(gamma > 0.0 && gamma < kArcsineHalfWidth))
    throw DomainError("gamma must lie in (0, 1/8)");
  if (f.d < 5) throw DomainError("band-difference bound requires d >= 5");
  if (K < 1) throw DomainError("cutoff K must be >= 1");
  SlowChange out{};
  out.gap = std::abs(f(gamma) - f(-gamma));
  out.l1_norm = arcsine_norm([&](double x) { return f(x); }, 1);
  out.sup_coeff = f.sup_coeff();
  out.bound = band_difference_bound(gamma, K, f.d, out.l1_norm, out.sup_coeff);
  return out;
}

}  // namespace mgl::orthopoly
