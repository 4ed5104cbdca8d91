#pragma once

// d-dimensional Legendre (Gegenbauer-normalized, P_{d,n}(1) = 1) and Chebyshev
// polynomials, quadrature rules for their weights, and the pointwise / tail
// bounds used to control band differences of zonal functions.

#include <functional>
#include <optional>
#include <vector>

namespace mgl::orthopoly {

inline constexpr int kMaxDegree = 512;

// Half-width of the support of the arcsine noise measure.
inline constexpr double kArcsineHalfWidth = 0.125;

/// P_{d,n}(t) by the three-term recursion
///   P_{d,n}(t) = [(2n+d-4) t P_{d,n-1}(t) - (n-1) P_{d,n-2}(t)] / (n+d-3).
/// The minus sign on the second term is what makes P_{d,n}(1) = 1 and
/// ||P_{d,n}||_inf = 1; the "+" variant that appears in some write-ups of this
/// recursion violates both.
double legendre(int d, int n, double t);

/// P_{d,0}(t), ..., P_{d,nmax}(t) in one pass.
std::vector<double> legendre_all(int d, int nmax, double t);

enum class ChebyshevKind { First, Second };

/// T_n(t) (= P_{2,n}) or U_n(t).
double chebyshev(ChebyshevKind kind, int n, double t);

/// The three pointwise branches bounding |P_{d,n}(t)| for d >= 5, n >= 1.
struct LegendreBoundBranches {
  double gamma_branch;                  // Gamma((d-1)/2)/sqrt(pi) [4/(n(1-t^2))]^{(d-2)/2}
  double power_branch;                  // (n/(n+d-2) + 2|t|)^{n/2}
  std::optional<double> product_branch; // sqrt(prod_i (i/(i+d-2) + 2|t|)), when admissible

  double min() const;
};

LegendreBoundBranches legendre_bound_branches(int d, int n, double t);

/// min over the admissible branches; always >= |P_{d,n}(t)|.
double legendre_bound(int d, int n, double t);

/// Constants of the tail estimate sum_{n>=K} |P_{d,n}(t)| <= E r^K + E s^d,
/// pinned to the explicit values the estimate is derived with.
struct TailConstants {
  static double E();  // 12
  static double r();  // sqrt(3/4)
  static double s();  // sqrt(4.07 / (2e))
};

/// (1/(1 - sqrt(3/4))) (3/4)^{K/2} + 12 (4.07/(2e))^{(d-2)/2}: an upper bound on
/// sum_{n>=K} |P_{d,n}(t)| for every |t| <= 1/8.
double legendre_tail_bound(int K, int d);

/// f(t) = sum_n alpha[n] P_{d,n}(t).
struct PolyCoeffs {
  int d = 2;
  std::vector<double> alpha;

  PolyCoeffs() = default;
  PolyCoeffs(int dim, std::vector<double> coeffs);

  double operator()(double t) const;
  int degree() const { return static_cast<int>(alpha.size()) - 1; }
  double sup_coeff() const;
  void validate() const;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  double integrate(const std::function<double(double)>& f) const;
};

/// Gauss-Chebyshev rule for the arcsine probability measure on [-1/8, 1/8]
/// (density 8 / (pi sqrt(1 - (8x)^2))). Exact for polynomials of degree < 2n.
QuadratureRule arcsine_quadrature(int n = 256);

/// Gauss rule for the weight (1 - t^2)^{(d-3)/2} on [-1, 1] (Golub-Welsch).
QuadratureRule gegenbauer_quadrature(int d, int n);

/// ||f||_{p, mu} for the arcsine measure mu, p in {1, 2}.
double arcsine_norm(const std::function<double(double)>& f, int p, int nodes = 256);

/// n-th orthonormal polynomial of the arcsine measure: 1, sqrt(2) T_n(8x).
double arcsine_orthopoly(int n, double x);

struct SlowChange {
  double gap;    // |f(gamma) - f(-gamma)|
  double bound;  // 32 gamma K^3.5 ||f||_{1,mu} + (32 gamma K^3.5 + 2) C tail(K, d)
  double l1_norm;
  double sup_coeff;
};

/// Band-difference bound for a one-dimensional Legendre series; requires
/// d >= 5 and gamma in (0, 1/8).
SlowChange changes_slowly_gap(const PolyCoeffs& f, double gamma, int K);

/// Right-hand side of the band-difference bound given its ingredients.
double band_difference_bound(double gamma, int K, int d, double l1_norm, double coeff_bound);

}  // namespace mgl::orthopoly
