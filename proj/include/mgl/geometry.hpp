#pragma once

#include <functional>
#include <vector>

#include "mgl/measures.hpp"

namespace mgl {

/// {x : (x - c)^T M (x - c) <= 1}
struct Ellipsoid {
  Vec center;
  Mat shape;
  int iterations = 0;

  double gauge(const Vec& x) const { return (x - center).dot(shape * (x - center)); }
};

namespace geometry {

/// Khachiyan / Todd-Yildirim ascent for the minimum-volume enclosing ellipsoid.
/// With symmetric = true the ellipsoid is centred at 0 and encloses +-points.
Ellipsoid mvee(const std::vector<Vec>& points, bool symmetric, double eps = 1e-3, int max_iters = 100000);

/// Largest gauge over the points (and their negatives in the symmetric case).
double max_gauge(const Ellipsoid& E, const std::vector<Vec>& points, bool symmetric);

/// Convex weights lambda with sum lambda_j p_j = target to within tol, at most m + 1 nonzero.
std::vector<double> convex_decompose(const Vec& target, const std::vector<Vec>& points, double tol = 1e-9);

struct NoiseMeasure {
  Mat inner_product;  // John shape M of conv(+-psi(probe))
  WeightedAtomMeasure mu;
  Ellipsoid ellipsoid;
};

/// Noise measure mu_N for a finite-dimensional feature map.
NoiseMeasure build_noise_measure(const std::function<Vec(const Vec&)>& psi,
                                 const std::vector<Vec>& probe_points, int m, double eps = 1e-3);

/// Unbiased hinge error under mu of x -> <w, psi(x)>.
double hinge_error(const WeightedAtomMeasure& mu, const std::function<Vec(const Vec&)>& psi, const Vec& w);

}  // namespace geometry
}  // namespace mgl
