#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>

namespace mgl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Reproducible random stream keyed by (seed, stream_id).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  double uniform();   // [0, 1)
  double normal();    // N(0, 1)
  int sign();         // +1 / -1 with probability 1/2
  std::size_t index(std::size_t n);  // uniform on {0, ..., n-1}
  std::mt19937_64& engine() { return eng_; }

  /// Child stream for a sub-task; independent of how much of *this was consumed.
  RngStream child(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace mgl

namespace mgl::sphere {

Vec sample_unit_sphere(int d, RngStream& rng);

/// Orthogonal d x d matrix whose first column is +-e (Householder reflection).
/// Columns 1..d-1 span the orthogonal complement of e.
Mat orthonormal_completion(const Vec& e);

/// x = a e + sqrt(1 - a^2) z with z uniform on the sphere orthogonal to e.
Vec sample_band(const Vec& e, double a, RngStream& rng);

/// Same, with a precomputed completion of e (first column +-e).
Vec sample_band(const Mat& completion, const Vec& e, double a, RngStream& rng);

/// Haar-distributed orthogonal matrix.
Mat haar_orthogonal(int d, RngStream& rng);

/// Dimension of degree-n spherical harmonics on S^{d-1}.
std::uint64_t harmonic_dim(int d, int n);

/// Surface area of S^{d-1}.
double sphere_area(int d);

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
};

/// Monte-Carlo mean of f over the band {x : <x, e> = a}.
McEstimate band_average(const std::function<double(const Vec&)>& f, const Vec& e, double a,
                        int n_samples, RngStream& rng);

}  // namespace mgl::sphere
