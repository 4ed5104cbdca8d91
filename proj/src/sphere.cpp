#include "mgl/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mgl/error.hpp"

namespace mgl {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x6d676cu};
  eng_.seed(seq);
}

double RngStream::uniform() { return unif_(eng_); }
double RngStream::normal() { return normal_(eng_); }
int RngStream::sign() { return (eng_() >> 63) ? 1 : -1; }

std::size_t RngStream::index(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_);
}

RngStream RngStream::child(std::uint64_t tag) const {
  // splitmix64 finalizer keeps nearby tags far apart
  std::uint64_t z = stream_ ^ (tag + 0x9e3779b97f4a7c15ull + (stream_ << 6) + (stream_ >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return RngStream(seed_, z);
}

}  // namespace mgl

namespace mgl::sphere {

Vec sample_unit_sphere(int d, RngStream& rng) {
  if (d < 1) throw DomainError("sphere dimension must be >= 1");
  Vec x(d);
  double n2 = 0.0;
  do {
    for (int i = 0; i < d; ++i) x[i] = rng.normal();
    n2 = x.squaredNorm();
  } while (n2 < 1e-300);
  return x / std::sqrt(n2);
}

Mat orthonormal_completion(const Vec& e) {
  const int d = static_cast<int>(e.size());
  if (d < 1) throw DomainError("empty direction");
  if (std::abs(e.norm() - 1.0) > 1e-9) throw DomainError("direction must be a unit vector");
  // H = I - 2 v v^T / |v|^2 with v = e + s e_1 maps e to -s e_1, so H e_1 = -s e.
  const double s = e[0] >= 0.0 ? 1.0 : -1.0;
  Vec v = e;
  v[0] += s;
  const double vv = v.squaredNorm();
  Mat H = Mat::Identity(d, d);
  H.noalias() -= (2.0 / vv) * v * v.transpose();
  return H;
}

namespace {

Vec lift(const Mat& H, const Vec& e, double a, RngStream& rng) {
  const int d = static_cast<int>(e.size());
  if (!(std::abs(a) <= 1.0 + 1e-12)) throw DomainError("band height outside [-1, 1]");
  a = std::clamp(a, -1.0, 1.0);
  const double r = std::sqrt(std::max(0.0, 1.0 - a * a));
  if (r == 0.0) return a * e;
  if (d < 2) throw DomainError("band sampling with |a| < 1 needs d >= 2");
  Vec g(d - 1);
  double n2 = 0.0;
  do {
    for (int i = 0; i < d - 1; ++i) g[i] = rng.normal();
    n2 = g.squaredNorm();
  } while (n2 < 1e-300);
  g /= std::sqrt(n2);
  Vec x = a * e;
  x.noalias() += r * (H.rightCols(d - 1) * g);
  return x;
}

}  // namespace

Vec sample_band(const Vec& e, double a, RngStream& rng) {
  return lift(orthonormal_completion(e), e, a, rng);
}

Vec sample_band(const Mat& completion, const Vec& e, double a, RngStream& rng) {
  return lift(completion, e, a, rng);
}

Mat haar_orthogonal(int d, RngStream& rng) {
  if (d < 1) throw DomainError("matrix dimension must be >= 1");
  Mat G(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ();
  const Mat& R = qr.matrixQR();
  for (int j = 0; j < d; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

namespace {

// binom(n, k) exactly, or nullopt-like false on overflow
bool binom(std::uint64_t n, std::uint64_t k, std::uint64_t& out) {
  if (k > n) {
    out = 0;
    return true;
  }
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return false;
  }
  out = static_cast<std::uint64_t>(acc);
  return true;
}

}  // namespace

std::uint64_t harmonic_dim(int d, int n) {
  if (d < 2 || n < 0) throw DomainError("harmonic_dim needs d >= 2 and n >= 0");
  std::uint64_t a = 0, b = 0;
  if (!binom(static_cast<std::uint64_t>(d + n - 1), d - 1, a))
    throw OverflowError("harmonic_dim(" + std::to_string(d) + ", " + std::to_string(n) +
                        ") overflows 64 bits");
  if (d + n - 3 >= d - 1) {
    if (!binom(static_cast<std::uint64_t>(d + n - 3), d - 1, b))
      throw OverflowError("harmonic_dim overflow");
  }
  return a - b;
}

double sphere_area(int d) {
  if (d < 1) throw DomainError("sphere_area needs d >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

McEstimate band_average(const std::function<double(const Vec&)>& f, const Vec& e, double a,
                        int n_samples, RngStream& rng) {
  if (n_samples < 2) throw DomainError("band_average needs at least two samples");
  const Mat H = orthonormal_completion(e);
  // Welford
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double v = f(lift(H, e, a, rng));
    const double delta = v - mean;
    mean += delta / (i + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / (n_samples - 1);
  return {mean, std::sqrt(var / n_samples)};
}

}  // namespace mgl::sphere
