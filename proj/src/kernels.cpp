#include "mgl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mgl/error.hpp"

namespace mgl {

double KernelSpec::kappa(double s) const {
  s = std::clamp(s, -1.0, 1.0);
  switch (form) {
    case KernelForm::Zonal: return profile(s) / scale;
    case KernelForm::LegendreSeries: {
      const auto p = orthopoly::legendre_all(legendre_d, static_cast<int>(legendre.size()) - 1, s);
      double acc = 0.0;
      for (std::size_t n = 0; n < legendre.size(); ++n) acc += legendre[n] * p[n];
      return acc / scale;
    }
    case KernelForm::FeatureMap: break;
  }
  throw DomainError("kappa() called on a feature-map kernel");
}

double KernelSpec::operator()(const Vec& x, const Vec& y) const {
  if (x.size() != y.size()) throw DomainError("kernel arguments differ in dimension");
  if (form == KernelForm::FeatureMap) return feature(x).dot(feature(y)) / scale;
  return kappa(x.dot(y));
}

double TabulatedProfile::operator()(double t) const {
  if (s.empty()) throw DomainError("empty tabulated profile");
  t = std::clamp(t, s.back(), s.front());
  // s is descending
  auto it = std::lower_bound(s.begin(), s.end(), t, [](double a, double b) { return a > b; });
  std::size_t j = static_cast<std::size_t>(it - s.begin());
  if (j == 0) return value.front();
  if (j >= s.size()) return value.back();
  const double w = (s[j - 1] - t) / (s[j - 1] - s[j]);
  return (1.0 - w) * value[j - 1] + w * value[j];
}

namespace kernels {

KernelSpec linear_kernel() {
  KernelSpec k;
  k.name = "linear";
  k.profile = [](double s) { return s; };
  return k;
}

KernelSpec sss_kernel(bool normalize) {
  KernelSpec k;
  k.name = "sss";
  k.normalize = normalize;
  k.profile = [](double s) { return 1.0 / (1.0 - 0.5 * s); };
  k.scale = normalize ? 2.0 : 1.0;
  return k;
}

KernelSpec rbf_kernel(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("rbf bandwidth must be positive");
  KernelSpec k;
  k.name = "rbf";
  k.params["sigma"] = sigma;
  const double inv = 1.0 / (sigma * sigma);
  k.profile = [inv](double s) { return std::exp((s - 1.0) * inv); };
  return k;
}

KernelSpec poly_kernel(int degree) {
  if (degree < 0) throw DomainError("polynomial degree must be >= 0");
  KernelSpec k;
  k.name = "poly";
  k.params["degree"] = degree;
  k.profile = [degree](double s) { return std::pow(0.5 * (1.0 + s), degree); };
  return k;
}

KernelSpec legendre_series_kernel(int d, std::vector<double> b, bool normalize) {
  if (b.empty()) throw DomainError("empty Legendre series");
  KernelSpec k;
  k.form = KernelForm::LegendreSeries;
  k.name = "legendre";
  k.legendre_d = d;
  k.legendre = std::move(b);
  k.normalize = normalize;
  double total = 0.0;
  for (double v : k.legendre) total += v;
  k.scale = normalize && total > 0.0 ? total : 1.0;
  return k;
}

KernelSpec feature_map_kernel(std::function<Vec(const Vec&)> psi, int m, int d, bool normalize) {
  KernelSpec k;
  k.form = KernelForm::FeatureMap;
  k.name = "feature";
  k.feature = std::move(psi);
  k.feature_dim = m;
  k.normalize = normalize;
  if (normalize) {
    RngStream rng(0x5eedULL, static_cast<std::uint64_t>(d));
    double top = 0.0;
    for (int i = 0; i < 256; ++i) top = std::max(top, k.feature(sphere::sample_unit_sphere(d, rng)).squaredNorm());
    if (top > 0.0) k.scale = top;
  }
  return k;
}

KernelSpec tabulated_kernel(const TabulatedProfile& table) {
  KernelSpec k;
  k.name = "tabulated";
  k.normalize = false;
  k.profile = [table](double s) { return table(s); };
  return k;
}

KernelSpec make_kernel(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (name == "linear") return linear_kernel();
  if (name == "sss") return sss_kernel(true);
  if (name == "rbf") return rbf_kernel(get("sigma", 1.0));
  if (name == "poly") return poly_kernel(static_cast<int>(get("degree", 3)));
  throw DomainError("unknown kernel: " + name);
}

double kernel_eval(const KernelSpec& k, const Vec& x, const Vec& y) { return k(x, y); }

namespace {

Mat stack(const std::vector<Vec>& pts) {
  const auto d = pts.front().size();
  Mat X(d, pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != d) throw DomainError("points differ in dimension");
    X.col(static_cast<Eigen::Index>(i)) = pts[i];
  }
  return X;
}

Mat features(const KernelSpec& k, const std::vector<Vec>& pts) {
  Mat F(k.feature_dim, pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) F.col(static_cast<Eigen::Index>(i)) = k.feature(pts[i]);
  return F;
}

}  // namespace

Mat cross_gram(const KernelSpec& k, const std::vector<Vec>& rows, const std::vector<Vec>& cols) {
  if (rows.empty() || cols.empty()) throw DomainError("gram of an empty point list");
  if (k.form == KernelForm::FeatureMap) {
    Mat G = features(k, rows).transpose() * features(k, cols);
    return G / k.scale;
  }
  Mat G = stack(rows).transpose() * stack(cols);
  if (k.form == KernelForm::LegendreSeries) {
    G = G.unaryExpr([&](double s) { return k.kappa(s); });
  } else {
    const double inv = 1.0 / k.scale;
    for (Eigen::Index j = 0; j < G.cols(); ++j)
      for (Eigen::Index i = 0; i < G.rows(); ++i) G(i, j) = k.profile(std::clamp(G(i, j), -1.0, 1.0)) * inv;
  }
  return G;
}

Mat gram(const KernelSpec& k, const std::vector<Vec>& points) {
  Mat G = cross_gram(k, points, points);
  // exact symmetry
  for (Eigen::Index j = 0; j < G.cols(); ++j)
    for (Eigen::Index i = j + 1; i < G.rows(); ++i) G(j, i) = G(i, j);
  return G;
}

PsdCheck ensure_psd(const KernelSpec& k, Mat& G, int d, int eigen_limit) {
  PsdCheck out;
  const auto n = G.rows();
  if (n <= eigen_limit) {
    out.method = "eigen";
    Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    if (out.min_eigenvalue < -1e-8 * static_cast<double>(n))
      throw InvalidKernelError("Gram matrix has eigenvalue " + std::to_string(out.min_eigenvalue) +
                               " for kernel " + k.name);
    if (out.min_eigenvalue < 0.0) {
      out.jitter = std::max(1e-10, -out.min_eigenvalue);
      G.diagonal().array() += out.jitter;
    }
    return out;
  }
  if (k.form == KernelForm::FeatureMap) {
    out.method = "feature-map";
    return out;
  }
  out.method = "schoenberg";
  const std::vector<double> b = k.form == KernelForm::LegendreSeries
                                    ? k.legendre
                                    : profile_to_legendre([&](double s) { return k.kappa(s); }, d);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] < -1e-8)
      throw InvalidKernelError("kernel " + k.name + " has negative Legendre coefficient b_" +
                               std::to_string(i) + " = " + std::to_string(b[i]));
  return out;
}

std::vector<double> profile_to_legendre(const std::function<double(double)>& kappa, int d, int nmax,
                                        double tail_tol) {
  if (d < 2) throw DomainError("profile_to_legendre needs d >= 2");
  if (nmax < 8 || nmax > orthopoly::kMaxDegree) throw DomainError("nmax must lie in [8, 512]");
  const int nodes = std::max(256, 2 * nmax + 2);
  const auto q = orthopoly::gegenbauer_quadrature(d, nodes);
  std::vector<double> num(nmax + 1, 0.0), den(nmax + 1, 0.0), mag(nmax + 1, 0.0);
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const auto p = orthopoly::legendre_all(d, nmax, q.nodes[i]);
    const double wk = q.weights[i] * kappa(q.nodes[i]);
    for (int n = 0; n <= nmax; ++n) {
      num[n] += wk * p[n];
      mag[n] += std::abs(wk * p[n]);
      den[n] += q.weights[i] * p[n] * p[n];
    }
  }
  // Coefficients below the rounding floor of their quadrature sum are set to zero.
  std::vector<double> b(nmax + 1);
  double total = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    const bool noise = std::abs(num[n]) <= 1024.0 * std::numeric_limits<double>::epsilon() * mag[n];
    b[n] = noise ? 0.0 : num[n] / den[n];
    total += std::abs(b[n]);
  }

  // Geometric fit on the envelope of the last eight coefficients.
  auto env = [&](int n) { return std::max(std::abs(b[n]), std::abs(b[n - 1])); };
  const double last = env(nmax);
  const double first = env(nmax - 6);
  if (last <= 1e-13 * std::max(total, 1.0)) return b;
  const double r = first > 0.0 ? std::pow(last / first, 1.0 / 6.0) : 1.0;
  if (!(r < 1.0) || last * r / (1.0 - r) > tail_tol)
    throw ConvergenceError("Legendre expansion has not converged at nmax = " + std::to_string(nmax));
  return b;
}

double rkhs_norm_symmetric(const orthopoly::PolyCoeffs& f, const RkhsProfile& profile) {
  if (f.d != profile.d) throw DomainError("dimension mismatch between function and kernel profile");
  double acc = 0.0;
  for (std::size_t n = 0; n < f.alpha.size(); ++n) {
    const double a = f.alpha[n];
    if (a == 0.0) continue;
    if (!profile.in_index_set(static_cast<int>(n)))
      throw InfiniteNormError("coefficient of degree " + std::to_string(n) +
                              " is nonzero but the kernel has b_n = 0");
    acc += a * a / profile.b[n];
  }
  return std::sqrt(acc);
}

std::vector<double> chebyshev_grid(int n) {
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) s[j] = std::cos(j * std::numbers::pi / (n - 1));
  s.front() = 1.0;
  s.back() = -1.0;
  return s;
}

Symmetrized symmetrize_mc(const KernelSpec& k, int d, int n_rotations, RngStream& rng) {
  if (n_rotations < 16) throw DomainError("symmetrize_mc needs at least 16 rotations");
  if (d < 2) throw DomainError("symmetrize_mc needs d >= 2");
  TabulatedProfile t;
  t.s = chebyshev_grid();
  const std::size_t g = t.s.size();
  std::vector<double> mean(g, 0.0), m2(g, 0.0);
  for (int r = 0; r < n_rotations; ++r) {
    const Mat A = sphere::haar_orthogonal(d, rng);
    const Vec ax = A.col(0);
    for (std::size_t j = 0; j < g; ++j) {
      const double s = t.s[j];
      const Vec ay = s * A.col(0) + std::sqrt(std::max(0.0, 1.0 - s * s)) * A.col(1);
      const double v = k(ax, ay);
      const double delta = v - mean[j];
      mean[j] += delta / (r + 1);
      m2[j] += delta * (v - mean[j]);
    }
  }
  t.value = mean;
  t.std_err.resize(g);
  for (std::size_t j = 0; j < g; ++j) t.std_err[j] = std::sqrt(m2[j] / (n_rotations - 1) / n_rotations);
  return {tabulated_kernel(t), t};
}

}  // namespace kernels

RkhsProfile RkhsProfile::from_kernel(const KernelSpec& k, int d, int nmax) {
  if (!k.zonal()) throw DomainError("RKHS profile needs a zonal kernel");
  RkhsProfile p;
  p.d = d;
  if (k.form == KernelForm::LegendreSeries) {
    if (k.legendre_d != d) throw DomainError("Legendre series kernel built for another dimension");
    p.b = k.legendre;
    for (double& v : p.b) v /= k.scale;
  } else {
    p.b = kernels::profile_to_legendre([&](double s) { return k.kappa(s); }, d, nmax);
  }
  return p;
}

double RkhsProfile::total() const {
  double s = 0.0;
  for (double v : b) s += v;
  return s;
}

bool RkhsProfile::in_index_set(int n) const {
  if (n < 0 || n >= static_cast<int>(b.size())) return false;
  double scale = 0.0;
  for (double v : b) scale += std::abs(v);
  return b[n] > threshold_rel * scale;
}

double RkhsProfile::a_sq(int n) const {
  if (!in_index_set(n)) return std::numeric_limits<double>::infinity();
  // N_{d,n} in floating point: binom(d+n-1, d-1) - binom(d+n-3, d-1)
  auto lbinom = [](double a, double k) {
    return std::lgamma(a + 1.0) - std::lgamma(k + 1.0) - std::lgamma(a - k + 1.0);
  };
  double N = std::exp(lbinom(d + n - 1.0, d - 1.0));
  if (d + n - 3 >= d - 1) N -= std::exp(lbinom(d + n - 3.0, d - 1.0));
  return N / (sphere::sphere_area(d) * b[n]);
}

}  // namespace mgl
