#include "mgl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mgl/error.hpp"

namespace mgl::geometry {
namespace {

Mat as_columns(const std::vector<Vec>& pts) {
  if (pts.empty()) throw DomainError("empty point set");
  const auto m = pts.front().size();
  Mat P(m, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != m) throw DomainError("points differ in dimension");
    P.col(static_cast<Eigen::Index>(i)) = pts[i];
  }
  return P;
}

int numeric_rank(const Mat& A) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(A);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * sv[0]) ++r;
  return r;
}

// Weights u on the columns of Q maximizing log det(Q diag(u) Q^T), to
// tolerance max_i q_i^T X^{-1} q_i <= k (1 + eps).
Vec khachiyan(const Mat& Q, double eps, int max_iters, int& iterations) {
  const Eigen::Index k = Q.rows(), n = Q.cols();
  Vec u = Vec::Constant(n, 1.0 / static_cast<double>(n));
  Mat X = Q * u.asDiagonal() * Q.transpose();
  const double kk = static_cast<double>(k);
  Vec kappa(n);
  for (iterations = 0; iterations < max_iters; ++iterations) {
    if (iterations % 200 == 199) X = Q * u.asDiagonal() * Q.transpose();
    Eigen::LLT<Mat> llt(X);
    if (llt.info() != Eigen::Success) throw ConvergenceError("MVEE moment matrix lost definiteness");
    const Mat Z = llt.matrixL().solve(Q);
    kappa = Z.colwise().squaredNorm().transpose();

    Eigen::Index j = 0;
    const double kmax = kappa.maxCoeff(&j);
    if (kmax <= kk * (1.0 + eps)) break;

    // away candidate: smallest kappa among points carrying weight
    Eigen::Index l = -1;
    double kmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i)
      if (u[i] > 0.0 && kappa[i] < kmin) kmin = kappa[i], l = i;

    Eigen::Index idx = j;
    double tau;
    if (l >= 0 && kk - kmin > kmax - kk && u[l] < 1.0) {
      const double lo = -u[l] / (1.0 - u[l]);
      tau = kmin > 1.0 ? std::max((kmin / kk - 1.0) / (kmin - 1.0), lo) : lo;
      idx = l;
    } else {
      tau = (kmax / kk - 1.0) / (kmax - 1.0);
    }
    u *= (1.0 - tau);
    u[idx] += tau;
    if (u[idx] < 1e-300) u[idx] = 0.0;
    X = (1.0 - tau) * X + tau * Q.col(idx) * Q.col(idx).transpose();
  }
  if (iterations >= max_iters) throw ConvergenceError("MVEE did not reach the requested accuracy");
  return u;
}

}  // namespace

Ellipsoid mvee(const std::vector<Vec>& points, bool symmetric, double eps, int max_iters) {
  if (!(eps > 0.0 && eps <= 0.1)) throw DomainError("mvee eps must lie in (0, 0.1]");
  const Mat P = as_columns(points);
  const auto m = P.rows();
  Ellipsoid E;
  if (symmetric) {
    const int r = numeric_rank(P);
    if (r < m)
      throw RankDeficiencyError("points span a " + std::to_string(r) + "-dimensional subspace of R^" +
                                    std::to_string(m),
                                r, static_cast<int>(m));
    const Vec u = khachiyan(P, eps, max_iters, E.iterations);
    const Mat X = P * u.asDiagonal() * P.transpose();
    E.center = Vec::Zero(m);
    E.shape = X.inverse() / static_cast<double>(m);
  } else {
    const Mat D = P.colwise() - P.col(0);
    const int r = numeric_rank(D);
    if (r < m)
      throw RankDeficiencyError("points span a " + std::to_string(r) + "-dimensional affine subspace of R^" +
                                    std::to_string(m),
                                r, static_cast<int>(m));
    Mat Q(m + 1, P.cols());
    Q.topRows(m) = P;
    Q.row(m).setOnes();
    const double md = static_cast<double>(m);
    const Vec u = khachiyan(Q, eps * md / (md + 1.0), max_iters, E.iterations);
    E.center = P * u;
    const Mat S = P * u.asDiagonal() * P.transpose() - E.center * E.center.transpose();
    E.shape = S.inverse() / md;
  }
  E.shape = 0.5 * (E.shape + E.shape.transpose());
  return E;
}

double max_gauge(const Ellipsoid& E, const std::vector<Vec>& points, bool symmetric) {
  double g = 0.0;
  for (const auto& p : points) {
    g = std::max(g, E.gauge(p));
    if (symmetric) g = std::max(g, E.gauge(-p));
  }
  return g;
}

namespace {

// Affine minimizer of |Q mu| subject to sum(mu) = 1.
Vec affine_min_norm(const Mat& Q) {
  const Eigen::Index k = Q.cols();
  Mat K(k + 1, k + 1);
  K.topLeftCorner(k, k) = Q.transpose() * Q;
  K.topRightCorner(k, 1).setOnes();
  K.bottomLeftCorner(1, k).setOnes();
  K(k, k) = 0.0;
  Vec rhs = Vec::Zero(k + 1);
  rhs[k] = 1.0;
  const Vec sol = K.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

void caratheodory_prune(std::vector<double>& lambda, const std::vector<Vec>& points) {
  const Eigen::Index m = points.front().size();
  for (;;) {
    std::vector<std::size_t> supp;
    for (std::size_t i = 0; i < lambda.size(); ++i)
      if (lambda[i] > 0.0) supp.push_back(i);
    if (static_cast<Eigen::Index>(supp.size()) <= m + 1) return;
    Mat A(m + 1, static_cast<Eigen::Index>(supp.size()));
    for (std::size_t c = 0; c < supp.size(); ++c) {
      A.col(static_cast<Eigen::Index>(c)).head(m) = points[supp[c]];
      A(m, static_cast<Eigen::Index>(c)) = 1.0;
    }
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
    Vec c = svd.matrixV().col(svd.matrixV().cols() - 1);
    if (c.maxCoeff() <= 0.0) c = -c;
    double step = std::numeric_limits<double>::infinity();
    std::size_t drop = 0;
    for (std::size_t i = 0; i < supp.size(); ++i)
      if (c[static_cast<Eigen::Index>(i)] > 0.0 && lambda[supp[i]] / c[static_cast<Eigen::Index>(i)] < step)
        step = lambda[supp[i]] / c[static_cast<Eigen::Index>(i)], drop = i;
    for (std::size_t i = 0; i < supp.size(); ++i)
      lambda[supp[i]] = std::max(0.0, lambda[supp[i]] - step * c[static_cast<Eigen::Index>(i)]);
    lambda[supp[drop]] = 0.0;
  }
}

}  // namespace

std::vector<double> convex_decompose(const Vec& target, const std::vector<Vec>& points, double tol) {
  if (points.empty()) throw DomainError("convex_decompose needs points");
  const Mat P = as_columns(points);
  if (P.rows() != target.size()) throw DomainError("target dimension differs from points");
  const Mat Qall = P.colwise() - target;
  const Eigen::Index n = Qall.cols();
  const double scale = std::max(1.0, Qall.colwise().squaredNorm().maxCoeff());

  // Wolfe's minimum-norm-point algorithm on conv(points - target).
  std::vector<Eigen::Index> S;
  std::vector<double> lam;
  {
    Eigen::Index j0 = 0;
    Qall.colwise().squaredNorm().minCoeff(&j0);
    S.push_back(j0);
    lam.push_back(1.0);
  }
  auto current = [&]() {
    Vec x = Vec::Zero(Qall.rows());
    for (std::size_t i = 0; i < S.size(); ++i) x += lam[i] * Qall.col(S[i]);
    return x;
  };
  Vec x = current();
  for (int major = 0; major < 20000; ++major) {
    if (x.norm() <= 0.1 * tol) break;
    Eigen::Index j = 0;
    const double best = (x.transpose() * Qall).minCoeff(&j);
    if (x.squaredNorm() - best <= 1e-15 * scale) break;
    if (std::find(S.begin(), S.end(), j) != S.end()) break;
    S.push_back(j);
    lam.push_back(0.0);
    for (int minor = 0; minor < 1000; ++minor) {
      Mat Q(Qall.rows(), static_cast<Eigen::Index>(S.size()));
      for (std::size_t i = 0; i < S.size(); ++i) Q.col(static_cast<Eigen::Index>(i)) = Qall.col(S[i]);
      const Vec mu = affine_min_norm(Q);
      if ((mu.array() > 1e-14).all()) {
        for (std::size_t i = 0; i < S.size(); ++i) lam[i] = mu[static_cast<Eigen::Index>(i)];
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < S.size(); ++i) {
        const double mi = mu[static_cast<Eigen::Index>(i)];
        if (mi <= 1e-14 && lam[i] - mi > 0.0) theta = std::min(theta, lam[i] / (lam[i] - mi));
      }
      for (std::size_t i = 0; i < S.size(); ++i)
        lam[i] = (1.0 - theta) * lam[i] + theta * mu[static_cast<Eigen::Index>(i)];
      std::vector<Eigen::Index> S2;
      std::vector<double> lam2;
      for (std::size_t i = 0; i < S.size(); ++i)
        if (lam[i] > 1e-14) S2.push_back(S[i]), lam2.push_back(lam[i]);
      if (S2.empty()) throw ConvergenceError("min-norm point lost its corral");
      S.swap(S2);
      lam.swap(lam2);
    }
    double total = 0.0;
    for (double v : lam) total += v;
    for (double& v : lam) v /= total;
    x = current();
  }

  std::vector<double> weights(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < S.size(); ++i) weights[static_cast<std::size_t>(S[i])] = lam[i];
  caratheodory_prune(weights, points);
  double total = 0.0;
  for (double v : weights) total += v;
  for (double& v : weights) v /= total;
  const Vec residual = P * Eigen::Map<const Vec>(weights.data(), n) - target;
  if (residual.norm() > tol)
    throw InfeasibleError("target lies outside the convex hull (residual " + std::to_string(residual.norm()) + ")");
  return weights;
}

NoiseMeasure build_noise_measure(const std::function<Vec(const Vec&)>& psi,
                                 const std::vector<Vec>& probe_points, int m, double eps) {
  if (probe_points.empty()) throw DomainError("no probe points");
  std::vector<Vec> images;
  images.reserve(probe_points.size());
  for (const auto& x : probe_points) {
    images.push_back(psi(x));
    if (images.back().size() != m) throw DomainError("feature map dimension differs from m");
  }
  NoiseMeasure out;
  out.ellipsoid = mvee(images, true, eps);
  out.inner_product = out.ellipsoid.shape;

  // M-orthonormal basis: columns of L^{-T} where M = L L^T.
  Eigen::LLT<Mat> llt(out.inner_product);
  const Mat B = llt.matrixU().solve(Mat::Identity(m, m));

  std::vector<Vec> signed_images;
  signed_images.reserve(2 * images.size());
  for (const auto& p : images) signed_images.push_back(p);
  for (const auto& p : images) signed_images.push_back(-p);

  const std::size_t np = images.size();
  const double md = static_cast<double>(m);
  for (int i = 0; i < m; ++i) {
    const Vec target = B.col(i) / std::sqrt(md);
    const auto lambda = convex_decompose(target, signed_images, 1e-9);
    for (std::size_t k = 0; k < lambda.size(); ++k) {
      if (lambda[k] <= 0.0) continue;
      const Vec& x = probe_points[k % np];
      out.mu.atoms.push_back({x, 1, lambda[k] / (2.0 * md)});
      out.mu.atoms.push_back({x, -1, lambda[k] / (2.0 * md)});
    }
  }
  return out;
}

double hinge_error(const WeightedAtomMeasure& mu, const std::function<Vec(const Vec&)>& psi, const Vec& w) {
  double acc = 0.0;
  for (const auto& a : mu.atoms) acc += a.weight * std::max(0.0, 1.0 - a.label * w.dot(psi(a.point)));
  return acc;
}

}  // namespace mgl::geometry
