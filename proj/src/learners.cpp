#include "mgl/learners.hpp"

#include <functional>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "mgl/error.hpp"

namespace mgl {

constexpr double kLogisticBiasBox = 10.0;

double KernelModel::score(const Vec& x) const {
  double s = b;
  for (std::size_t i = 0; i < support.size(); ++i)
    if (alpha[static_cast<Eigen::Index>(i)] != 0.0) s += alpha[static_cast<Eigen::Index>(i)] * kernel(support[i], x);
  return s;
}

std::vector<double> KernelModel::scores(const std::vector<Vec>& xs, int chunk) const {
  std::vector<double> out(xs.size(), b);
  if (xs.empty() || support.empty()) return out;
  for (std::size_t start = 0; start < xs.size(); start += static_cast<std::size_t>(chunk)) {
    const std::size_t stop = std::min(xs.size(), start + static_cast<std::size_t>(chunk));
    const std::vector<Vec> block(xs.begin() + static_cast<std::ptrdiff_t>(start),
                                 xs.begin() + static_cast<std::ptrdiff_t>(stop));
    const Vec s = kernels::cross_gram(kernel, block, support) * alpha;
    for (std::size_t i = start; i < stop; ++i) out[i] += s[static_cast<Eigen::Index>(i - start)];
  }
  return out;
}

namespace learners {
namespace {

// Scores s = A p for the kernel program (A = G, metric p^T G q).
struct KernelGeometry {
  const Mat& G;
  double radius;

  Vec matvec(const Vec& v) const { return G.selfadjointView<Eigen::Lower>() * v; }
  void step(Vec& p, Vec& s, const Vec& py, const Vec& sy, const Vec& g, double eta) const {
    p = py - eta * g;
    s = sy - eta * matvec(g);
  }
  void project(Vec& p, Vec& s) const {
    const double n2 = std::max(0.0, p.dot(s));
    if (n2 > radius * radius) {
      const double f = radius / std::sqrt(n2);
      p *= f;
      s *= f;
    }
  }
  double metric(const Vec& dpa, const Vec& dsb, const Vec& /*dpb*/) const { return dpa.dot(dsb); }
  double dual_norm(const Vec& u) const { return std::sqrt(std::max(0.0, u.dot(matvec(u)))); }
  double norm(const Vec& p, const Vec& s) const { return std::sqrt(std::max(0.0, p.dot(s))); }
};

// Explicit features: rows of Phi are psi(x_i).
struct FiniteGeometry {
  const Mat& Phi;
  BallKind ball;
  double radius;

  void step(Vec& p, Vec& s, const Vec& py, const Vec& /*sy*/, const Vec& g, double eta) const {
    p = py - eta * (Phi.transpose() * g);
    s = Phi * p;
  }
  void project(Vec& p, Vec& s) const {
    if (ball == BallKind::L2) {
      const double n = p.norm();
      if (n > radius) {
        p *= radius / n;
        s *= radius / n;
      }
    } else {
      p = project_l1_ball(p, radius);
      s = Phi * p;
    }
  }
  double metric(const Vec& dpa, const Vec& /*dsb*/, const Vec& dpb) const { return dpa.dot(dpb); }
  double dual_norm(const Vec& u) const {
    const Vec z = Phi.transpose() * u;
    return ball == BallKind::L2 ? z.norm() : z.cwiseAbs().maxCoeff();
  }
  double norm(const Vec& p, const Vec&) const { return ball == BallKind::L2 ? p.norm() : p.lpNorm<1>(); }
};

struct Solution {
  Vec p;
  Vec s;
  double b = 0.0;
  Certificate cert;
};

Vec normalized_weights(const SolverOptions& opts, std::size_t n) {
  if (opts.weights.empty()) return Vec::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  if (opts.weights.size() != n) throw DomainError("weight vector length differs from data size");
  Vec w = Eigen::Map<const Vec>(opts.weights.data(), static_cast<Eigen::Index>(n));
  if ((w.array() < 0.0).any()) throw DomainError("negative sample weight");
  const double t = w.sum();
  if (!(t > 0.0)) throw DomainError("sample weights sum to zero");
  return w / t;
}

// Fenchel lower bound at dual point v (clipped to dom l*, bias term balanced).
double dual_bound(const SurrogateLoss& loss, Vec v, const Vec& y, const Vec& w, double radius,
                  double box, const auto& geo) {
  const Eigen::Index n = v.size();
  for (Eigen::Index i = 0; i < n; ++i) v[i] = std::clamp(v[i], loss.conj_lo(), loss.conj_hi());

  auto value = [&](const Vec& vv, double bias_pen) {
    Vec u = w.cwiseProduct(vv).cwiseProduct(y);
    double conj = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) conj += w[i] * loss.conjugate(vv[i]);
    return -conj - radius * geo.dual_norm(u) - bias_pen * std::abs(u.sum());
  };

  // Balance sum_i w_i v_i y_i to zero by shrinking one label group toward 0.
  Vec u = w.cwiseProduct(v).cwiseProduct(y);
  double pos = 0.0, neg = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) (u[i] > 0.0 ? pos : neg) += std::abs(u[i]);
  Vec vb = v;
  if (pos > neg && pos > 0.0) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (u[i] > 0.0) vb[i] *= neg / pos;
  } else if (neg > pos && neg > 0.0) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (u[i] < 0.0) vb[i] *= pos / neg;
  }
  double lb = value(vb, 0.0);
  if (std::isfinite(box)) lb = std::max(lb, value(v, box));
  return lb;
}

template <class Geo>
Solution fista(const Geo& geo, const Vec& y, const Vec& w, const Vec& sq_norms, Eigen::Index dim,
               const SurrogateLoss& loss, double radius, const SolverOptions& opts) {
  const Eigen::Index n = y.size();
  const double eps = opts.eps_opt;
  if (!(eps > 0.0)) throw DomainError("eps_opt must be positive");
  const double lip = loss.lipschitz();
  double mu = opts.smoothing;
  if (mu <= 0.0) mu = loss.piecewise_linear() ? eps / (2.0 * lip * lip) : 0.0;
  const double box = opts.bias_box >= 0.0 ? opts.bias_box
                     : loss.kind == LossKind::Logistic ? kLogisticBiasBox
                                                       : std::numeric_limits<double>::infinity();
  const double curvature = loss.smooth_curvature(mu) * (w.dot(sq_norms) + 1.0);
  const double eta = 1.0 / curvature;

  Vec p = Vec::Zero(dim), s = Vec::Zero(n), p_prev = p, s_prev = s;
  double b = 0.0, b_prev = 0.0, t = 1.0, t_prev = 1.0;
  Vec g(n), py, sy;

  Solution best;
  best.p = p;
  best.s = s;
  best.cert.objective = std::numeric_limits<double>::infinity();
  double best_lb = -std::numeric_limits<double>::infinity();

  auto objective = [&](const Vec& sc, double bias) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += w[i] * loss.value(y[i] * (sc[i] + bias));
    return acc;
  };

  int it = 0;
  for (it = 1; it <= opts.max_iters; ++it) {
    const double beta = (t_prev - 1.0) / t;
    py = p + beta * (p - p_prev);
    sy = s + beta * (s - s_prev);
    const double by = b + beta * (b - b_prev);
    for (Eigen::Index i = 0; i < n; ++i) g[i] = w[i] * y[i] * loss.smooth_derivative(y[i] * (sy[i] + by), mu);
    const double gb = g.sum();

    p_prev = p;
    s_prev = s;
    b_prev = b;
    geo.step(p, s, py, sy, g, eta);
    geo.project(p, s);
    b = std::clamp(by - eta * gb, -box, box);

    // gradient-based adaptive restart
    const double r = geo.metric(py - p, s - s_prev, p - p_prev) + (by - b) * (b - b_prev);
    if (r > 0.0) {
      t_prev = 1.0;
      t = 1.0;
    } else {
      t_prev = t;
      t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    }

    if (it % opts.check_every == 0 || it == opts.max_iters) {
      const double obj = objective(s, b);
      if (obj < best.cert.objective) {
        best.p = p;
        best.s = s;
        best.b = b;
        best.cert.objective = obj;
      }
      Vec v(n);
      for (Eigen::Index i = 0; i < n; ++i) v[i] = loss.smooth_derivative(y[i] * (s[i] + b), mu);
      best_lb = std::max(best_lb, dual_bound(loss, v, y, w, radius, box, geo));
      if (best.cert.objective - best_lb <= eps) break;
    }
  }
  best.cert.lower_bound = best_lb;
  best.cert.gap = std::max(0.0, best.cert.objective - best_lb);
  best.cert.iterations = std::min(it, opts.max_iters);
  best.cert.converged = best.cert.gap <= eps;
  return best;
}

Vec labels_of(const std::vector<LabeledPoint>& data) {
  Vec y(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) y[static_cast<Eigen::Index>(i)] = data[i].y;
  return y;
}

}  // namespace

KernelModel train_kernel_program(const std::vector<LabeledPoint>& data, const KernelSpec& kernel,
                                 const SurrogateLoss& loss, double C, const SolverOptions& opts) {
  if (data.empty()) throw DomainError("empty training set");
  std::vector<Vec> pts;
  pts.reserve(data.size());
  for (const auto& p : data) pts.push_back(p.x);
  Mat G = kernels::gram(kernel, pts);
  kernels::ensure_psd(kernel, G, static_cast<int>(pts.front().size()));
  return train_kernel_program(data, kernel, G, loss, C, opts);
}

KernelModel train_kernel_program(const std::vector<LabeledPoint>& data, const KernelSpec& kernel,
                                 const Mat& G, const SurrogateLoss& loss, double C,
                                 const SolverOptions& opts) {
  if (data.empty()) throw DomainError("empty training set");
  if (!(C >= 0.0)) throw DomainError("norm bound C must be nonnegative");
  if (G.rows() != static_cast<Eigen::Index>(data.size()) || G.cols() != G.rows())
    throw DomainError("Gram matrix size differs from data size");
  const Vec y = labels_of(data);
  const Vec w = normalized_weights(opts, data.size());
  const KernelGeometry geo{G, C};
  const Vec diag = G.diagonal();
  Solution sol = fista(geo, y, w, diag, G.rows(), loss, C, opts);

  KernelModel m;
  m.support.reserve(data.size());
  for (const auto& p : data) m.support.push_back(p.x);
  m.alpha = sol.p;
  m.b = sol.b;
  m.C = C;
  m.kernel = kernel;
  m.norm = geo.norm(sol.p, sol.s);
  m.cert = sol.cert;
  return m;
}

FiniteDimModel train_finite_program(const std::vector<LabeledPoint>& data,
                                    std::function<Vec(const Vec&)> psi, BallKind ball, double R,
                                    const SurrogateLoss& loss, const SolverOptions& opts) {
  if (data.empty()) throw DomainError("empty training set");
  if (!(R >= 0.0)) throw DomainError("ball radius must be nonnegative");
  const Vec first = psi(data.front().x);
  Mat Phi(static_cast<Eigen::Index>(data.size()), first.size());
  for (std::size_t i = 0; i < data.size(); ++i) Phi.row(static_cast<Eigen::Index>(i)) = psi(data[i].x).transpose();
  const Vec y = labels_of(data);
  const Vec w = normalized_weights(opts, data.size());
  const Vec sq = Phi.rowwise().squaredNorm();
  const FiniteGeometry geo{Phi, ball, R};
  Solution sol = fista(geo, y, w, sq, Phi.cols(), loss, R, opts);

  FiniteDimModel m;
  m.w = sol.p;
  m.b = sol.b;
  m.ball = ball;
  m.R = R;
  m.feature_map = std::move(psi);
  m.cert = sol.cert;
  return m;
}

Vec project_l1_ball(const Vec& v, double R) {
  if (R <= 0.0) return Vec::Zero(v.size());
  if (v.lpNorm<1>() <= R) return v;
  // sort-based simplex projection of |v|
  std::vector<double> u(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) u[static_cast<std::size_t>(i)] = std::abs(v[i]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double cand = (cum - R) / static_cast<double>(j + 1);
    if (u[j] - cand > 0.0) tau = cand;
  }
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::max(std::abs(v[i]) - tau, 0.0);
    out[i] = v[i] >= 0.0 ? mag : -mag;
  }
  return out;
}

Evaluation evaluate_scores(const std::vector<double>& scores, const std::vector<LabeledPoint>& data,
                           double norm, const SurrogateLoss& loss, double gamma, bool boundary_counts) {
  if (data.empty()) throw DomainError("empty evaluation set");
  if (scores.size() != data.size()) throw DomainError("score count differs from data size");
  Evaluation e;
  const double scale = norm > 0.0 ? 1.0 / norm : 1.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double z = data[i].y * scores[i];
    e.err01 += zero_one(z);
    e.err_surrogate += loss.value(z);
    if (measures::inside_margin(z * scale, gamma, boundary_counts)) e.err_margin += 1.0;
  }
  const double n = static_cast<double>(data.size());
  e.err01 /= n;
  e.err_surrogate /= n;
  e.err_margin /= n;
  return e;
}

Evaluation evaluate(const KernelModel& model, const std::vector<LabeledPoint>& data,
                    const SurrogateLoss& loss, double gamma, bool boundary_counts) {
  std::vector<Vec> xs;
  xs.reserve(data.size());
  for (const auto& p : data) xs.push_back(p.x);
  return evaluate_scores(model.scores(xs), data, model.norm, loss, gamma, boundary_counts);
}

Evaluation evaluate(const FiniteDimModel& model, const std::vector<LabeledPoint>& data,
                    const SurrogateLoss& loss, double gamma, bool boundary_counts) {
  std::vector<double> s;
  s.reserve(data.size());
  for (const auto& p : data) s.push_back(model.score(p.x));
  const double norm = model.ball == BallKind::L2 ? model.w.norm() : model.w.lpNorm<1>();
  return evaluate_scores(s, data, norm, loss, gamma, boundary_counts);
}

double objective_1d(const std::vector<Atom1d>& atoms, const SurrogateLoss& loss, double a, double b) {
  double acc = 0.0;
  for (const auto& at : atoms) acc += at.w * loss.value(at.y * (a * at.t + b));
  return acc;
}

GridOptimum brute_force_1d(const std::vector<Atom1d>& atoms, const SurrogateLoss& loss, double C) {
  if (atoms.empty()) throw DomainError("brute_force_1d needs at least one atom");
  if (!(C >= 0.0)) throw DomainError("slope bound must be nonnegative");
  // the logistic grid covers the solver's bias box
  const double B = std::max(2.0 * std::max(C, 1.0), loss.kind == LossKind::Logistic ? kLogisticBiasBox : 0.0);
  GridOptimum best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  auto offer = [&](double a, double b) {
    const double v = objective_1d(atoms, loss, a, b);
    const bool better = v < best.objective ||
                        (v == best.objective && (std::abs(a) < std::abs(best.slope) ||
                                                 (std::abs(a) == std::abs(best.slope) &&
                                                  std::abs(b) < std::abs(best.bias))));
    if (better) best = {v, a, b};
  };
  constexpr int kSlopes = 2001, kBiases = 4001, kRefine = 201;
  const double da = kSlopes > 1 ? 2.0 * C / (kSlopes - 1) : 0.0;
  const double db = 2.0 * B / (kBiases - 1);
  for (int i = 0; i < kSlopes; ++i) {
    const double a = -C + da * i;
    for (int j = 0; j < kBiases; ++j) offer(a, -B + db * j);
  }
  const double a0 = best.slope, b0 = best.bias;
  for (int i = 0; i < kRefine; ++i) {
    const double a = std::clamp(a0 - da + 2.0 * da * i / (kRefine - 1), -C, C);
    for (int j = 0; j < kRefine; ++j) offer(a, b0 - db + 2.0 * db * j / (kRefine - 1));
  }
  return best;
}

}  // namespace learners
}  // namespace mgl
