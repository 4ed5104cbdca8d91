#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "mgl/kernels.hpp"
#include "mgl/losses.hpp"
#include "mgl/measures.hpp"

namespace mgl {

struct SolverOptions {
  double eps_opt = 1e-3;   // target certified optimality gap
  int max_iters = 20000;
  int check_every = 50;
  double smoothing = -1.0; // Moreau parameter for kinked losses; <= 0 picks eps_opt / (4 L^2)
  double bias_box = -1.0;  // |b| bound; < 0 means unbounded (logistic defaults to 10)
  std::vector<double> weights;  // per-sample weights, uniform when empty
  std::uint64_t seed = 0;
};

/// Primal value, dual lower bound and their difference at termination.
struct Certificate {
  double objective = 0.0;
  double lower_bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

struct KernelModel {
  std::vector<Vec> support;
  Vec alpha;
  double b = 0.0;
  double C = 0.0;
  KernelSpec kernel;
  double norm = 0.0;  // sqrt(alpha^T G alpha)
  Certificate cert;

  double score(const Vec& x) const;
  std::vector<double> scores(const std::vector<Vec>& xs, int chunk = 1024) const;
};

enum class BallKind { L2, L1 };

struct FiniteDimModel {
  Vec w;
  double b = 0.0;
  BallKind ball = BallKind::L2;
  double R = 0.0;
  std::function<Vec(const Vec&)> feature_map;
  Certificate cert;

  double score(const Vec& x) const { return w.dot(feature_map(x)) + b; }
};

namespace learners {

/// Constrained program over {f in H_k : ||f|| <= C} plus a free bias.
KernelModel train_kernel_program(const std::vector<LabeledPoint>& data, const KernelSpec& kernel,
                                 const SurrogateLoss& loss, double C, const SolverOptions& opts = {});

/// Same with a precomputed (PSD-checked) Gram matrix of the data points.
KernelModel train_kernel_program(const std::vector<LabeledPoint>& data, const KernelSpec& kernel,
                                 const Mat& G, const SurrogateLoss& loss, double C,
                                 const SolverOptions& opts = {});

FiniteDimModel train_finite_program(const std::vector<LabeledPoint>& data,
                                    std::function<Vec(const Vec&)> psi, BallKind ball, double R,
                                    const SurrogateLoss& loss, const SolverOptions& opts = {});

/// Euclidean projection onto {w : |w|_1 <= R}.
Vec project_l1_ball(const Vec& v, double R);

struct Evaluation {
  double err01 = 0.0;
  double err_margin = 0.0;
  double err_surrogate = 0.0;
};

/// Errors of a score function; the margin error uses score / norm when norm > 0.
Evaluation evaluate_scores(const std::vector<double>& scores, const std::vector<LabeledPoint>& data,
                           double norm, const SurrogateLoss& loss, double gamma, bool boundary_counts);

Evaluation evaluate(const KernelModel& model, const std::vector<LabeledPoint>& data,
                    const SurrogateLoss& loss, double gamma, bool boundary_counts = false);
Evaluation evaluate(const FiniteDimModel& model, const std::vector<LabeledPoint>& data,
                    const SurrogateLoss& loss, double gamma, bool boundary_counts = false);

struct Atom1d {
  double t;
  int y;
  double w;
};

struct GridOptimum {
  double objective;
  double slope;
  double bias;
};

/// Dense grid search of sum w l(y (a t + b)) over |a| <= C, |b| <= 2 max(C, 1) (10 for logistic).
GridOptimum brute_force_1d(const std::vector<Atom1d>& atoms, const SurrogateLoss& loss, double C);

/// Weighted objective of a one-dimensional affine predictor.
double objective_1d(const std::vector<Atom1d>& atoms, const SurrogateLoss& loss, double a, double b);

}  // namespace learners
}  // namespace mgl
