#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mgl/geometry.hpp"
#include "mgl/learners.hpp"
#include "mgl/lemma_lab.hpp"
#include "mgl/measures.hpp"

namespace mgl {

/// Finite-dimensional learner: psi(x) = A x / |A|_op with a seeded Gaussian A (m x d).
struct FiniteLearnerConfig {
  bool enabled = false;
  int m = 3;
  std::uint64_t feature_seed = 7;
  bool l1_ball = false;
};

/// Noise measure mu_N built from the finite feature map, mixed in at spec.lambdaN.
struct NoiseConfig {
  bool enabled = false;
  int probes_per_dim = 50;
};

struct ExperimentConfig {
  std::string label;
  AdversarialSpec spec;
  std::string kernel = "linear";
  std::map<std::string, double> kernel_params;
  std::string loss = "hinge";
  double loss_scale = 1.0;  // C parameter of the margin losses
  double C = 5.0;
  int n_train = 1000;
  int n_test = 5000;
  SolverOptions solver = [] { SolverOptions o; o.eps_opt = -1.0; return o; }();  // eps_opt <= 0 means sqrt(gamma)
  int n_seeds = 1;
  std::uint64_t seed = 1; // master seed; trial s uses seed + s
  int K = 0;              // band cutoff, 0 means ceil(ln C)
  int band_mc = 2000;
  FiniteLearnerConfig finite;
  NoiseConfig noise;

  void validate() const;
};

struct TrialResult {
  int config_id = 0;
  std::uint64_t seed = 0;
  double gamma = 0.0;
  int d = 0;
  std::string kernel;
  double C = 0.0;
  std::string loss;
  double lambda2 = 0.0, lambda3 = 0.0, lambdaN = 0.0;
  int n_train = 0;
  double err01 = 0.0;
  double err01_train = 0.0;
  double err_margin_certified = 0.0;
  double err_margin_empirical = 0.0;
  double err_surrogate = 0.0;
  double train_objective = 0.0;
  double ratio = 0.0;
  double band_gap = 0.0;
  double band_bound = 0.0;
  double solver_gap = 0.0;
  bool converged = true;
  std::string error;
};

struct ExperimentReport {
  std::string config_hash;
  std::string version;
  std::vector<TrialResult> trials;
};

struct IntegralityRow {
  std::uint64_t seed = 0;
  double surrogate_optimum = 0.0;
  double surrogate_lower_bound = 0.0;
  double certified_margin = 0.0;
  double err01_train = 0.0;
  double gap_ratio = 0.0;  // surrogate optimum / certified margin
  double ratio01 = 0.0;    // train 0-1 error / certified margin
  std::string error;
};

struct IntegralityReport {
  std::string config_hash;
  std::vector<IntegralityRow> rows;
};

namespace harness {

int default_K(double C);
int default_dimension(double C, double gamma);

std::string config_hash(const ExperimentConfig& cfg);
const char* version();

/// Spec with the noise measure attached when cfg.noise is enabled.
AdversarialSpec resolved_spec(const ExperimentConfig& cfg);

TrialResult run_trial(const ExperimentConfig& cfg, int config_id, int seed_index);

ExperimentReport run_gap_experiment(const ExperimentConfig& cfg, int threads = 1);
IntegralityReport run_integrality_report(const ExperimentConfig& cfg, int threads = 1);

/// One row per (config, seed), ordered by config then seed. Failures land in the error column.
std::vector<TrialResult> sweep(const std::vector<ExperimentConfig>& configs, int threads = 1);

std::string sweep_csv(const std::vector<TrialResult>& rows);
std::string sweep_header();

/// Runs jobs 0..n-1 on up to `threads` workers; results must be written by index.
void parallel_for(int n, int threads, const std::function<void(int)>& job);

}  // namespace harness
}  // namespace mgl
