#include "mgl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

#include "mgl/error.hpp"
#include "mgl/io.hpp"

#ifndef MGL_VERSION
#define MGL_VERSION "dev"
#endif

namespace mgl {

void ExperimentConfig::validate() const {
  if (n_train < 1 || n_test < 1) throw DomainError("n_train and n_test must be >= 1");
  if (n_seeds < 1) throw DomainError("n_seeds must be >= 1");
  if (!(C >= 0.0)) throw DomainError("C must be nonnegative");
  if (K < 0) throw DomainError("K must be >= 0");
  if (band_mc < 2) throw DomainError("band_mc must be >= 2");
  if (finite.enabled && finite.m < 1) throw DomainError("finite learner needs m >= 1");
  if (noise.enabled && spec.lambdaN <= 0.0) throw DomainError("noise measure enabled with lambdaN = 0");
  if (!finite.enabled) kernels::make_kernel(kernel, kernel_params);
  make_loss(loss, spec.gamma, loss_scale);
}

namespace harness {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string kernel_label(const ExperimentConfig& cfg) {
  std::ostringstream os;
  if (cfg.finite.enabled) {
    os << (cfg.finite.l1_ball ? "finite-l1" : "finite-l2") << ":m=" << cfg.finite.m;
    return os.str();
  }
  os << cfg.kernel;
  for (const auto& [k, v] : cfg.kernel_params) os << ':' << k << '=' << io::format_number(v);
  return os.str();
}

std::function<Vec(const Vec&)> finite_feature_map(const ExperimentConfig& cfg, int d) {
  RngStream rng(cfg.finite.feature_seed, 1);
  Mat A(cfg.finite.m, d);
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, j) = rng.normal();
  const double op = Eigen::JacobiSVD<Mat>(A).singularValues()[0];
  A /= op;
  return [A](const Vec& x) -> Vec { return A * x; };
}

// +inf when the denominator is 0 (the ratio is undefined there).
double safe_ratio(double num, double den) { return den > 0.0 ? num / den : kInf; }

struct TrialCore {
  TrialResult row;
  double lower_bound = -kInf;
};

TrialCore run_core(const ExperimentConfig& cfg, int config_id, int seed_index) {
  TrialCore out;
  TrialResult& r = out.row;
  r.config_id = config_id;
  r.seed = cfg.seed + static_cast<std::uint64_t>(seed_index);
  r.gamma = cfg.spec.gamma;
  r.kernel = kernel_label(cfg);
  r.C = cfg.C;
  r.loss = cfg.loss;
  r.lambda2 = cfg.spec.lambda2;
  r.lambda3 = cfg.spec.lambda3;
  r.lambdaN = cfg.spec.lambdaN;
  r.n_train = cfg.n_train;
  r.err01 = r.err01_train = r.err_margin_certified = r.err_margin_empirical = std::numeric_limits<double>::quiet_NaN();
  r.err_surrogate = r.train_objective = r.ratio = r.band_gap = r.band_bound = r.solver_gap = r.err01;
  try {
    const AdversarialSpec spec = resolved_spec(cfg);
    r.d = spec.d;
    const double gamma = spec.gamma;
    const Vec e = spec.direction();
    RngStream master(r.seed, 0);
    RngStream train_rng = master.child(1), test_rng = master.child(2), band_rng = master.child(3);
    const auto train = measures::sample_dataset(spec, cfg.n_train, train_rng);
    const auto test = measures::sample_dataset(spec, cfg.n_test, test_rng);
    const SurrogateLoss loss = make_loss(cfg.loss, gamma, cfg.loss_scale);
    SolverOptions opts = cfg.solver;
    if (!(opts.eps_opt > 0.0)) opts.eps_opt = std::sqrt(gamma);

    Certificate cert;
    learners::Evaluation ev_test, ev_train;
    if (cfg.finite.enabled) {
      const auto psi = finite_feature_map(cfg, spec.d);
      const auto model = learners::train_finite_program(
          train, psi, cfg.finite.l1_ball ? BallKind::L1 : BallKind::L2, cfg.C, loss, opts);
      cert = model.cert;
      ev_test = learners::evaluate(model, test, loss, gamma, spec.boundary_counts);
      ev_train = learners::evaluate(model, train, loss, gamma, spec.boundary_counts);
    } else {
      const KernelSpec kernel = kernels::make_kernel(cfg.kernel, cfg.kernel_params);
      std::vector<Vec> pts;
      pts.reserve(train.size());
      for (const auto& p : train) pts.push_back(p.x);
      Mat G = kernels::gram(kernel, pts);
      kernels::ensure_psd(kernel, G, spec.d);
      const auto model = learners::train_kernel_program(train, kernel, G, loss, cfg.C, opts);
      cert = model.cert;
      ev_test = learners::evaluate(model, test, loss, gamma, spec.boundary_counts);
      const Vec s = G.selfadjointView<Eigen::Lower>() * model.alpha;
      std::vector<double> train_scores(train.size());
      for (std::size_t i = 0; i < train.size(); ++i) train_scores[i] = s[static_cast<Eigen::Index>(i)] + model.b;
      ev_train = learners::evaluate_scores(train_scores, train, model.norm, loss, gamma, spec.boundary_counts);
      if (spec.d >= 5) {
        const int K = cfg.K > 0 ? cfg.K : default_K(cfg.C);
        const auto band = lemma_lab::check_band_gap(model, e, gamma, K, cfg.band_mc, band_rng);
        r.band_gap = band.gap;
        r.band_bound = band.bound;
      }
    }
    r.err01 = ev_test.err01;
    r.err01_train = ev_train.err01;
    r.err_surrogate = ev_test.err_surrogate;
    r.train_objective = cert.objective;
    r.solver_gap = cert.gap;
    r.converged = cert.converged;
    out.lower_bound = cert.lower_bound;
    r.err_margin_certified = measures::certified_margin_bound(spec).value;
    r.err_margin_empirical = measures::empirical_margin_error(test, e, 0.0, gamma, spec.boundary_counts);
    r.ratio = safe_ratio(r.err01, r.err_margin_certified);
    if (!cert.converged) r.error = "solver did not converge: gap " + io::format_number(cert.gap);
  } catch (const std::exception& ex) {
    r.error = ex.what();
    r.converged = false;
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + '"';
}

}  // namespace

int default_K(double C) { return std::max(1, static_cast<int>(std::ceil(std::log(std::max(C, 1.0))))); }

int default_dimension(double C, double gamma) {
  return std::max(25, static_cast<int>(std::ceil(5.0 * std::log(C / gamma))));
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = io::to_json(cfg).dump();  // object keys are sorted
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const char* version() { return MGL_VERSION; }

AdversarialSpec resolved_spec(const ExperimentConfig& cfg) {
  AdversarialSpec spec = cfg.spec;
  if (spec.d <= 0) spec.d = default_dimension(cfg.C, spec.gamma);
  if (cfg.noise.enabled) {
    const auto psi = finite_feature_map(cfg, spec.d);
    RngStream rng(cfg.finite.feature_seed, 2);
    std::vector<Vec> probes;
    const int n = cfg.noise.probes_per_dim * cfg.finite.m;
    for (int i = 0; i < n; ++i) probes.push_back(sphere::sample_unit_sphere(spec.d, rng));
    spec.noise_atoms = geometry::build_noise_measure(psi, probes, cfg.finite.m).mu;
  }
  spec.validate();
  return spec;
}

TrialResult run_trial(const ExperimentConfig& cfg, int config_id, int seed_index) {
  return run_core(cfg, config_id, seed_index).row;
}

void parallel_for(int n, int threads, const std::function<void(int)>& job) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) job(i);
    });
  for (auto& th : pool) th.join();
}

ExperimentReport run_gap_experiment(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  ExperimentReport rep;
  rep.config_hash = config_hash(cfg);
  rep.version = version();
  rep.trials.resize(static_cast<std::size_t>(cfg.n_seeds));
  parallel_for(cfg.n_seeds, threads, [&](int s) { rep.trials[static_cast<std::size_t>(s)] = run_trial(cfg, 0, s); });
  return rep;
}

IntegralityReport run_integrality_report(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  IntegralityReport rep;
  rep.config_hash = config_hash(cfg);
  rep.rows.resize(static_cast<std::size_t>(cfg.n_seeds));
  parallel_for(cfg.n_seeds, threads, [&](int s) {
    const auto core = run_core(cfg, 0, s);
    IntegralityRow& row = rep.rows[static_cast<std::size_t>(s)];
    row.seed = core.row.seed;
    row.surrogate_optimum = core.row.train_objective;
    row.surrogate_lower_bound = core.lower_bound;
    row.certified_margin = core.row.err_margin_certified;
    row.err01_train = core.row.err01_train;
    row.gap_ratio = safe_ratio(row.surrogate_optimum, row.certified_margin);
    row.ratio01 = safe_ratio(row.err01_train, row.certified_margin);
    row.error = core.row.error;
  });
  return rep;
}

std::vector<TrialResult> sweep(const std::vector<ExperimentConfig>& configs, int threads) {
  if (configs.empty()) throw DomainError("sweep needs at least one config");
  std::vector<std::pair<int, int>> jobs;
  for (std::size_t c = 0; c < configs.size(); ++c)
    for (int s = 0; s < configs[c].n_seeds; ++s) jobs.emplace_back(static_cast<int>(c), s);
  std::vector<TrialResult> rows(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), threads, [&](int i) {
    const auto [c, s] = jobs[static_cast<std::size_t>(i)];
    rows[static_cast<std::size_t>(i)] = run_trial(configs[static_cast<std::size_t>(c)], c, s);
  });
  return rows;
}

std::string sweep_header() {
  return "config_id,seed,gamma,d,kernel,C,loss,lambda2,lambda3,lambdaN,n_train,err01,"
         "err_margin_certified,err_margin_empirical,err_surrogate,ratio,band_gap,band_bound,"
         "solver_gap,error";
}

std::string sweep_csv(const std::vector<TrialResult>& rows) {
  std::ostringstream os;
  os << sweep_header() << '\n';
  using io::format_number;
  for (const auto& r : rows) {
    os << r.config_id << ',' << r.seed << ',' << format_number(r.gamma) << ',' << r.d << ','
       << csv_field(r.kernel) << ',' << format_number(r.C) << ',' << csv_field(r.loss) << ','
       << format_number(r.lambda2) << ',' << format_number(r.lambda3) << ',' << format_number(r.lambdaN)
       << ',' << r.n_train << ',' << format_number(r.err01) << ',' << format_number(r.err_margin_certified)
       << ',' << format_number(r.err_margin_empirical) << ',' << format_number(r.err_surrogate) << ','
       << format_number(r.ratio) << ',' << format_number(r.band_gap) << ',' << format_number(r.band_bound)
       << ',' << format_number(r.solver_gap) << ',' << csv_field(r.error) << '\n';
  }
  return os.str();
}

}  // namespace harness
}  // namespace mgl
