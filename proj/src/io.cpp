#include "mgl/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mgl/error.hpp"

namespace mgl::io {
namespace {

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from(const json& a) {
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

double num_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    return NAN;
  }
  return j.get<double>();
}

template <class T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

json solver_json(const SolverOptions& s) {
  return {{"eps_opt", s.eps_opt}, {"max_iters", s.max_iters}, {"check_every", s.check_every},
          {"smoothing", s.smoothing}, {"bias_box", s.bias_box}};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

json to_json(const AdversarialSpec& s) {
  json j{{"d", s.d},           {"gamma", s.gamma},     {"theta", s.theta},
         {"lambda2", s.lambda2}, {"lambda3", s.lambda3}, {"lambdaN", s.lambdaN},
         {"boundary_counts", s.boundary_counts}, {"seed", s.seed}};
  if (s.e.size() > 0) j["e"] = vec_json(s.e);
  if (s.noise_atoms) {
    json atoms = json::array();
    for (const auto& a : s.noise_atoms->atoms)
      atoms.push_back({{"point", vec_json(a.point)}, {"label", a.label}, {"weight", a.weight}});
    j["noise_atoms"] = atoms;
  }
  return j;
}

AdversarialSpec spec_from_json(const json& j) {
  AdversarialSpec s;
  maybe(j, "d", s.d);
  maybe(j, "gamma", s.gamma);
  maybe(j, "theta", s.theta);
  maybe(j, "lambda2", s.lambda2);
  maybe(j, "lambda3", s.lambda3);
  maybe(j, "lambdaN", s.lambdaN);
  maybe(j, "boundary_counts", s.boundary_counts);
  maybe(j, "seed", s.seed);
  if (j.contains("e") && !j.at("e").is_null()) s.e = vec_from(j.at("e"));
  if (j.contains("noise_atoms") && !j.at("noise_atoms").is_null()) {
    WeightedAtomMeasure mu;
    for (const auto& a : j.at("noise_atoms"))
      mu.atoms.push_back({vec_from(a.at("point")), a.at("label").get<int>(), a.at("weight").get<double>()});
    s.noise_atoms = std::move(mu);
  }
  return s;
}

json to_json(const ExperimentConfig& c) {
  json kp = json::object();
  for (const auto& [k, v] : c.kernel_params) kp[k] = v;
  return {{"label", c.label},
          {"spec", to_json(c.spec)},
          {"kernel", {{"name", c.kernel}, {"params", kp}}},
          {"loss", c.loss},
          {"loss_scale", c.loss_scale},
          {"C", c.C},
          {"n_train", c.n_train},
          {"n_test", c.n_test},
          {"solver", solver_json(c.solver)},
          {"n_seeds", c.n_seeds},
          {"seed", c.seed},
          {"K", c.K},
          {"band_mc", c.band_mc},
          {"finite",
           {{"enabled", c.finite.enabled}, {"m", c.finite.m}, {"feature_seed", c.finite.feature_seed},
            {"l1_ball", c.finite.l1_ball}}},
          {"noise", {{"enabled", c.noise.enabled}, {"probes_per_dim", c.noise.probes_per_dim}}}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.solver.eps_opt = -1.0;
  maybe(j, "label", c.label);
  if (j.contains("spec")) c.spec = spec_from_json(j.at("spec"));
  if (j.contains("kernel")) {
    const auto& k = j.at("kernel");
    if (k.is_string()) {
      c.kernel = k.get<std::string>();
    } else {
      maybe(k, "name", c.kernel);
      if (k.contains("params"))
        for (const auto& [key, v] : k.at("params").items()) c.kernel_params[key] = v.get<double>();
    }
  }
  maybe(j, "loss", c.loss);
  maybe(j, "loss_scale", c.loss_scale);
  maybe(j, "C", c.C);
  maybe(j, "n_train", c.n_train);
  maybe(j, "n_test", c.n_test);
  maybe(j, "n_seeds", c.n_seeds);
  maybe(j, "seed", c.seed);
  maybe(j, "K", c.K);
  maybe(j, "band_mc", c.band_mc);
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    maybe(s, "eps_opt", c.solver.eps_opt);
    maybe(s, "max_iters", c.solver.max_iters);
    maybe(s, "check_every", c.solver.check_every);
    maybe(s, "smoothing", c.solver.smoothing);
    maybe(s, "bias_box", c.solver.bias_box);
  }
  if (j.contains("finite")) {
    const auto& f = j.at("finite");
    c.finite.enabled = true;
    maybe(f, "enabled", c.finite.enabled);
    maybe(f, "m", c.finite.m);
    maybe(f, "feature_seed", c.finite.feature_seed);
    maybe(f, "l1_ball", c.finite.l1_ball);
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    c.noise.enabled = true;
    maybe(n, "enabled", c.noise.enabled);
    maybe(n, "probes_per_dim", c.noise.probes_per_dim);
  }
  c.validate();
  return c;
}

std::vector<ExperimentConfig> configs_from_json(const json& j) {
  std::vector<ExperimentConfig> out;
  if (j.is_array()) {
    for (const auto& c : j) out.push_back(config_from_json(c));
  } else if (j.contains("configs")) {
    const json base = j.value("base", json::object());
    for (const auto& patch : j.at("configs")) {
      json merged = base;
      merged.merge_patch(patch);
      out.push_back(config_from_json(merged));
    }
  } else {
    out.push_back(config_from_json(j));
  }
  if (out.empty()) throw DomainError("config file lists no experiments");
  return out;
}

json to_json(const KernelModel& m) {
  json kp = json::object();
  for (const auto& [k, v] : m.kernel.params) kp[k] = v;
  json support = json::array();
  for (const auto& x : m.support) support.push_back(vec_json(x));
  return {{"kernel", {{"name", m.kernel.name}, {"params", kp}}},
          {"support", support},
          {"alpha", vec_json(m.alpha)},
          {"b", m.b},
          {"C", m.C},
          {"norm", m.norm},
          {"certificate",
           {{"objective", num(m.cert.objective)},
            {"lower_bound", num(m.cert.lower_bound)},
            {"gap", num(m.cert.gap)},
            {"iterations", m.cert.iterations},
            {"converged", m.cert.converged}}}};
}

KernelModel kernel_model_from_json(const json& j) {
  KernelModel m;
  std::map<std::string, double> params;
  for (const auto& [k, v] : j.at("kernel").at("params").items()) params[k] = v.get<double>();
  m.kernel = kernels::make_kernel(j.at("kernel").at("name").get<std::string>(), params);
  for (const auto& x : j.at("support")) m.support.push_back(vec_from(x));
  m.alpha = vec_from(j.at("alpha"));
  m.b = j.at("b").get<double>();
  m.C = j.at("C").get<double>();
  m.norm = j.at("norm").get<double>();
  const auto& c = j.at("certificate");
  m.cert.objective = num_from(c.at("objective"));
  m.cert.lower_bound = num_from(c.at("lower_bound"));
  m.cert.gap = num_from(c.at("gap"));
  m.cert.iterations = c.at("iterations").get<int>();
  m.cert.converged = c.at("converged").get<bool>();
  return m;
}

json to_json(const BandReport& r) {
  return {{"f_bar_plus", r.f_bar_plus}, {"f_bar_minus", r.f_bar_minus}, {"gap", r.gap},
          {"bound", num(r.bound)},      {"l1_norm", r.l1_norm},         {"coeff_bound", r.coeff_bound},
          {"std_errs", {r.std_err_plus, r.std_err_minus}},              {"tolerance", r.tolerance},
          {"holds", r.holds},           {"method", r.method}};
}

json to_json(const RkhsProfile& p) { return {{"d", p.d}, {"b", p.b}}; }

json to_json(const TrialResult& t) {
  return {{"config_id", t.config_id},
          {"seed", t.seed},
          {"gamma", t.gamma},
          {"d", t.d},
          {"kernel", t.kernel},
          {"C", t.C},
          {"loss", t.loss},
          {"lambda2", t.lambda2},
          {"lambda3", t.lambda3},
          {"lambdaN", t.lambdaN},
          {"n_train", t.n_train},
          {"err01", num(t.err01)},
          {"err01_train", num(t.err01_train)},
          {"err_margin_certified", num(t.err_margin_certified)},
          {"err_margin_empirical", num(t.err_margin_empirical)},
          {"err_surrogate", num(t.err_surrogate)},
          {"train_objective", num(t.train_objective)},
          {"ratio", num(t.ratio)},
          {"band_gap", num(t.band_gap)},
          {"band_bound", num(t.band_bound)},
          {"solver_gap", num(t.solver_gap)},
          {"converged", t.converged},
          {"error", t.error}};
}

json to_json(const ExperimentReport& r) {
  json trials = json::array();
  for (const auto& t : r.trials) trials.push_back(to_json(t));
  return {{"config_hash", r.config_hash}, {"version", r.version}, {"trials", trials}};
}

json to_json(const IntegralityReport& r) {
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"seed", x.seed},
                    {"surrogate_optimum", num(x.surrogate_optimum)},
                    {"surrogate_lower_bound", num(x.surrogate_lower_bound)},
                    {"certified_margin", num(x.certified_margin)},
                    {"err01_train", num(x.err01_train)},
                    {"gap_ratio", num(x.gap_ratio)},
                    {"ratio01", num(x.ratio01)},
                    {"error", x.error}});
  return {{"config_hash", r.config_hash}, {"rows", rows}};
}

void write_dataset_csv(std::ostream& os, const std::vector<LabeledPoint>& data) {
  if (data.empty()) return;
  const auto d = data.front().x.size();
  for (Eigen::Index i = 0; i < d; ++i) os << 'x' << i << ',';
  os << "y\n";
  for (const auto& p : data) {
    for (Eigen::Index i = 0; i < d; ++i) os << format_number(p.x[i]) << ',';
    os << p.y << '\n';
  }
}

std::vector<LabeledPoint> read_dataset_csv(std::istream& is) {
  std::vector<LabeledPoint> out;
  std::string line;
  if (!std::getline(is, line)) return out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() < 2) throw DomainError("malformed dataset row");
    LabeledPoint p;
    p.y = static_cast<int>(vals.back());
    p.x = Eigen::Map<const Vec>(vals.data(), static_cast<Eigen::Index>(vals.size() - 1));
    out.push_back(std::move(p));
  }
  return out;
}

void write_measure_csv(std::ostream& os, const WeightedAtomMeasure& mu) {
  if (mu.atoms.empty()) return;
  const auto d = mu.atoms.front().point.size();
  for (Eigen::Index i = 0; i < d; ++i) os << 'x' << i << ',';
  os << "label,weight\n";
  for (const auto& a : mu.atoms) {
    for (Eigen::Index i = 0; i < d; ++i) os << format_number(a.point[i]) << ',';
    os << a.label << ',' << format_number(a.weight) << '\n';
  }
}

void write_profile_csv(std::ostream& os, const TabulatedProfile& t) {
  os << "s,kappa\n";
  for (std::size_t i = 0; i < t.s.size(); ++i) os << format_number(t.s[i]) << ',' << format_number(t.value[i]) << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  return json::parse(in);
}

}  // namespace mgl::io
