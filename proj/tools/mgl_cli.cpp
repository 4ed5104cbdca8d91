// mgl: sample hard instances, train margin learners, run gap experiments and lemma checks.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mgl/error.hpp"
#include "mgl/harness.hpp"
#include "mgl/io.hpp"
#include "mgl/verify.hpp"

namespace {

using namespace mgl;
using json = nlohmann::json;

enum Exit { kOk = 0, kUsage = 1, kVerifyFailed = 2, kNotConverged = 3 };

struct Globals {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  int threads = 1;
  std::string format = "json";
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + g.out);
  f << text;
}

ExperimentConfig load_config(const Globals& g) {
  ExperimentConfig cfg;
  if (!g.config.empty()) cfg = io::configs_from_json(io::read_json_file(g.config)).front();
  if (g.seed_given) cfg.seed = g.seed;
  return cfg;
}

std::vector<LabeledPoint> load_dataset(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return io::read_dataset_csv(f);
}

std::string dataset_text(const std::vector<LabeledPoint>& data) {
  std::ostringstream os;
  io::write_dataset_csv(os, data);
  return os.str();
}

std::string trials_text(const Globals& g, const ExperimentReport& rep) {
  if (g.format == "csv") return harness::sweep_csv(rep.trials);
  return io::to_json(rep).dump(2) + "\n";
}

bool all_converged(const std::vector<TrialResult>& rows) {
  for (const auto& r : rows)
    if (!r.converged) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Margin-learning gap experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(harness::version()));

  Globals g;
  if (const char* env = std::getenv("MGL_THREADS")) g.threads = std::max(1, std::atoi(env));
  app.add_option("--config", g.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", g.seed, "Master seed (overrides the config)");
  app.add_option("--out", g.out, "Output path (stdout when omitted)");
  app.add_option("--threads", g.threads, "Worker threads (env MGL_THREADS)")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  int n_points = 0;
  auto* gen = app.add_subcommand("gen", "Sample a labeled dataset to CSV");
  gen->add_option("-n", n_points, "Number of points (default n_train)");

  std::string data_path, model_path;
  auto* train = app.add_subcommand("train", "Train a kernel model; writes model JSON");
  train->add_option("--data", data_path, "Training CSV (sampled from the config when omitted)")->check(CLI::ExistingFile);

  auto* eval = app.add_subcommand("eval", "Evaluate a trained model");
  eval->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--data", data_path, "Test CSV (sampled from the config when omitted)")->check(CLI::ExistingFile);

  auto* gap = app.add_subcommand("gap", "Run the gap experiment for one config");
  auto* integ = app.add_subcommand("integrality", "Surrogate optimum against the certified margin error");
  auto* sweep = app.add_subcommand("sweep", "One CSV row per (config, seed)");

  std::string suite = "all";
  auto* ver = app.add_subcommand("verify", "Run lemma property suites");
  ver->add_option("--suite", suite, "orthopoly, changes_slowly, kernels, solver, geometry, band or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    if (*gen) {
      const auto cfg = load_config(g);
      const auto spec = harness::resolved_spec(cfg);
      RngStream rng(cfg.seed, 0);
      RngStream child = rng.child(1);
      emit(g, dataset_text(measures::sample_dataset(spec, n_points > 0 ? n_points : cfg.n_train, child)));
      return kOk;
    }
    if (*train) {
      const auto cfg = load_config(g);
      cfg.validate();
      const auto spec = harness::resolved_spec(cfg);
      std::vector<LabeledPoint> data;
      if (data_path.empty()) {
        RngStream child = RngStream(cfg.seed, 0).child(1);
        data = measures::sample_dataset(spec, cfg.n_train, child);
      } else {
        data = load_dataset(data_path);
      }
      SolverOptions opts = cfg.solver;
      if (!(opts.eps_opt > 0.0)) opts.eps_opt = std::sqrt(spec.gamma);
      const auto model = learners::train_kernel_program(data, kernels::make_kernel(cfg.kernel, cfg.kernel_params),
                                                        make_loss(cfg.loss, spec.gamma, cfg.loss_scale), cfg.C, opts);
      emit(g, io::to_json(model).dump(2) + "\n");
      return model.cert.converged ? kOk : kNotConverged;
    }
    if (*eval) {
      const auto cfg = load_config(g);
      const auto spec = harness::resolved_spec(cfg);
      const auto model = io::kernel_model_from_json(io::read_json_file(model_path));
      std::vector<LabeledPoint> data;
      if (data_path.empty()) {
        RngStream child = RngStream(cfg.seed, 0).child(2);
        data = measures::sample_dataset(spec, cfg.n_test, child);
      } else {
        data = load_dataset(data_path);
      }
      const auto ev = learners::evaluate(model, data, make_loss(cfg.loss, spec.gamma, cfg.loss_scale), spec.gamma,
                                         spec.boundary_counts);
      if (g.format == "csv") {
        emit(g, "err01,err_margin,err_surrogate\n" + io::format_number(ev.err01) + "," +
                    io::format_number(ev.err_margin) + "," + io::format_number(ev.err_surrogate) + "\n");
      } else {
        emit(g, json{{"err01", ev.err01}, {"err_margin", ev.err_margin}, {"err_surrogate", ev.err_surrogate},
                     {"n", data.size()}}.dump(2) + "\n");
      }
      return kOk;
    }
    if (*gap) {
      const auto rep = harness::run_gap_experiment(load_config(g), g.threads);
      emit(g, trials_text(g, rep));
      return all_converged(rep.trials) ? kOk : kNotConverged;
    }
    if (*integ) {
      const auto rep = harness::run_integrality_report(load_config(g), g.threads);
      if (g.format == "csv") {
        std::ostringstream os;
        os << "seed,surrogate_optimum,surrogate_lower_bound,certified_margin,err01_train,gap_ratio,ratio01,error\n";
        for (const auto& r : rep.rows)
          os << r.seed << ',' << io::format_number(r.surrogate_optimum) << ','
             << io::format_number(r.surrogate_lower_bound) << ',' << io::format_number(r.certified_margin) << ','
             << io::format_number(r.err01_train) << ',' << io::format_number(r.gap_ratio) << ','
             << io::format_number(r.ratio01) << ',' << r.error << '\n';
        emit(g, os.str());
      } else {
        emit(g, io::to_json(rep).dump(2) + "\n");
      }
      return kOk;
    }
    if (*sweep) {
      if (g.config.empty()) throw std::invalid_argument("sweep needs --config");
      auto configs = io::configs_from_json(io::read_json_file(g.config));
      if (g.seed_given)
        for (auto& c : configs) c.seed = g.seed;
      for (const auto& c : configs) c.validate();
      const auto rows = harness::sweep(configs, g.threads);
      if (g.format == "json") {
        json j = json::array();
        for (const auto& r : rows) j.push_back(io::to_json(r));
        emit(g, j.dump(2) + "\n");
      } else {
        emit(g, harness::sweep_csv(rows));
      }
      return kOk;
    }
    if (*ver) {
      const auto reports = verify::verify_lemmas(suite);
      bool ok = true;
      if (g.format == "json") {
        json j = json::array();
        for (const auto& r : reports) j.push_back(verify::to_json(r));
        emit(g, j.dump(2) + "\n");
      } else {
        std::ostringstream os;
        for (const auto& r : reports) {
          os << "[" << r.suite << "] " << (r.passed() ? "pass" : "FAIL") << " (" << r.seconds << " s)\n";
          for (const auto& c : r.checks) {
            os << "  " << verify::summary_line(c) << '\n';
            if (!c.passed) os << "    counterexample: " << c.counterexample.dump() << '\n';
          }
        }
        emit(g, os.str());
      }
      for (const auto& r : reports) ok = ok && r.passed();
      return ok ? kOk : kVerifyFailed;
    }
  } catch (const DomainError& e) {
    std::cerr << "mgl: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "mgl: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "mgl: bad config: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "mgl: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
