#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mgl::verify {

/// One property check: how many cases ran, how many failed, and the first failing case.
struct CheckResult {
  std::string name;
  bool passed = true;
  long cases = 0;
  long failures = 0;
  double worst = 0.0;  // largest violation (or smallest slack), check-specific
  nlohmann::json counterexample;  // null when passed
  double seconds = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool passed() const;
};

using LegendreEval = std::function<double(int d, int n, double t)>;

/// sup norm, value at 1, orthogonality, pointwise and tail bounds, Chebyshev identities, L1-L2 lemma.
SuiteReport verify_orthopoly(const LegendreEval& eval = {}, std::uint64_t seed = 11);

/// Band gap against its bound for random zonal series.
SuiteReport verify_changes_slowly(int n_functions = 1000, std::uint64_t seed = 12);

/// Gram PSD, Schoenberg coefficients, reproducing norm, norm consistency, rank-one symmetrization.
SuiteReport verify_kernels(std::uint64_t seed = 13);

/// Solver against the 1-D grid oracle, plus the loss-scaling identity.
SuiteReport verify_solver(int n_instances = 50, std::uint64_t seed = 14);

/// MVEE containment, John ratio, noise-measure certificate.
SuiteReport verify_geometry(std::uint64_t seed = 15);

/// Band-gap bound on trained kernel models (exact and Monte-Carlo paths).
SuiteReport verify_band(std::uint64_t seed = 16);

/// Suite names: orthopoly, changes_slowly, kernels, solver, geometry, band, all.
std::vector<SuiteReport> verify_lemmas(const std::string& suite);

nlohmann::json to_json(const SuiteReport& r);
std::string summary_line(const CheckResult& c);

}  // namespace mgl::verify
