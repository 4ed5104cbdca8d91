#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mgl/losses.hpp"
#include "mgl/sphere.hpp"

namespace mgl {

struct LabeledPoint {
  Vec x;
  int y = 1;
};

/// Finitely supported labeled measure.
struct WeightedAtomMeasure {
  struct Atom {
    Vec point;
    int label = 1;
    double weight = 0.0;
  };
  std::vector<Atom> atoms;

  double total_weight() const;
  void validate(double tol = 1e-12) const;
};

struct AdversarialSpec {
  int d = 25;
  double gamma = 0.01;
  double theta = 0.7;
  double lambda2 = 0.0;  // flipped atom at (-gamma, +1)
  double lambda3 = 0.0;  // arcsine noise with uniform labels
  double lambdaN = 0.0;  // finite noise measure
  Vec e;                 // empty means the first basis vector
  std::optional<WeightedAtomMeasure> noise_atoms;
  bool boundary_counts = false;
  std::uint64_t seed = 0;

  Vec direction() const;
  double clean_weight() const { return 1.0 - lambda2 - lambda3 - lambdaN; }
  void validate() const;
};

/// Mixture component a sample came from.
enum class Component { CleanPlus, CleanMinus, Flipped, Arcsine, Noise };

}  // namespace mgl

namespace mgl::measures {

struct ThetaChoice {
  double alpha, beta, theta, slack;
};

/// Grid search for (alpha, beta, theta) with (1-theta) l(-beta) + theta l(beta) < theta l(alpha).
ThetaChoice choose_theta(const SurrogateLoss& loss);

/// Density of the arcsine law on [-1/8, 1/8]; +inf at the endpoints.
double arcsine_density(double t);
double arcsine_cdf(double t);
double sample_arcsine(RngStream& rng);

class Sampler {
 public:
  explicit Sampler(const AdversarialSpec& spec);
  LabeledPoint operator()(RngStream& rng, Component* which = nullptr) const;
  const AdversarialSpec& spec() const { return spec_; }

 private:
  AdversarialSpec spec_;
  Vec e_;
  Mat completion_;
  std::vector<double> noise_cdf_;
};

LabeledPoint sample_labeled(const AdversarialSpec& spec, RngStream& rng);
std::vector<LabeledPoint> sample_dataset(const AdversarialSpec& spec, int n, RngStream& rng);

struct MarginBound {
  double value;
  std::optional<std::string> warning;
};

/// Margin error of the reference halfspace <e, .> on the spec's distribution.
MarginBound certified_margin_bound(const AdversarialSpec& spec);

/// Fraction with y (<w, x> + b) < gamma (or <= gamma when boundary_counts).
double empirical_margin_error(const std::vector<LabeledPoint>& data, const Vec& w, double b,
                              double gamma, bool boundary_counts);

/// Slack absorbing rounding when atoms sit exactly on the margin.
inline constexpr double kMarginTolerance = 1e-9;

inline bool inside_margin(double signed_score, double gamma, bool boundary_counts) {
  return boundary_counts ? signed_score <= gamma + kMarginTolerance
                         : signed_score < gamma - kMarginTolerance;
}

}  // namespace mgl::measures
