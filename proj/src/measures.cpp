#include "mgl/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "mgl/error.hpp"
#include "mgl/orthopoly.hpp"

namespace mgl {

double WeightedAtomMeasure::total_weight() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

void WeightedAtomMeasure::validate(double tol) const {
  if (atoms.empty()) throw DomainError("empty atom measure");
  for (const auto& a : atoms) {
    if (!(a.weight >= 0.0)) throw DomainError("negative atom weight");
    if (a.label != 1 && a.label != -1) throw DomainError("atom labels must be +-1");
  }
  if (std::abs(total_weight() - 1.0) > tol) throw DomainError("atom weights must sum to 1");
}

Vec AdversarialSpec::direction() const {
  if (e.size() == 0) {
    Vec v = Vec::Zero(d);
    v[0] = 1.0;
    return v;
  }
  return e;
}

void AdversarialSpec::validate() const {
  if (d < 2) throw DomainError("spec dimension must be >= 2");
  if (!(gamma > 0.0 && gamma < orthopoly::kArcsineHalfWidth))
    throw DomainError("gamma must lie in (0, 1/8)");
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  if (lambda2 < 0.0 || lambda3 < 0.0 || lambdaN < 0.0) throw DomainError("negative mixture weight");
  if (lambda2 + lambda3 + lambdaN > 1.0 + 1e-12) throw DomainError("mixture weights must sum to at most 1");
  if (e.size() != 0) {
    if (e.size() != d) throw DomainError("direction has wrong dimension");
    if (std::abs(e.norm() - 1.0) > 1e-9) throw DomainError("direction must be a unit vector");
  }
  if (lambdaN > 0.0) {
    if (!noise_atoms) throw DomainError("lambdaN > 0 needs noise_atoms");
    noise_atoms->validate(1e-9);
    for (const auto& a : noise_atoms->atoms)
      if (a.point.size() != d) throw DomainError("noise atom has wrong dimension");
  }
}

}  // namespace mgl

namespace mgl::measures {

ThetaChoice choose_theta(const SurrogateLoss& loss) {
  if (!(loss.d_plus_at_0() < 0.0)) throw DomainError("choose_theta needs a loss decreasing at 0");
  static constexpr double alphas[] = {0.5, 0.25};
  static constexpr double betas[] = {1.0, 2.0};
  static constexpr double thetas[] = {0.7, 0.8, 0.9, 0.95, 0.99};
  for (double a : alphas)
    for (double b : betas) {
      if (!(loss.value(a) > loss.value(b))) continue;
      for (double t : thetas) {
        const double slack = t * loss.value(a) - ((1.0 - t) * loss.value(-b) + t * loss.value(b));
        if (slack >= 1e-6) return {a, b, t, slack};
      }
    }
  throw DomainError("no (alpha, beta, theta) on the grid works for loss " + loss.name);
}

double arcsine_density(double t) {
  const double h = orthopoly::kArcsineHalfWidth;
  const double at = std::abs(t);
  if (at > h) return 0.0;
  if (at == h) return std::numeric_limits<double>::infinity();
  const double u = t / h;
  return 1.0 / (h * std::numbers::pi * std::sqrt(1.0 - u * u));
}

double arcsine_cdf(double t) {
  const double h = orthopoly::kArcsineHalfWidth;
  if (t <= -h) return 0.0;
  if (t >= h) return 1.0;
  return 0.5 + std::asin(t / h) / std::numbers::pi;
}

double sample_arcsine(RngStream& rng) {
  return orthopoly::kArcsineHalfWidth * std::sin(std::numbers::pi * (rng.uniform() - 0.5));
}

Sampler::Sampler(const AdversarialSpec& spec) : spec_(spec) {
  spec_.validate();
  e_ = spec_.direction();
  completion_ = sphere::orthonormal_completion(e_);
  if (spec_.lambdaN > 0.0) {
    double acc = 0.0;
    for (const auto& a : spec_.noise_atoms->atoms) noise_cdf_.push_back(acc += a.weight);
  }
}

LabeledPoint Sampler::operator()(RngStream& rng, Component* which) const {
  const double u = rng.uniform();
  const double g = spec_.gamma;
  double t;
  int y;
  Component c;
  if (u < spec_.lambda2) {
    t = -g, y = 1, c = Component::Flipped;
  } else if (u < spec_.lambda2 + spec_.lambda3) {
    t = sample_arcsine(rng), y = rng.sign(), c = Component::Arcsine;
  } else if (u < spec_.lambda2 + spec_.lambda3 + spec_.lambdaN) {
    const double r = rng.uniform() * noise_cdf_.back();
    const auto it = std::upper_bound(noise_cdf_.begin(), noise_cdf_.end(), r);
    const auto idx = std::min<std::size_t>(it - noise_cdf_.begin(), noise_cdf_.size() - 1);
    const auto& atom = spec_.noise_atoms->atoms[idx];
    if (which) *which = Component::Noise;
    return {atom.point, atom.label};
  } else if (rng.uniform() < spec_.theta) {
    t = g, y = 1, c = Component::CleanPlus;
  } else {
    t = -g, y = -1, c = Component::CleanMinus;
  }
  if (which) *which = c;
  return {sphere::sample_band(completion_, e_, t, rng), y};
}

LabeledPoint sample_labeled(const AdversarialSpec& spec, RngStream& rng) { return Sampler(spec)(rng); }

std::vector<LabeledPoint> sample_dataset(const AdversarialSpec& spec, int n, RngStream& rng) {
  const Sampler s(spec);
  std::vector<LabeledPoint> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(s(rng));
  return out;
}

MarginBound certified_margin_bound(const AdversarialSpec& spec) {
  spec.validate();
  MarginBound out{};
  out.value = spec.lambda2 + spec.lambda3 * arcsine_cdf(spec.gamma);
  if (spec.lambdaN > 0.0) {
    const Vec e = spec.direction();
    double mass = 0.0;
    for (const auto& a : spec.noise_atoms->atoms)
      if (inside_margin(a.label * a.point.dot(e), spec.gamma, spec.boundary_counts)) mass += a.weight;
    out.value += spec.lambdaN * mass;
  }
  if (spec.boundary_counts) {
    out.value += spec.clean_weight();
    out.warning =
        "boundary_counts=true: clean atoms sit exactly on the margin and count as errors; the "
        "bound is no longer small";
  }
  return out;
}

double empirical_margin_error(const std::vector<LabeledPoint>& data, const Vec& w, double b,
                              double gamma, bool boundary_counts) {
  if (data.empty()) throw DomainError("empty dataset");
  std::size_t bad = 0;
  for (const auto& p : data)
    if (inside_margin(p.y * (w.dot(p.x) + b), gamma, boundary_counts)) ++bad;
  return static_cast<double>(bad) / data.size();
}

}  // namespace mgl::measures
