#pragma once

#include <string>

namespace mgl {

enum class LossKind { Hinge, Squared, Absolute, Logistic, MarginLoss, TruncatedMargin };

/// Convex surrogate loss l(x), evaluated at the signed score x = y f(x).
///
/// MarginLoss is max(1 - x, 1 - 1/C); TruncatedMargin is max(1 - C x, 0).
/// For those two, `scale` holds C.
struct SurrogateLoss {
  LossKind kind = LossKind::Hinge;
  std::string name = "hinge";
  double scale = 1.0;
  double gamma = 0.0;  // nominal margin the scale was chosen for (informational)

  double value(double x) const;
  /// Right derivative.
  double subgradient(double x) const;
  double d_plus_at_0() const { return subgradient(0.0); }
  /// +inf when the loss is not globally Lipschitz.
  double lipschitz() const;

  /// Fenchel conjugate l*(v); +inf outside its domain.
  double conjugate(double v) const;
  /// Closed domain [lo, hi] of the conjugate (may be unbounded).
  double conj_lo() const;
  double conj_hi() const;
  double infimum() const;

  /// Moreau envelope with parameter mu: value and derivative.
  double smooth_value(double x, double mu) const;
  double smooth_derivative(double x, double mu) const;
  /// Lipschitz constant of smooth_derivative.
  double smooth_curvature(double mu) const;
  bool piecewise_linear() const;
};

SurrogateLoss make_loss(const std::string& name, double gamma = 0.0, double C = 1.0);

/// 0-1 loss at a signed score: 1 when x <= 0.
inline double zero_one(double x) { return x <= 0.0 ? 1.0 : 0.0; }

}  // namespace mgl
