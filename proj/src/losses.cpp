#include "mgl/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mgl/error.hpp"

namespace mgl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2e = 1.0 / std::numbers::ln2;

struct Kink {
  double at, left, right, value;
};

Kink kink_of(const SurrogateLoss& l) {
  switch (l.kind) {
    case LossKind::Hinge: return {1.0, -1.0, 0.0, 0.0};
    case LossKind::Absolute: return {1.0, -1.0, 1.0, 0.0};
    case LossKind::MarginLoss: return {1.0 / l.scale, -1.0, 0.0, 1.0 - 1.0 / l.scale};
    case LossKind::TruncatedMargin: return {1.0 / l.scale, -l.scale, 0.0, 0.0};
    default: return {0.0, 0.0, 0.0, 0.0};
  }
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

bool SurrogateLoss::piecewise_linear() const {
  return kind != LossKind::Squared && kind != LossKind::Logistic;
}

double SurrogateLoss::value(double x) const {
  switch (kind) {
    case LossKind::Squared: return (1.0 - x) * (1.0 - x);
    case LossKind::Logistic: return kLog2e * softplus(-x);
    default: {
      const Kink k = kink_of(*this);
      return k.value + (x < k.at ? k.left : k.right) * (x - k.at);
    }
  }
}

double SurrogateLoss::subgradient(double x) const {
  switch (kind) {
    case LossKind::Squared: return -2.0 * (1.0 - x);
    case LossKind::Logistic: {
      // -c / (1 + e^x)
      if (x > 0.0) {
        const double ex = std::exp(-x);
        return -kLog2e * ex / (1.0 + ex);
      }
      return -kLog2e / (1.0 + std::exp(x));
    }
    default: {
      const Kink k = kink_of(*this);
      return x < k.at ? k.left : k.right;
    }
  }
}

double SurrogateLoss::lipschitz() const {
  switch (kind) {
    case LossKind::Squared: return kInf;
    case LossKind::Logistic: return kLog2e;
    case LossKind::TruncatedMargin: return scale;
    default: return 1.0;
  }
}

double SurrogateLoss::conj_lo() const {
  switch (kind) {
    case LossKind::Squared: return -kInf;
    case LossKind::Logistic: return -kLog2e;
    default: return kink_of(*this).left;
  }
}

double SurrogateLoss::conj_hi() const {
  switch (kind) {
    case LossKind::Squared: return kInf;
    case LossKind::Logistic: return 0.0;
    default: return kink_of(*this).right;
  }
}

double SurrogateLoss::conjugate(double v) const {
  if (v < conj_lo() - 1e-12 || v > conj_hi() + 1e-12) return kInf;
  switch (kind) {
    case LossKind::Squared: return v + 0.25 * v * v;
    case LossKind::Logistic: {
      const double u = std::clamp(v / kLog2e, -1.0, 0.0);
      auto xlogx = [](double z) { return z > 0.0 ? z * std::log(z) : 0.0; };
      return kLog2e * (xlogx(-u) + xlogx(1.0 + u));
    }
    default: {
      // sup_x v x - l(x) is attained at the kink
      const Kink k = kink_of(*this);
      return v * k.at - k.value;
    }
  }
}

double SurrogateLoss::infimum() const { return kind == LossKind::MarginLoss ? 1.0 - 1.0 / scale : 0.0; }

double SurrogateLoss::smooth_value(double x, double mu) const {
  if (!piecewise_linear() || mu <= 0.0) return value(x);
  const Kink k = kink_of(*this);
  double y;
  if (x - mu * k.right > k.at) y = x - mu * k.right;
  else if (x - mu * k.left < k.at) y = x - mu * k.left;
  else y = k.at;
  return value(y) + (x - y) * (x - y) / (2.0 * mu);
}

double SurrogateLoss::smooth_derivative(double x, double mu) const {
  if (!piecewise_linear() || mu <= 0.0) return subgradient(x);
  const Kink k = kink_of(*this);
  if (x - mu * k.right > k.at) return k.right;
  if (x - mu * k.left < k.at) return k.left;
  return (x - k.at) / mu;
}

double SurrogateLoss::smooth_curvature(double mu) const {
  switch (kind) {
    case LossKind::Squared: return 2.0;
    case LossKind::Logistic: return 0.25 * kLog2e;
    default: return 1.0 / mu;
  }
}

SurrogateLoss make_loss(const std::string& name, double gamma, double C) {
  SurrogateLoss l;
  l.name = name;
  l.gamma = gamma;
  if (name == "hinge") l.kind = LossKind::Hinge;
  else if (name == "squared") l.kind = LossKind::Squared;
  else if (name == "absolute") l.kind = LossKind::Absolute;
  else if (name == "logistic") l.kind = LossKind::Logistic;
  else if (name == "margin_loss" || name == "truncated_margin") {
    if (!(C > 0.0)) throw DomainError(name + " needs C > 0");
    l.kind = name == "margin_loss" ? LossKind::MarginLoss : LossKind::TruncatedMargin;
    l.scale = C;
  } else {
    throw DomainError("unknown loss: " + name);
  }
  return l;
}

}  // namespace mgl
