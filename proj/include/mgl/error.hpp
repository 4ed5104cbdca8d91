#pragma once

#include <stdexcept>
#include <string>

namespace mgl {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Integer result that does not fit the return type.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// A point set whose (affine or linear) span is not the full ambient space.
class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(const std::string& what, int span_dim, int ambient_dim)
      : std::runtime_error(what), span_dim_(span_dim), ambient_dim_(ambient_dim) {}
  int span_dim() const noexcept { return span_dim_; }
  int ambient_dim() const noexcept { return ambient_dim_; }

 private:
  int span_dim_;
  int ambient_dim_;
};

/// Target point not representable as a convex combination within tolerance.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// RKHS norm is infinite: a coefficient lives outside the kernel's index set.
class InfiniteNormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical procedure failed to reach its stated tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kernel whose Gram matrix is not positive semi-definite within tolerance.
class InvalidKernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mgl
