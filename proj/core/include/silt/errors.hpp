#pragma once

#include <stdexcept>
#include <string>

namespace silt {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Parameters valid but outside the regime an operation covers
/// (e.g. no asymptotic form is available there).
class UnsupportedRegime : public DomainError {
 public:
  explicit UnsupportedRegime(const std::string& what) : DomainError(what) {}
};

/// Gaussian kernel with zero variance evaluated at its own centre.
class DegenerateKernel : public DomainError {
 public:
  explicit DegenerateKernel(const std::string& what) : DomainError(what) {}
};

/// Importance weights collapsed numerically to zero.
class DegenerateProposal : public std::runtime_error {
 public:
  explicit DegenerateProposal(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative scheme hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace silt
