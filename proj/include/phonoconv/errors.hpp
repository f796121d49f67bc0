#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phonoconv {

/// Bad user input: configuration, unknown names, parameter-set violations.
/// The CLI maps this family to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter set failed one or more invariants. Never clamped.
class InvalidParameters : public ConfigError {
 public:
  explicit InvalidParameters(std::vector<std::string> violations)
      : ConfigError(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string msg = "invalid parameters:";
    for (const auto& v : items) msg += " [" + v + "]";
    return msg;
  }
  std::vector<std::string> violations_;
};

/// Argument outside the domain of a physical formula (nonpositive lengths, zero pump...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical or physical precondition failure. The CLI maps this family to exit status 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear system or closed-form denominator is (numerically) singular.
class SingularPointError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Operation requires a dynamically stable parameter set (negative stability margin).
class UnstableSystemError : public NumericalError {
 public:
  UnstableSystemError(const std::string& what, double margin)
      : NumericalError(what), margin_(margin) {}
  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

/// Dark/bright-mode constraints (Delta2 = 0, Delta1 = -Omega_m, kappa1 = kappa2) are not met.
class ContractError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double time_reached)
      : NumericalError(what), time_reached_(time_reached) {}
  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_;
};

class SettlingError : public NumericalError {
 public:
  SettlingError(const std::string& what, double final_residual)
      : NumericalError(what), final_residual_(final_residual) {}
  double final_residual() const noexcept { return final_residual_; }

 private:
  double final_residual_;
};

}  // namespace phonoconv
