#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace darkstate {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// Exit-code contract of the CLI: 0 ok, 2 config, 3 numerical, 4 EP proximity.
enum class ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfig = 2,
  kNumerical = 3,
  kExceptionalPoint = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual ExitCode exit_code() const { return ExitCode::kFailure; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const override { return ExitCode::kConfig; }
};

class NumericalError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const override { return ExitCode::kNumerical; }
};

/// A site occupation would reach local_dim.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Operator couples different excitation manifolds.
class BlockStructureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Biorthogonal pivot vanished: too close to an exceptional point.
class ExceptionalPointError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const override { return ExitCode::kExceptionalPoint; }
};

}  // namespace darkstate
