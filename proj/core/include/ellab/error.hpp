#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ellab {

enum class ErrorKind {
  Domain,               // point outside or on the boundary of a domain
  Singularity,          // kernel evaluated at its singular point
  SingularCoefficient,  // p(x) = 0 in the operator factorization
  Unreachable,          // no path between two points of a grid domain
  Configuration,        // bad parameters, unparseable config, rasterization failure
  Divergence,           // fixed-point iteration failed to converge
  Hypothesis,           // a theorem precondition does not hold on the samples
  Evaluation,           // NaN or failed evaluation inside a quadrature
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Divergence of a fixed-point iteration, with the sup-norm update per iteration.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::vector<double> history)
      : Error(ErrorKind::Divergence, what), history_(std::move(history)) {}

  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace ellab
