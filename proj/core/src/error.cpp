#include "ellab/error.hpp"

namespace ellab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain-error";
    case ErrorKind::Singularity: return "singularity-error";
    case ErrorKind::SingularCoefficient: return "singular-coefficient-error";
    case ErrorKind::Unreachable: return "unreachable-error";
    case ErrorKind::Configuration: return "configuration-error";
    case ErrorKind::Divergence: return "divergence-error";
    case ErrorKind::Hypothesis: return "hypothesis-error";
    case ErrorKind::Evaluation: return "evaluation-error";
    case ErrorKind::Io: return "io-error";
  }
  return "error";
}

}  // namespace ellab
