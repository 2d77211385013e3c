#include "qsllab/error.hpp"

namespace qsllab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DegenerateNormalization: return "DegenerateNormalization";
    case ErrorKind::StepOverflow: return "StepOverflow";
    case ErrorKind::NotPure: return "NotPure";
    case ErrorKind::DegeneratePurity: return "DegeneratePurity";
    case ErrorKind::BadGrid: return "BadGrid";
    case ErrorKind::QuadratureNonconvergent: return "QuadratureNonconvergent";
    case ErrorKind::NumericalDomain: return "NumericalDomain";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace qsllab
