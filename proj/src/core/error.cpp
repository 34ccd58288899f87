#include "heislab/error.hpp"

namespace heislab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "INVALID_ARGUMENT";
    case ErrorCode::singular_automorphism: return "SINGULAR_AUTOMORPHISM";
    case ErrorCode::explicit_limit: return "EXPLICIT_LIMIT";
    case ErrorCode::no_good_scale: return "NO_GOOD_SCALE";
    case ErrorCode::no_separated_demand: return "NO_SEPARATED_DEMAND";
    case ErrorCode::nonconverged: return "NONCONVERGED";
    case ErrorCode::infeasible: return "INFEASIBLE";
    case ErrorCode::unbounded: return "UNBOUNDED";
    case ErrorCode::schema_violation: return "SCHEMA_VIOLATION";
    case ErrorCode::io: return "IO";
  }
  return "UNKNOWN";
}

}  // namespace heislab
