#include "pse/errors.hpp"

namespace pse {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::empty_dataset: return "EmptyDataset";
    case ErrorCode::degenerate_se: return "DegenerateSE";
    case ErrorCode::degenerate_variance: return "DegenerateVariance";
    case ErrorCode::invalid_alpha: return "InvalidAlpha";
    case ErrorCode::nonpositive_se: return "NonpositiveSE";
    case ErrorCode::odd_run_count: return "OddRunCount";
    case ErrorCode::grid_infeasible: return "GridInfeasible";
    case ErrorCode::too_few_seeds: return "TooFewSeeds";
    case ErrorCode::sign_reference_undefined: return "SignReferenceUndefined";
    case ErrorCode::degenerate_differences: return "DegenerateDifferences";
    case ErrorCode::all_zero_differences: return "AllZeroDifferences";
    case ErrorCode::invalid_probability: return "InvalidProbability";
    case ErrorCode::invalid_spec: return "InvalidSpec";
    case ErrorCode::malformed_input: return "MalformedInput";
    case ErrorCode::duplicate_record: return "DuplicateRecord";
    case ErrorCode::non_finite_value: return "NonFiniteValue";
    case ErrorCode::unknown_metric: return "UnknownMetric";
    case ErrorCode::orphan_seeds: return "OrphanSeeds";
    case ErrorCode::empty_after_pairing: return "EmptyAfterPairing";
    case ErrorCode::missing_parameter: return "MissingParameter";
    case ErrorCode::invalid_config: return "InvalidConfig";
    case ErrorCode::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace pse
