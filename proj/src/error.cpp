#include "ctm/error.hpp"

namespace ctm {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kNotSuffixFree: return "NotSuffixFree";
    case ErrorCode::kNotComplete: return "NotComplete";
    case ErrorCode::kBadDistribution: return "BadDistribution";
    case ErrorCode::kUnknownPreset: return "UnknownPreset";
    case ErrorCode::kIncompleteModel: return "IncompleteModel";
    case ErrorCode::kPastTooShort: return "PastTooShort";
    case ErrorCode::kReducible: return "Reducible";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kSampleTooShort: return "SampleTooShort";
    case ErrorCode::kDegenerateTable: return "DegenerateTable";
    case ErrorCode::kEmptyRange: return "EmptyRange";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kSessionFinished: return "SessionFinished";
    case ErrorCode::kBreakPending: return "BreakPending";
    case ErrorCode::kBadSymbol: return "BadSymbol";
    case ErrorCode::kNonContiguousTrials: return "NonContiguousTrials";
    case ErrorCode::kNotEnoughTrials: return "NotEnoughTrials";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

bool Error::is_validation() const noexcept {
  switch (code_) {
    case ErrorCode::kIo:
    case ErrorCode::kNotConverged:
      return false;
    default:
      return true;
  }
}

}  // namespace ctm
