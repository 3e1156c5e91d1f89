#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctm {

enum class ErrorCode {
  kInvalidArgument,
  kParseError,
  kNotSuffixFree,
  kNotComplete,
  kBadDistribution,
  kUnknownPreset,
  kIncompleteModel,
  kPastTooShort,
  kReducible,
  kNotConverged,
  kSampleTooShort,
  kDegenerateTable,
  kEmptyRange,
  kEmptyInput,
  kDegenerateData,
  kSessionFinished,
  kBreakPending,
  kBadSymbol,
  kNonContiguousTrials,
  kNotEnoughTrials,
  kNotFound,
  kIo,
};

std::string_view error_name(ErrorCode code);

// Single exception type for the toolkit; the code drives HTTP status and CLI
// exit-code mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Errors caused by bad user input (as opposed to I/O or convergence).
  bool is_validation() const noexcept;

 private:
  ErrorCode code_;
};

}  // namespace ctm
