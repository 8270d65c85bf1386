#pragma once

#include <stdexcept>
#include <string>

namespace clarank {

// Values mirror the CLARANK_E_* codes of the C API.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kConfig = 2,
  kIo = 3,
  kFormat = 4,
  kVersionMismatch = 5,
  kTruncated = 6,
  kParse = 7,
  kMissingField = 8,
  kDuplicateId = 9,
  kEmptyQuery = 10,
  kMissingJudgments = 11,
  kInsufficientData = 12,
  kDegenerateVariance = 13,
  kUndefinedCorrelation = 14,
  kRankGap = 15,
  kKeyMismatch = 16,
  kMissingRun = 17,
  kUnseenTerm = 18,
  kInternal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

// Usage and configuration problems, as opposed to problems with the data.
bool is_config_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clarank
