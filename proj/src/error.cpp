#include "clarank/error.hpp"

namespace clarank {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kConfig: return "config-error";
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kFormat: return "format-error";
    case ErrorCode::kVersionMismatch: return "version-mismatch";
    case ErrorCode::kTruncated: return "truncated-file";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kMissingField: return "missing-field";
    case ErrorCode::kDuplicateId: return "duplicate-id";
    case ErrorCode::kEmptyQuery: return "empty-query";
    case ErrorCode::kMissingJudgments: return "missing-judgments";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kDegenerateVariance: return "degenerate-variance";
    case ErrorCode::kUndefinedCorrelation: return "undefined-correlation";
    case ErrorCode::kRankGap: return "rank-gap";
    case ErrorCode::kKeyMismatch: return "key-mismatch";
    case ErrorCode::kMissingRun: return "missing-run";
    case ErrorCode::kUnseenTerm: return "unseen-term";
    case ErrorCode::kInternal: return "internal-error";
  }
  return "unknown-error";
}

bool is_config_error(ErrorCode code) noexcept {
  return code == ErrorCode::kConfig || code == ErrorCode::kInvalidArgument ||
         code == ErrorCode::kMissingRun;
}

}  // namespace clarank
