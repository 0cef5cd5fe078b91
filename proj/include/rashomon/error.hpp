#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rashomon {

enum class ErrorCode {
  kMissingColumn,
  kNonBinaryValue,
  kEmptyDataset,
  kMalformedInput,
  kInvalidFraction,
  kNoPositives,
  kLengthMismatch,
  kDuplicateName,
  kIndexOutOfRange,
  kDuplicateTerm,
  kUnknownTerm,
  kEmptyVocabulary,
  kEmptySet,
  kEmptyGroup,
  kInvalidArgument,
  kSinkFailure,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports carries one of the codes above so the
// CLI can map it onto a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kNonBinaryValue: return "NonBinaryValue";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kInvalidFraction: return "InvalidFraction";
    case ErrorCode::kNoPositives: return "NoPositives";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDuplicateTerm: return "DuplicateTerm";
    case ErrorCode::kUnknownTerm: return "UnknownTerm";
    case ErrorCode::kEmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSinkFailure: return "SinkFailure";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace rashomon
