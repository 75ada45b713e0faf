#pragma once

#include <stdexcept>
#include <string>

namespace nereval {

enum class ErrorKind {
  kRaggedRow,
  kBadTag,
  kEmptyCorpus,
  kAlignmentMismatch,
  kUnknownSystem,
  kInvalidArgument,
  kInsufficientBuckets,
  kTooFewTreatments,
  kTooFewBlocks,
  kIo,
  kFormat,
};

const char* to_string(ErrorKind kind);

// All library failures surface as this exception; `kind()` lets callers
// branch without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nereval
