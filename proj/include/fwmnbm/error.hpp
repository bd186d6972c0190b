#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fwmnbm {

enum class ErrorKind {
  // data (exit code 2)
  MissingColumn,
  NonBinaryValue,
  MalformedNumber,
  EmptyInput,
  UnknownLabel,
  SchemaMismatch,
  NoContinuousColumns,
  EmptyClassList,
  NonBinaryColumn,
  ClassTooSmall,
  SingleClass,
  LengthMismatch,
  DimensionMismatch,
  DegenerateColumn,
  // usage (exit code 1)
  InvalidArgument,
  InvalidRho,
  // model (exit code 3)
  ModelFormat,
  // io (exit code 4)
  IoFailure,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NonBinaryValue: return "NonBinaryValue";
    case ErrorKind::MalformedNumber: return "MalformedNumber";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::NoContinuousColumns: return "NoContinuousColumns";
    case ErrorKind::EmptyClassList: return "EmptyClassList";
    case ErrorKind::NonBinaryColumn: return "NonBinaryColumn";
    case ErrorKind::ClassTooSmall: return "ClassTooSmall";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegenerateColumn: return "DegenerateColumn";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidRho: return "InvalidRho";
    case ErrorKind::ModelFormat: return "ModelFormat";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

// Process exit code for the command-line tool: 1 usage, 2 data, 3 model, 4 io.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidRho:
      return 1;
    case ErrorKind::ModelFormat:
      return 3;
    case ErrorKind::IoFailure:
      return 4;
    default:
      return 2;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fwmnbm
