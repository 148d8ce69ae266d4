#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace colliderbn {

/// Machine-readable failure and violation codes. The string form (see
/// to_string) is what appears in CLI errors, API error bodies and parser
/// diagnostics, so the spelling is part of the external interface.
enum class ErrorCode {
  // network validation
  Cycle,
  OrphanEdge,
  DuplicateEdge,
  CptParentMismatch,
  RowNotNormalized,
  BadProbability,
  BadRowLength,
  BadVariable,
  DuplicateVariable,
  MissingCpt,
  DuplicateCpt,
  UnknownVariable,
  InvalidNetwork,
  // queries
  UnknownState,
  StateSpaceMismatch,
  NotInScope,
  ImpossibleEvidence,
  TargetInEvidence,
  StateSpaceTooLarge,
  PathLimit,
  DuplicateAssignment,
  InvalidArgument,
  // io
  Syntax,
  UnsupportedVersion,
  EmptyConfiguration,
  MissingColumn,
  Io,
  // api
  NotFound,
};

std::string_view to_string(ErrorCode code);

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;

  bool operator==(const SourceLocation&) const = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourceLocation> location = std::nullopt,
        std::string token = {})
      : std::runtime_error(message),
        code_(code),
        location_(location),
        token_(std::move(token)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourceLocation>& location() const noexcept { return location_; }
  // Offending input token, when the error came from parsing text.
  const std::string& token() const noexcept { return token_; }

 private:
  ErrorCode code_;
  std::optional<SourceLocation> location_;
  std::string token_;
};

}  // namespace colliderbn
