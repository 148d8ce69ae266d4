#include "colliderbn/error.hpp"

namespace colliderbn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Cycle: return "CYCLE";
    case ErrorCode::OrphanEdge: return "ORPHAN_EDGE";
    case ErrorCode::DuplicateEdge: return "DUPLICATE_EDGE";
    case ErrorCode::CptParentMismatch: return "CPT_PARENT_MISMATCH";
    case ErrorCode::RowNotNormalized: return "ROW_NOT_NORMALIZED";
    case ErrorCode::BadProbability: return "BAD_PROBABILITY";
    case ErrorCode::BadRowLength: return "BAD_ROW_LENGTH";
    case ErrorCode::BadVariable: return "BAD_VARIABLE";
    case ErrorCode::DuplicateVariable: return "DUPLICATE_VARIABLE";
    case ErrorCode::MissingCpt: return "MISSING_CPT";
    case ErrorCode::DuplicateCpt: return "DUPLICATE_CPT";
    case ErrorCode::UnknownVariable: return "UNKNOWN_VARIABLE";
    case ErrorCode::InvalidNetwork: return "INVALID_NETWORK";
    case ErrorCode::UnknownState: return "UNKNOWN_STATE";
    case ErrorCode::StateSpaceMismatch: return "STATE_SPACE_MISMATCH";
    case ErrorCode::NotInScope: return "NOT_IN_SCOPE";
    case ErrorCode::ImpossibleEvidence: return "IMPOSSIBLE_EVIDENCE";
    case ErrorCode::TargetInEvidence: return "TARGET_IN_EVIDENCE";
    case ErrorCode::StateSpaceTooLarge: return "STATE_SPACE_TOO_LARGE";
    case ErrorCode::PathLimit: return "PATH_LIMIT";
    case ErrorCode::DuplicateAssignment: return "DUPLICATE_ASSIGNMENT";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::Syntax: return "SYNTAX";
    case ErrorCode::UnsupportedVersion: return "UNSUPPORTED_VERSION";
    case ErrorCode::EmptyConfiguration: return "EMPTY_CONFIGURATION";
    case ErrorCode::MissingColumn: return "MISSING_COLUMN";
    case ErrorCode::Io: return "IO";
    case ErrorCode::NotFound: return "NOT_FOUND";
  }
  return "UNKNOWN";
}

}  // namespace colliderbn
