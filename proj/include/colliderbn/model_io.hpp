#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "colliderbn/causal.hpp"
#include "colliderbn/network.hpp"

namespace colliderbn {

inline constexpr int kFormatVersion = 1;

/// Parses a model document and validates the network. Every failure is an
/// Error carrying a line/column: SYNTAX and UNSUPPORTED_VERSION for malformed
/// documents, otherwise the first validation violation (UNKNOWN_VARIABLE,
/// BAD_ROW_LENGTH, CYCLE, ...), positioned at the offending element.
Network parse_model(std::string_view text);

/// Canonical, byte-stable rendering of a network.
std::string serialize_model(const Network& network);

/// Up to 12 significant digits, shortest form ("0.1", not "0.10000000000000001").
std::string format_probability(double p);
/// The value format_probability(p) parses back to.
double canonical_probability(double p);

/// Model document without (or ignoring) CPT rows; input to CPT fitting.
struct NetworkSkeleton {
  std::string name;
  std::vector<DiscreteVariable> variables;
  // Parents per variable, in declaration order of the variables.
  std::vector<std::vector<std::string>> parents;
  std::vector<std::pair<std::string, std::string>> metadata;
};

NetworkSkeleton parse_skeleton(std::string_view text);

struct ScenarioQuery {
  std::string target;
  std::optional<std::string> state;

  bool operator==(const ScenarioQuery&) const = default;
};

struct Scenario {
  std::string model;
  std::string label;
  Evidence evidence;
  std::vector<Intervention> interventions;
  std::vector<ScenarioQuery> queries;
};

/// Structural parse only; variables are checked against the model when the
/// scenario runs. Throws Error(Syntax / UnsupportedVersion /
/// DuplicateAssignment) with a location.
Scenario parse_scenario(std::string_view text);

}  // namespace colliderbn
