#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "colliderbn/error.hpp"

namespace colliderbn {

struct DiscreteVariable {
  std::string id;
  std::string label;
  std::vector<std::string> states;

  std::size_t cardinality() const { return states.size(); }
  std::optional<std::size_t> state_index(std::string_view state) const;

  bool operator==(const DiscreteVariable&) const = default;
};

using VariableRef = std::shared_ptr<const DiscreteVariable>;

/// Conditional probability table. One row per parent configuration; rows are
/// enumerated row-major over parent state indices with the first parent
/// varying slowest. A parentless table has exactly one row.
struct Cpt {
  std::string child;
  std::vector<std::string> parents;
  std::vector<std::vector<double>> rows;

  bool operator==(const Cpt&) const = default;
};

using Edge = std::pair<std::string, std::string>;  // (parent, child)

/// Unvalidated network description. Anything may be put in here; validate()
/// reports what is wrong with it and Network::create() refuses it unless the
/// report is clean.
struct NetworkDefinition {
  std::string name;
  std::vector<DiscreteVariable> variables;
  std::vector<Edge> edges;
  std::vector<Cpt> cpts;
  // Free-form annotations carried through serialization (calibration notes).
  std::vector<std::pair<std::string, std::string>> metadata;

  bool operator==(const NetworkDefinition&) const = default;
};

/// Observed states keyed by variable id.
using Evidence = std::map<std::string, std::string, std::less<>>;

struct Violation {
  ErrorCode code;
  std::string message;
  std::optional<std::size_t> variable_index;
  std::optional<std::size_t> edge_index;
  std::optional<std::size_t> cpt_index;
  std::optional<std::size_t> row_index;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

inline constexpr double kRowSumTolerance = 1e-9;

ValidationReport validate_network(const NetworkDefinition& definition);

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Immutable, validated discrete Bayesian network. Copies share state, so
/// passing by value is cheap and concurrent readers need no locking.
class Network {
 public:
  /// Throws ValidationError when the definition is not a valid network.
  static Network create(NetworkDefinition definition);

  const std::string& name() const;
  std::size_t size() const;

  const DiscreteVariable& variable(std::size_t index) const;
  const VariableRef& variable_ref(std::size_t index) const;
  std::optional<std::size_t> find(std::string_view id) const;
  /// Throws Error(UnknownVariable).
  std::size_t index_of(std::string_view id) const;
  /// Throws Error(UnknownState).
  std::size_t state_index(std::size_t variable, std::string_view state) const;

  /// Parents in CPT order.
  std::span<const std::size_t> parents(std::size_t index) const;
  /// Children in declaration order.
  std::span<const std::size_t> children(std::size_t index) const;
  const Cpt& cpt(std::size_t index) const;

  /// Canonical form: variables in declaration order, one CPT per variable in
  /// the same order, edges listed child by child in CPT parent order.
  const NetworkDefinition& definition() const;

  bool operator==(const Network& other) const;

 private:
  struct Impl;
  explicit Network(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Parents before children; ties broken by declaration order.
/// Throws Error(Cycle) on cyclic input.
std::vector<std::string> topological_order(const NetworkDefinition& definition);
std::vector<std::string> topological_order(const Network& network);

/// Evidence as (variable index, state index) pairs, ordered by variable index.
/// Throws Error(UnknownVariable / UnknownState).
std::vector<std::pair<std::size_t, std::size_t>> resolve_evidence(const Network& network,
                                                                  const Evidence& evidence);

}  // namespace colliderbn
