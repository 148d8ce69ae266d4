#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colliderbn/inference.hpp"
#include "colliderbn/network.hpp"

namespace colliderbn {

struct Intervention {
  std::string variable;
  std::string state;

  bool operator==(const Intervention&) const = default;
};

/// Graph surgery: drops every edge into the intervened variable and replaces
/// its table by a point mass on the chosen state. Everything else is kept.
Network apply_do(const Network& network, const Intervention& intervention);
Network apply_do(const Network& network, std::span<const Intervention> interventions);

/// query_posterior on the mutilated network. The target may not be an
/// intervened variable and no intervened variable may be observed.
QueryResult interventional_query(const Network& network, const Intervention& intervention,
                                 const Evidence& evidence, std::string_view target);
QueryResult interventional_query(const Network& network,
                                 std::span<const Intervention> interventions,
                                 const Evidence& evidence, std::string_view target);

/// Bayes-ball reachability. x and y must differ and lie outside `given`.
bool d_separated(const Network& network, std::string_view x, std::string_view y,
                 const VariableSet& given);

enum class NodeRole { Chain, Fork, Collider };
std::string_view to_string(NodeRole role);

struct PathReport {
  std::vector<std::string> nodes;
  // forward[i] is true for nodes[i] -> nodes[i+1], false for nodes[i] <- nodes[i+1].
  std::vector<bool> forward;
  // One role per interior node.
  std::vector<NodeRole> node_roles;
  bool open = false;

  /// "smoker -> tested <- covid19"
  std::string describe() const;
};

inline constexpr std::size_t kDefaultPathLimit = 10000;

/// Every simple undirected path between exposure and outcome, shortest first
/// then lexicographic by node ids. Throws Error(PathLimit) past `limit` paths.
std::vector<PathReport> classify_paths(const Network& network, std::string_view exposure,
                                       std::string_view outcome, const VariableSet& given,
                                       std::size_t limit = kDefaultPathLimit);

struct AuditRequest {
  std::string exposure;
  std::string outcome;
  std::string outcome_state;
  std::string exposed_state;
  std::string unexposed_state;
  Evidence selection;
};

struct Contrast {
  double exposed = 0.0;    // P(outcome_state | e1, ...)
  double unexposed = 0.0;  // P(outcome_state | e0, ...)
  double difference() const { return exposed - unexposed; }
};

struct BiasAuditReport {
  AuditRequest request;
  Contrast selected;        // conditioned on the selection evidence
  Contrast population;      // no selection
  Contrast interventional;  // do(exposure), no selection
  std::vector<PathReport> paths_unconditioned;
  std::vector<PathReport> paths_selected;
  bool reversal = false;

  double selected_contrast() const { return selected.difference(); }
  double population_contrast() const { return population.difference(); }
  double interventional_contrast() const { return interventional.difference(); }
};

/// Observational-under-selection vs population vs interventional risk
/// differences for one exposure/outcome pair. `reversal` is set iff the
/// selected and interventional contrasts have strictly opposite signs.
BiasAuditReport audit_bias(const Network& network, const AuditRequest& request);

/// Fills in "true"/"false" defaults for Boolean variables. Throws
/// Error(InvalidArgument) when a default is needed but the variable is not
/// Boolean.
AuditRequest with_boolean_defaults(const Network& network, AuditRequest request);

}  // namespace colliderbn
