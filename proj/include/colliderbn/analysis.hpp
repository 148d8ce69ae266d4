#pragma once

#include <string>
#include <vector>

#include "colliderbn/causal.hpp"
#include "colliderbn/inference.hpp"
#include "colliderbn/model_io.hpp"
#include "colliderbn/network.hpp"

namespace colliderbn {

/// One what-if round: evidence and interventions applied together, several
/// targets read off the same mutilated network.
struct QueryRequest {
  Evidence evidence;
  std::vector<Intervention> interventions;
  // Empty means every variable that is neither observed nor intervened on.
  std::vector<std::string> targets;
};

struct QueryRun {
  std::vector<QueryResult> posteriors;
  // P(evidence) in the mutilated network; 1 without evidence.
  double evidence_probability = 1.0;
};

/// Errors: DuplicateAssignment (a variable both observed and intervened on),
/// plus those of apply_do and query_posterior.
QueryRun run_queries(const Network& network, const QueryRequest& request);

/// Runs a parsed scenario against its model. Queried states are checked
/// (UnknownState) so a typo fails instead of silently printing nothing.
QueryRun run_scenario(const Network& network, const Scenario& scenario);

}  // namespace colliderbn
