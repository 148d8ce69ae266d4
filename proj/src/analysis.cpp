#include "colliderbn/analysis.hpp"

#include <algorithm>

namespace colliderbn {

namespace {

// P(e) = P(e \ {v}) * P(v = s | e \ {v}) for the last observed v.
double evidence_probability(const Network& network, const Evidence& evidence) {
  if (evidence.empty()) return 1.0;
  Evidence rest = evidence;
  auto last = std::prev(rest.end());
  const std::string target = last->first;
  const std::string state = last->second;
  rest.erase(last);
  const QueryResult r = query_posterior(network, rest, target);
  const double p = r.evidence_probability * r.probability(state);
  if (!(p > 0.0)) throw Error(ErrorCode::ImpossibleEvidence, "the evidence has probability 0");
  return p;
}

}  // namespace

QueryRun run_queries(const Network& network, const QueryRequest& request) {
  for (const auto& i : request.interventions) {
    if (request.evidence.contains(i.variable)) {
      throw Error(ErrorCode::DuplicateAssignment,
                  "'" + i.variable + "' is both observed and intervened on");
    }
  }
  const Network mutilated = apply_do(network, request.interventions);

  std::vector<std::string> targets = request.targets;
  if (targets.empty()) {
    for (std::size_t v = 0; v < network.size(); ++v) {
      const std::string& id = network.variable(v).id;
      const bool intervened =
          std::any_of(request.interventions.begin(), request.interventions.end(),
                      [&](const Intervention& i) { return i.variable == id; });
      if (!intervened && !request.evidence.contains(id)) targets.push_back(id);
    }
  }

  QueryRun run;
  for (const auto& target : targets) {
    const bool intervened =
        std::any_of(request.interventions.begin(), request.interventions.end(),
                    [&](const Intervention& i) { return i.variable == target; });
    if (intervened) {
      throw Error(ErrorCode::InvalidArgument, "'" + target + "' is intervened on");
    }
    run.posteriors.push_back(query_posterior(mutilated, request.evidence, target));
  }
  run.evidence_probability = run.posteriors.empty()
                                 ? evidence_probability(mutilated, request.evidence)
                                 : run.posteriors.front().evidence_probability;
  return run;
}

QueryRun run_scenario(const Network& network, const Scenario& scenario) {
  QueryRequest request{scenario.evidence, scenario.interventions, {}};
  for (const auto& q : scenario.queries) request.targets.push_back(q.target);
  QueryRun run = run_queries(network, request);
  for (std::size_t i = 0; i < scenario.queries.size(); ++i) {
    if (scenario.queries[i].state) run.posteriors[i].probability(*scenario.queries[i].state);
  }
  return run;
}

}  // namespace colliderbn
