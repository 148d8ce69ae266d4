#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colliderbn/network.hpp"

namespace colliderbn {

struct QueryResult {
  std::string target;
  std::vector<std::string> states;
  std::vector<double> distribution;
  // Prior probability of the evidence; exactly 1 when there is none.
  double evidence_probability = 1.0;

  /// Throws Error(UnknownState).
  double probability(std::string_view state) const;
};

using VariableSet = std::set<std::string, std::less<>>;

/// Min-fill order on the moral graph for every variable not in `keep`.
/// Ties go to the earlier-declared variable.
std::vector<std::string> elimination_order(const Network& network, const VariableSet& keep);

/// P(target | evidence) by reduce-then-eliminate variable elimination.
/// Errors: TargetInEvidence, ImpossibleEvidence, UnknownVariable, UnknownState.
QueryResult query_posterior(const Network& network, const Evidence& evidence,
                            std::string_view target);

/// Same, eliminating in the given order instead of min-fill. The order must
/// name every variable other than the target and the evidence exactly once
/// (evidence variables may also appear; eliminating them is a no-op).
QueryResult query_posterior(const Network& network, const Evidence& evidence,
                            std::string_view target, std::span<const std::string> order);

/// Empty-evidence posterior of every variable, in declaration order.
std::vector<QueryResult> prior_marginals(const Network& network);

struct EnumerationOptions {
  std::uint64_t max_joint_states = std::uint64_t{1} << 20;
};

/// Brute-force oracle: sums the full joint product over every configuration.
/// Shares no code with the elimination path beyond network lookups and the
/// final normalization.
/// Errors: StateSpaceTooLarge plus those of query_posterior.
QueryResult enumerate_joint(const Network& network, const Evidence& evidence,
                            std::string_view target, EnumerationOptions options = {});

}  // namespace colliderbn
