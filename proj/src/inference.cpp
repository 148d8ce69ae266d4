#include "colliderbn/inference.hpp"

#include <algorithm>
#include <limits>

#include "colliderbn/factor.hpp"

namespace colliderbn {

double QueryResult::probability(std::string_view state) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == state) return distribution[i];
  }
  throw Error(ErrorCode::UnknownState,
              "variable '" + target + "' has no state '" + std::string(state) + "'");
}

std::vector<std::string> elimination_order(const Network& network, const VariableSet& keep) {
  const std::size_t n = network.size();
  std::vector<std::set<std::size_t>> adjacent(n);
  for (std::size_t child = 0; child < n; ++child) {
    const auto parents = network.parents(child);
    for (std::size_t i = 0; i < parents.size(); ++i) {
      adjacent[child].insert(parents[i]);
      adjacent[parents[i]].insert(child);
      for (std::size_t j = i + 1; j < parents.size(); ++j) {
        adjacent[parents[i]].insert(parents[j]);
        adjacent[parents[j]].insert(parents[i]);
      }
    }
  }

  std::vector<bool> pending(n, false);
  std::size_t remaining = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep.contains(network.variable(v).id)) {
      pending[v] = true;
      ++remaining;
    }
  }

  std::vector<std::string> order;
  order.reserve(remaining);
  while (remaining > 0) {
    std::size_t best = n;
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < n; ++v) {
      if (!pending[v]) continue;
      std::size_t fill = 0;
      for (auto a = adjacent[v].begin(); a != adjacent[v].end(); ++a) {
        for (auto b = std::next(a); b != adjacent[v].end(); ++b) {
          if (!adjacent[*a].contains(*b)) ++fill;
        }
      }
      if (fill < best_fill) {
        best_fill = fill;
        best = v;
      }
    }
    for (auto a = adjacent[best].begin(); a != adjacent[best].end(); ++a) {
      for (auto b = std::next(a); b != adjacent[best].end(); ++b) {
        adjacent[*a].insert(*b);
        adjacent[*b].insert(*a);
      }
      adjacent[*a].erase(best);
    }
    adjacent[best].clear();
    pending[best] = false;
    --remaining;
    order.push_back(network.variable(best).id);
  }
  return order;
}

namespace {

// Checks shared by both inference routes. Returns the target index.
std::size_t check_query(const Network& network, const Evidence& evidence,
                        std::string_view target) {
  const std::size_t t = network.index_of(target);
  resolve_evidence(network, evidence);
  if (evidence.contains(target)) {
    throw Error(ErrorCode::TargetInEvidence,
                "target '" + std::string(target) + "' is also observed as evidence");
  }
  return t;
}

QueryResult finish(const Network& network, std::size_t target, const Evidence& evidence,
                   std::vector<double> unnormalized) {
  double z = 0.0;
  for (double v : unnormalized) z += v;
  if (!(z > 0.0)) {
    throw Error(ErrorCode::ImpossibleEvidence, "the evidence has probability zero");
  }
  QueryResult result;
  result.target = network.variable(target).id;
  result.states = network.variable(target).states;
  result.distribution.reserve(unnormalized.size());
  for (double v : unnormalized) result.distribution.push_back(v / z);
  result.evidence_probability = evidence.empty() ? 1.0 : std::min(z, 1.0);
  return result;
}

}  // namespace

QueryResult query_posterior(const Network& network, const Evidence& evidence,
                            std::string_view target) {
  check_query(network, evidence, target);
  VariableSet keep{std::string(target)};
  for (const auto& [id, state] : evidence) keep.insert(id);
  const auto order = elimination_order(network, keep);
  return query_posterior(network, evidence, target, order);
}

QueryResult query_posterior(const Network& network, const Evidence& evidence,
                            std::string_view target, std::span<const std::string> order) {
  const std::size_t t = check_query(network, evidence, target);

  std::vector<bool> eliminated(network.size(), false);
  for (const auto& id : order) {
    const std::size_t v = network.index_of(id);
    if (v == t) {
      throw Error(ErrorCode::InvalidArgument, "elimination order contains the target");
    }
    if (eliminated[v]) {
      throw Error(ErrorCode::InvalidArgument, "elimination order repeats '" + id + "'");
    }
    eliminated[v] = true;
  }
  for (std::size_t v = 0; v < network.size(); ++v) {
    if (v != t && !eliminated[v] && !evidence.contains(network.variable(v).id)) {
      throw Error(ErrorCode::InvalidArgument,
                  "elimination order omits '" + network.variable(v).id + "'");
    }
  }

  std::vector<Factor> factors;
  factors.reserve(network.size());
  for (std::size_t v = 0; v < network.size(); ++v) {
    factors.push_back(reduce(factor_from_cpt(network, v), evidence));
  }

  for (const auto& id : order) {
    Factor combined;
    bool touched = false;
    std::vector<Factor> rest;
    rest.reserve(factors.size());
    for (auto& f : factors) {
      if (f.position(id)) {
        combined = multiply(combined, f);
        touched = true;
      } else {
        rest.push_back(std::move(f));
      }
    }
    factors = std::move(rest);
    if (touched) factors.push_back(sum_out(combined, id));
  }

  Factor result;
  for (const auto& f : factors) result = multiply(result, f);
  // Only the target can remain in scope.
  if (result.scope().size() != 1 || result.scope().front()->id != target) {
    throw Error(ErrorCode::InvalidArgument, "elimination left unexpected variables in scope");
  }
  return finish(network, t, evidence, {result.values().begin(), result.values().end()});
}

std::vector<QueryResult> prior_marginals(const Network& network) {
  std::vector<QueryResult> out;
  out.reserve(network.size());
  for (std::size_t v = 0; v < network.size(); ++v) {
    out.push_back(query_posterior(network, {}, network.variable(v).id));
  }
  return out;
}

QueryResult enumerate_joint(const Network& network, const Evidence& evidence,
                            std::string_view target, EnumerationOptions options) {
  const std::size_t t = check_query(network, evidence, target);
  const std::size_t n = network.size();

  std::uint64_t joint = 1;
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint64_t card = network.variable(v).cardinality();
    if (joint > options.max_joint_states / card) {
      throw Error(ErrorCode::StateSpaceTooLarge,
                  "joint state space exceeds the enumeration cap of " +
                      std::to_string(options.max_joint_states));
    }
    joint *= card;
  }

  std::vector<std::optional<std::size_t>> observed(n);
  for (const auto& [var, state] : resolve_evidence(network, evidence)) observed[var] = state;

  std::vector<double> mass(network.variable(t).cardinality(), 0.0);
  std::vector<std::size_t> config(n, 0);
  for (std::uint64_t k = 0; k < joint; ++k) {
    bool consistent = true;
    for (std::size_t v = 0; v < n && consistent; ++v) {
      if (observed[v] && *observed[v] != config[v]) consistent = false;
    }
    if (consistent) {
      double p = 1.0;
      for (std::size_t v = 0; v < n; ++v) {
        std::size_t row = 0;
        for (std::size_t parent : network.parents(v)) {
          row = row * network.variable(parent).cardinality() + config[parent];
        }
        p *= network.cpt(v).rows[row][config[v]];
      }
      mass[config[t]] += p;
    }
    for (std::size_t v = n; v-- > 0;) {
      if (++config[v] < network.variable(v).cardinality()) break;
      config[v] = 0;
    }
  }
  return finish(network, t, evidence, std::move(mass));
}

}  // namespace colliderbn
