#pragma once

// Hand-rolled generators for property tests. Seeds are fixed so failures
// reproduce; each property prints the seed of the failing case.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "colliderbn/network.hpp"

namespace colliderbn::testing {

struct RandomNetworkOptions {
  std::size_t min_variables = 1;
  std::size_t max_variables = 6;
  std::size_t max_states = 4;
  double edge_probability = 0.4;
  std::size_t max_parents = 3;
  // Probabilities are k / grid.
  int grid = 1000;
  // Smallest k per entry; 1 keeps every joint state possible.
  int min_count = 0;
};

// k_1 + ... + k_n = grid with each k_i >= min_count.
inline std::vector<int> random_composition(std::mt19937_64& rng, std::size_t n, int grid,
                                           int min_count) {
  const int free = grid - static_cast<int>(n) * min_count;
  std::uniform_int_distribution<int> cut(0, free);
  std::vector<int> cuts{0, free};
  for (std::size_t i = 1; i < n; ++i) cuts.push_back(cut(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(cuts[i + 1] - cuts[i] + min_count);
  return out;
}

// Random DAG whose declaration order is a shuffle of a topological order, so
// parents may be declared after their children.
inline NetworkDefinition random_definition(std::mt19937_64& rng,
                                           const RandomNetworkOptions& opt = {}) {
  std::uniform_int_distribution<std::size_t> count(opt.min_variables, opt.max_variables);
  std::uniform_int_distribution<std::size_t> states(2, opt.max_states);
  std::bernoulli_distribution edge(opt.edge_probability);
  const std::size_t n = count(rng);

  NetworkDefinition def;
  def.name = "random";
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
  std::vector<std::size_t> declared(n);
  std::iota(declared.begin(), declared.end(), 0);
  std::shuffle(declared.begin(), declared.end(), rng);

  std::vector<std::vector<std::size_t>> parents(n);  // by topological position
  for (std::size_t child = 0; child < n; ++child) {
    for (std::size_t parent = 0; parent < child; ++parent) {
      if (parents[child].size() < opt.max_parents && edge(rng)) parents[child].push_back(parent);
    }
    std::shuffle(parents[child].begin(), parents[child].end(), rng);
  }

  std::vector<std::size_t> cardinality(n);
  for (std::size_t i = 0; i < n; ++i) cardinality[i] = states(rng);
  for (std::size_t d : declared) {
    DiscreteVariable v;
    v.id = ids[d];
    v.label = "Variable " + std::to_string(d);
    for (std::size_t s = 0; s < cardinality[d]; ++s) v.states.push_back("s" + std::to_string(s));
    def.variables.push_back(std::move(v));
  }
  for (std::size_t d : declared) {
    Cpt cpt;
    cpt.child = ids[d];
    std::size_t rows = 1;
    for (std::size_t p : parents[d]) {
      cpt.parents.push_back(ids[p]);
      def.edges.emplace_back(ids[p], ids[d]);
      rows *= cardinality[p];
    }
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row;
      for (int k : random_composition(rng, cardinality[d], opt.grid, opt.min_count)) {
        row.push_back(static_cast<double>(k) / opt.grid);
      }
      cpt.rows.push_back(std::move(row));
    }
    def.cpts.push_back(std::move(cpt));
  }
  return def;
}

inline Network random_network(std::mt19937_64& rng, const RandomNetworkOptions& opt = {}) {
  return Network::create(random_definition(rng, opt));
}

// Every assignment of states to the given variables, as Evidence.
inline std::vector<Evidence> all_assignments(const Network& network,
                                             const std::vector<std::size_t>& variables) {
  std::vector<Evidence> out{Evidence{}};
  for (std::size_t v : variables) {
    std::vector<Evidence> next;
    for (const auto& partial : out) {
      for (const auto& state : network.variable(v).states) {
        Evidence e = partial;
        e.emplace(network.variable(v).id, state);
        next.push_back(std::move(e));
      }
    }
    out = std::move(next);
  }
  return out;
}

// All evidence sets over at most two variables, every state combination.
inline std::vector<Evidence> small_evidence_sets(const Network& network) {
  std::vector<Evidence> out{Evidence{}};
  for (std::size_t a = 0; a < network.size(); ++a) {
    for (auto& e : all_assignments(network, {a})) out.push_back(std::move(e));
    for (std::size_t b = a + 1; b < network.size(); ++b) {
      for (auto& e : all_assignments(network, {a, b})) out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace colliderbn::testing
