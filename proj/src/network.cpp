#include "colliderbn/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace colliderbn {

std::optional<std::size_t> DiscreteVariable::state_index(std::string_view state) const {
  auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

namespace {

bool valid_identifier(const std::string& id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(),
                      [](unsigned char c) { return std::isspace(c) || std::iscntrl(c); });
}

using IdIndex = std::map<std::string, std::size_t, std::less<>>;

// Kahn's algorithm with a min-heap on declaration index. Returns the order,
// or nullopt when some variables sit on a cycle.
std::optional<std::vector<std::size_t>> ordered_indices(
    std::size_t count, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> children(count);
  std::vector<std::size_t> in_degree(count, 0);
  for (const auto& [parent, child] : edges) {
    children[parent].push_back(child);
    ++in_degree[child];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < count; ++i) {
    if (in_degree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(count);
  while (!ready.empty()) {
    const std::size_t next = ready.top();
    ready.pop();
    order.push_back(next);
    for (std::size_t child : children[next]) {
      if (--in_degree[child] == 0) ready.push(child);
    }
  }
  if (order.size() != count) return std::nullopt;
  return order;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out;
}

}  // namespace

ValidationReport validate_network(const NetworkDefinition& def) {
  ValidationReport report;
  auto add = [&report](ErrorCode code, std::string message) -> Violation& {
    report.violations.push_back(Violation{code, std::move(message), {}, {}, {}, {}});
    return report.violations.back();
  };

  IdIndex index;
  for (std::size_t i = 0; i < def.variables.size(); ++i) {
    const auto& var = def.variables[i];
    if (!valid_identifier(var.id)) {
      add(ErrorCode::BadVariable, "variable id '" + var.id + "' is empty or contains whitespace")
          .variable_index = i;
    }
    if (var.states.size() < 2) {
      add(ErrorCode::BadVariable, "variable '" + var.id + "' needs at least two states")
          .variable_index = i;
    }
    std::set<std::string_view> seen;
    for (const auto& state : var.states) {
      if (state.empty()) {
        add(ErrorCode::BadVariable, "variable '" + var.id + "' has an empty state name")
            .variable_index = i;
      } else if (!seen.insert(state).second) {
        add(ErrorCode::BadVariable,
            "variable '" + var.id + "' declares state '" + state + "' twice")
            .variable_index = i;
      }
    }
    if (!index.emplace(var.id, i).second) {
      add(ErrorCode::DuplicateVariable, "variable '" + var.id + "' is declared twice")
          .variable_index = i;
    }
  }

  // Graph parents, from well-formed edges only.
  std::vector<std::set<std::size_t>> graph_parents(def.variables.size());
  std::vector<std::pair<std::size_t, std::size_t>> graph_edges;
  std::vector<std::size_t> graph_edge_source;
  for (std::size_t e = 0; e < def.edges.size(); ++e) {
    const auto& [parent, child] = def.edges[e];
    auto p = index.find(parent);
    auto c = index.find(child);
    if (p == index.end() || c == index.end()) {
      const std::string& missing = p == index.end() ? parent : child;
      add(ErrorCode::OrphanEdge, "edge " + parent + " -> " + child +
                                     " references undeclared variable '" + missing + "'")
          .edge_index = e;
      continue;
    }
    if (p->second == c->second) {
      add(ErrorCode::Cycle, "edge " + parent + " -> " + child + " is a self-loop").edge_index = e;
      continue;
    }
    if (!graph_parents[c->second].insert(p->second).second) {
      add(ErrorCode::DuplicateEdge, "edge " + parent + " -> " + child + " is listed twice")
          .edge_index = e;
      continue;
    }
    graph_edges.emplace_back(p->second, c->second);
    graph_edge_source.push_back(e);
  }

  if (!ordered_indices(def.variables.size(), graph_edges)) {
    // Peel off everything reachable in topological order; what remains is
    // on or downstream of a cycle. Report the first edge among the rest.
    std::vector<std::size_t> in_degree(def.variables.size(), 0);
    for (const auto& [p, c] : graph_edges) ++in_degree[c];
    std::vector<bool> removed(def.variables.size(), false);
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t i = 0; i < in_degree.size(); ++i) {
        if (!removed[i] && in_degree[i] == 0) {
          removed[i] = true;
          progress = true;
          for (const auto& [p, c] : graph_edges) {
            if (p == i) --in_degree[c];
          }
        }
      }
    }
    std::vector<std::string> stuck;
    for (std::size_t i = 0; i < removed.size(); ++i) {
      if (!removed[i]) stuck.push_back(def.variables[i].id);
    }
    auto& v = add(ErrorCode::Cycle, "graph has a directed cycle through: " + join(stuck));
    for (std::size_t k = 0; k < graph_edges.size(); ++k) {
      if (!removed[graph_edges[k].first] && !removed[graph_edges[k].second]) {
        v.edge_index = graph_edge_source[k];
        break;
      }
    }
  }

  std::vector<bool> has_cpt(def.variables.size(), false);
  for (std::size_t k = 0; k < def.cpts.size(); ++k) {
    const Cpt& cpt = def.cpts[k];
    auto child_it = index.find(cpt.child);
    if (child_it == index.end()) {
      add(ErrorCode::UnknownVariable, "table for undeclared variable '" + cpt.child + "'")
          .cpt_index = k;
      continue;
    }
    const std::size_t child = child_it->second;
    if (has_cpt[child]) {
      add(ErrorCode::DuplicateCpt, "variable '" + cpt.child + "' has more than one table")
          .cpt_index = k;
      continue;
    }
    has_cpt[child] = true;

    bool parents_known = true;
    std::set<std::size_t> listed;
    bool duplicated = false;
    for (const auto& parent : cpt.parents) {
      auto it = index.find(parent);
      if (it == index.end()) {
        add(ErrorCode::UnknownVariable,
            "table for '" + cpt.child + "' names undeclared parent '" + parent + "'")
            .cpt_index = k;
        parents_known = false;
      } else if (!listed.insert(it->second).second) {
        duplicated = true;
      }
    }
    if (!parents_known) continue;
    if (duplicated || listed != graph_parents[child]) {
      std::vector<std::string> expected;
      for (std::size_t p : graph_parents[child]) expected.push_back(def.variables[p].id);
      add(ErrorCode::CptParentMismatch, "table for '" + cpt.child + "' lists parents [" +
                                            join(cpt.parents) + "] but the graph has [" +
                                            join(expected) + "]")
          .cpt_index = k;
      continue;
    }

    std::size_t expected_rows = 1;
    bool overflow = false;
    for (const auto& parent : cpt.parents) {
      const std::size_t card = def.variables[index.find(parent)->second].cardinality();
      if (card != 0 && expected_rows > std::numeric_limits<std::size_t>::max() / card) {
        overflow = true;
        break;
      }
      expected_rows *= card;
    }
    if (overflow || cpt.rows.size() != expected_rows) {
      auto& v = add(ErrorCode::BadRowLength,
                    "table for '" + cpt.child + "' has " + std::to_string(cpt.rows.size()) +
                        " rows, expected " +
                        (overflow ? std::string("an unrepresentable count")
                                  : std::to_string(expected_rows)));
      v.cpt_index = k;
      v.row_index = std::min(cpt.rows.size(), expected_rows);
      continue;
    }

    const std::size_t width = def.variables[child].cardinality();
    for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
      const auto& row = cpt.rows[r];
      auto where = [&](Violation& v) {
        v.cpt_index = k;
        v.row_index = r;
      };
      if (row.size() != width) {
        where(add(ErrorCode::BadRowLength, "row " + std::to_string(r) + " of '" + cpt.child +
                                               "' has " + std::to_string(row.size()) +
                                               " entries, expected " + std::to_string(width)));
        continue;
      }
      bool entries_ok = true;
      double sum = 0.0;
      for (double p : row) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) entries_ok = false;
        sum += p;
      }
      if (!entries_ok) {
        where(add(ErrorCode::BadProbability, "row " + std::to_string(r) + " of '" + cpt.child +
                                                 "' has an entry outside [0, 1]"));
      } else if (std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "row " << r << " of '" << cpt.child << "' sums to " << sum;
        where(add(ErrorCode::RowNotNormalized, msg.str()));
      }
    }
  }
  for (std::size_t i = 0; i < def.variables.size(); ++i) {
    if (!has_cpt[i] && index.find(def.variables[i].id)->second == i) {
      add(ErrorCode::MissingCpt, "variable '" + def.variables[i].id + "' has no table")
          .variable_index = i;
    }
  }
  return report;
}

namespace {

std::string summarize(const ValidationReport& report) {
  if (report.ok()) return "network is valid";
  std::string msg = std::string(to_string(report.violations.front().code)) + ": " +
                    report.violations.front().message;
  if (report.violations.size() > 1) {
    msg += " (and " + std::to_string(report.violations.size() - 1) + " more)";
  }
  return msg;
}

ErrorCode first_code(const ValidationReport& report) {
  return report.ok() ? ErrorCode::InvalidNetwork : report.violations.front().code;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error(first_code(report), summarize(report)), report_(std::move(report)) {}

struct Network::Impl {
  NetworkDefinition definition;
  std::vector<VariableRef> variables;
  IdIndex index;
  std::vector<std::vector<std::size_t>> parents;
  std::vector<std::vector<std::size_t>> children;
};

Network Network::create(NetworkDefinition definition) {
  ValidationReport report = validate_network(definition);
  if (!report.ok()) throw ValidationError(std::move(report));

  auto impl = std::make_shared<Impl>();
  const std::size_t n = definition.variables.size();
  for (std::size_t i = 0; i < n; ++i) {
    impl->index.emplace(definition.variables[i].id, i);
    impl->variables.push_back(std::make_shared<const DiscreteVariable>(definition.variables[i]));
  }

  std::vector<Cpt> cpts(n);
  for (auto& cpt : definition.cpts) {
    const std::size_t i = impl->index.find(cpt.child)->second;
    cpts[i] = std::move(cpt);
  }
  impl->parents.resize(n);
  impl->children.resize(n);
  definition.edges.clear();
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& parent : cpts[i].parents) {
      const std::size_t p = impl->index.find(parent)->second;
      impl->parents[i].push_back(p);
      impl->children[p].push_back(i);
      definition.edges.emplace_back(parent, cpts[i].child);
    }
  }
  definition.cpts = std::move(cpts);
  impl->definition = std::move(definition);
  return Network(std::move(impl));
}

const std::string& Network::name() const { return impl_->definition.name; }
std::size_t Network::size() const { return impl_->variables.size(); }

const DiscreteVariable& Network::variable(std::size_t index) const {
  return *impl_->variables.at(index);
}

const VariableRef& Network::variable_ref(std::size_t index) const {
  return impl_->variables.at(index);
}

std::optional<std::size_t> Network::find(std::string_view id) const {
  auto it = impl_->index.find(id);
  if (it == impl_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t Network::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw Error(ErrorCode::UnknownVariable,
              "unknown variable '" + std::string(id) + "' in network '" + name() + "'");
}

std::size_t Network::state_index(std::size_t variable, std::string_view state) const {
  const auto& var = this->variable(variable);
  if (auto s = var.state_index(state)) return *s;
  throw Error(ErrorCode::UnknownState,
              "variable '" + var.id + "' has no state '" + std::string(state) + "'");
}

std::span<const std::size_t> Network::parents(std::size_t index) const {
  return impl_->parents.at(index);
}

std::span<const std::size_t> Network::children(std::size_t index) const {
  return impl_->children.at(index);
}

const Cpt& Network::cpt(std::size_t index) const { return impl_->definition.cpts.at(index); }

const NetworkDefinition& Network::definition() const { return impl_->definition; }

bool Network::operator==(const Network& other) const {
  return impl_ == other.impl_ || impl_->definition == other.impl_->definition;
}

std::vector<std::string> topological_order(const NetworkDefinition& definition) {
  IdIndex index;
  for (std::size_t i = 0; i < definition.variables.size(); ++i) {
    index.emplace(definition.variables[i].id, i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [parent, child] : definition.edges) {
    auto p = index.find(parent);
    auto c = index.find(child);
    if (p == index.end() || c == index.end()) {
      throw Error(ErrorCode::UnknownVariable,
                  "edge " + parent + " -> " + child + " references an undeclared variable");
    }
    edges.emplace_back(p->second, c->second);
  }
  auto order = ordered_indices(definition.variables.size(), edges);
  if (!order) throw Error(ErrorCode::Cycle, "graph has a directed cycle");
  std::vector<std::string> ids;
  ids.reserve(order->size());
  for (std::size_t i : *order) ids.push_back(definition.variables[i].id);
  return ids;
}

std::vector<std::string> topological_order(const Network& network) {
  return topological_order(network.definition());
}

std::vector<std::pair<std::size_t, std::size_t>> resolve_evidence(const Network& network,
                                                                  const Evidence& evidence) {
  std::vector<std::pair<std::size_t, std::size_t>> resolved;
  resolved.reserve(evidence.size());
  for (const auto& [id, state] : evidence) {
    const std::size_t var = network.index_of(id);
    resolved.emplace_back(var, network.state_index(var, state));
  }
  std::sort(resolved.begin(), resolved.end());
  return resolved;
}

}  // namespace colliderbn
