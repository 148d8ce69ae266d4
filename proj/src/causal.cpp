#include "colliderbn/causal.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>

namespace colliderbn {

Network apply_do(const Network& network, const Intervention& intervention) {
  const std::size_t v = network.index_of(intervention.variable);
  const std::size_t s = network.state_index(v, intervention.state);

  NetworkDefinition def = network.definition();
  std::erase_if(def.edges,
                [&](const Edge& e) { return e.second == intervention.variable; });
  Cpt& cpt = def.cpts[v];
  cpt.parents.clear();
  std::vector<double> point(network.variable(v).cardinality(), 0.0);
  point[s] = 1.0;
  cpt.rows = {std::move(point)};
  return Network::create(std::move(def));
}

Network apply_do(const Network& network, std::span<const Intervention> interventions) {
  std::set<std::string, std::less<>> seen;
  for (const auto& i : interventions) {
    if (!seen.insert(i.variable).second) {
      throw Error(ErrorCode::DuplicateAssignment,
                  "variable '" + i.variable + "' is intervened on twice");
    }
  }
  Network result = network;
  for (const auto& i : interventions) result = apply_do(result, i);
  return result;
}

QueryResult interventional_query(const Network& network, const Intervention& intervention,
                                 const Evidence& evidence, std::string_view target) {
  return interventional_query(network, std::span<const Intervention>(&intervention, 1), evidence,
                              target);
}

QueryResult interventional_query(const Network& network,
                                 std::span<const Intervention> interventions,
                                 const Evidence& evidence, std::string_view target) {
  for (const auto& i : interventions) {
    if (evidence.contains(i.variable)) {
      throw Error(ErrorCode::DuplicateAssignment,
                  "variable '" + i.variable + "' is both observed and intervened on");
    }
    if (i.variable == target) {
      throw Error(ErrorCode::InvalidArgument,
                  "target '" + i.variable + "' is the intervened variable");
    }
  }
  return query_posterior(apply_do(network, interventions), evidence, target);
}

namespace {

std::vector<bool> given_mask(const Network& network, const VariableSet& given) {
  std::vector<bool> mask(network.size(), false);
  for (const auto& id : given) mask[network.index_of(id)] = true;
  return mask;
}

}  // namespace

bool d_separated(const Network& network, std::string_view x, std::string_view y,
                 const VariableSet& given) {
  const std::size_t source = network.index_of(x);
  const std::size_t sink = network.index_of(y);
  if (source == sink) throw Error(ErrorCode::InvalidArgument, "x and y must differ");
  if (given.contains(x) || given.contains(y)) {
    throw Error(ErrorCode::InvalidArgument, "x and y may not be in the conditioning set");
  }
  const auto observed = given_mask(network, given);

  // Observed variables and their ancestors: a collider is open iff it is here.
  std::vector<bool> opens_collider(network.size(), false);
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < network.size(); ++v) {
    if (observed[v]) stack.push_back(v);
  }
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (opens_collider[v]) continue;
    opens_collider[v] = true;
    for (std::size_t p : network.parents(v)) stack.push_back(p);
  }

  // (node, arrived_from_child) traversal.
  enum Dir { Up = 0, Down = 1 };
  std::vector<std::array<bool, 2>> visited(network.size(), {false, false});
  std::deque<std::pair<std::size_t, Dir>> queue{{source, Up}};
  while (!queue.empty()) {
    const auto [v, dir] = queue.front();
    queue.pop_front();
    if (visited[v][dir]) continue;
    visited[v][dir] = true;
    if (v == sink && !observed[v]) return false;
    if (dir == Up && !observed[v]) {
      for (std::size_t p : network.parents(v)) queue.emplace_back(p, Up);
      for (std::size_t c : network.children(v)) queue.emplace_back(c, Down);
    } else if (dir == Down) {
      if (!observed[v]) {
        for (std::size_t c : network.children(v)) queue.emplace_back(c, Down);
      }
      if (opens_collider[v]) {
        for (std::size_t p : network.parents(v)) queue.emplace_back(p, Up);
      }
    }
  }
  return true;
}

std::string_view to_string(NodeRole role) {
  switch (role) {
    case NodeRole::Chain: return "CHAIN";
    case NodeRole::Fork: return "FORK";
    case NodeRole::Collider: return "COLLIDER";
  }
  return "CHAIN";
}

std::string PathReport::describe() const {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) out += forward[i - 1] ? " -> " : " <- ";
    out += nodes[i];
  }
  return out;
}

std::vector<PathReport> classify_paths(const Network& network, std::string_view exposure,
                                       std::string_view outcome, const VariableSet& given,
                                       std::size_t limit) {
  const std::size_t source = network.index_of(exposure);
  const std::size_t sink = network.index_of(outcome);
  if (source == sink) throw Error(ErrorCode::InvalidArgument, "exposure and outcome must differ");
  const auto observed = given_mask(network, given);
  const std::size_t n = network.size();

  std::vector<std::vector<std::size_t>> neighbours(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t p : network.parents(v)) neighbours[v].push_back(p);
    for (std::size_t c : network.children(v)) neighbours[v].push_back(c);
    std::sort(neighbours[v].begin(), neighbours[v].end());
  }

  std::vector<std::vector<std::size_t>> found;
  std::vector<std::size_t> path{source};
  std::vector<bool> on_path(n, false);
  on_path[source] = true;
  // Iterative DFS; cursor[i] is the next neighbour of path[i] to try.
  std::vector<std::size_t> cursor{0};
  while (!path.empty()) {
    const std::size_t v = path.back();
    if (v == sink || cursor.back() >= neighbours[v].size()) {
      if (v == sink) {
        if (found.size() == limit) {
          throw Error(ErrorCode::PathLimit,
                      "more than " + std::to_string(limit) + " paths between '" +
                          std::string(exposure) + "' and '" + std::string(outcome) + "'");
        }
        found.push_back(path);
      }
      on_path[v] = false;
      path.pop_back();
      cursor.pop_back();
      continue;
    }
    const std::size_t next = neighbours[v][cursor.back()++];
    if (on_path[next]) continue;
    on_path[next] = true;
    path.push_back(next);
    cursor.push_back(0);
  }

  auto is_parent = [&](std::size_t parent, std::size_t child) {
    const auto ps = network.parents(child);
    return std::find(ps.begin(), ps.end(), parent) != ps.end();
  };
  auto has_observed_descendant = [&](std::size_t root) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> todo{root};
    while (!todo.empty()) {
      const std::size_t v = todo.back();
      todo.pop_back();
      if (seen[v]) continue;
      seen[v] = true;
      if (observed[v]) return true;
      for (std::size_t c : network.children(v)) todo.push_back(c);
    }
    return false;
  };

  std::vector<PathReport> reports;
  reports.reserve(found.size());
  for (const auto& p : found) {
    PathReport report;
    for (std::size_t v : p) report.nodes.push_back(network.variable(v).id);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) report.forward.push_back(is_parent(p[i], p[i + 1]));
    report.open = true;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      const bool arrow_in_left = report.forward[i - 1];
      const bool arrow_in_right = !report.forward[i];
      NodeRole role = NodeRole::Chain;
      if (arrow_in_left && arrow_in_right) role = NodeRole::Collider;
      else if (!arrow_in_left && !arrow_in_right) role = NodeRole::Fork;
      report.node_roles.push_back(role);
      const bool passes = role == NodeRole::Collider ? has_observed_descendant(p[i]) : !observed[p[i]];
      if (!passes) report.open = false;
    }
    reports.push_back(std::move(report));
  }
  std::stable_sort(reports.begin(), reports.end(), [](const PathReport& a, const PathReport& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
    return a.nodes < b.nodes;
  });
  return reports;
}

AuditRequest with_boolean_defaults(const Network& network, AuditRequest request) {
  auto is_boolean = [&](const std::string& id) {
    const auto& states = network.variable(network.index_of(id)).states;
    return states.size() == 2 && std::find(states.begin(), states.end(), "true") != states.end() &&
           std::find(states.begin(), states.end(), "false") != states.end();
  };
  auto require_boolean = [&](const std::string& id, const char* what) {
    if (!is_boolean(id)) {
      throw Error(ErrorCode::InvalidArgument,
                  "variable '" + id + "' is not Boolean; " + what + " must be given explicitly");
    }
  };
  if (request.outcome_state.empty()) {
    require_boolean(request.outcome, "the outcome state");
    request.outcome_state = "true";
  }
  if (request.exposed_state.empty() || request.unexposed_state.empty()) {
    require_boolean(request.exposure, "the exposure states");
    if (request.exposed_state.empty()) request.exposed_state = "true";
    if (request.unexposed_state.empty()) request.unexposed_state = "false";
  }
  return request;
}

BiasAuditReport audit_bias(const Network& network, const AuditRequest& request) {
  network.index_of(request.exposure);
  network.index_of(request.outcome);
  if (request.exposure == request.outcome) {
    throw Error(ErrorCode::InvalidArgument, "exposure and outcome must differ");
  }
  if (request.selection.contains(request.exposure) || request.selection.contains(request.outcome)) {
    throw Error(ErrorCode::InvalidArgument,
                "exposure and outcome may not be part of the selection");
  }
  if (request.exposed_state == request.unexposed_state) {
    throw Error(ErrorCode::InvalidArgument, "the two exposure states must differ");
  }

  auto observed = [&](const Evidence& base, const std::string& exposure_state) {
    Evidence e = base;
    e[request.exposure] = exposure_state;
    return query_posterior(network, e, request.outcome).probability(request.outcome_state);
  };
  auto intervened = [&](const std::string& exposure_state) {
    return interventional_query(network, Intervention{request.exposure, exposure_state}, {},
                                request.outcome)
        .probability(request.outcome_state);
  };

  BiasAuditReport report;
  report.request = request;
  report.selected = {observed(request.selection, request.exposed_state),
                     observed(request.selection, request.unexposed_state)};
  report.population = {observed({}, request.exposed_state), observed({}, request.unexposed_state)};
  report.interventional = {intervened(request.exposed_state), intervened(request.unexposed_state)};

  VariableSet selection_vars;
  for (const auto& [id, state] : request.selection) selection_vars.insert(id);
  report.paths_unconditioned = classify_paths(network, request.exposure, request.outcome, {});
  report.paths_selected =
      classify_paths(network, request.exposure, request.outcome, selection_vars);
  report.reversal = report.selected_contrast() * report.interventional_contrast() < 0.0;
  return report;
}

}  // namespace colliderbn
