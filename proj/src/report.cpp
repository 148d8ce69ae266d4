#include "colliderbn/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "colliderbn/model_io.hpp"

namespace colliderbn {

namespace {

double rounded(double p) { return canonical_probability(p); }

Json contrast_json(const Contrast& c) {
  Json out = Json::object();
  out["exposed"] = rounded(c.exposed);
  out["unexposed"] = rounded(c.unexposed);
  out["difference"] = rounded(c.difference());
  return out;
}

// Half-up on the value scaled to `units`, after dropping representation noise
// (0.1235 * 1000 is 123.49999999999999).
long long half_up(double p, double units) {
  return static_cast<long long>(std::floor(canonical_probability(p * units) + 0.5));
}

}  // namespace

Json evidence_json(const Evidence& evidence) {
  Json out = Json::object();
  for (const auto& [variable, state] : evidence) out[variable] = state;
  return out;
}

Json interventions_json(std::span<const Intervention> interventions) {
  Json out = Json::object();
  for (const auto& i : interventions) out[i.variable] = i.state;
  return out;
}

Json distribution_json(const QueryResult& result) {
  Json out = Json::object();
  for (std::size_t s = 0; s < result.states.size(); ++s) {
    out[result.states[s]] = rounded(result.distribution[s]);
  }
  return out;
}

Json query_run_json(const QueryRun& run) {
  Json posteriors = Json::object();
  for (const auto& r : run.posteriors) posteriors[r.target] = distribution_json(r);
  Json out = Json::object();
  out["posteriors"] = std::move(posteriors);
  out["evidence_probability"] = rounded(run.evidence_probability);
  return out;
}

Json path_json(const PathReport& path) {
  Json out = Json::object();
  out["path"] = path.describe();
  out["nodes"] = path.nodes;
  Json roles = Json::array();
  for (std::size_t i = 0; i < path.node_roles.size(); ++i) {
    roles.push_back(Json{{"node", path.nodes[i + 1]}, {"role", to_string(path.node_roles[i])}});
  }
  out["roles"] = std::move(roles);
  out["open"] = path.open;
  return out;
}

Json audit_json(const BiasAuditReport& report) {
  const AuditRequest& req = report.request;
  Json out = Json::object();
  out["exposure"] = req.exposure;
  out["outcome"] = req.outcome;
  out["outcome_state"] = req.outcome_state;
  out["exposure_states"] = Json::array({req.exposed_state, req.unexposed_state});
  out["selection"] = evidence_json(req.selection);
  out["selected"] = contrast_json(report.selected);
  out["population"] = contrast_json(report.population);
  out["interventional"] = contrast_json(report.interventional);
  Json unconditioned = Json::array();
  for (const auto& p : report.paths_unconditioned) unconditioned.push_back(path_json(p));
  Json selected = Json::array();
  for (const auto& p : report.paths_selected) selected.push_back(path_json(p));
  out["paths"] = Json{{"unconditioned", std::move(unconditioned)},
                      {"selected", std::move(selected)}};
  out["reversal"] = report.reversal;
  return out;
}

Json error_json(const Error& error) {
  Json out = Json::object();
  out["code"] = to_string(error.code());
  out["message"] = error.what();
  if (error.location()) {
    out["location"] = Json{{"line", error.location()->line}, {"column", error.location()->column}};
  }
  if (!error.token().empty()) out["token"] = error.token();
  return out;
}

Json model_summary_json(std::string_view id, const Network& network) {
  const NetworkDefinition& def = network.definition();
  Json variables = Json::array();
  for (const auto& v : def.variables) {
    variables.push_back(Json{{"id", v.id}, {"label", v.label}, {"states", v.states}});
  }
  Json edges = Json::array();
  for (const auto& [parent, child] : def.edges) edges.push_back(Json::array({parent, child}));
  Json out = Json::object();
  out["id"] = id;
  out["name"] = def.name;
  out["variables"] = std::move(variables);
  out["edges"] = std::move(edges);
  return out;
}

std::string format_percent(double p) {
  const long long tenths = half_up(p, 1000.0);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%lld%%", tenths / 10, tenths % 10);
  return buf;
}

std::size_t bar_length(double p, std::size_t width) {
  const long long n = half_up(p, static_cast<double>(width));
  return static_cast<std::size_t>(std::clamp<long long>(n, 0, static_cast<long long>(width)));
}

RenderedMonitor render_monitor(const Network& network, const QueryResult& result) {
  RenderedMonitor monitor;
  monitor.variable = result.target;
  monitor.label = network.variable(network.index_of(result.target)).label;
  for (std::size_t s = 0; s < result.states.size(); ++s) {
    const double p = result.distribution[s];
    monitor.rows.push_back({result.states[s], p, std::string(bar_length(p), '#')});
  }
  return monitor;
}

std::string format_monitor(const RenderedMonitor& monitor, bool color) {
  std::size_t name_width = 0;
  for (const auto& row : monitor.rows) name_width = std::max(name_width, row.state.size());
  std::string out = monitor.variable;
  if (monitor.label != monitor.variable) out += " (" + monitor.label + ")";
  out += '\n';
  for (const auto& row : monitor.rows) {
    std::string percent = format_percent(row.probability);
    out += "  " + row.state + std::string(name_width - row.state.size(), ' ') + "  " +
           std::string(6 - std::min<std::size_t>(6, percent.size()), ' ') + percent + " |";
    if (color) out += "\x1b[36m";
    out += row.bar;
    if (color) out += "\x1b[0m";
    out += std::string(kMonitorWidth - row.bar.size(), ' ') + "|\n";
  }
  return out;
}

}  // namespace colliderbn
