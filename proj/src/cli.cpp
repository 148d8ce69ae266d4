#include "colliderbn/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "colliderbn/analysis.hpp"
#include "colliderbn/causal.hpp"
#include "colliderbn/fixtures.hpp"
#include "colliderbn/model_io.hpp"
#include "colliderbn/records.hpp"
#include "colliderbn/report.hpp"
#include "colliderbn/server.hpp"

namespace colliderbn {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Error raised while reading a named input; the name prefixes the location.
struct SourcedError {
  std::string source;
  Error error;
};

std::pair<std::string, std::string> split_assignment(const std::string& token,
                                                     std::string_view flag) {
  const auto eq = token.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == token.size()) {
    throw UsageError(std::string(flag) + " expects VAR=STATE, got '" + token + "'");
  }
  return {token.substr(0, eq), token.substr(eq + 1)};
}

Evidence parse_evidence(const std::vector<std::string>& tokens, std::string_view flag) {
  Evidence out;
  for (const auto& token : tokens) {
    auto [variable, state] = split_assignment(token, flag);
    if (!out.emplace(variable, state).second) {
      throw UsageError(std::string(flag) + " sets '" + variable + "' twice");
    }
  }
  return out;
}

std::vector<Intervention> parse_interventions(const std::vector<std::string>& tokens) {
  std::vector<Intervention> out;
  for (const auto& [variable, state] : parse_evidence(tokens, "--do")) {
    out.push_back({variable, state});
  }
  return out;
}

std::string read_text(const std::string& path, std::istream& in) {
  std::ostringstream text;
  if (path == "-") {
    text << in.rdbuf();
    return text.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  text << file.rdbuf();
  return text.str();
}

template <typename Parse>
auto parse_file(const std::string& path, std::istream& in, Parse parse) {
  const std::string text = read_text(path, in);
  try {
    return parse(text);
  } catch (const Error& e) {
    throw SourcedError{path == "-" ? "<stdin>" : path, e};
  }
}

Network load_model(const std::string& path, std::istream& in) {
  return parse_file(path, in, [](const std::string& text) { return parse_model(text); });
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!(file << text)) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
}

std::string describe_condition(const Evidence& evidence,
                               const std::vector<Intervention>& interventions) {
  std::string out;
  auto append = [&](const std::string& part) { out += (out.empty() ? "" : ", ") + part; };
  for (const auto& i : interventions) append("do(" + i.variable + "=" + i.state + ")");
  for (const auto& [variable, state] : evidence) append(variable + "=" + state);
  return out;
}

std::string format_number(double p) { return format_probability(canonical_probability(p)); }

void print_table(std::ostream& out, const QueryResult& r) {
  std::size_t width = 0;
  for (const auto& s : r.states) width = std::max(width, s.size());
  out << r.target << "\n";
  for (std::size_t s = 0; s < r.states.size(); ++s) {
    const std::string percent = format_percent(r.distribution[s]);
    out << "  " << r.states[s] << std::string(width - r.states[s].size(), ' ') << "  "
        << std::string(6 - std::min<std::size_t>(6, percent.size()), ' ') << percent << "\n";
  }
}

void print_results(std::ostream& out, const Network& network, const QueryRun& run,
                   const std::string& format, bool color) {
  for (const auto& r : run.posteriors) {
    if (format == "bars") {
      out << format_monitor(render_monitor(network, r), color);
    } else {
      print_table(out, r);
    }
  }
}

void print_header(std::ostream& out, const Network& network, const Evidence& evidence,
                  const std::vector<Intervention>& interventions) {
  out << "model: " << network.name() << "\n";
  const std::string condition = describe_condition(evidence, interventions);
  if (!condition.empty()) out << "given: " << condition << "\n";
}

void print_evidence_probability(std::ostream& out, const QueryRun& run, const Evidence& evidence) {
  if (!evidence.empty()) out << "P(evidence) = " << format_number(run.evidence_probability) << "\n";
}

void dump(std::ostream& out, const Json& json) { out << json.dump(2) << "\n"; }

const std::vector<std::string> kQueryFormats = {"table", "bars", "json"};

struct Options {
  std::string model;
  std::string format = "table";
  std::string audit_format = "text";
  std::vector<std::string> evidence;
  std::vector<std::string> interventions;
  std::string target;
  std::string state;
  std::string exposure;
  std::string outcome;
  std::string outcome_state;
  std::string exposure_states;
  std::vector<std::string> selection;
  std::string data;
  std::string skeleton;
  double smoothing = 0.0;
  std::string output;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string models_dir = "models";
};

int cmd_validate(const Options& o, std::istream& in, std::ostream& out) {
  const Network network = load_model(o.model, in);
  out << "ok: " << network.name() << " (" << network.size() << " variables, "
      << network.definition().edges.size() << " edges)\n";
  return 0;
}

int cmd_marginals(const Options& o, std::istream& in, std::ostream& out, bool color) {
  const Network network = load_model(o.model, in);
  QueryRequest request{parse_evidence(o.evidence, "--evidence"), {}, {}};
  const QueryRun run = run_queries(network, request);
  if (o.format == "json") {
    Json j = Json::object();
    j["model"] = network.name();
    j["evidence"] = evidence_json(request.evidence);
    const Json body = query_run_json(run);
    for (const auto& [key, value] : body.items()) j[key] = value;
    dump(out, j);
    return 0;
  }
  print_header(out, network, request.evidence, {});
  print_results(out, network, run, o.format, color);
  print_evidence_probability(out, run, request.evidence);
  return 0;
}

int cmd_query(const Options& o, std::istream& in, std::ostream& out, bool color) {
  const Network network = load_model(o.model, in);
  QueryRequest request{parse_evidence(o.evidence, "--evidence"), parse_interventions(o.interventions),
                       {o.target}};
  const QueryRun run = run_queries(network, request);
  const QueryResult& r = run.posteriors.front();
  std::optional<double> selected;
  if (!o.state.empty()) selected = r.probability(o.state);

  if (o.format == "json") {
    Json j = Json::object();
    j["model"] = network.name();
    j["evidence"] = evidence_json(request.evidence);
    j["do"] = interventions_json(request.interventions);
    j["target"] = r.target;
    j["distribution"] = distribution_json(r);
    if (selected) {
      j["state"] = o.state;
      j["probability"] = canonical_probability(*selected);
    }
    j["evidence_probability"] = canonical_probability(run.evidence_probability);
    dump(out, j);
    return 0;
  }
  print_header(out, network, request.evidence, request.interventions);
  print_results(out, network, run, o.format, color);
  if (selected) {
    out << "P(" << r.target << "=" << o.state << ") = " << format_percent(*selected) << "\n";
  }
  print_evidence_probability(out, run, request.evidence);
  return 0;
}

void print_paths(std::ostream& out, const std::vector<PathReport>& paths) {
  if (paths.empty()) out << "  (none)\n";
  for (const auto& p : paths) {
    out << "  " << p.describe();
    for (std::size_t i = 0; i < p.node_roles.size(); ++i) {
      out << (i == 0 ? "  [" : ", ") << p.nodes[i + 1] << " " << to_string(p.node_roles[i]);
    }
    if (!p.node_roles.empty()) out << "]";
    out << "  " << (p.open ? "open" : "blocked") << "\n";
  }
}

int cmd_audit(const Options& o, std::istream& in, std::ostream& out) {
  const Network network = load_model(o.model, in);
  AuditRequest request;
  request.exposure = o.exposure;
  request.outcome = o.outcome;
  request.outcome_state = o.outcome_state;
  if (!o.exposure_states.empty()) {
    const auto comma = o.exposure_states.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == o.exposure_states.size() ||
        o.exposure_states.find(',', comma + 1) != std::string::npos) {
      throw UsageError("--exposure-states expects S1,S0, got '" + o.exposure_states + "'");
    }
    request.exposed_state = o.exposure_states.substr(0, comma);
    request.unexposed_state = o.exposure_states.substr(comma + 1);
  }
  request.selection = parse_evidence(o.selection, "--selection");
  const BiasAuditReport report = audit_bias(network, with_boolean_defaults(network, request));

  if (o.audit_format == "json") {
    Json j = Json::object();
    j["model"] = network.name();
    const Json body = audit_json(report);
    for (const auto& [key, value] : body.items()) j[key] = value;
    dump(out, j);
    return 0;
  }
  const AuditRequest& r = report.request;
  const std::string selection = describe_condition(r.selection, {});
  out << "model: " << network.name() << "\n"
      << "exposure: " << r.exposure << " (" << r.exposed_state << " vs " << r.unexposed_state
      << ")\n"
      << "outcome: " << r.outcome << "=" << r.outcome_state << "\n"
      << "selection: " << (selection.empty() ? "(none)" : selection) << "\n\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-16s %10s %10s %11s\n", "", "exposed", "unexposed",
                "difference");
  out << line;
  auto row = [&](const char* name, const Contrast& c) {
    std::snprintf(line, sizeof line, "%-16s %10.6f %10.6f %+11.6f\n", name, c.exposed,
                  c.unexposed, c.difference());
    out << line;
  };
  row("selected", report.selected);
  row("population", report.population);
  row("interventional", report.interventional);
  out << "\npaths, no conditioning:\n";
  print_paths(out, report.paths_unconditioned);
  out << "paths, given selection:\n";
  print_paths(out, report.paths_selected);
  out << "\nreversal=" << (report.reversal ? "YES" : "NO") << "\n";
  return 0;
}

int cmd_scenario(const Options& o, std::istream& in, std::ostream& out, bool color) {
  const Scenario scenario =
      parse_file(o.model, in, [](const std::string& text) { return parse_scenario(text); });
  // Model paths are relative to the scenario file; a bare fixture name also works.
  std::filesystem::path model_path = scenario.model;
  if (model_path.is_relative() && o.model != "-") {
    model_path = std::filesystem::path(o.model).parent_path() / model_path;
  }
  std::optional<Network> loaded;
  if (std::filesystem::exists(model_path)) {
    loaded = load_model(model_path.string(), in);
  } else {
    const auto names = fixture_names();
    if (std::find(names.begin(), names.end(), scenario.model) == names.end()) {
      throw Error(ErrorCode::Io, "cannot read model '" + model_path.string() + "'");
    }
    loaded = build_fixture(scenario.model);
  }
  const Network& network = *loaded;
  const QueryRun run = run_scenario(network, scenario);

  if (o.format == "json") {
    Json j = Json::object();
    j["label"] = scenario.label;
    j["model"] = network.name();
    j["evidence"] = evidence_json(scenario.evidence);
    j["do"] = interventions_json(scenario.interventions);
    Json results = Json::array();
    for (std::size_t i = 0; i < run.posteriors.size(); ++i) {
      const QueryResult& r = run.posteriors[i];
      Json item = Json::object();
      item["target"] = r.target;
      item["distribution"] = distribution_json(r);
      if (i < scenario.queries.size() && scenario.queries[i].state) {
        item["state"] = *scenario.queries[i].state;
        item["probability"] = canonical_probability(r.probability(*scenario.queries[i].state));
      }
      results.push_back(std::move(item));
    }
    j["results"] = std::move(results);
    j["evidence_probability"] = canonical_probability(run.evidence_probability);
    dump(out, j);
    return 0;
  }
  if (!scenario.label.empty()) out << "scenario: " << scenario.label << "\n";
  print_header(out, network, scenario.evidence, scenario.interventions);
  print_results(out, network, run, o.format, color);
  print_evidence_probability(out, run, scenario.evidence);
  return 0;
}

int cmd_fit(const Options& o, std::istream& in, std::ostream& out) {
  const NetworkSkeleton skeleton =
      parse_file(o.skeleton, in, [](const std::string& text) { return parse_skeleton(text); });
  const RecordTable records =
      parse_file(o.data, in, [](const std::string& text) { return parse_records(text); });
  Network network = [&] {
    try {
      return fit_network(skeleton, records, o.smoothing);
    } catch (const Error& e) {
      // Cell errors carry CSV positions.
      if (e.location()) throw SourcedError{o.data, e};
      throw;
    }
  }();
  write_text(o.output, serialize_model(network), out);
  if (o.output != "-") {
    std::uint64_t total = 0;
    for (auto c : records.counts) total += c;
    out << "fitted " << network.name() << ": " << network.size() << " tables from " << total
        << " records -> " << o.output << "\n";
  }
  return 0;
}

void print_error(std::ostream& err, const std::string& source, const Error& e) {
  err << "error: " << to_string(e.code()) << ": ";
  if (e.location()) {
    if (!source.empty()) err << source << ":";
    err << e.location()->line << ":" << e.location()->column << ": ";
  } else if (!source.empty()) {
    err << source << ": ";
  }
  std::string message = e.what();
  std::replace(message.begin(), message.end(), '\n', ' ');
  err << message << "\n";
}

}  // namespace

bool color_enabled(const char* no_color, bool stdout_is_tty) {
  return no_color == nullptr && stdout_is_tty;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err, const CliEnvironment& env) {
  CLI::App app{"Exact inference, interventions and selection-bias audits for discrete Bayesian "
               "networks",
               "colliderbn"};
  app.require_subcommand(1);
  Options o;

  auto evidence_flag = [&](CLI::App* cmd, const std::string& name, std::vector<std::string>& into,
                           const std::string& help) {
    cmd->add_option(name, into, help)->type_name("VAR=STATE")->allow_extra_args(false);
  };
  auto format_flag = [&](CLI::App* cmd, const std::vector<std::string>& choices) {
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember(choices));
  };

  auto* validate = app.add_subcommand("validate", "check a model file");
  validate->add_option("model", o.model, "model file, - for stdin")->required();

  auto* marginals = app.add_subcommand("marginals", "posterior of every unobserved variable");
  marginals->add_option("model", o.model, "model file, - for stdin")->required();
  evidence_flag(marginals, "--evidence", o.evidence, "observed state, repeatable");
  format_flag(marginals, kQueryFormats);

  auto* query = app.add_subcommand("query", "posterior of one variable");
  query->add_option("model", o.model, "model file, - for stdin")->required();
  query->add_option("--target", o.target, "queried variable")->required();
  query->add_option("--state", o.state, "report this state's probability");
  evidence_flag(query, "--evidence", o.evidence, "observed state, repeatable");
  evidence_flag(query, "--do", o.interventions, "intervention, repeatable");
  format_flag(query, kQueryFormats);

  auto* audit = app.add_subcommand("audit", "selection-bias audit of an exposure/outcome pair");
  audit->add_option("model", o.model, "model file, - for stdin")->required();
  audit->add_option("--exposure", o.exposure, "exposure variable")->required();
  audit->add_option("--outcome", o.outcome, "outcome variable")->required();
  audit->add_option("--outcome-state", o.outcome_state, "outcome state (default true)");
  audit->add_option("--exposure-states", o.exposure_states,
                    "exposed,unexposed states (default true,false)")
      ->type_name("S1,S0");
  evidence_flag(audit, "--selection", o.selection, "selection condition, repeatable");
  audit->add_option("--format", o.audit_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  auto* scenario = app.add_subcommand("scenario", "run a scenario file");
  scenario->add_option("scenario", o.model, "scenario file, - for stdin")->required();
  format_flag(scenario, kQueryFormats);

  auto* fit = app.add_subcommand("fit", "estimate tables from CSV records");
  fit->add_option("--data", o.data, "CSV records")->required();
  fit->add_option("--skeleton", o.skeleton, "model file whose rows are ignored")->required();
  fit->add_option("--smoothing", o.smoothing, "Laplace pseudo-count per state")
      ->check(CLI::NonNegativeNumber);
  fit->add_option("-o,--output", o.output, "output model file, - for stdout")->required();

  auto* serve_cmd = app.add_subcommand("serve", "start the HTTP API");
  serve_cmd->add_option("--port", o.port, "TCP port, 0 for any free port")
      ->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", o.host, "listen address");
  serve_cmd->add_option("--models-dir", o.models_dir, "directory of bundled models");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, in, out);
    if (marginals->parsed()) return cmd_marginals(o, in, out, env.color);
    if (query->parsed()) return cmd_query(o, in, out, env.color);
    if (audit->parsed()) return cmd_audit(o, in, out);
    if (scenario->parsed()) return cmd_scenario(o, in, out, env.color);
    if (fit->parsed()) return cmd_fit(o, in, out);
    if (serve_cmd->parsed()) {
      return serve({o.host, o.port, o.models_dir}, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const SourcedError& e) {
    print_error(err, e.source, e.error);
    return 1;
  } catch (const Error& e) {
    print_error(err, "", e);
    return 1;
  }
  return 2;
}

}  // namespace colliderbn
