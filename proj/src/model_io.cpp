#include "colliderbn/model_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>

#include "colliderbn/json_source.hpp"

namespace colliderbn {

namespace {

using ordered_json = nlohmann::ordered_json;

// Model-format accessors on top of the generic typed reader.
class Reader : public JsonReader {
 public:
  using JsonReader::JsonReader;

  void version(const ordered_json& root) const {
    const auto& v = member(root, "", "format_version");
    if (!v.is_number_integer()) {
      source().fail(ErrorCode::Syntax, "/format_version", "format_version must be an integer");
    }
    if (v.get<std::int64_t>() != kFormatVersion) {
      source().fail(ErrorCode::UnsupportedVersion, "/format_version",
                "unsupported format_version " + v.dump() + " (expected " +
                    std::to_string(kFormatVersion) + ")");
    }
  }

  std::vector<std::pair<std::string, std::string>> metadata(const ordered_json& root) const {
    const auto* meta = optional_member(root, "metadata");
    if (!meta) return {};
    return string_map(*meta, "/metadata");
  }

  std::vector<DiscreteVariable> variables(const ordered_json& root) const {
    const auto& vars = array(member(root, "", "variables"), "/variables");
    std::vector<DiscreteVariable> out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const std::string ptr = pointer_append("/variables", i);
      const auto& v = object(vars[i], ptr, {"id", "label", "states"});
      DiscreteVariable var;
      var.id = string(member(v, ptr, "id"), ptr + "/id");
      const auto* label = optional_member(v, "label");
      var.label = label ? string(*label, ptr + "/label") : var.id;
      var.states = strings(member(v, ptr, "states"), ptr + "/states");
      out.push_back(std::move(var));
    }
    return out;
  }

  std::vector<Edge> edges(const ordered_json& root) const {
    std::vector<Edge> out;
    const auto* edges = optional_member(root, "edges");
    if (!edges) return out;
    array(*edges, "/edges");
    for (std::size_t i = 0; i < edges->size(); ++i) {
      const std::string ptr = pointer_append("/edges", i);
      auto pair = strings((*edges)[i], ptr);
      if (pair.size() != 2) source().fail(ErrorCode::Syntax, ptr, "an edge is [parent, child]");
      out.emplace_back(std::move(pair[0]), std::move(pair[1]));
    }
    return out;
  }
};

// Maps a validation violation to the JSON pointer of the offending element.
std::string violation_pointer(const Violation& v) {
  if (v.cpt_index) {
    std::string ptr = pointer_append("/cpts", *v.cpt_index);
    if (v.code == ErrorCode::CptParentMismatch) return ptr + "/parents";
    if (v.code == ErrorCode::UnknownVariable) return ptr;
    if (v.row_index) {
      // A missing row points at the rows array itself.
      return ptr + "/rows/" + std::to_string(*v.row_index);
    }
    return ptr + "/rows";
  }
  if (v.edge_index) return pointer_append("/edges", *v.edge_index);
  if (v.variable_index) return pointer_append("/variables", *v.variable_index);
  return "";
}

}  // namespace

Network parse_model(std::string_view text) {
  const JsonSource src = JsonSource::parse(text);
  const Reader in(src);
  const auto& root = in.object(src.root(), "",
                               {"format_version", "name", "variables", "edges", "cpts", "metadata"});
  in.version(root);

  NetworkDefinition def;
  def.name = in.string(in.member(root, "", "name"), "/name");
  def.variables = in.variables(root);
  def.edges = in.edges(root);
  def.metadata = in.metadata(root);

  const auto& cpts = in.array(in.member(root, "", "cpts"), "/cpts");
  for (std::size_t k = 0; k < cpts.size(); ++k) {
    const std::string ptr = pointer_append("/cpts", k);
    const auto& c = in.object(cpts[k], ptr, {"child", "parents", "rows"});
    Cpt cpt;
    cpt.child = in.string(in.member(c, ptr, "child"), ptr + "/child");
    if (const auto* parents = in.optional_member(c, "parents")) {
      cpt.parents = in.strings(*parents, ptr + "/parents");
    }
    const auto& rows = in.array(in.member(c, ptr, "rows"), ptr + "/rows");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string row_ptr = pointer_append(ptr + "/rows", r);
      const auto& row = in.array(rows[r], row_ptr);
      std::vector<double> values;
      for (std::size_t j = 0; j < row.size(); ++j) {
        values.push_back(in.number(row[j], pointer_append(row_ptr, j)));
      }
      cpt.rows.push_back(std::move(values));
    }
    def.cpts.push_back(std::move(cpt));
  }

  ValidationReport report = validate_network(def);
  if (!report.ok()) {
    const Violation& first = report.violations.front();
    std::string message = first.message;
    if (report.violations.size() > 1) {
      message += " (and " + std::to_string(report.violations.size() - 1) + " more)";
    }
    src.fail(first.code, violation_pointer(first), message);
  }
  return Network::create(std::move(def));
}

std::string format_probability(double p) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), p,
                                 std::chars_format::general, 12);
  std::string out(buf.data(), end);
  // to_chars general keeps trailing zeros out already; normalise "-0".
  if (out == "-0") out = "0";
  return out;
}

double canonical_probability(double p) {
  const std::string s = format_probability(p);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

namespace {

std::string quoted(const std::string& s) { return ordered_json(s).dump(); }

std::string string_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += quoted(items[i]);
  }
  return out + "]";
}

}  // namespace

std::string serialize_model(const Network& network) {
  const NetworkDefinition& def = network.definition();
  std::string out;
  out += "{\n";
  out += "  \"format_version\": " + std::to_string(kFormatVersion) + ",\n";
  out += "  \"name\": " + quoted(def.name) + ",\n";

  out += "  \"variables\": [";
  for (std::size_t i = 0; i < def.variables.size(); ++i) {
    const auto& v = def.variables[i];
    out += i == 0 ? "\n" : ",\n";
    out += "    {\"id\": " + quoted(v.id) + ", \"label\": " + quoted(v.label) +
           ", \"states\": " + string_list(v.states) + "}";
  }
  out += def.variables.empty() ? "],\n" : "\n  ],\n";

  out += "  \"edges\": [";
  for (std::size_t i = 0; i < def.edges.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += "    [" + quoted(def.edges[i].first) + ", " + quoted(def.edges[i].second) + "]";
  }
  out += def.edges.empty() ? "],\n" : "\n  ],\n";

  out += "  \"cpts\": [";
  for (std::size_t k = 0; k < def.cpts.size(); ++k) {
    const auto& cpt = def.cpts[k];
    out += k == 0 ? "\n" : ",\n";
    out += "    {\n";
    out += "      \"child\": " + quoted(cpt.child) + ",\n";
    out += "      \"parents\": " + string_list(cpt.parents) + ",\n";
    out += "      \"rows\": [";
    for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
      out += r == 0 ? "\n" : ",\n";
      out += "        [";
      for (std::size_t j = 0; j < cpt.rows[r].size(); ++j) {
        if (j > 0) out += ", ";
        out += format_probability(cpt.rows[r][j]);
      }
      out += "]";
    }
    out += "\n      ]\n    }";
  }
  out += def.cpts.empty() ? "]" : "\n  ]";

  if (!def.metadata.empty()) {
    out += ",\n  \"metadata\": {";
    for (std::size_t i = 0; i < def.metadata.size(); ++i) {
      out += i == 0 ? "\n" : ",\n";
      out += "    " + quoted(def.metadata[i].first) + ": " + quoted(def.metadata[i].second);
    }
    out += "\n  }";
  }
  out += "\n}\n";
  return out;
}

NetworkSkeleton parse_skeleton(std::string_view text) {
  const JsonSource src = JsonSource::parse(text);
  const Reader in(src);
  const auto& root = in.object(src.root(), "",
                               {"format_version", "name", "variables", "edges", "cpts", "metadata"});
  in.version(root);

  NetworkSkeleton skeleton;
  skeleton.name = in.string(in.member(root, "", "name"), "/name");
  skeleton.variables = in.variables(root);
  skeleton.metadata = in.metadata(root);
  const auto edges = in.edges(root);

  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < skeleton.variables.size(); ++i) {
    if (!index.emplace(skeleton.variables[i].id, i).second) {
      src.fail(ErrorCode::DuplicateVariable, pointer_append("/variables", i),
               "variable '" + skeleton.variables[i].id + "' is declared twice");
    }
  }
  skeleton.parents.resize(skeleton.variables.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto p = index.find(edges[e].first);
    auto c = index.find(edges[e].second);
    if (p == index.end() || c == index.end()) {
      src.fail(ErrorCode::OrphanEdge, pointer_append("/edges", e),
               "edge references an undeclared variable");
    }
    skeleton.parents[c->second].push_back(edges[e].first);
  }

  // Optional tables fix the parent order; their rows are ignored.
  if (const auto* cpts = in.optional_member(root, "cpts")) {
    in.array(*cpts, "/cpts");
    for (std::size_t k = 0; k < cpts->size(); ++k) {
      const std::string ptr = pointer_append("/cpts", k);
      const auto& c = in.object((*cpts)[k], ptr, {"child", "parents", "rows"});
      const std::string child = in.string(in.member(c, ptr, "child"), ptr + "/child");
      auto it = index.find(child);
      if (it == index.end()) {
        src.fail(ErrorCode::UnknownVariable, ptr + "/child", "unknown variable '" + child + "'");
      }
      std::vector<std::string> parents;
      if (const auto* ps = in.optional_member(c, "parents")) parents = in.strings(*ps, ptr + "/parents");
      auto sorted_listed = parents;
      auto sorted_graph = skeleton.parents[it->second];
      std::sort(sorted_listed.begin(), sorted_listed.end());
      std::sort(sorted_graph.begin(), sorted_graph.end());
      if (sorted_listed != sorted_graph) {
        src.fail(ErrorCode::CptParentMismatch, ptr + "/parents",
                 "parents of '" + child + "' do not match the edges");
      }
      skeleton.parents[it->second] = std::move(parents);
    }
  }
  return skeleton;
}

Scenario parse_scenario(std::string_view text) {
  const JsonSource src = JsonSource::parse(text);
  const Reader in(src);
  const auto& root = in.object(src.root(), "",
                               {"format_version", "model", "label", "evidence", "do", "queries"});
  in.version(root);

  Scenario scenario;
  scenario.model = in.string(in.member(root, "", "model"), "/model");
  if (const auto* label = in.optional_member(root, "label")) {
    scenario.label = in.string(*label, "/label");
  }
  auto assignments = [&](std::string_view key) -> std::vector<std::pair<std::string, std::string>> {
    const auto* obj = in.optional_member(root, key);
    if (!obj) return {};
    return in.string_map(*obj, "/" + std::string(key));
  };
  for (auto& [var, state] : assignments("evidence")) scenario.evidence.emplace(var, state);
  for (auto& [var, state] : assignments("do")) {
    if (scenario.evidence.contains(var)) {
      src.fail(ErrorCode::DuplicateAssignment, pointer_append("/do", var),
               "variable '" + var + "' is both observed and intervened on");
    }
    scenario.interventions.push_back(Intervention{var, state});
  }
  if (const auto* queries = in.optional_member(root, "queries")) {
    in.array(*queries, "/queries");
    for (std::size_t i = 0; i < queries->size(); ++i) {
      const std::string ptr = pointer_append("/queries", i);
      const auto& q = in.object((*queries)[i], ptr, {"target", "state"});
      ScenarioQuery query;
      query.target = in.string(in.member(q, ptr, "target"), ptr + "/target");
      if (const auto* state = in.optional_member(q, "state")) {
        query.state = in.string(*state, ptr + "/state");
      }
      scenario.queries.push_back(std::move(query));
    }
  }
  return scenario;
}

}  // namespace colliderbn
