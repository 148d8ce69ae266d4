#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "colliderbn/analysis.hpp"
#include "colliderbn/causal.hpp"
#include "colliderbn/error.hpp"
#include "colliderbn/inference.hpp"
#include "colliderbn/network.hpp"

namespace colliderbn {

// JSON shapes shared by the CLI and the HTTP API. Every probability is rounded
// to 12 significant digits so output is stable across platforms and builds.

using Json = nlohmann::ordered_json;

Json evidence_json(const Evidence& evidence);
Json interventions_json(std::span<const Intervention> interventions);
/// {"true": 0.18..., "false": 0.81...} in state order.
Json distribution_json(const QueryResult& result);
/// {"posteriors": {target: {state: p}}, "evidence_probability": p}
Json query_run_json(const QueryRun& run);
Json path_json(const PathReport& path);
Json audit_json(const BiasAuditReport& report);
/// {"code", "message", "location"?: {"line", "column"}, "token"?}
Json error_json(const Error& error);
/// {"id", "name", "variables": [{id, label, states}], "edges": [[parent, child]]}
Json model_summary_json(std::string_view id, const Network& network);

/// One decimal place, half-up: 0.18182 -> "18.2%".
std::string format_percent(double p);

struct MonitorRow {
  std::string state;
  double probability = 0.0;
  std::string bar;
};

/// Text rendition of a node monitor: one row per state with a bar whose
/// length is the probability on a 20-character scale, rounded half-up.
struct RenderedMonitor {
  std::string variable;
  std::string label;
  std::vector<MonitorRow> rows;
};

inline constexpr std::size_t kMonitorWidth = 20;

std::size_t bar_length(double p, std::size_t width = kMonitorWidth);
RenderedMonitor render_monitor(const Network& network, const QueryResult& result);
/// Multi-line block. `color` wraps bars in ANSI escapes.
std::string format_monitor(const RenderedMonitor& monitor, bool color);

}  // namespace colliderbn
