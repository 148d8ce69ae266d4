#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "colliderbn/fixtures.hpp"
#include "colliderbn/model_io.hpp"
#include "support/generators.hpp"

using namespace colliderbn;

namespace {

Error error_of(std::string_view text) {
  try {
    parse_model(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a parse error");
  return Error(ErrorCode::Io, "unreachable");
}

Error scenario_error_of(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a parse error");
  return Error(ErrorCode::Io, "unreachable");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The simple model with a seven-row table for tested, rows on their own lines.
const char* kSevenRows = R"({
  "format_version": 1,
  "name": "broken",
  "variables": [
    {"id": "smoker", "label": "Smoker", "states": ["true", "false"]},
    {"id": "covid19", "label": "COVID-19", "states": ["true", "false"]},
    {"id": "tested", "label": "Tested", "states": ["true", "false"]}
  ],
  "edges": [["smoker", "tested"], ["covid19", "tested"]],
  "cpts": [
    {"child": "smoker", "parents": [], "rows": [[0.27, 0.73]]},
    {"child": "covid19", "parents": [], "rows": [[0.1, 0.9]]},
    {"child": "tested", "parents": ["smoker", "covid19"], "rows": [
      [0.1, 0.9], [0.05, 0.95], [0.25, 0.75], [0.1, 0.9],
      [0.1, 0.9], [0.1, 0.9], [0.1, 0.9]
    ]}
  ]
})";

}  // namespace

TEST_CASE("parse the shipped simple model") {
  const Network net = parse_model(read_file(COLLIDERBN_SOURCE_DIR "/models/simple-smoking.json"));
  CHECK(net.name() == "simple-smoking");
  CHECK(net.size() == 3);
  CHECK(net.cpt(2).rows[1] == std::vector<double>{0.05, 0.95});
}

TEST_CASE("round trip on every fixture") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const Network net = build_fixture(name);
    const std::string text = serialize_model(net);
    const Network back = parse_model(text);
    CHECK(back == net);
    CHECK(back.definition().metadata == net.definition().metadata);
    CHECK(serialize_model(back) == text);
  }
}

TEST_CASE("property: random networks round trip byte-stably") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = testing::random_network(rng);
    const std::string text = serialize_model(net);
    const Network back = parse_model(text);
    CAPTURE(trial);
    REQUIRE(back == net);
    CHECK(serialize_model(back) == text);
  }
}

TEST_CASE("probability formatting") {
  CHECK(format_probability(0.1) == "0.1");
  CHECK(format_probability(0.1 + 0.2) == "0.3");
  CHECK(format_probability(1.0) == "1");
  CHECK(format_probability(0.0) == "0");
  CHECK(format_probability(2.0 / 11.0) == "0.181818181818");
  CHECK(format_probability(0.0102) == "0.0102");
  CHECK(canonical_probability(0.1 + 0.2) == 0.3);
  CHECK(canonical_probability(2.0 / 11.0) == 0.181818181818);
}

TEST_CASE("seven-row table for a two-parent Boolean child") {
  const Error e = error_of(kSevenRows);
  CHECK(e.code() == ErrorCode::BadRowLength);
  REQUIRE(e.location().has_value());
  // The first surplus row.
  CHECK(e.location()->line == 15);
  CHECK(e.location()->column == 7);
}

TEST_CASE("empty input is a syntax error on line 1") {
  const Error e = error_of("");
  CHECK(e.code() == ErrorCode::Syntax);
  REQUIRE(e.location().has_value());
  CHECK(e.location()->line == 1);
}

TEST_CASE("malformed JSON points at the bad byte") {
  const Error e = error_of("{\n  \"name\": ,\n}");
  CHECK(e.code() == ErrorCode::Syntax);
  REQUIRE(e.location().has_value());
  CHECK(e.location()->line == 2);
  CHECK(e.location()->column == 11);
}

TEST_CASE("duplicate and unknown keys are rejected") {
  const std::string good = serialize_model(build_fixture("simple-smoking"));
  std::string dup = good;
  dup.insert(dup.find("\"name\""), "\"name\": \"x\",\n  ");
  CHECK(error_of(dup).code() == ErrorCode::Syntax);

  std::string extra = good;
  extra.insert(extra.find("\"name\""), "\"colour\": \"red\",\n  ");
  const Error e = error_of(extra);
  CHECK(e.code() == ErrorCode::Syntax);
  REQUIRE(e.location().has_value());
  CHECK(e.location()->line == 3);
}

TEST_CASE("format version") {
  std::string text = serialize_model(build_fixture("simple-smoking"));
  text.replace(text.find("\"format_version\": 1"), 19, "\"format_version\": 2");
  CHECK(error_of(text).code() == ErrorCode::UnsupportedVersion);
  text.replace(text.find("\"format_version\": 2"), 19, "\"format_version\": \"1\"");
  CHECK(error_of(text).code() == ErrorCode::Syntax);
}

TEST_CASE("validation errors carry the element location") {
  std::string text = serialize_model(build_fixture("simple-smoking"));
  text.replace(text.find("[0.27, 0.73]"), 12, "[0.27, 0.63]");
  const Error e = error_of(text);
  CHECK(e.code() == ErrorCode::RowNotNormalized);
  REQUIRE(e.location().has_value());
  CHECK(e.location()->line == 18);

  text = serialize_model(build_fixture("simple-smoking"));
  text.replace(text.find("[\"covid19\", \"tested\"]"), 21, "[\"tested\", \"smoker\"]");
  CHECK(error_of(text).code() != ErrorCode::Syntax);
}

TEST_CASE("metadata is optional and preserved") {
  const Network stress = build_fixture("stress");
  const std::string text = serialize_model(stress);
  CHECK(text.find("\"metadata\"") != std::string::npos);
  CHECK(parse_model(text).definition().metadata == stress.definition().metadata);
  CHECK(serialize_model(build_fixture("simple-smoking")).find("metadata") == std::string::npos);
}

TEST_CASE("scenario parsing") {
  const Scenario s = parse_scenario(R"({
    "format_version": 1,
    "model": "realistic-smoking-rr102.json",
    "label": "tested smokers",
    "evidence": {"tested": "true"},
    "do": {"smoker": "true"},
    "queries": [{"target": "covid19", "state": "true"}, {"target": "healthcare"}]
  })");
  CHECK(s.model == "realistic-smoking-rr102.json");
  CHECK(s.label == "tested smokers");
  CHECK(s.evidence == Evidence{{"tested", "true"}});
  CHECK(s.interventions == std::vector<Intervention>{{"smoker", "true"}});
  REQUIRE(s.queries.size() == 2);
  CHECK(s.queries[0] == ScenarioQuery{"covid19", "true"});
  CHECK_FALSE(s.queries[1].state.has_value());
}

TEST_CASE("scenario with nothing but a model is valid") {
  const Scenario s = parse_scenario(R"({"format_version": 1, "model": "m.json"})");
  CHECK(s.evidence.empty());
  CHECK(s.interventions.empty());
  CHECK(s.queries.empty());
}

TEST_CASE("scenario observing and intervening on one variable") {
  const Error e = scenario_error_of(R"({
  "format_version": 1,
  "model": "m.json",
  "evidence": {"smoker": "true"},
  "do": {"smoker": "false"}
})");
  CHECK(e.code() == ErrorCode::DuplicateAssignment);
  REQUIRE(e.location().has_value());
  CHECK(e.location()->line == 5);
}

TEST_CASE("scenario structural errors") {
  CHECK(scenario_error_of(R"({"format_version": 1})").code() == ErrorCode::Syntax);
  CHECK(scenario_error_of(R"({"format_version": 1, "model": "m", "evidence": {"a": 1}})").code() ==
        ErrorCode::Syntax);
  CHECK(scenario_error_of(R"({"format_version": 1, "model": "m", "queries": [{}]})").code() ==
        ErrorCode::Syntax);
  CHECK(scenario_error_of(R"({"format_version": 3, "model": "m"})").code() ==
        ErrorCode::UnsupportedVersion);
}

TEST_CASE("skeleton parsing ignores rows and keeps the parent order") {
  std::string text = serialize_model(build_fixture("simple-smoking"));
  const NetworkSkeleton sk = parse_skeleton(text);
  CHECK(sk.name == "simple-smoking");
  REQUIRE(sk.variables.size() == 3);
  CHECK(sk.parents[2] == std::vector<std::string>{"smoker", "covid19"});

  const NetworkSkeleton bare = parse_skeleton(R"({
    "format_version": 1, "name": "bare",
    "variables": [{"id": "a", "label": "A", "states": ["x", "y"]},
                  {"id": "b", "label": "B", "states": ["x", "y"]}],
    "edges": [["a", "b"]]
  })");
  CHECK(bare.parents[0].empty());
  CHECK(bare.parents[1] == std::vector<std::string>{"a"});
}

TEST_CASE("skeleton errors") {
  auto code = [](std::string_view text) {
    try {
      parse_skeleton(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code(R"({"format_version": 1, "name": "s",
    "variables": [{"id": "a", "label": "A", "states": ["x", "y"]}],
    "edges": [["a", "ghost"]]})") == ErrorCode::OrphanEdge);
  CHECK(code(R"({"format_version": 1, "name": "s",
    "variables": [{"id": "a", "label": "A", "states": ["x", "y"]},
                  {"id": "a", "label": "A", "states": ["x", "y"]}],
    "edges": []})") == ErrorCode::DuplicateVariable);
}

TEST_CASE("property: mutated documents never crash and never yield invalid networks") {
  std::mt19937_64 rng(77);
  std::vector<std::string> seeds;
  for (const auto& name : fixture_names()) seeds.push_back(serialize_model(build_fixture(name)));
  const std::string alphabet = "{}[]\",:0123456789.-e truefalsn";
  int parsed = 0;
  int rejected = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::string text = seeds[trial % seeds.size()];
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < edits; ++k) {
      const std::size_t at = rng() % text.size();
      switch (rng() % 3) {
        case 0: text[at] = alphabet[rng() % alphabet.size()]; break;
        case 1: text.erase(at, 1 + rng() % 3); break;
        default: text.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
      }
      if (text.empty()) text = "{";
    }
    try {
      const Network net = parse_model(text);
      ++parsed;
      CHECK(validate_network(net.definition()).ok());
    } catch (const Error& e) {
      ++rejected;
      CHECK(e.location().has_value());
    }
  }
  CHECK(rejected > 0);
  MESSAGE("mutations parsed: " << parsed << ", rejected: " << rejected);
}
