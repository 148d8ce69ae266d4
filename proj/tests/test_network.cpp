#include <doctest.h>

#include <algorithm>
#include <random>

#include "colliderbn/fixtures.hpp"
#include "colliderbn/network.hpp"
#include "support/generators.hpp"

using namespace colliderbn;

namespace {

NetworkDefinition two_node(std::vector<Edge> edges) {
  NetworkDefinition def;
  def.name = "pair";
  def.variables = {{"a", "A", {"yes", "no"}}, {"b", "B", {"yes", "no"}}};
  def.edges = std::move(edges);
  def.cpts = {{"a", {}, {{0.5, 0.5}}}, {"b", {}, {{0.5, 0.5}}}};
  return def;
}

bool has_code(const ValidationReport& r, ErrorCode code) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

}  // namespace

TEST_CASE("validate: every bundled fixture is a valid network") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    CHECK(validate_network(build_fixture(name).definition()).ok());
  }
}

TEST_CASE("validate: two-node cycle") {
  NetworkDefinition def = two_node({{"a", "b"}, {"b", "a"}});
  def.cpts = {{"a", {"b"}, {{0.5, 0.5}, {0.5, 0.5}}}, {"b", {"a"}, {{0.5, 0.5}, {0.5, 0.5}}}};
  const auto report = validate_network(def);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().code == ErrorCode::Cycle);
  CHECK(report.violations.front().edge_index.has_value());
  CHECK_THROWS_AS(Network::create(def), ValidationError);
}

TEST_CASE("validate: self-loop is a cycle") {
  NetworkDefinition def = two_node({{"a", "a"}});
  const auto report = validate_network(def);
  CHECK(has_code(report, ErrorCode::Cycle));
  CHECK(report.violations.front().edge_index == 0u);
}

TEST_CASE("validate: row summing to 0.9") {
  NetworkDefinition def = two_node({});
  def.cpts[0].rows = {{0.5, 0.4}};
  const auto report = validate_network(def);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].code == ErrorCode::RowNotNormalized);
  CHECK(report.violations[0].cpt_index == 0u);
  CHECK(report.violations[0].row_index == 0u);
}

TEST_CASE("validate: row tolerance is 1e-9") {
  NetworkDefinition def = two_node({});
  def.cpts[0].rows = {{0.5, 0.5 + 5e-10}};
  CHECK(validate_network(def).ok());
  def.cpts[0].rows = {{0.5, 0.5 + 5e-9}};
  CHECK(has_code(validate_network(def), ErrorCode::RowNotNormalized));
}

TEST_CASE("validate: probabilities outside [0, 1]") {
  NetworkDefinition def = two_node({});
  def.cpts[0].rows = {{1.5, -0.5}};
  CHECK(has_code(validate_network(def), ErrorCode::BadProbability));
  def.cpts[0].rows = {{std::nan(""), 0.5}};
  CHECK(has_code(validate_network(def), ErrorCode::BadProbability));
}

TEST_CASE("validate: edge to an undeclared variable") {
  NetworkDefinition def = two_node({{"a", "ghost"}});
  const auto report = validate_network(def);
  CHECK(report.violations.front().code == ErrorCode::OrphanEdge);
  CHECK(report.violations.front().edge_index == 0u);
}

TEST_CASE("validate: table parents must equal graph parents") {
  NetworkDefinition def = two_node({{"a", "b"}});
  // b's table still has no parents.
  CHECK(has_code(validate_network(def), ErrorCode::CptParentMismatch));
  def.cpts[1] = {"b", {"a"}, {{0.5, 0.5}, {0.5, 0.5}}};
  CHECK(validate_network(def).ok());
  def.edges.clear();
  CHECK(has_code(validate_network(def), ErrorCode::CptParentMismatch));
}

TEST_CASE("validate: row count and width") {
  NetworkDefinition def = two_node({{"a", "b"}});
  def.cpts[1] = {"b", {"a"}, {{0.5, 0.5}}};
  auto report = validate_network(def);
  REQUIRE(has_code(report, ErrorCode::BadRowLength));
  CHECK(report.violations.front().row_index == 1u);
  def.cpts[1] = {"b", {"a"}, {{0.5, 0.5}, {0.2, 0.3, 0.5}}};
  report = validate_network(def);
  REQUIRE(has_code(report, ErrorCode::BadRowLength));
  CHECK(report.violations.front().row_index == 1u);
}

TEST_CASE("validate: variable shape rules") {
  NetworkDefinition def = two_node({});
  def.variables[0].states = {"only"};
  def.cpts[0].rows = {{1.0}};
  CHECK(has_code(validate_network(def), ErrorCode::BadVariable));

  def = two_node({});
  def.variables[0].states = {"x", "x"};
  CHECK(has_code(validate_network(def), ErrorCode::BadVariable));

  def = two_node({});
  def.variables[0].id = "has space";
  CHECK(has_code(validate_network(def), ErrorCode::BadVariable));

  def = two_node({});
  def.variables[1].id = "a";
  CHECK(has_code(validate_network(def), ErrorCode::DuplicateVariable));
}

TEST_CASE("validate: exactly one table per variable") {
  NetworkDefinition def = two_node({});
  def.cpts.pop_back();
  CHECK(has_code(validate_network(def), ErrorCode::MissingCpt));
  def = two_node({});
  def.cpts.push_back(def.cpts[0]);
  CHECK(has_code(validate_network(def), ErrorCode::DuplicateCpt));
  def = two_node({});
  def.cpts[1].child = "ghost";
  CHECK(has_code(validate_network(def), ErrorCode::UnknownVariable));
}

TEST_CASE("validate: empty network is valid") {
  NetworkDefinition def;
  def.name = "empty";
  CHECK(validate_network(def).ok());
  CHECK(Network::create(def).size() == 0);
}

TEST_CASE("topological order of the fixtures") {
  CHECK(topological_order(build_fixture("simple-smoking")) ==
        std::vector<std::string>{"smoker", "covid19", "tested"});
  const auto realistic = topological_order(build_fixture("realistic-smoking"));
  CHECK(realistic.front() == "healthcare");
  CHECK(realistic.back() == "tested");
}

TEST_CASE("topological order: singleton and declaration tie-break") {
  NetworkDefinition def;
  def.name = "one";
  def.variables = {{"x", "X", {"a", "b"}}};
  def.cpts = {{"x", {}, {{0.3, 0.7}}}};
  CHECK(topological_order(def) == std::vector<std::string>{"x"});

  // c is declared first but depends on a.
  def.variables = {{"c", "C", {"a", "b"}}, {"b", "B", {"a", "b"}}, {"a", "A", {"a", "b"}}};
  def.edges = {{"a", "c"}};
  def.cpts = {{"c", {"a"}, {{0.5, 0.5}, {0.5, 0.5}}},
              {"b", {}, {{0.5, 0.5}}},
              {"a", {}, {{0.5, 0.5}}}};
  CHECK(topological_order(def) == std::vector<std::string>{"b", "a", "c"});
}

TEST_CASE("topological order rejects cycles") {
  NetworkDefinition def = two_node({{"a", "b"}, {"b", "a"}});
  try {
    topological_order(def);
    FAIL("expected a cycle error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Cycle);
  }
}

TEST_CASE("property: parents precede children in topological order") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Network net = testing::random_network(rng);
    const auto order = topological_order(net);
    REQUIRE(order.size() == net.size());
    std::vector<std::size_t> position(net.size());
    for (std::size_t i = 0; i < order.size(); ++i) position[net.index_of(order[i])] = i;
    for (std::size_t v = 0; v < net.size(); ++v) {
      for (std::size_t p : net.parents(v)) CHECK(position[p] < position[v]);
    }
  }
}

TEST_CASE("network canonicalizes table order and edges") {
  NetworkDefinition def = two_node({{"a", "b"}});
  def.cpts = {{"b", {"a"}, {{0.1, 0.9}, {0.6, 0.4}}}, {"a", {}, {{0.3, 0.7}}}};
  const Network net = Network::create(def);
  CHECK(net.cpt(0).child == "a");
  CHECK(net.cpt(1).child == "b");
  CHECK(net.definition().edges == std::vector<Edge>{{"a", "b"}});
  CHECK(net.parents(1).size() == 1);
  CHECK(net.children(0).size() == 1);
  CHECK(net.children(0)[0] == 1u);
}

TEST_CASE("network lookups") {
  const Network net = build_fixture("simple-smoking");
  CHECK(net.name() == "simple-smoking");
  CHECK(net.index_of("tested") == 2u);
  CHECK_FALSE(net.find("nope"));
  CHECK(net.state_index(2, "false") == 1u);
  CHECK_THROWS_AS(net.index_of("nope"), Error);
  try {
    net.state_index(0, "maybe");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownState);
  }
}

TEST_CASE("resolve_evidence sorts by variable index") {
  const Network net = build_fixture("simple-smoking");
  const auto resolved = resolve_evidence(net, {{"tested", "true"}, {"smoker", "false"}});
  REQUIRE(resolved.size() == 2);
  CHECK(resolved[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(resolved[1] == std::pair<std::size_t, std::size_t>{2, 0});
  CHECK_THROWS_AS(resolve_evidence(net, {{"ghost", "true"}}), Error);
  CHECK_THROWS_AS(resolve_evidence(net, {{"tested", "maybe"}}), Error);
}

TEST_CASE("network copies share one immutable definition") {
  const Network a = build_fixture("stress");
  const Network b = a;
  CHECK(&a.definition() == &b.definition());
  CHECK(a == b);
  CHECK_FALSE(a == build_fixture("contact"));
}
