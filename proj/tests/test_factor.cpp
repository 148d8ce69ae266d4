#include <doctest.h>

#include <cmath>
#include <memory>

#include "colliderbn/factor.hpp"
#include "colliderbn/fixtures.hpp"

using namespace colliderbn;

namespace {

VariableRef boolean(const std::string& id) {
  return std::make_shared<const DiscreteVariable>(DiscreteVariable{id, id, {"true", "false"}});
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("factor from a parentless table") {
  const Network net = build_fixture("simple-smoking");
  const Factor f = factor_from_cpt(net, net.index_of("smoker"));
  REQUIRE(f.scope().size() == 1);
  CHECK(f.scope()[0]->id == "smoker");
  CHECK(f.values()[0] == 0.27);
  CHECK(f.values()[1] == 0.73);
}

TEST_CASE("factor from the tested table") {
  const Network net = build_fixture("simple-smoking");
  const Factor f = factor_from_cpt(net, net.index_of("tested"));
  REQUIRE(f.scope().size() == 3);
  CHECK(f.scope()[0]->id == "smoker");
  CHECK(f.scope()[1]->id == "covid19");
  CHECK(f.scope()[2]->id == "tested");
  CHECK(f.values().size() == 8);
  CHECK(f.at({"true", "true", "true"}) == 0.10);
  CHECK(f.at({"false", "true", "true"}) == 0.25);
  CHECK(f.at({"true", "false", "true"}) == 0.05);
  CHECK(f.at({"false", "false", "true"}) == 0.10);
}

TEST_CASE("factor from a point-mass table is an indicator") {
  NetworkDefinition def;
  def.name = "det";
  def.variables = {{"a", "A", {"x", "y"}}, {"b", "B", {"x", "y"}}};
  def.edges = {{"a", "b"}};
  def.cpts = {{"a", {}, {{0.4, 0.6}}}, {"b", {"a"}, {{1, 0}, {0, 1}}}};
  const Network net = Network::create(def);
  const Factor f = factor_from_cpt(net, 1);
  for (double v : f.values()) CHECK((v == 0.0 || v == 1.0));
  CHECK(f.at({"x", "x"}) == 1.0);
  CHECK(f.at({"x", "y"}) == 0.0);
}

TEST_CASE("product with the identity factor") {
  const Factor f({boolean("s")}, {0.27, 0.73});
  const Factor g = multiply(f, Factor());
  CHECK(g.scope() == f.scope());
  CHECK(std::vector<double>(g.values().begin(), g.values().end()) ==
        std::vector<double>{0.27, 0.73});
  CHECK(multiply(Factor(), f).values()[0] == 0.27);
}

TEST_CASE("product of two independent factors") {
  const Factor smoker({boolean("smoker")}, {0.27, 0.73});
  const Factor covid({boolean("covid19")}, {0.1, 0.9});
  const Factor joint = multiply(smoker, covid);
  REQUIRE(joint.values().size() == 4);
  CHECK(joint.scope()[0]->id == "smoker");
  CHECK(joint.scope()[1]->id == "covid19");
  CHECK(joint.at({"true", "true"}) == doctest::Approx(0.027).epsilon(1e-15));
  CHECK(joint.at({"false", "false"}) == doctest::Approx(0.657).epsilon(1e-15));

  const Factor back = sum_out(joint, "covid19");
  CHECK(back.values()[0] == doctest::Approx(0.27).epsilon(1e-15));
  CHECK(back.values()[1] == doctest::Approx(0.73).epsilon(1e-15));
}

TEST_CASE("product of a factor with itself squares it") {
  const auto a = boolean("a");
  const auto b = boolean("b");
  const Factor f({a, b}, {0.1, 0.2, 0.3, 0.4});
  const Factor sq = multiply(f, f);
  REQUIRE(sq.scope().size() == 2);
  for (std::size_t i = 0; i < 4; ++i) CHECK(sq.values()[i] == f.values()[i] * f.values()[i]);
}

TEST_CASE("product aligns shared variables in any scope order") {
  const auto a = boolean("a");
  const auto b = boolean("b");
  const auto c = boolean("c");
  const Factor f({a, b}, {1, 2, 3, 4});
  const Factor g({c, b}, {10, 20, 30, 40});  // g(c, b)
  const Factor h = multiply(f, g);
  REQUIRE(h.scope().size() == 3);
  CHECK(h.scope()[2]->id == "c");
  // h(a, b, c) = f(a, b) * g(c, b)
  const std::size_t idx[][3] = {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  for (const auto& i : idx) {
    const std::size_t fi[] = {i[0], i[1]};
    const std::size_t gi[] = {i[2], i[1]};
    const std::size_t hi[] = {i[0], i[1], i[2]};
    CHECK(h.at(hi) == f.at(fi) * g.at(gi));
  }
}

TEST_CASE("product rejects mismatched state spaces") {
  const auto a = boolean("a");
  const auto a3 = std::make_shared<const DiscreteVariable>(
      DiscreteVariable{"a", "a", {"lo", "mid", "hi"}});
  const Factor f({a}, {0.5, 0.5});
  const Factor g({a3}, {0.2, 0.3, 0.5});
  CHECK(code_of([&] { multiply(f, g); }) == ErrorCode::StateSpaceMismatch);
}

TEST_CASE("marginalizing the joint over smoker and covid19 leaves P(tested)") {
  const Network net = build_fixture("simple-smoking");
  Factor joint;
  for (std::size_t v = 0; v < net.size(); ++v) joint = multiply(joint, factor_from_cpt(net, v));
  CHECK(joint.total() == doctest::Approx(1.0).epsilon(1e-15));
  const Factor tested = sum_out(sum_out(joint, "smoker"), "covid19");
  REQUIRE(tested.scope().size() == 1);
  CHECK(std::abs(tested.at({"true"}) - 0.0988) < 1e-15);
}

TEST_CASE("marginalizing the last variable leaves the total") {
  const Factor f({boolean("a")}, {0.25, 0.5});
  const Factor e = sum_out(f, "a");
  CHECK(e.scope().empty());
  CHECK(e.values().size() == 1);
  CHECK(e.values()[0] == 0.75);
}

TEST_CASE("marginalizing a variable outside the scope fails") {
  const Factor f({boolean("a")}, {0.25, 0.75});
  CHECK(code_of([&] { sum_out(f, "b"); }) == ErrorCode::NotInScope);
}

TEST_CASE("reduce the tested factor by tested=true") {
  const Network net = build_fixture("simple-smoking");
  const Factor f = reduce(factor_from_cpt(net, net.index_of("tested")), {{"tested", "true"}});
  REQUIRE(f.scope().size() == 2);
  CHECK(f.scope()[0]->id == "smoker");
  CHECK(f.scope()[1]->id == "covid19");
  CHECK(f.at({"true", "true"}) == 0.10);
  CHECK(f.at({"false", "false"}) == 0.10);
}

TEST_CASE("reduce ignores evidence outside the scope") {
  const Factor f({boolean("a")}, {0.25, 0.75});
  const Factor g = reduce(f, {{"b", "true"}});
  CHECK(g.scope() == f.scope());
  CHECK(g.values()[1] == 0.75);
}

TEST_CASE("reduce a single-variable factor by its own evidence") {
  const Factor f({boolean("a")}, {0.25, 0.75});
  const Factor g = reduce(f, {{"a", "false"}});
  CHECK(g.scope().empty());
  CHECK(g.values()[0] == 0.75);
}

TEST_CASE("reduce rejects an unknown state") {
  const Factor f({boolean("a")}, {0.25, 0.75});
  CHECK(code_of([&] { reduce(f, {{"a", "maybe"}}); }) == ErrorCode::UnknownState);
}

TEST_CASE("factor construction checks its values") {
  const auto a = boolean("a");
  CHECK(code_of([&] { Factor({a}, {0.5}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { Factor({a}, {0.5, -0.1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { Factor({a}, {0.5, INFINITY}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { Factor({a, a}, {1, 1, 1, 1}); }) == ErrorCode::InvalidArgument);
  CHECK(Factor::constant(2.5).values()[0] == 2.5);
  CHECK(Factor({a}, {0.0, 0.0}).total() == 0.0);
}
