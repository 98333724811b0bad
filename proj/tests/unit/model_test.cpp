#include <cmath>

#include "doctest.h"
#include "obtt/cli.hpp"
#include "obtt/model.hpp"

using namespace obtt;

namespace {

const char* kTerminal = R"({"objects": ["*"], "arrows": [{"id": "i", "src": "*", "dst": "*"}], "identities": {"*": "i"}})";
const char* kArrow = R"({"objects": ["0", "1"],
  "arrows": [{"id": "i0", "src": "0", "dst": "0"}, {"id": "i1", "src": "1", "dst": "1"}, {"id": "u", "src": "0", "dst": "1"}],
  "identities": {"0": "i0", "1": "i1"}})";
const char* kSpan = R"({"objects": ["L", "A", "R"],
  "arrows": [{"id": "iL", "src": "L", "dst": "L"}, {"id": "iA", "src": "A", "dst": "A"}, {"id": "iR", "src": "R", "dst": "R"},
             {"id": "l", "src": "A", "dst": "L"}, {"id": "r", "src": "A", "dst": "R"}],
  "identities": {"L": "iL", "A": "iA", "R": "iR"}})";

FinCat cat(const char* json) { return validateCat(nlohmann::json::parse(json)); }

PresheafHost host(const char* json, std::vector<std::size_t> bounds, bool strict = true) {
  HostOptions o;
  o.bounds = std::move(bounds);
  o.strict = strict;
  return PresheafHost(cat(json), o);
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

std::vector<std::string> violations(const std::string& json) {
  try {
    validateCat(nlohmann::json::parse(json));
  } catch (const CategoryError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& xs, const std::string& needle) {
  for (const auto& x : xs)
    if (x.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("canonical values: order, tables, lookup") {
  auto a = CanonVal::atom(1), b = CanonVal::atom(2);
  CHECK(a < b);
  CHECK(CanonVal::atom(7) < CanonVal::tuple({}));
  CHECK(CanonVal::tuple({a}) < CanonVal::tuple({a, a}));
  auto t = CanonVal::funTable({{b, a}, {a, b}});
  REQUIRE(t.lookup(a));
  CHECK(*t.lookup(a) == b);
  CHECK(t.lookup(CanonVal::atom(9)) == nullptr);
  CHECK(t == CanonVal::funTable({{a, b}, {b, a}}));
  CHECK_THROWS_AS(CanonVal::funTable({{a, a}, {a, b}}), std::invalid_argument);
  std::vector<CanonVal> sorted{a, b, t};
  CHECK(indexIn(sorted, t) == 2);
  CHECK(indexIn(sorted, CanonVal::atom(3)) == -1);
}

TEST_CASE("category validation names each violation") {
  CHECK(mentions(violations(R"({"objects": ["x"]})"), "missing field 'arrows'"));
  CHECK(mentions(violations(R"({"objects": ["x"], "arrows": [{"id": "f", "src": "x", "dst": "y"}], "identities": {}})"),
                 "unknown target 'y'"));
  CHECK(mentions(violations(R"({"objects": ["x"], "arrows": [{"id": "i", "src": "x", "dst": "x"}], "identities": {}})"),
                 "object 'x' has no identity"));
  // an endo-arrow whose square is never given
  CHECK(mentions(violations(R"({"objects": ["x"], "arrows": [{"id": "i", "src": "x", "dst": "x"}, {"id": "e", "src": "x", "dst": "x"}],
                               "identities": {"x": "i"}})"),
                 "missing composite of 'e' after 'e'"));
  CHECK(mentions(violations(R"({"objects": ["x"], "arrows": [{"id": "i", "src": "x", "dst": "x"}, {"id": "e", "src": "x", "dst": "x"}],
                               "identities": {"x": "i"}, "comp": [["e", "e", "i"], ["e", "e", "e"]]})"),
                 "given twice"));
  CHECK(mentions(violations(R"({"objects": ["x"], "arrows": [{"id": "i", "src": "x", "dst": "x"}, {"id": "e", "src": "x", "dst": "x"}],
                               "identities": {"x": "i"}, "comp": [["i", "e", "i"], ["e", "e", "e"]]})"),
                 "left unit law fails for 'e'"));
}

TEST_CASE("non-associative table is rejected with the offending triple") {
  // a∘a = b, a∘b = a, b∘a = b, b∘b = id: a(ab) = b but (aa)b = id
  auto v = violations(R"({"objects": ["x"],
    "arrows": [{"id": "i", "src": "x", "dst": "x"}, {"id": "a", "src": "x", "dst": "x"}, {"id": "b", "src": "x", "dst": "x"}],
    "identities": {"x": "i"},
    "comp": [["a", "a", "b"], ["a", "b", "a"], ["b", "a", "b"], ["b", "b", "i"]]})");
  CHECK(mentions(v, "associativity fails for a='a', b='a', c='b'"));
}

TEST_CASE("the bundled shapes validate") {
  CHECK(cat(kTerminal).arrows.size() == 1);
  CHECK(cat(kArrow).compose(2, 0) == 2);
  CHECK(cat(kSpan).objects.size() == 3);
}

TEST_CASE("stage sets on the terminal category have n+1 elements") {
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u}) {
    std::vector<std::size_t> bounds{n};
    auto h = host(kTerminal, bounds);
    CHECK(h.stageElements(0, 0).size() == n + 1);
  }
}

TEST_CASE("stage sets on the arrow category count sum of b^a") {
  for (std::size_t n : {0u, 1u, 2u, 3u}) {
    auto h = host(kArrow, {n});
    std::size_t expected = 0;  // a = top fiber, b = fiber over u, maps b^a
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = 0; b <= n; ++b) expected += ipow(b, a);
    CHECK(h.stageElements(0, 1).size() == expected);
    CHECK(h.stageElements(0, 0).size() == n + 1);
  }
  CHECK(host(kArrow, {1}).stageElements(0, 1).size() == 3);
  CHECK(host(kArrow, {0}).stageElements(0, 1).size() == 1);
}

TEST_CASE("presheaf enumeration: functorial, sorted, capped") {
  Shape s = shapeOf(cat(kSpan));
  auto ps = enumeratePresheaves(s, 2, 1000000);
  // independent count: maps P(L) -> P(A) and P(R) -> P(A)
  std::size_t expected = 0;
  for (std::size_t a = 0; a <= 2; ++a)
    for (std::size_t l = 0; l <= 2; ++l)
      for (std::size_t r = 0; r <= 2; ++r) expected += ipow(a, l) * ipow(a, r);
  CHECK(ps.size() == expected);
  for (std::size_t i = 1; i < ps.size(); ++i) CHECK(ps[i - 1] < ps[i]);
  for (const auto& p : ps) CHECK(isFunctorial(s, p));
  CHECK_THROWS_AS(enumeratePresheaves(s, 2, 10), CapExceeded);
}

TEST_CASE("depth-one code count on the terminal category") {
  auto h = host(kTerminal, {2, 3, 4});
  Universe u(h, 0);
  auto leaves = u.leaves(0, 0);
  // leaves: three up codes, bool, unit
  CHECK(leaves.size() == 5);
  std::size_t expected = leaves.size();
  for (const auto& a : leaves) expected += 2 * ipow(leaves.size(), u.decode(a)->fibers[0].size());
  CHECK(expected == 127);
  CHECK(u.enumCodes(0, 0, 1).size() == expected);
  CHECK(verifyCodes(u, 0, 0, 1).size() == expected);
}

TEST_CASE("Bool to Bool has four sections at every stage") {
  for (const char* c : {kTerminal, kArrow, kSpan}) {
    auto h = host(c, {2, 3, 4});
    Universe u(h, 0);
    for (std::size_t st = 0; st < h.stages(); ++st) {
      auto b = u.boolCode(0, st);
      Family f = u.decode(u.fn(b, Universe::constant(b)));
      for (const auto& fiber : f->fibers) CHECK(fiber.size() == 4);
      Family p = u.decode(u.sg(b, Universe::constant(u.unitCode(0, st))));
      for (const auto& fiber : p->fibers) CHECK(fiber.size() == 2);
    }
  }
}

TEST_CASE("sections agree with the brute-force oracle") {
  auto h = host(kArrow, {2, 3, 4});
  Universe u(h, 0);
  std::size_t checked = 0;
  for (const auto& c : u.enumCodes(0, 1, 1)) {
    if (c->kind != CodeKind::Fn) continue;
    Family dom = u.decode(c->dom);
    auto entries = u.decodeEntries(*c, dom);
    CHECK(h.elemEq(h.sections(dom, entries), sectionsBruteForce(h, dom, entries)));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("decode of V_0 lists the level-0 codes") {
  auto h = host(kTerminal, {2, 3});
  Universe u(h, 0);
  Family v0 = u.decode(u.uniCode(1, 0, 0));
  CHECK(v0->fibers[0].size() == u.leaves(0, 0).size());
  CHECK_THROWS_AS(u.uniCode(0, 0, 0), std::invalid_argument);
}

TEST_CASE("former rejects a family of the wrong size") {
  auto h = host(kTerminal, {2});
  Universe u(h, 0);
  auto b = u.boolCode(0, 0);
  CHECK_THROWS_AS(u.fn(b, Universe::tabulated({b})), std::invalid_argument);
  CHECK_NOTHROW(u.fn(b, Universe::tabulated({b, b})));
}

TEST_CASE("weak host: isomorphic but not equal to the literal sections") {
  auto h = host(kTerminal, {2, 3}, /*strict=*/false);
  Universe u(h, 0);
  auto b = u.boolCode(0, 0);
  Family dom = u.decode(b);
  auto entries = u.decodeEntries(*u.fn(b, Universe::constant(b)), dom);
  Family lit = h.sections(dom, entries), weak = h.hostPi(dom, entries);
  CHECK_FALSE(h.elemEq(lit, weak));
  CHECK(h.isomorphicByPosition(lit, weak));
}

TEST_CASE("host Pi forgets the codomain over an empty domain") {
  auto h = host(kArrow, {2, 3, 4});
  Universe u(h, 0);
  for (std::size_t st = 0; st < 2; ++st) {
    auto r = witnessHostNonInjectivity(u, 0, st);
    CHECK(r.pass);
    CHECK(r.witness["host_pi_equal"] == true);
    CHECK(r.witness["codes_equal"] == false);
  }
  auto h0 = host(kTerminal, {0, 1});
  Universe u0(h0, 0);
  auto r = witnessHostNonInjectivity(u0, 0, 0);
  CHECK(r.pass);
  CHECK(r.note.find("no witness") != std::string::npos);
}

TEST_CASE("genericity on the terminal category") {
  auto h = host(kTerminal, {2, 3});
  Universe u(h, 0);
  auto r = checkGenericity(u, 0, 2);
  CHECK(r.pass);
  // X of size 0..2, and for each a family of sets of size <= 2 over X
  CHECK(r.count == 1 + 3 + 9);
  CHECK(r.witness["out_of_class_probes"] == 1);
}

TEST_CASE("individual checks pass on the arrow category at depth one") {
  auto h = host(kArrow, {2, 3, 4});
  Universe u(h, 0);
  for (std::size_t st = 0; st < 2; ++st) {
    auto codes = verifyCodes(u, 0, st, 1);
    CHECK(checkHostStage(h, 0, st).pass);
    CHECK(checkRetraction(u, 0, st).pass);
    CHECK(checkDecodePi(u, st, codes).pass);
    CHECK(checkNaturality(u, st, codes).pass);
    CHECK(checkLift(u, st, codes).pass);
    CHECK(checkInjectivity(u, st, codes, 7).pass);
  }
  CHECK(checkGenericity(u, 0, 1).pass);
}

TEST_CASE("lift check needs three levels") {
  auto h = host(kTerminal, {2, 3});
  Universe u(h, 0);
  CHECK_FALSE(checkLift(u, 0, u.leaves(0, 0)).pass);
}

TEST_CASE("reports do not depend on the number of jobs") {
  ModelOptions o;
  o.depth = 1;
  nlohmann::json echo = {{"test", true}};
  o.jobs = 1;
  auto one = runModel(cat(kArrow), o, echo, "d").dump();
  o.jobs = 4;
  auto four = runModel(cat(kArrow), o, echo, "d").dump();
  CHECK(one == four);
  CHECK(nlohmann::json::parse(one)["summary"]["status"] == "pass");
}

TEST_CASE("kappa warning when a stage set outgrows the next bound") {
  ModelOptions o;
  o.depth = 0;
  o.bounds = {2, 3, 4};
  auto terminal = runModel(cat(kTerminal), o, {}, "d");
  CHECK(terminal["warnings"].empty());
  auto arrow = runModel(cat(kArrow), o, {}, "d");
  CHECK_FALSE(arrow["warnings"].empty());
}

TEST_CASE("FNV-1a matches the published vectors") {
  CHECK(fnv1a64("") == "cbf29ce484222325");
  CHECK(fnv1a64("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a64("foobar") == "85944171f73967e8");
}

TEST_CASE("config validation") {
  auto parse = [](const char* s) { return parseConfig(nlohmann::json::parse(s), "/cfg"); };
  Config c = parse(R"({"base": "b.json"})");
  CHECK(c.basePath == "/cfg/b.json");
  CHECK(effectiveBounds(c) == std::vector<std::size_t>{2, 3, 4});
  CHECK(c.strict);
  try {
    parse(R"({"base": "b.json", "bounds": [3, 3]})");
    FAIL("accepted non-increasing bounds");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("strictly increasing") != std::string::npos);
  }
  CHECK_THROWS_AS(parse(R"({"base": "b.json", "mode": "lazy"})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"base": "b.json", "depth": -1})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"base": "b.json", "caps": {"enumeration": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"base": "b.json", "levels": 2, "bounds": [1, 2, 3]})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"base": "b.json", "colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"bounds": [1]})"), ConfigError);
}
