#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "../support/kernel_properties.hpp"
#include "obtt/kernel.hpp"

using namespace obtt;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Checked {
  SourceFile file;
  std::vector<CheckedDecl> decls;

  const CheckedDecl& get(const std::string& name) const {
    for (const auto& d : decls)
      if (d.name == name) return d;
    throw std::runtime_error("no declaration " + name);
  }
  std::string nf(const std::string& name) const { return print(quote(0, get(name).value)); }
  std::string nf_type(const std::string& name) const { return print(quote(0, get(name).type)); }
};

Checked run(const std::string& src) {
  Checked c;
  c.file = parse(src);
  c.decls = check_file(c.file);
  return c;
}

TypeError::Kind failure_kind(const std::string& src) {
  try {
    run(src);
  } catch (const TypeError& e) {
    return e.kind();
  }
  FAIL("expected a type error in: " << src);
  return TypeError::Kind::Scope;
}

ValuePtr closed(const std::string& src) { return eval(empty_context().env(), parse_term(src)); }


}  // namespace

TEST_CASE("refl cast of true normalises to true") {
  auto c = run("def t : Bool := cast cBool cBool (refl cBool) true");
  CHECK(c.nf("t") == "true");
}

TEST_CASE("decode of a lifted Pi code is the plain Pi type") {
  auto c = run("def f : El (cLift (cPi cBool (_ . cBool))) := fun x . x");
  CHECK(c.nf_type("f") == "Pi Bool (_ . Bool)");
  auto d = run("def c : V 1 := cLift (cPi cBool (_ . cBool))");
  CHECK(d.nf("c") == "cPi cBool (_ . cBool)");
}

TEST_CASE("lift stays only on neutral codes") {
  auto c = run("def f : Pi (V 0) (A . V 2) := fun A . cLift (cLift (cPi A (_ . cBool)))");
  CHECK(c.nf("f") == "fun x0 . cPi (cLift (cLift x0)) (_ . cBool)");
}

TEST_CASE("open cast between neutral codes is stuck") {
  auto c = run(
      "def s : Pi (V 0) (A . Pi (V 0) (B . Pi (Eq 0 A B) (e . Pi (El A) (_ . El B)))) :="
      " fun A . fun B . fun e . fun a . cast A B e a");
  CHECK(c.nf("s") == "fun x0 . fun x1 . fun x2 . fun x3 . cast x0 x1 x2 x3");
}

TEST_CASE("cast along a Pi code rebuilds a function") {
  auto c = run(
      "def g : Pi (V 0) (A . Pi (Eq 0 (cPi A (_ . cBool)) (cPi A (_ . cBool))) (e ."
      " Pi (El (cPi A (_ . cBool))) (_ . El (cPi A (_ . cBool))))) :="
      " fun A . fun e . fun f . cast (cPi A (_ . cBool)) (cPi A (_ . cBool)) e f");
  // Bool components compute away; the domain still casts backwards.
  CHECK(c.nf("g") == "fun x0 . fun x1 . fun x2 . fun x3 . x2 (cast x0 x0 (sym (piFst x1)) x3)");
}

TEST_CASE("cast along Unit returns tt") {
  auto c = run("def u : Pi (Eq 0 cUnit cUnit) (e . Pi Unit (_ . Unit)) := fun e . fun x . cast cUnit cUnit e x");
  CHECK(c.nf("u") == "fun _ . fun _ . tt");
}

TEST_CASE("the four Bool functions survive a reflexive cast") {
  const char* bodies[] = {"fun b . b", "fun b . boolElim (_ . Bool) false true b", "fun b . true", "fun b . false"};
  for (const char* body : bodies) {
    std::string src = std::string("def f : El (cPi cBool (_ . cBool)) := ") + body +
                      "\ndef g : El (cPi cBool (_ . cBool)) :="
                      " cast (cPi cBool (_ . cBool)) (cPi cBool (_ . cBool)) (refl (cPi cBool (_ . cBool))) f";
    auto c = run(src);
    INFO(body);
    for (const char* arg : {"true", "false"}) {
      auto f = vapp(c.get("f").value, closed(arg));
      auto g = vapp(c.get("g").value, closed(arg));
      CHECK(print(quote(0, f)) == print(quote(0, g)));
    }
  }
}

TEST_CASE("piFst of an equality of Pi codes relates the domains") {
  auto c = run("def e : Eq 0 (cPi cBool (_ . cUnit)) (cPi cBool (_ . cUnit)) := refl (cPi cBool (_ . cUnit))");
  Context ctx = file_context(c.decls);
  ValuePtr ty = infer(ctx, parse_term("piFst e", {"e"}));
  CHECK(print(quote(0, ty)) == "Eq 0 cBool cBool");
  ValuePtr snd = infer(ctx, parse_term("piSnd e true", {"e"}));
  CHECK(print(quote(0, snd)) == "Eq 0 cUnit cUnit");
}

TEST_CASE("reflexivity has the expected type") {
  ValuePtr ty = infer(empty_context(), parse_term("refl (cUni 0)"));
  CHECK(print(quote(0, ty)) == "Eq 1 (cUni 0) (cUni 0)");
}

TEST_CASE("universe codes respect levels") {
  CHECK(failure_kind("def u : V 1 := cUni 1") == TypeError::Kind::LevelViolation);
  CHECK(failure_kind("def u : V 0 := cUni 0") == TypeError::Kind::LevelViolation);
  CHECK(failure_kind("def u : V 0 := cLift cBool") == TypeError::Kind::LevelViolation);
  CHECK(failure_kind("def u : Pi (V 4) (_ . Bool) := fun x . true") == TypeError::Kind::LevelViolation);
  CHECK_NOTHROW(run("def u : V 2 := cUni 1"));
  CHECK_NOTHROW(check_file(parse("def u : Pi (V 4) (_ . Bool) := fun x . true"), 4));
}

TEST_CASE("decomposition needs the right code former") {
  CHECK(failure_kind("def b : Pi (Eq 0 cBool cBool) (e . Eq 0 cBool cBool) := fun e . piFst e") ==
        TypeError::Kind::Decomposition);
  CHECK(failure_kind("def b : Pi (Eq 0 (cSg cBool (_ . cBool)) (cSg cBool (_ . cBool))) (e . Eq 0 cBool cBool)"
                     " := fun e . piFst e") == TypeError::Kind::Decomposition);
}

TEST_CASE("mismatch messages show both types") {
  try {
    run("def b : El cUnit := true");
    FAIL("expected a mismatch");
  } catch (const TypeError& e) {
    CHECK(e.kind() == TypeError::Kind::Mismatch);
    std::string msg = e.message();
    CHECK(msg.find("in 'b'") != std::string::npos);
    CHECK(msg.find("expected: Unit") != std::string::npos);
    CHECK(msg.find("actual:   Bool") != std::string::npos);
    CHECK(e.span().line == 1);
  }
}

TEST_CASE("unannotated lambdas are not inferable") {
  CHECK(failure_kind("def f := fun x . x") == TypeError::Kind::NotInferable);
}

// The generated-code properties live in tests/support so the acceptance
// driver runs exactly the same ones.
TEST_CASE("property: decoding commutes with lift on 1000 seeded codes") {
  auto t = testing::decode_commutes_with_lift(1, 1000);
  INFO(t.first);
  CHECK(t.cases == 1000);
  CHECK(t.ok());
}

TEST_CASE("property: lift is functorial on 1000 seeded codes") {
  auto t = testing::lift_functorial(2, 1000);
  INFO(t.first);
  CHECK(t.ok());
}

TEST_CASE("property: normal forms never put a lift on a canonical code") {
  auto t = testing::lift_normal_forms(5, 1000);
  INFO(t.first);
  CHECK(t.ok());
  // the detector itself
  CHECK(testing::lift_on_canonical_head(*parse_term("cLift cBool")));
  CHECK(testing::lift_on_canonical_head(*parse_term("cPi cBool (_ . cLift (cUni 0))")));
  CHECK(testing::lift_on_canonical_head(*parse_term("cLift (cLift cUnit)")));
  CHECK_FALSE(testing::lift_on_canonical_head(*parse_term("cPi cBool (x . cLift (boolElim (_ . V 0) cBool cUnit x))")));
  CHECK_FALSE(testing::lift_on_canonical_head(*parse_term("cPi cBool (x . cLift (cLift (boolElim (_ . V 0) cBool cUnit x)))")));
}

TEST_CASE("property: conversion of Pi codes implies conversion of parts") {
  auto t = testing::pi_injectivity(3, 1000);
  INFO(t.first);
  CHECK(t.ok());
  CHECK(t.hits > 20);
}

TEST_CASE("property: proofs of one proposition are convertible") {
  auto t = testing::proof_irrelevance(4, 1000);
  INFO(t.first);
  CHECK(t.ok());
}

TEST_CASE("piFst of an assumed equality between different Pi codes") {
  auto c = run(
      "def f : Pi (Eq 0 (cPi cBool (_ . cBool)) (cPi cBool (_ . cUnit))) (_ . Eq 0 cBool cBool) :="
      " fun e . piFst e");
  CHECK(c.nf_type("f") == "Pi (Eq 0 (cPi cBool (_ . cBool)) (cPi cBool (_ . cUnit))) (_ . Eq 0 cBool cBool)");
  // piSnd at a point relates the codomains there
  CHECK_NOTHROW(run(
      "def g : Pi (Eq 0 (cPi cBool (_ . cBool)) (cPi cBool (_ . cUnit))) (_ . Eq 0 cBool cUnit) :="
      " fun e . piSnd e true"));
}

TEST_CASE("golden corpus: good files check and bad files fail") {
  std::size_t good = 0, bad = 0;
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(OBTT_CORPUS_DIR) / "good")) {
    INFO(entry.path().string());
    CHECK_NOTHROW(run(slurp(entry.path())));
    ++good;
  }
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(OBTT_CORPUS_DIR) / "bad")) {
    INFO(entry.path().string());
    bool rejected = false;
    try {
      run(slurp(entry.path()));
    } catch (const SyntaxError&) {
      rejected = true;
    } catch (const TypeError&) {
      rejected = true;
    }
    CHECK(rejected);
    ++bad;
  }
  CHECK(good >= 20);
  CHECK(bad >= 10);
}

TEST_CASE("subject reduction over the golden corpus") {
  std::size_t checked = 0, skipped = 0;
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(OBTT_CORPUS_DIR) / "good")) {
    auto c = run(slurp(entry.path()));
    Context ctx = file_context(c.decls);
    for (const auto& d : c.decls) {
      TermPtr nf = quote(0, d.value);
      if (contains_placeholder(*nf)) {
        ++skipped;
        continue;
      }
      INFO(entry.path().string() << " " << d.name << " = " << print(nf));
      CHECK_NOTHROW(check(ctx, nf, d.type));
      // normal forms are fixed points
      CHECK(print(quote(0, eval(ctx.env(), nf))) == print(nf));
      ++checked;
    }
  }
  MESSAGE("subject reduction: " << checked << " checked, " << skipped << " skipped (placeholder proof)");
  CHECK(checked > 50);
}
