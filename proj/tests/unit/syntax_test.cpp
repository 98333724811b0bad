#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "obtt/syntax.hpp"

using namespace obtt;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_file(const SourceFile& a, const SourceFile& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i) {
    const auto& x = a.decls[i];
    const auto& y = b.decls[i];
    if (x.name != y.name || bool(x.annotation) != bool(y.annotation)) return false;
    if (x.annotation && !same_term(x.annotation, y.annotation)) return false;
    if (!same_term(x.body, y.body)) return false;
  }
  return true;
}

// Random well-scoped terms over every constructor.
class TermGen {
 public:
  explicit TermGen(unsigned seed) : rng_(seed) {}

  TermPtr gen(std::size_t depth, std::size_t scope) {
    static const Tag all[] = {
        Tag::Var,   Tag::Ann,    Tag::VType,  Tag::El,    Tag::Pi,     Tag::Sg,    Tag::BoolT,   Tag::UnitT,
        Tag::PropT, Tag::TopP,   Tag::BotP,   Tag::ObsEq, Tag::CBool,  Tag::CUnit, Tag::CPi,     Tag::CSg,
        Tag::CUni,  Tag::CLift,  Tag::Lam,    Tag::App,   Tag::Pair,   Tag::Proj1, Tag::Proj2,   Tag::Tt,
        Tag::True,  Tag::False,  Tag::BoolElim, Tag::Star, Tag::Exfalso, Tag::PiFst, Tag::PiSnd, Tag::SgFst,
        Tag::SgSnd, Tag::Sym,    Tag::Refl,   Tag::Cast};
    std::vector<Tag> choices;
    for (Tag t : all) {
      if (t == Tag::Var && scope == 0) continue;
      if (depth == 0 && arity(t).count > 0) continue;
      choices.push_back(t);
    }
    Tag tag = choices[pick(choices.size())];
    if (tag == Tag::Var) return mk_var(pick(scope));
    const Arity& ar = arity(tag);
    std::vector<TermPtr> args;
    for (std::size_t i = 0; i < ar.count; ++i) args.push_back(gen(depth - 1, scope + (ar.binds[i] ? 1 : 0)));
    bool leveled = tag == Tag::VType || tag == Tag::CUni || tag == Tag::ObsEq;
    return mk(tag, std::move(args), leveled ? pick(3) : 0);
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::mt19937 rng_;
};

}  // namespace

TEST_CASE("smallest program parses") {
  auto f = parse("def id : El (cPi cBool (_ . cBool)) := fun x . x");
  REQUIRE(f.decls.size() == 1);
  CHECK(f.decls[0].name == "id");
  const Term& ann = *f.decls[0].annotation;
  REQUIRE(ann.tag == Tag::El);
  CHECK(ann.args[0]->tag == Tag::CPi);
  CHECK(f.decls[0].body->tag == Tag::Lam);
  CHECK(f.decls[0].body->args[0]->tag == Tag::Var);
}

TEST_CASE("unbound identifier is reported with its position") {
  try {
    parse("def x := y");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(std::string(e.what()).find("unbound identifier 'y'") != std::string::npos);
    CHECK(e.span().line == 1);
    CHECK(e.span().col == 10);
  }
}

TEST_CASE("duplicate declarations are rejected") {
  CHECK_THROWS_AS(parse("def a := true\ndef a := false"), SyntaxError);
}

TEST_CASE("later declarations see earlier ones only") {
  CHECK_THROWS_AS(parse("def a := b\ndef b := true"), SyntaxError);
  auto f = parse("def a := true\ndef b := a");
  CHECK(f.decls[1].body->tag == Tag::Ref);
  CHECK(f.decls[1].body->n == 0);
}

TEST_CASE("parse errors carry spans inside the input") {
  const char* bad[] = {"def", "def x := (true", "def x := cPi cBool", "def x := fun . x", "def x :=\n  @",
                       "def cBool := true", "def x := V", "def x := (a . b)"};
  for (const char* src : bad) {
    std::string text(src);
    try {
      parse(text);
      FAIL("expected failure for " << text);
    } catch (const SyntaxError& e) {
      std::size_t lines = 1 + std::count(text.begin(), text.end(), '\n');
      CHECK(e.span().line >= 1);
      CHECK(e.span().line <= lines);
      CHECK(e.span().col >= 1);
    }
  }
}

TEST_CASE("printer renders codes directly") {
  auto t = mk(Tag::CPi, {mk(Tag::CBool), mk(Tag::CBool)});
  CHECK(print(t) == "cPi cBool (_ . cBool)");
}

TEST_CASE("nested binders print with distinct generated names") {
  auto t = parse_term("fun a . fun b . fun c . a c b");
  CHECK(print(t) == "fun x0 . fun x1 . fun x2 . x0 x2 x1");
  auto dep = parse_term("cPi cBool (x . cSg (El x) (y . cPi y (z . x)))");
  // El x is ill-typed at y's position but the printer doesn't care
  CHECK(print(dep) == "cPi cBool (x0 . cSg (El x0) (x1 . cPi x1 (_ . x0)))");
}

TEST_CASE("comments and whitespace are insignificant") {
  auto a = parse("-- header\ndef t : Bool\n := -- inline\n  true");
  auto b = parse("def t : Bool := true");
  CHECK(same_file(a, b));
}

TEST_CASE("round trip over generated terms") {
  TermGen gen(20261018);
  for (int i = 0; i < 2000; ++i) {
    TermPtr t = gen.gen(1 + i % 6, 0);
    REQUIRE(well_scoped(*t, 0));
    std::string s = print(t);
    TermPtr back = parse_term(s);
    INFO(s);
    REQUIRE(same_term(t, back));
    CHECK(print(back) == s);
  }
}

TEST_CASE("round trip over the golden corpus") {
  std::size_t files = 0;
  for (const char* dir : {"good", "bad"}) {
    for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(OBTT_CORPUS_DIR) / dir)) {
      if (entry.path().extension() != ".obtt") continue;
      SourceFile f;
      try {
        f = parse(slurp(entry.path()));
      } catch (const SyntaxError&) {
        continue;  // some ill-formed corpus files fail on purpose
      }
      ++files;
      std::string printed = print(f);
      SourceFile back = parse(printed);
      INFO(entry.path().string());
      CHECK(same_file(f, back));
      CHECK(print(back) == printed);
    }
  }
  CHECK(files >= 20);
}
