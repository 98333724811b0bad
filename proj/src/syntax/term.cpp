#include "obtt/syntax.hpp"

#include <array>
#include <sstream>

namespace obtt {

const Arity& arity(Tag tag) {
  static const Arity none{0, {}};
  static const Arity one{1, {false}};
  static const Arity two{2, {false, false}};
  static const Arity binder2{2, {false, true}};
  static const Arity lam{1, {true}};
  static const Arity four{4, {false, false, false, false}};
  static const Arity elim{4, {true, false, false, false}};
  switch (tag) {
    case Tag::Var:
    case Tag::Ref:
    case Tag::VType:
    case Tag::BoolT:
    case Tag::UnitT:
    case Tag::PropT:
    case Tag::TopP:
    case Tag::BotP:
    case Tag::CBool:
    case Tag::CUnit:
    case Tag::CUni:
    case Tag::Tt:
    case Tag::True:
    case Tag::False:
    case Tag::Star:
      return none;
    case Tag::El:
    case Tag::CLift:
    case Tag::Proj1:
    case Tag::Proj2:
    case Tag::PiFst:
    case Tag::SgFst:
    case Tag::Sym:
    case Tag::Refl:
      return one;
    case Tag::Ann:
    case Tag::ObsEq:
    case Tag::App:
    case Tag::Pair:
    case Tag::Exfalso:
    case Tag::PiSnd:
    case Tag::SgSnd:
      return two;
    case Tag::Pi:
    case Tag::Sg:
    case Tag::CPi:
    case Tag::CSg:
      return binder2;
    case Tag::Lam:
      return lam;
    case Tag::BoolElim:
      return elim;
    case Tag::Cast:
      return four;
  }
  return none;
}

std::string_view keyword(Tag tag) {
  switch (tag) {
    case Tag::VType: return "V";
    case Tag::El: return "El";
    case Tag::Pi: return "Pi";
    case Tag::Sg: return "Sg";
    case Tag::BoolT: return "Bool";
    case Tag::UnitT: return "Unit";
    case Tag::PropT: return "Prop";
    case Tag::TopP: return "Top";
    case Tag::BotP: return "Bot";
    case Tag::ObsEq: return "Eq";
    case Tag::CBool: return "cBool";
    case Tag::CUnit: return "cUnit";
    case Tag::CPi: return "cPi";
    case Tag::CSg: return "cSg";
    case Tag::CUni: return "cUni";
    case Tag::CLift: return "cLift";
    case Tag::Lam: return "fun";
    case Tag::Proj1: return "fst";
    case Tag::Proj2: return "snd";
    case Tag::Tt: return "tt";
    case Tag::True: return "true";
    case Tag::False: return "false";
    case Tag::BoolElim: return "boolElim";
    case Tag::Star: return "star";
    case Tag::Exfalso: return "exfalso";
    case Tag::PiFst: return "piFst";
    case Tag::PiSnd: return "piSnd";
    case Tag::SgFst: return "sgFst";
    case Tag::SgSnd: return "sgSnd";
    case Tag::Sym: return "sym";
    case Tag::Refl: return "refl";
    case Tag::Cast: return "cast";
    default: return {};
  }
}

TermPtr mk(Tag tag, std::vector<TermPtr> args, std::size_t n, std::string name) {
  auto t = std::make_shared<Term>();
  t->tag = tag;
  t->n = n;
  t->binds = arity(tag).binds;
  t->args = std::move(args);
  t->name = std::move(name);
  return t;
}

TermPtr mk_var(std::size_t index, std::string name) { return mk(Tag::Var, {}, index, std::move(name)); }

bool same_term(const Term& a, const Term& b) {
  if (a.tag != b.tag || a.n != b.n || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same_term(*a.args[i], *b.args[i])) return false;
  return true;
}

namespace {

bool occurs_at(const Term& t, std::size_t index) {
  if (t.tag == Tag::Var) return t.n == index;
  for (std::size_t i = 0; i < t.args.size(); ++i)
    if (occurs_at(*t.args[i], index + (t.binds[i] ? 1 : 0))) return true;
  return false;
}

}  // namespace

bool occurs(const Term& t, std::size_t index) { return occurs_at(t, index); }

bool well_scoped(const Term& t, std::size_t depth) {
  if (t.tag == Tag::Var) return t.n < depth;
  for (std::size_t i = 0; i < t.args.size(); ++i)
    if (!well_scoped(*t.args[i], depth + (t.binds[i] ? 1 : 0))) return false;
  return true;
}

std::optional<std::size_t> SourceFile::find(std::string_view name) const {
  for (std::size_t i = 0; i < decls.size(); ++i)
    if (decls[i].name == name) return i;
  return std::nullopt;
}

namespace {

std::string format_error(Span span, const std::string& message) {
  std::ostringstream out;
  out << span.line << ':' << span.col << ": " << message;
  return out.str();
}

}  // namespace

SyntaxError::SyntaxError(Span span, const std::string& message)
    : std::runtime_error(format_error(span, message)), span_(span) {}

}  // namespace obtt
