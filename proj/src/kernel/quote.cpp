#include <stdexcept>

#include "obtt/kernel.hpp"

namespace obtt {
namespace {

TermPtr quote_neutral(std::size_t depth, const Neutral& n) {
  TermPtr head;
  switch (n.head) {
    case HeadKind::Var:
      head = mk_var(depth - 1 - n.level);
      break;
    case HeadKind::CastStuck:
      head = mk(Tag::Cast, {quote(depth, n.parts[0]), quote(depth, n.parts[1]), quote(depth, n.parts[2]),
                            quote(depth, n.parts[3])});
      break;
    case HeadKind::Exfalso:
      head = mk(Tag::Exfalso, {quote(depth, n.parts[0]), quote(depth, n.parts[1])});
      break;
  }
  for (const Elim& e : n.spine) {
    switch (e.kind) {
      case Elim::App:
        head = mk(Tag::App, {head, quote(depth, e.arg)});
        break;
      case Elim::Fst:
        head = mk(Tag::Proj1, {head});
        break;
      case Elim::Snd:
        head = mk(Tag::Proj2, {head});
        break;
      case Elim::BoolElim:
        head = mk(Tag::BoolElim, {quote(depth + 1, instantiate(e.motive, vvar(depth))), quote(depth, e.on_true),
                                  quote(depth, e.on_false), head});
        break;
    }
  }
  return head;
}

TermPtr quote_binder(std::size_t depth, const Closure& c) { return quote(depth + 1, instantiate(c, vvar(depth))); }

}  // namespace

TermPtr quote(std::size_t depth, const ValuePtr& v) {
  auto arg = [&](std::size_t i) { return quote(depth, v->args[i]); };
  switch (v->tag) {
    case VTag::Neutral:
      return quote_neutral(depth, *v->neu);
    case VTag::El:
      return mk(Tag::El, {quote_neutral(depth, *v->neu)});
    case VTag::Lam:
      return mk(Tag::Lam, {quote_binder(depth, v->clos[0])});
    case VTag::Pair:
      return mk(Tag::Pair, {arg(0), arg(1)});
    case VTag::True:
      return mk(Tag::True);
    case VTag::False:
      return mk(Tag::False);
    case VTag::Tt:
      return mk(Tag::Tt);
    case VTag::Star:
      return mk(Tag::Star);
    case VTag::PiT:
      return mk(Tag::Pi, {arg(0), quote_binder(depth, v->clos[0])});
    case VTag::SgT:
      return mk(Tag::Sg, {arg(0), quote_binder(depth, v->clos[0])});
    case VTag::BoolT:
      return mk(Tag::BoolT);
    case VTag::UnitT:
      return mk(Tag::UnitT);
    case VTag::VType:
      return mk(Tag::VType, {}, v->n);
    case VTag::PropT:
      return mk(Tag::PropT);
    case VTag::TopP:
      return mk(Tag::TopP);
    case VTag::BotP:
      return mk(Tag::BotP);
    case VTag::ObsEq:
      return mk(Tag::ObsEq, {arg(0), arg(1)}, v->n);
    case VTag::SBool:
      return mk(Tag::CBool);
    case VTag::SUnit:
      return mk(Tag::CUnit);
    case VTag::SPi:
      return mk(Tag::CPi, {arg(0), quote_binder(depth, v->clos[0])});
    case VTag::SSg:
      return mk(Tag::CSg, {arg(0), quote_binder(depth, v->clos[0])});
    case VTag::SUni:
      return mk(Tag::CUni, {}, v->n);
    case VTag::SLift: {
      TermPtr t = quote_neutral(depth, *v->neu);
      for (std::size_t i = 0; i < v->n; ++i) t = mk(Tag::CLift, {t});
      return t;
    }
    case VTag::PiFst:
      return mk(Tag::PiFst, {arg(0)});
    case VTag::PiSnd:
      return mk(Tag::PiSnd, {arg(0), arg(1)});
    case VTag::SgFst:
      return mk(Tag::SgFst, {arg(0)});
    case VTag::SgSnd:
      return mk(Tag::SgSnd, {arg(0), arg(1)});
    case VTag::Sym:
      return mk(Tag::Sym, {arg(0)});
    case VTag::Refl:
      return mk(Tag::Refl, {arg(0)});
  }
  throw std::logic_error("kernel invariant: unknown value");
}

bool contains_placeholder(const Term& t) {
  if (t.tag == Tag::Cast && t.args[2]->tag == Tag::Star) return true;
  for (const auto& a : t.args)
    if (contains_placeholder(*a)) return true;
  return false;
}

}  // namespace obtt
