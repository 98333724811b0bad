#include <stdexcept>

#include "obtt/kernel.hpp"

namespace obtt {

Env Env::extend(ValuePtr v) const {
  Env e = *this;
  e.locals.push_back(std::move(v));
  return e;
}

ValuePtr vmk(VTag tag, std::vector<ValuePtr> args, std::size_t n) {
  auto v = std::make_shared<Value>();
  v->tag = tag;
  v->args = std::move(args);
  v->n = n;
  return v;
}

ValuePtr vneutral(Neutral n) {
  auto v = std::make_shared<Value>();
  v->tag = VTag::Neutral;
  v->neu = std::make_shared<const Neutral>(std::move(n));
  return v;
}

ValuePtr vvar(std::size_t level) {
  Neutral n;
  n.head = HeadKind::Var;
  n.level = level;
  return vneutral(std::move(n));
}

namespace {

[[noreturn]] void internal(const char* what) { throw std::logic_error(std::string("kernel invariant: ") + what); }

ValuePtr with_closure(VTag tag, std::vector<ValuePtr> args, Closure c) {
  auto v = std::make_shared<Value>();
  v->tag = tag;
  v->args = std::move(args);
  v->clos.push_back(std::move(c));
  return v;
}

ValuePtr extend_spine(const ValuePtr& neutral, Elim e) {
  Neutral n = *neutral->neu;
  n.spine.push_back(std::move(e));
  return vneutral(std::move(n));
}

// Wrap a closure body so that instantiating it yields `wrap(body)`.
Closure map_closure(const Closure& c, Tag wrap, std::size_t times = 1) {
  if (c.native) {
    auto inner = c.native;
    if (wrap == Tag::El) return Closure{{}, nullptr, [inner](const ValuePtr& x) { return vel(inner(x)); }};
    return Closure{{}, nullptr, [inner, times](const ValuePtr& x) { return vlift(inner(x), times); }};
  }
  TermPtr body = c.body;
  for (std::size_t i = 0; i < times; ++i) body = mk(wrap, {body});
  return Closure{c.env, body, nullptr};
}

ValuePtr proof_or_star(VTag tag, std::vector<ValuePtr> args) {
  if (args[0]->tag == VTag::Star) return args[0];
  return vmk(tag, std::move(args));
}

}  // namespace

ValuePtr instantiate(const Closure& c, ValuePtr arg) {
  if (c.native) return c.native(arg);
  return eval(c.env.extend(std::move(arg)), c.body);
}

ValuePtr vapp(const ValuePtr& f, const ValuePtr& a) {
  switch (f->tag) {
    case VTag::Lam:
      return instantiate(f->clos[0], a);
    case VTag::Neutral:
      return extend_spine(f, Elim{Elim::App, a, {}, nullptr, nullptr});
    default:
      internal("application of a non-function");
  }
}

ValuePtr vfst(const ValuePtr& p) {
  switch (p->tag) {
    case VTag::Pair:
      return p->args[0];
    case VTag::Neutral:
      return extend_spine(p, Elim{Elim::Fst, nullptr, {}, nullptr, nullptr});
    default:
      internal("projection from a non-pair");
  }
}

ValuePtr vsnd(const ValuePtr& p) {
  switch (p->tag) {
    case VTag::Pair:
      return p->args[1];
    case VTag::Neutral:
      return extend_spine(p, Elim{Elim::Snd, nullptr, {}, nullptr, nullptr});
    default:
      internal("projection from a non-pair");
  }
}

ValuePtr vbool_elim(const Closure& motive, const ValuePtr& t, const ValuePtr& f, const ValuePtr& s) {
  switch (s->tag) {
    case VTag::True:
      return t;
    case VTag::False:
      return f;
    case VTag::Neutral:
      return extend_spine(s, Elim{Elim::BoolElim, nullptr, motive, t, f});
    default:
      internal("boolean elimination on a non-boolean");
  }
}

ValuePtr vel(const ValuePtr& code) {
  switch (code->tag) {
    case VTag::SBool:
      return vmk(VTag::BoolT);
    case VTag::SUnit:
      return vmk(VTag::UnitT);
    case VTag::SUni:
      return vmk(VTag::VType, {}, code->n);
    case VTag::SPi:
      return with_closure(VTag::PiT, {vel(code->args[0])}, map_closure(code->clos[0], Tag::El));
    case VTag::SSg:
      return with_closure(VTag::SgT, {vel(code->args[0])}, map_closure(code->clos[0], Tag::El));
    case VTag::SLift:
    case VTag::Neutral: {
      auto v = std::make_shared<Value>();
      v->tag = VTag::El;
      v->neu = code->neu;
      return v;
    }
    default:
      internal("El of a non-code");
  }
}

ValuePtr vlift(const ValuePtr& code, std::size_t steps) {
  if (steps == 0) return code;
  switch (code->tag) {
    case VTag::SBool:
    case VTag::SUnit:
    case VTag::SUni:
      return code;
    case VTag::SPi:
    case VTag::SSg:
      return with_closure(code->tag, {vlift(code->args[0], steps)}, map_closure(code->clos[0], Tag::CLift, steps));
    case VTag::SLift: {
      auto v = std::make_shared<Value>(*code);
      v->n += steps;
      return v;
    }
    case VTag::Neutral: {
      auto v = std::make_shared<Value>();
      v->tag = VTag::SLift;
      v->n = steps;
      v->neu = code->neu;
      return v;
    }
    default:
      internal("lift of a non-code");
  }
}

ValuePtr cast_step(const ValuePtr& src, const ValuePtr& tgt, const ValuePtr& prf, const ValuePtr& body) {
  if (src->tag == tgt->tag) {
    switch (src->tag) {
      case VTag::SBool:
        return body;
      case VTag::SUnit:
        return vmk(VTag::Tt);
      case VTag::SUni:
        if (src->n == tgt->n) return body;
        break;
      case VTag::SPi: {
        ValuePtr dom_prf = proof_or_star(VTag::Sym, {proof_or_star(VTag::PiFst, {prf})});
        Closure b0 = src->clos[0], b1 = tgt->clos[0];
        ValuePtr a0 = src->args[0], a1 = tgt->args[0];
        Closure fn{{}, nullptr, [=](const ValuePtr& x1) {
                     ValuePtr x0 = cast_step(a1, a0, dom_prf, x1);
                     return cast_step(instantiate(b0, x0), instantiate(b1, x1), vmk(VTag::Star), vapp(body, x0));
                   }};
        return with_closure(VTag::Lam, {}, std::move(fn));
      }
      case VTag::SSg: {
        ValuePtr x0 = vfst(body);
        ValuePtr x1 = cast_step(src->args[0], tgt->args[0], proof_or_star(VTag::SgFst, {prf}), x0);
        ValuePtr snd_prf = prf->tag == VTag::Star ? prf : vmk(VTag::SgSnd, {prf, x0});
        ValuePtr y1 = cast_step(instantiate(src->clos[0], x0), instantiate(tgt->clos[0], x1), snd_prf, vsnd(body));
        return vmk(VTag::Pair, {x1, y1});
      }
      default:
        break;
    }
  }
  Neutral n;
  n.head = HeadKind::CastStuck;
  n.parts = {src, tgt, prf, body};
  return vneutral(std::move(n));
}

ValuePtr eval(const Env& env, const TermPtr& t) {
  auto sub = [&](std::size_t i) { return eval(env, t->args[i]); };
  auto binder = [&](std::size_t i) { return Closure{env, t->args[i], nullptr}; };
  switch (t->tag) {
    case Tag::Var:
      if (t->n >= env.locals.size()) internal("unbound variable");
      return env.locals[env.locals.size() - 1 - t->n];
    case Tag::Ref:
      if (!env.globals || t->n >= env.globals->size()) internal("unknown declaration");
      return (*env.globals)[t->n];
    case Tag::Ann:
      return sub(0);
    case Tag::VType:
      return vmk(VTag::VType, {}, t->n);
    case Tag::El:
      return vel(sub(0));
    case Tag::Pi:
      return with_closure(VTag::PiT, {sub(0)}, binder(1));
    case Tag::Sg:
      return with_closure(VTag::SgT, {sub(0)}, binder(1));
    case Tag::BoolT:
      return vmk(VTag::BoolT);
    case Tag::UnitT:
      return vmk(VTag::UnitT);
    case Tag::PropT:
      return vmk(VTag::PropT);
    case Tag::TopP:
      return vmk(VTag::TopP);
    case Tag::BotP:
      return vmk(VTag::BotP);
    case Tag::ObsEq:
      return vmk(VTag::ObsEq, {sub(0), sub(1)}, t->n);
    case Tag::CBool:
      return vmk(VTag::SBool);
    case Tag::CUnit:
      return vmk(VTag::SUnit);
    case Tag::CPi:
      return with_closure(VTag::SPi, {sub(0)}, binder(1));
    case Tag::CSg:
      return with_closure(VTag::SSg, {sub(0)}, binder(1));
    case Tag::CUni:
      return vmk(VTag::SUni, {}, t->n);
    case Tag::CLift:
      return vlift(sub(0), 1);
    case Tag::Lam:
      return with_closure(VTag::Lam, {}, binder(0));
    case Tag::App:
      return vapp(sub(0), sub(1));
    case Tag::Pair:
      return vmk(VTag::Pair, {sub(0), sub(1)});
    case Tag::Proj1:
      return vfst(sub(0));
    case Tag::Proj2:
      return vsnd(sub(0));
    case Tag::Tt:
      return vmk(VTag::Tt);
    case Tag::True:
      return vmk(VTag::True);
    case Tag::False:
      return vmk(VTag::False);
    case Tag::BoolElim:
      return vbool_elim(binder(0), sub(1), sub(2), sub(3));
    case Tag::Star:
      return vmk(VTag::Star);
    case Tag::Exfalso: {
      Neutral n;
      n.head = HeadKind::Exfalso;
      n.parts = {sub(0), sub(1)};
      return vneutral(std::move(n));
    }
    case Tag::PiFst:
      return vmk(VTag::PiFst, {sub(0)});
    case Tag::PiSnd:
      return vmk(VTag::PiSnd, {sub(0), sub(1)});
    case Tag::SgFst:
      return vmk(VTag::SgFst, {sub(0)});
    case Tag::SgSnd:
      return vmk(VTag::SgSnd, {sub(0), sub(1)});
    case Tag::Sym:
      return vmk(VTag::Sym, {sub(0)});
    case Tag::Refl:
      return vmk(VTag::Refl, {sub(0)});
    case Tag::Cast:
      return cast_step(sub(0), sub(1), sub(2), sub(3));
  }
  internal("unknown term");
}

}  // namespace obtt
