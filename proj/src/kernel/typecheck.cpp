#include <sstream>

#include "obtt/kernel.hpp"

namespace obtt {

namespace {

std::string with_span(Span span, const std::string& message) {
  if (span.line == 0) return message;
  std::ostringstream out;
  out << span.line << ':' << span.col << ": " << message;
  return out.str();
}

}  // namespace

TypeError::TypeError(Kind kind, Span span, const std::string& message)
    : std::runtime_error(with_span(span, message)), kind_(kind), span_(span), message_(message) {}

namespace {

using K = TypeError::Kind;

std::string show(const Context& ctx, const ValuePtr& v) { return print(quote(ctx.depth(), v), ctx.names(), ctx.depth()); }

[[noreturn]] void fail(K kind, const TermPtr& t, const std::string& message) { throw TypeError(kind, t->span, message); }

ValuePtr evaluate(const Context& ctx, const TermPtr& t) { return eval(ctx.env(), t); }

// Level of a code, inferring its type.
std::size_t code_level(const Context& ctx, const TermPtr& code) {
  ValuePtr ty = infer(ctx, code);
  if (ty->tag != VTag::VType) fail(K::Mismatch, code, "expected a code, but it has type " + show(ctx, ty));
  return ty->n;
}

void need_level(const Context& ctx, const TermPtr& t, std::size_t level) {
  if (level > ctx.max_level)
    fail(K::LevelViolation, t, "universe level " + std::to_string(level) + " exceeds the maximum level " +
                                   std::to_string(ctx.max_level));
}

struct EqSides {
  std::size_t level;
  ValuePtr lhs, rhs;
};

EqSides expect_eq(const Context& ctx, const TermPtr& prf) {
  ValuePtr ty = infer(ctx, prf);
  if (ty->tag != VTag::ObsEq) fail(K::Mismatch, prf, "expected an equality proof, but it proves " + show(ctx, ty));
  return {ty->n, ty->args[0], ty->args[1]};
}

EqSides decompose(const Context& ctx, const TermPtr& t, VTag head, const char* rule) {
  EqSides eq = expect_eq(ctx, t->args[0]);
  if (eq.lhs->tag != head || eq.rhs->tag != head) {
    const char* want = head == VTag::SPi ? "cPi" : "cSg";
    fail(K::Decomposition, t,
         std::string(rule) + " needs an equality between " + want + " codes, got " +
             show(ctx, vmk(VTag::ObsEq, {eq.lhs, eq.rhs}, eq.level)));
  }
  return eq;
}

void check_code_family(const Context& ctx, const TermPtr& t, std::size_t level) {
  ValuePtr level_ty = vmk(VTag::VType, {}, level);
  check(ctx, t->args[0], level_ty);
  ValuePtr dom = vel(evaluate(ctx, t->args[0]));
  check(ctx.extend(t->name, dom), t->args[1], level_ty);
}

}  // namespace

ValuePtr check_type(const Context& ctx, const TermPtr& t) {
  switch (t->tag) {
    case Tag::Pi:
    case Tag::Sg: {
      ValuePtr dom = check_type(ctx, t->args[0]);
      check_type(ctx.extend(t->name, dom), t->args[1]);
      return evaluate(ctx, t);
    }
    case Tag::BoolT:
    case Tag::UnitT:
    case Tag::PropT:
    case Tag::TopP:
    case Tag::BotP:
      return evaluate(ctx, t);
    case Tag::VType:
      need_level(ctx, t, t->n);
      return evaluate(ctx, t);
    case Tag::El:
      code_level(ctx, t->args[0]);
      return evaluate(ctx, t);
    default:
      break;
  }
  ValuePtr ty;
  try {
    ty = infer(ctx, t);
  } catch (const TypeError& e) {
    if (e.kind() != K::NotInferable) throw;
    fail(K::NotAType, t, "expected a type: " + e.message());
  }
  if (ty->tag != VTag::PropT) fail(K::NotAType, t, "expected a type, got a term of type " + show(ctx, ty));
  return evaluate(ctx, t);
}

ValuePtr infer(const Context& ctx, const TermPtr& t) {
  switch (t->tag) {
    case Tag::Var:
      if (t->n >= ctx.depth()) fail(K::Scope, t, "variable out of scope");
      return ctx.entries[ctx.depth() - 1 - t->n].type;
    case Tag::Ref:
      if (!ctx.global_types || t->n >= ctx.global_types->size()) fail(K::Scope, t, "unknown declaration");
      return (*ctx.global_types)[t->n];
    case Tag::Ann: {
      ValuePtr ty = check_type(ctx, t->args[1]);
      check(ctx, t->args[0], ty);
      return ty;
    }
    case Tag::App: {
      ValuePtr fn = infer(ctx, t->args[0]);
      if (fn->tag != VTag::PiT) fail(K::Mismatch, t, "applying a non-function of type " + show(ctx, fn));
      check(ctx, t->args[1], fn->args[0]);
      return instantiate(fn->clos[0], evaluate(ctx, t->args[1]));
    }
    case Tag::Proj1:
    case Tag::Proj2: {
      ValuePtr ty = infer(ctx, t->args[0]);
      if (ty->tag != VTag::SgT) fail(K::Mismatch, t, "projecting from a non-pair of type " + show(ctx, ty));
      if (t->tag == Tag::Proj1) return ty->args[0];
      return instantiate(ty->clos[0], vfst(evaluate(ctx, t->args[0])));
    }
    case Tag::True:
    case Tag::False:
      return vmk(VTag::BoolT);
    case Tag::Tt:
      return vmk(VTag::UnitT);
    case Tag::Star:
      return vmk(VTag::TopP);
    case Tag::BoolElim: {
      check_type(ctx.extend(t->name, vmk(VTag::BoolT)), t->args[0]);
      check(ctx, t->args[3], vmk(VTag::BoolT));
      Closure motive{ctx.env(), t->args[0], nullptr};
      check(ctx, t->args[1], instantiate(motive, vmk(VTag::True)));
      check(ctx, t->args[2], instantiate(motive, vmk(VTag::False)));
      return instantiate(motive, evaluate(ctx, t->args[3]));
    }
    case Tag::CBool:
    case Tag::CUnit:
      return vmk(VTag::VType, {}, 0);
    case Tag::CUni:
      need_level(ctx, t, t->n + 1);
      return vmk(VTag::VType, {}, t->n + 1);
    case Tag::CPi:
    case Tag::CSg: {
      std::size_t level = code_level(ctx, t->args[0]);
      check_code_family(ctx, t, level);
      return vmk(VTag::VType, {}, level);
    }
    case Tag::CLift: {
      std::size_t level = code_level(ctx, t->args[0]) + 1;
      need_level(ctx, t, level);
      return vmk(VTag::VType, {}, level);
    }
    case Tag::TopP:
    case Tag::BotP:
      return vmk(VTag::PropT);
    case Tag::ObsEq: {
      need_level(ctx, t, t->n);
      ValuePtr level_ty = vmk(VTag::VType, {}, t->n);
      check(ctx, t->args[0], level_ty);
      check(ctx, t->args[1], level_ty);
      return vmk(VTag::PropT);
    }
    case Tag::Refl: {
      std::size_t level = code_level(ctx, t->args[0]);
      ValuePtr c = evaluate(ctx, t->args[0]);
      return vmk(VTag::ObsEq, {c, c}, level);
    }
    case Tag::Sym: {
      EqSides eq = expect_eq(ctx, t->args[0]);
      return vmk(VTag::ObsEq, {eq.rhs, eq.lhs}, eq.level);
    }
    case Tag::PiFst:
    case Tag::SgFst: {
      EqSides eq = decompose(ctx, t, t->tag == Tag::PiFst ? VTag::SPi : VTag::SSg,
                             t->tag == Tag::PiFst ? "piFst" : "sgFst");
      return vmk(VTag::ObsEq, {eq.lhs->args[0], eq.rhs->args[0]}, eq.level);
    }
    case Tag::PiSnd:
    case Tag::SgSnd: {
      bool pi = t->tag == Tag::PiSnd;
      EqSides eq = decompose(ctx, t, pi ? VTag::SPi : VTag::SSg, pi ? "piSnd" : "sgSnd");
      ValuePtr a0 = eq.lhs->args[0], a1 = eq.rhs->args[0];
      check(ctx, t->args[1], vel(a0));
      ValuePtr x0 = evaluate(ctx, t->args[1]);
      ValuePtr fst_prf = vmk(pi ? VTag::PiFst : VTag::SgFst, {evaluate(ctx, t->args[0])});
      ValuePtr x1 = cast_step(a0, a1, fst_prf, x0);
      return vmk(VTag::ObsEq, {instantiate(eq.lhs->clos[0], x0), instantiate(eq.rhs->clos[0], x1)}, eq.level);
    }
    case Tag::Cast: {
      std::size_t level = code_level(ctx, t->args[0]);
      ValuePtr level_ty = vmk(VTag::VType, {}, level);
      check(ctx, t->args[1], level_ty);
      ValuePtr src = evaluate(ctx, t->args[0]);
      ValuePtr tgt = evaluate(ctx, t->args[1]);
      check(ctx, t->args[2], vmk(VTag::ObsEq, {src, tgt}, level));
      check(ctx, t->args[3], vel(src));
      return vel(tgt);
    }
    case Tag::Exfalso: {
      ValuePtr ty = check_type(ctx, t->args[0]);
      check(ctx, t->args[1], vmk(VTag::BotP));
      return ty;
    }
    case Tag::Lam:
    case Tag::Pair:
      fail(K::NotInferable, t, "cannot infer the type of " + print(t, ctx.names(), ctx.depth()) +
                                   "; add an annotation");
    default:
      fail(K::NotInferable, t, print(t, ctx.names(), ctx.depth()) + " is a type, not a term");
  }
}

void check(const Context& ctx, const TermPtr& t, const ValuePtr& type) {
  switch (t->tag) {
    case Tag::Lam:
      if (type->tag != VTag::PiT) fail(K::Mismatch, t, "a function cannot have type " + show(ctx, type));
      {
        ValuePtr x = vvar(ctx.depth());
        check(ctx.extend(t->name, type->args[0]), t->args[0], instantiate(type->clos[0], x));
      }
      return;
    case Tag::Pair:
      if (type->tag != VTag::SgT) fail(K::Mismatch, t, "a pair cannot have type " + show(ctx, type));
      check(ctx, t->args[0], type->args[0]);
      check(ctx, t->args[1], instantiate(type->clos[0], evaluate(ctx, t->args[0])));
      return;
    case Tag::CBool:
    case Tag::CUnit:
      if (type->tag == VTag::VType) return;
      break;
    case Tag::CUni:
      if (type->tag == VTag::VType) {
        if (t->n >= type->n)
          fail(K::LevelViolation, t,
               "cUni " + std::to_string(t->n) + " is not a code in V " + std::to_string(type->n) +
                   "; only smaller universes have codes there");
        return;
      }
      break;
    case Tag::CPi:
    case Tag::CSg:
      if (type->tag == VTag::VType) {
        check_code_family(ctx, t, type->n);
        return;
      }
      break;
    case Tag::CLift:
      if (type->tag == VTag::VType) {
        if (type->n == 0) fail(K::LevelViolation, t, "cLift produces a code of level at least 1, not V 0");
        check(ctx, t->args[0], vmk(VTag::VType, {}, type->n - 1));
        return;
      }
      break;
    // Checked at the expected level, so normal forms with the lifts gone
    // still check against the original annotation.
    case Tag::Refl:
      if (type->tag == VTag::ObsEq) {
        ValuePtr level_ty = vmk(VTag::VType, {}, type->n);
        check(ctx, t->args[0], level_ty);
        ValuePtr c = evaluate(ctx, t->args[0]);
        if (!conv(ctx, c, type->args[0], level_ty) || !conv(ctx, c, type->args[1], level_ty))
          fail(K::Mismatch, t,
               "type mismatch\n  expected: " + show(ctx, type) + "\n  actual:   " +
                   show(ctx, vmk(VTag::ObsEq, {c, c}, type->n)));
        return;
      }
      break;
    case Tag::Sym:
      if (type->tag == VTag::ObsEq) {
        check(ctx, t->args[0], vmk(VTag::ObsEq, {type->args[1], type->args[0]}, type->n));
        return;
      }
      break;
    default:
      break;
  }
  ValuePtr actual = infer(ctx, t);
  if (!conv_type(ctx, actual, type))
    fail(K::Mismatch, t,
         "type mismatch\n  expected: " + show(ctx, type) + "\n  actual:   " + show(ctx, actual));
}

Context file_context(const std::vector<CheckedDecl>& decls, std::size_t max_level) {
  Context ctx = empty_context(max_level);
  auto values = std::make_shared<std::vector<ValuePtr>>();
  auto types = std::make_shared<std::vector<ValuePtr>>();
  for (const auto& d : decls) {
    values->push_back(d.value);
    types->push_back(d.type);
    ctx.global_names.push_back(d.name);
  }
  ctx.global_values = values;
  ctx.global_types = types;
  return ctx;
}

std::vector<CheckedDecl> check_file(const SourceFile& file, std::size_t max_level) {
  std::vector<CheckedDecl> out;
  for (const auto& d : file.decls) {
    Context ctx = file_context(out, max_level);
    try {
      ValuePtr type;
      if (d.annotation) {
        type = check_type(ctx, d.annotation);
        check(ctx, d.body, type);
      } else {
        type = infer(ctx, d.body);
      }
      out.push_back({d.name, type, eval(ctx.env(), d.body)});
    } catch (const TypeError& e) {
      throw TypeError(e.kind(), e.span(), "in '" + d.name + "': " + e.message());
    }
  }
  return out;
}

}  // namespace obtt
