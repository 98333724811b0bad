#include "obtt/kernel.hpp"

namespace obtt {

Env Context::env() const {
  Env e;
  e.globals = global_values;
  for (std::size_t i = 0; i < entries.size(); ++i) e.locals.push_back(vvar(i));
  return e;
}

Context Context::extend(std::string name, ValuePtr type) const {
  Context c = *this;
  c.entries.push_back({std::move(name), std::move(type)});
  return c;
}

std::vector<std::string> Context::names() const { return global_names; }

Context empty_context(std::size_t max_level) {
  Context c;
  c.max_level = max_level;
  c.global_values = std::make_shared<const std::vector<ValuePtr>>();
  c.global_types = std::make_shared<const std::vector<ValuePtr>>();
  return c;
}

bool is_prop(const ValuePtr& type) {
  switch (type->tag) {
    case VTag::TopP:
    case VTag::BotP:
    case VTag::ObsEq:
    case VTag::Neutral:
      return true;
    default:
      return false;
  }
}

namespace {

bool conv_code(const Context& ctx, const ValuePtr& a, const ValuePtr& b);

// Compares two neutrals; on success returns the type of the neutral, which
// is needed to compare later spine arguments.
ValuePtr conv_neutral(const Context& ctx, const Neutral& a, const Neutral& b) {
  if (a.head != b.head || a.spine.size() != b.spine.size()) return nullptr;
  ValuePtr type;
  switch (a.head) {
    case HeadKind::Var:
      if (a.level != b.level) return nullptr;
      type = ctx.entries[a.level].type;
      break;
    case HeadKind::CastStuck:
      if (!conv_code(ctx, a.parts[0], b.parts[0]) || !conv_code(ctx, a.parts[1], b.parts[1])) return nullptr;
      if (!conv(ctx, a.parts[3], b.parts[3], vel(a.parts[0]))) return nullptr;
      type = vel(a.parts[1]);
      break;
    case HeadKind::Exfalso:
      if (!conv_type(ctx, a.parts[0], b.parts[0])) return nullptr;
      type = a.parts[0];
      break;
  }
  // Rebuild the prefix value as we go; later eliminators' types depend on it.
  Neutral prefix{a.head, a.level, a.parts, {}};
  for (std::size_t i = 0; i < a.spine.size(); ++i) {
    const Elim& ea = a.spine[i];
    const Elim& eb = b.spine[i];
    if (ea.kind != eb.kind) return nullptr;
    ValuePtr here = vneutral(prefix);
    switch (ea.kind) {
      case Elim::App:
        if (type->tag != VTag::PiT) return nullptr;
        if (!conv(ctx, ea.arg, eb.arg, type->args[0])) return nullptr;
        type = instantiate(type->clos[0], ea.arg);
        break;
      case Elim::Fst:
        if (type->tag != VTag::SgT) return nullptr;
        type = type->args[0];
        break;
      case Elim::Snd:
        if (type->tag != VTag::SgT) return nullptr;
        type = instantiate(type->clos[0], vfst(here));
        break;
      case Elim::BoolElim: {
        ValuePtr x = vvar(ctx.depth());
        Context inner = ctx.extend("b", vmk(VTag::BoolT));
        if (!conv_type(inner, instantiate(ea.motive, x), instantiate(eb.motive, x))) return nullptr;
        if (!conv(ctx, ea.on_true, eb.on_true, instantiate(ea.motive, vmk(VTag::True)))) return nullptr;
        if (!conv(ctx, ea.on_false, eb.on_false, instantiate(ea.motive, vmk(VTag::False)))) return nullptr;
        type = instantiate(ea.motive, here);
        break;
      }
    }
    prefix.spine.push_back(ea);
  }
  return type;
}

bool conv_family(const Context& ctx, const ValuePtr& dom, const Closure& a, const Closure& b,
                 bool (*cmp)(const Context&, const ValuePtr&, const ValuePtr&)) {
  ValuePtr x = vvar(ctx.depth());
  Context inner = ctx.extend("x", dom);
  return cmp(inner, instantiate(a, x), instantiate(b, x));
}

bool conv_code(const Context& ctx, const ValuePtr& a, const ValuePtr& b) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case VTag::SBool:
    case VTag::SUnit:
      return true;
    case VTag::SUni:
      return a->n == b->n;
    case VTag::SPi:
    case VTag::SSg:
      return conv_code(ctx, a->args[0], b->args[0]) &&
             conv_family(ctx, vel(a->args[0]), a->clos[0], b->clos[0], conv_code);
    case VTag::SLift:
      return a->n == b->n && conv_neutral(ctx, *a->neu, *b->neu) != nullptr;
    case VTag::Neutral:
      return conv_neutral(ctx, *a->neu, *b->neu) != nullptr;
    default:
      return false;
  }
}

}  // namespace

bool conv_type(const Context& ctx, const ValuePtr& a, const ValuePtr& b) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case VTag::PiT:
    case VTag::SgT:
      return conv_type(ctx, a->args[0], b->args[0]) &&
             conv_family(ctx, a->args[0], a->clos[0], b->clos[0], conv_type);
    case VTag::BoolT:
    case VTag::UnitT:
    case VTag::PropT:
    case VTag::TopP:
    case VTag::BotP:
      return true;
    case VTag::VType:
      return a->n == b->n;
    case VTag::ObsEq:
      return a->n == b->n && conv_code(ctx, a->args[0], b->args[0]) && conv_code(ctx, a->args[1], b->args[1]);
    case VTag::El:
    case VTag::Neutral:
      return conv_neutral(ctx, *a->neu, *b->neu) != nullptr;
    default:
      return false;
  }
}

bool conv(const Context& ctx, const ValuePtr& a, const ValuePtr& b, const ValuePtr& type) {
  if (is_prop(type)) return true;
  switch (type->tag) {
    case VTag::PiT: {
      ValuePtr x = vvar(ctx.depth());
      Context inner = ctx.extend("x", type->args[0]);
      return conv(inner, vapp(a, x), vapp(b, x), instantiate(type->clos[0], x));
    }
    case VTag::SgT: {
      ValuePtr fa = vfst(a);
      return conv(ctx, fa, vfst(b), type->args[0]) && conv(ctx, vsnd(a), vsnd(b), instantiate(type->clos[0], fa));
    }
    case VTag::UnitT:
      return true;
    case VTag::VType:
      return conv_code(ctx, a, b);
    case VTag::PropT:
      return conv_type(ctx, a, b);
    default:
      break;
  }
  if (a->tag == VTag::Neutral && b->tag == VTag::Neutral) return conv_neutral(ctx, *a->neu, *b->neu) != nullptr;
  if (a->tag != b->tag) return false;
  return a->tag == VTag::True || a->tag == VTag::False;
}

}  // namespace obtt
