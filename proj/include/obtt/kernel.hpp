#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "obtt/syntax.hpp"

namespace obtt {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

/// Evaluation environment. Locals are indexed by de Bruijn level (index 0 is
/// the outermost binder); globals hold already-evaluated declaration bodies.
struct Env {
  std::shared_ptr<const std::vector<ValuePtr>> globals;
  std::vector<ValuePtr> locals;

  Env extend(ValuePtr v) const;
};

/// A binder body: either syntax under an environment, or a function built by
/// the cast rules.
struct Closure {
  Env env;
  TermPtr body;
  std::function<ValuePtr(const ValuePtr&)> native;
};

enum class VTag {
  Neutral,
  El,  // El applied to a neutral code

  Lam,
  Pair,
  True,
  False,
  Tt,
  Star,

  PiT,
  SgT,
  BoolT,
  UnitT,
  VType,
  PropT,
  TopP,
  BotP,
  ObsEq,

  // semantic codes in weak head normal form
  SBool,
  SUnit,
  SPi,
  SSg,
  SUni,
  SLift,  // lift of a neutral code, `n` counts the levels

  // proof values; all proofs of one proposition are convertible
  PiFst,
  PiSnd,
  SgFst,
  SgSnd,
  Sym,
  Refl,
};

enum class HeadKind { Var, CastStuck, Exfalso };

struct Elim {
  enum Kind { App, Fst, Snd, BoolElim } kind;
  ValuePtr arg;            // App
  Closure motive;          // BoolElim
  ValuePtr on_true, on_false;
};

struct Neutral {
  HeadKind head;
  std::size_t level = 0;       // Var
  std::vector<ValuePtr> parts;  // CastStuck: src, tgt, prf, body; Exfalso: type, prf
  std::vector<Elim> spine;
};

struct Value {
  VTag tag;
  std::size_t n = 0;             // universe level, lift count
  std::vector<ValuePtr> args;    // components
  std::vector<Closure> clos;     // binder bodies (Pi/Sg/Lam codomains)
  std::shared_ptr<const Neutral> neu;  // Neutral, El, SLift
};

ValuePtr vmk(VTag tag, std::vector<ValuePtr> args = {}, std::size_t n = 0);
ValuePtr vvar(std::size_t level);
ValuePtr vneutral(Neutral n);

/// Instantiate a closure.
ValuePtr instantiate(const Closure& c, ValuePtr arg);

ValuePtr eval(const Env& env, const TermPtr& t);

// Eliminators on values.
ValuePtr vapp(const ValuePtr& f, const ValuePtr& a);
ValuePtr vfst(const ValuePtr& p);
ValuePtr vsnd(const ValuePtr& p);
ValuePtr vbool_elim(const Closure& motive, const ValuePtr& t, const ValuePtr& f, const ValuePtr& s);

/// Decode a code value to a type value: El cBool = Bool,
/// El (cPi A B) = Pi (El A) (El . B), El (cUni k) = V k, El (cLift c) = El c.
ValuePtr vel(const ValuePtr& code);

/// Lift a code by `steps` levels. Canonical heads commute with lift; only
/// neutral codes keep an explicit lift.
ValuePtr vlift(const ValuePtr& code, std::size_t steps = 1);

/// Coerce `body : El src` to `El tgt` along `prf : src ~ tgt`.
ValuePtr cast_step(const ValuePtr& src, const ValuePtr& tgt, const ValuePtr& prf, const ValuePtr& body);

/// Read a value back into a normal-form term at the given local depth.
TermPtr quote(std::size_t depth, const ValuePtr& v);

/// The placeholder proof the cast rules use for the function codomain.
bool contains_placeholder(const Term& t);

struct CtxEntry {
  std::string name;
  ValuePtr type;
};

struct Context {
  std::vector<CtxEntry> entries;
  std::size_t max_level = 3;
  std::shared_ptr<const std::vector<ValuePtr>> global_values;
  std::shared_ptr<const std::vector<ValuePtr>> global_types;
  std::vector<std::string> global_names;

  std::size_t depth() const { return entries.size(); }
  Env env() const;
  Context extend(std::string name, ValuePtr type) const;
  /// Names for the printer.
  std::vector<std::string> names() const;
};

Context empty_context(std::size_t max_level = 3);

/// Type-directed conversion.
bool conv(const Context& ctx, const ValuePtr& a, const ValuePtr& b, const ValuePtr& type);
/// Conversion of types.
bool conv_type(const Context& ctx, const ValuePtr& a, const ValuePtr& b);

/// Whether a type value is a proposition, i.e. its inhabitants are irrelevant.
bool is_prop(const ValuePtr& type);

class TypeError : public std::runtime_error {
 public:
  enum class Kind { NotInferable, Mismatch, LevelViolation, Decomposition, NotAType, Scope };
  TypeError(Kind kind, Span span, const std::string& message);
  Kind kind() const { return kind_; }
  Span span() const { return span_; }
  /// The message without the position prefix.
  const std::string& message() const { return message_; }

 private:
  Kind kind_;
  Span span_;
  std::string message_;
};

ValuePtr infer(const Context& ctx, const TermPtr& t);
void check(const Context& ctx, const TermPtr& t, const ValuePtr& type);
/// Check that `t` is a type and return its value.
ValuePtr check_type(const Context& ctx, const TermPtr& t);

struct CheckedDecl {
  std::string name;
  ValuePtr type;
  ValuePtr value;
};

/// Check every declaration in order; earlier declarations unfold in later ones.
/// Throws TypeError naming the failing declaration.
std::vector<CheckedDecl> check_file(const SourceFile& file, std::size_t max_level = 3);

/// Context whose globals are the given checked declarations.
Context file_context(const std::vector<CheckedDecl>& decls, std::size_t max_level = 3);

}  // namespace obtt
