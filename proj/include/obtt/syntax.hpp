#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace obtt {

struct Span {
  std::size_t line = 0;  // 1-based; 0 means "no position"
  std::size_t col = 0;
};

enum class Tag {
  // variables
  Var,  // de Bruijn index into the local context
  Ref,  // earlier top-level declaration (index into the file)
  Ann,  // (t : T)

  // types
  VType,  // V i
  El,
  Pi,
  Sg,
  BoolT,
  UnitT,
  PropT,
  TopP,
  BotP,
  ObsEq,  // Eq k a b

  // codes
  CBool,
  CUnit,
  CPi,
  CSg,
  CUni,
  CLift,

  // terms
  Lam,
  App,
  Pair,
  Proj1,
  Proj2,
  Tt,
  True,
  False,
  BoolElim,  // args: motive (binder), onTrue, onFalse, scrutinee

  // proofs
  Star,
  Exfalso,  // args: motive type, proof
  PiFst,
  PiSnd,
  SgFst,
  SgSnd,
  Sym,
  Refl,
  Cast,  // args: src code, tgt code, proof, body
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Core syntax node. Children live in `args`; a child that binds one variable
/// is flagged in `binds`. `n` carries the de Bruijn index, declaration index,
/// or universe level depending on the tag.
struct Term {
  Tag tag;
  std::size_t n = 0;
  std::vector<TermPtr> args;
  std::vector<bool> binds;
  std::string name;  // binder hint or declaration name; ignored by equality
  Span span;
};

/// Number of children and which of them bind, per tag.
struct Arity {
  std::size_t count;
  std::vector<bool> binds;
};
const Arity& arity(Tag tag);

/// Surface keyword for tags with a fixed keyword, empty otherwise.
std::string_view keyword(Tag tag);

TermPtr mk(Tag tag, std::vector<TermPtr> args = {}, std::size_t n = 0, std::string name = {});
TermPtr mk_var(std::size_t index, std::string name = {});

/// Structural equality ignoring names and spans.
bool same_term(const Term& a, const Term& b);
inline bool same_term(const TermPtr& a, const TermPtr& b) { return same_term(*a, *b); }

/// True when variable `index` (relative to the term's own scope) occurs free.
bool occurs(const Term& t, std::size_t index);

/// Every binder in the term is closed over by at most `depth` outer variables.
bool well_scoped(const Term& t, std::size_t depth);

struct Decl {
  std::string name;
  TermPtr annotation;  // may be null: the body must then be inferable
  TermPtr body;
  Span span;
};

struct SourceFile {
  std::vector<Decl> decls;

  /// Index of a declaration by name.
  std::optional<std::size_t> find(std::string_view name) const;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(Span span, const std::string& message);
  Span span() const { return span_; }

 private:
  Span span_;
};

SourceFile parse(std::string_view text);

/// Parse a single term against a list of declaration names (for tests and
/// the CLI). Local variables start empty.
TermPtr parse_term(std::string_view text, const std::vector<std::string>& globals = {});

/// Render a term in surface syntax. `globals` names Ref nodes; `depth` is the
/// number of enclosing local binders, which print as x0, x1, ... by level.
std::string print(const Term& t, const std::vector<std::string>& globals = {}, std::size_t depth = 0);
inline std::string print(const TermPtr& t, const std::vector<std::string>& globals = {},
                         std::size_t depth = 0) {
  return print(*t, globals, depth);
}

std::string print(const SourceFile& file);

}  // namespace obtt
