#include "obtt/syntax.hpp"

#include <sstream>

namespace obtt {
namespace {

bool has_level(Tag tag) { return tag == Tag::VType || tag == Tag::CUni || tag == Tag::ObsEq; }

bool is_atom(const Term& t) {
  switch (t.tag) {
    case Tag::Var:
    case Tag::Ref:
    case Tag::Ann:
    case Tag::Pair:
      return true;
    case Tag::VType:
    case Tag::CUni:
      return false;
    default:
      return t.args.empty();
  }
}

class Printer {
 public:
  explicit Printer(const std::vector<std::string>& globals) : globals_(globals) {}

  void term(const Term& t, std::size_t depth) {
    switch (t.tag) {
      case Tag::Lam: {
        out_ << "fun " << binder_name(*t.args[0], depth) << " . ";
        term(*t.args[0], depth + 1);
        return;
      }
      case Tag::App:
        head(*t.args[0], depth);
        out_ << ' ';
        atom(*t.args[1], depth);
        return;
      default:
        break;
    }
    if (is_atom(t)) {
      atom(t, depth);
      return;
    }
    out_ << keyword(t.tag);
    if (has_level(t.tag)) out_ << ' ' << t.n;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      out_ << ' ';
      if (t.binds[i]) {
        out_ << '(' << binder_name(*t.args[i], depth) << " . ";
        term(*t.args[i], depth + 1);
        out_ << ')';
      } else {
        atom(*t.args[i], depth);
      }
    }
  }

  std::string str() const { return out_.str(); }

 private:
  void head(const Term& t, std::size_t depth) {
    if (t.tag == Tag::Lam) {
      paren(t, depth);
    } else {
      term(t, depth);
    }
  }

  void paren(const Term& t, std::size_t depth) {
    out_ << '(';
    term(t, depth);
    out_ << ')';
  }

  void atom(const Term& t, std::size_t depth) {
    switch (t.tag) {
      case Tag::Var:
        if (t.n < depth) {
          out_ << 'x' << (depth - 1 - t.n);
        } else {
          out_ << "?free" << (t.n - depth);
        }
        return;
      case Tag::Ref:
        if (t.n < globals_.size()) {
          out_ << globals_[t.n];
        } else {
          out_ << "?ref" << t.n;
        }
        return;
      case Tag::Ann:
        out_ << '(';
        term(*t.args[0], depth);
        out_ << " : ";
        term(*t.args[1], depth);
        out_ << ')';
        return;
      case Tag::Pair:
        out_ << '(';
        term(*t.args[0], depth);
        out_ << ", ";
        term(*t.args[1], depth);
        out_ << ')';
        return;
      default:
        break;
    }
    if (is_atom(t)) {
      out_ << keyword(t.tag);
    } else {
      paren(t, depth);
    }
  }

  static std::string binder_name(const Term& body, std::size_t depth) {
    if (!occurs(body, 0)) return "_";
    return "x" + std::to_string(depth);
  }

  const std::vector<std::string>& globals_;
  std::ostringstream out_;
};

}  // namespace

std::string print(const Term& t, const std::vector<std::string>& globals, std::size_t depth) {
  Printer p(globals);
  p.term(t, depth);
  return p.str();
}

std::string print(const SourceFile& file) {
  std::vector<std::string> names;
  std::ostringstream out;
  for (const auto& d : file.decls) {
    out << "def " << d.name;
    if (d.annotation) out << " : " << print(*d.annotation, names);
    out << "\n  := " << print(*d.body, names) << "\n\n";
    names.push_back(d.name);
  }
  return out.str();
}

}  // namespace obtt
