#include <cctype>
#include <unordered_map>

#include "obtt/syntax.hpp"

namespace obtt {
namespace {

enum class Tok { Ident, Number, LParen, RParen, Dot, Comma, Colon, Define, End };

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Span at{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", at});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_' || src_[pos_] == '\''))
          advance();
        out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), at});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        out.push_back({Tok::Number, std::string(src_.substr(start, pos_ - start)), at});
      } else if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
        advance();
        advance();
        out.push_back({Tok::Define, ":=", at});
      } else {
        Tok k;
        switch (c) {
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          case '.': k = Tok::Dot; break;
          case ',': k = Tok::Comma; break;
          case ':': k = Tok::Colon; break;
          default:
            throw SyntaxError(at, std::string("unexpected character '") + c + "'");
        }
        advance();
        out.push_back({k, std::string(1, c), at});
      }
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

const std::unordered_map<std::string, Tag>& keywords() {
  static const std::unordered_map<std::string, Tag> table = [] {
    std::unordered_map<std::string, Tag> m;
    for (int i = 0; i <= static_cast<int>(Tag::Cast); ++i) {
      auto tag = static_cast<Tag>(i);
      auto kw = keyword(tag);
      if (!kw.empty()) m.emplace(std::string(kw), tag);
    }
    return m;
  }();
  return table;
}

bool takes_level(Tag tag) { return tag == Tag::VType || tag == Tag::CUni || tag == Tag::ObsEq; }

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<std::string> globals)
      : toks_(std::move(toks)), globals_(std::move(globals)) {}

  SourceFile file() {
    SourceFile out;
    while (peek().kind != Tok::End) {
      const Token& kw = next();
      if (kw.kind != Tok::Ident || kw.text != "def") throw SyntaxError(kw.span, "expected 'def'");
      const Token& name = expect(Tok::Ident, "declaration name");
      if (keywords().count(name.text) || name.text == "def" || name.text == "_")
        throw SyntaxError(name.span, "'" + name.text + "' is reserved");
      if (out.find(name.text)) throw SyntaxError(name.span, "duplicate declaration '" + name.text + "'");
      Decl d;
      d.name = name.text;
      d.span = kw.span;
      if (peek().kind == Tok::Colon) {
        next();
        d.annotation = term();
      }
      expect(Tok::Define, "':='");
      d.body = term();
      globals_.push_back(d.name);
      out.decls.push_back(std::move(d));
    }
    return out;
  }

  TermPtr single() {
    auto t = term();
    if (peek().kind != Tok::End) throw SyntaxError(peek().span, "unexpected trailing input");
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  const Token& expect(Tok kind, const char* what) {
    const Token& t = peek();
    if (t.kind != kind) throw SyntaxError(t.span, std::string("expected ") + what);
    return next();
  }

  static TermPtr at(TermPtr t, Span span) {
    const_cast<Term&>(*t).span = span;
    return t;
  }

  TermPtr term() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "fun") {
      next();
      auto [name, body] = binder_body();
      return at(mk(Tag::Lam, {body}, 0, name), t.span);
    }
    return application();
  }

  // `x . body`, with `x` bound in body
  std::pair<std::string, TermPtr> binder_body() {
    const Token& name = expect(Tok::Ident, "binder name");
    if (keywords().count(name.text)) throw SyntaxError(name.span, "'" + name.text + "' is reserved");
    expect(Tok::Dot, "'.'");
    locals_.push_back(name.text);
    TermPtr body;
    try {
      body = term();
    } catch (...) {
      locals_.pop_back();
      throw;
    }
    locals_.pop_back();
    return {name.text, body};
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.kind == Tok::LParen) return true;
    if (t.kind != Tok::Ident) return false;
    if (t.text == "fun" || t.text == "def") return false;
    return true;
  }

  TermPtr application() {
    Span span = peek().span;
    TermPtr fn = head();
    while (starts_atom()) {
      TermPtr arg = atom();
      fn = at(mk(Tag::App, {fn, arg}), span);
    }
    return fn;
  }

  TermPtr head() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      auto it = keywords().find(t.text);
      if (it != keywords().end() && (arity(it->second).count > 0 || takes_level(it->second)) &&
          it->second != Tag::Lam) {
        next();
        return keyword_form(it->second, t.span);
      }
    }
    return atom();
  }

  TermPtr keyword_form(Tag tag, Span span) {
    std::size_t level = 0;
    if (takes_level(tag)) {
      const Token& num = expect(Tok::Number, "universe level");
      level = std::stoul(num.text);
    }
    const Arity& ar = arity(tag);
    std::vector<TermPtr> args;
    std::string name;
    for (std::size_t i = 0; i < ar.count; ++i) {
      if (ar.binds[i]) {
        expect(Tok::LParen, "'(' opening a binder");
        auto [n, body] = binder_body();
        expect(Tok::RParen, "')'");
        name = n;
        args.push_back(body);
      } else {
        if (!starts_atom()) throw SyntaxError(peek().span, "missing argument to '" + std::string(keyword(tag)) + "'");
        args.push_back(atom());
      }
    }
    return at(mk(tag, std::move(args), level, name), span);
  }

  TermPtr atom() {
    const Token& t = next();
    if (t.kind == Tok::LParen) {
      TermPtr inner = term();
      if (peek().kind == Tok::Comma) {
        next();
        TermPtr snd = term();
        expect(Tok::RParen, "')'");
        return at(mk(Tag::Pair, {inner, snd}), t.span);
      }
      if (peek().kind == Tok::Colon) {
        next();
        TermPtr ty = term();
        expect(Tok::RParen, "')'");
        return at(mk(Tag::Ann, {inner, ty}), t.span);
      }
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind != Tok::Ident) throw SyntaxError(t.span, "expected a term");
    auto it = keywords().find(t.text);
    if (it != keywords().end()) {
      if (arity(it->second).count > 0 || takes_level(it->second))
        return keyword_form(it->second, t.span);
      return at(mk(it->second), t.span);
    }
    for (std::size_t i = locals_.size(); i-- > 0;) {
      if (locals_[i] == t.text && t.text != "_") return at(mk_var(locals_.size() - 1 - i, t.text), t.span);
    }
    for (std::size_t i = globals_.size(); i-- > 0;) {
      if (globals_[i] == t.text) return at(mk(Tag::Ref, {}, i, t.text), t.span);
    }
    throw SyntaxError(t.span, "unbound identifier '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> globals_;
  std::vector<std::string> locals_;
};

}  // namespace

SourceFile parse(std::string_view text) {
  Parser p(Lexer(text).run(), {});
  return p.file();
}

TermPtr parse_term(std::string_view text, const std::vector<std::string>& globals) {
  Parser p(Lexer(text).run(), globals);
  return p.single();
}

}  // namespace obtt
