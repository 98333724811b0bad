#pragma once

#include <atomic>
#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "obtt/canon.hpp"

namespace obtt {

// What the code algebra needs from a host universe. Elements live at stages;
// code families over a decoded domain are indexed 0..indexCount-1, each index
// sitting at a stage, with edges saying which entries are restrictions of
// which.
template <class H>
concept HostUniverse = requires(const H& h, const typename H::Element& x, typename H::Stage c,
                                typename H::Arrow u, std::size_t n, const std::vector<typename H::Element>& es) {
  { h.elemEq(x, x) } -> std::convertible_to<bool>;
  { h.stageOf(x) } -> std::convertible_to<typename H::Stage>;
  { h.levels() } -> std::convertible_to<std::size_t>;
  { h.stages() } -> std::convertible_to<std::size_t>;
  { h.stageElements(n, c) } -> std::convertible_to<const std::vector<typename H::Element>&>;
  { h.indexCount(x) } -> std::convertible_to<std::size_t>;
  { h.indexStage(x, n) } -> std::convertible_to<typename H::Stage>;
  { h.indexArrow(x, n) } -> std::convertible_to<typename H::Arrow>;
  { h.restrictionEdges(x) };
  { h.reindexMap(x, u) } -> std::convertible_to<std::vector<std::size_t>>;
  { h.restrictElem(x, u) } -> std::convertible_to<typename H::Element>;
  { h.src(u) } -> std::convertible_to<typename H::Stage>;
  { h.dst(u) } -> std::convertible_to<typename H::Stage>;
  { h.tabulate(c, std::function<std::vector<CanonVal>(typename H::Stage)>{},
               std::function<CanonVal(const CanonVal&, typename H::Arrow)>{}) } -> std::convertible_to<typename H::Element>;
  { h.boolElem(c) } -> std::convertible_to<typename H::Element>;
  { h.unitElem(c) } -> std::convertible_to<typename H::Element>;
  { h.sections(x, es) } -> std::convertible_to<typename H::Element>;
  { h.pairs(x, es) } -> std::convertible_to<typename H::Element>;
  { h.hostPi(x, es) } -> std::convertible_to<typename H::Element>;
  { h.hostLift(x, n, n) } -> std::convertible_to<typename H::Element>;
  { h.strictPi() } -> std::convertible_to<bool>;
  { h.encode(x) } -> std::convertible_to<CanonVal>;
  { h.cap() } -> std::convertible_to<std::size_t>;
};

enum class CodeKind { Up, Bool, Unit, Fn, Sg, Uni };

template <class H>
struct CodeFamily;

template <class H>
struct Code {
  CodeKind kind;
  std::size_t level = 0;
  typename H::Stage stage{};
  typename H::Element up{};  // Up
  std::size_t uni = 0;       // Uni
  std::shared_ptr<const Code> dom;                 // Fn, Sg
  std::shared_ptr<const CodeFamily<H>> cod;        // Fn, Sg

  Code(CodeKind k, std::size_t l, typename H::Stage s, typename H::Element x, std::size_t n,
       std::shared_ptr<const Code> d, std::shared_ptr<const CodeFamily<H>> f)
      : kind(k), level(l), stage(s), up(std::move(x)), uni(n), dom(std::move(d)), cod(std::move(f)) {}

  // Codes are immutable, so their decoding is computed at most once.
  mutable std::atomic<bool> decodedReady{false};
  mutable std::mutex decodedMutex;
  mutable typename H::Element decoded{};
};

template <class H>
using CodePtr = std::shared_ptr<const Code<H>>;

// Either a table with one code per index of the decoded domain, or a single
// code at the domain's stage, restricted to each index's stage.
template <class H>
struct CodeFamily {
  bool constant = false;
  CodePtr<H> value;                  // constant
  std::vector<CodePtr<H>> entries;   // tabulated
};

template <class H>
using FamilyPtr = std::shared_ptr<const CodeFamily<H>>;

template <HostUniverse H>
class IRUniverse {
 public:
  using Element = typename H::Element;
  using Stage = typename H::Stage;
  using Arrow = typename H::Arrow;
  using C = CodePtr<H>;
  using F = FamilyPtr<H>;

  // Dec(uni k) is named by the codes of V_k up to depth uniDepth.
  IRUniverse(const H& host, std::size_t uniDepth) : host_(host), uniDepth_(uniDepth) {
    for (std::size_t k = 0; k + 1 < host_.levels(); ++k) {
      uniCodes_.emplace_back();
      for (Stage d = 0; d < host_.stages(); ++d) {
        std::map<CanonVal, C> byCode;
        for (const C& c : enumCodes(k, d, uniDepth_)) byCode.emplace(encode(c), c);
        uniCodes_.back().push_back(std::move(byCode));
      }
    }
  }

  const H& host() const { return host_; }
  std::size_t uniDepth() const { return uniDepth_; }

  // ---- constructors ----
  C up(std::size_t level, const Element& x) const {
    return std::make_shared<Code<H>>(CodeKind::Up, level, host_.stageOf(x), x, 0, nullptr, nullptr);
  }
  C boolCode(std::size_t level, Stage c) const { return leaf(CodeKind::Bool, level, c); }
  C unitCode(std::size_t level, Stage c) const { return leaf(CodeKind::Unit, level, c); }
  C uniCode(std::size_t level, std::size_t k, Stage c) const {
    if (k >= level) throw std::invalid_argument("uni " + std::to_string(k) + " is not a code at level " + std::to_string(level));
    auto code = std::make_shared<Code<H>>(CodeKind::Uni, level, c, Element{}, k, nullptr, nullptr);
    return code;
  }
  C fn(const C& dom, const F& cod) const { return former(CodeKind::Fn, dom, cod); }
  C sg(const C& dom, const F& cod) const { return former(CodeKind::Sg, dom, cod); }
  static F tabulated(std::vector<C> entries) {
    return std::make_shared<CodeFamily<H>>(CodeFamily<H>{false, nullptr, std::move(entries)});
  }
  static F constant(C value) { return std::make_shared<CodeFamily<H>>(CodeFamily<H>{true, std::move(value), {}}); }

  // ---- decode ----
  Element decode(const C& c) const {
    if (c->decodedReady.load(std::memory_order_acquire)) return c->decoded;
    Element x = decodeUncached(c);
    std::lock_guard<std::mutex> lock(c->decodedMutex);
    if (!c->decodedReady.load(std::memory_order_relaxed)) {
      c->decoded = std::move(x);
      c->decodedReady.store(true, std::memory_order_release);
    }
    return c->decoded;
  }

  Element decodeUncached(const C& c) const {
    switch (c->kind) {
      case CodeKind::Up:
        return c->up;
      case CodeKind::Bool:
        return host_.boolElem(c->stage);
      case CodeKind::Unit:
        return host_.unitElem(c->stage);
      case CodeKind::Uni:
        return uniElem(c->uni, c->stage);
      case CodeKind::Fn: {
        Element dom = decode(c->dom);
        return host_.sections(dom, decodeEntries(*c, dom));
      }
      case CodeKind::Sg: {
        Element dom = decode(c->dom);
        return host_.pairs(dom, decodeEntries(*c, dom));
      }
    }
    throw std::logic_error("decode: unknown code");
  }

  // The entries of a former's code family, as codes, one per index of `dom`.
  std::vector<C> entryCodes(const Code<H>& c, const Element& dom) const {
    if (!c.cod->constant) return c.cod->entries;
    std::vector<C> out;
    std::size_t n = host_.indexCount(dom);
    for (std::size_t i = 0; i < n; ++i) out.push_back(restrict(c.cod->value, host_.indexArrow(dom, i)));
    return out;
  }

  std::vector<Element> decodeEntries(const Code<H>& c, const Element& dom) const {
    std::vector<Element> out;
    for (const C& e : entryCodes(c, dom)) out.push_back(decode(e));
    return out;
  }

  // The host element naming V_k at stage c.
  Element uniElem(std::size_t k, Stage c) const {
    const auto& table = uniCodes_.at(k);
    return host_.tabulate(
        c,
        [&](Stage d) {
          std::vector<CanonVal> xs;
          for (const auto& [enc, code] : table[d]) xs.push_back(enc);
          return xs;
        },
        [&](const CanonVal& enc, Arrow u) {
          const C& code = table[host_.dst(u)].at(enc);
          return encode(restrict(code, u));
        });
  }

  // ---- lift ----
  C vlift(const C& c) const { return liftTo(c, c->level + 1, /*direct=*/false); }
  // The composite i -> j computed in one pass.
  C vliftTo(const C& c, std::size_t j) const { return liftTo(c, j, /*direct=*/true); }

  // ---- structure ----
  static std::optional<std::pair<C, F>> decomposeFn(const C& c) {
    if (c->kind != CodeKind::Fn) return std::nullopt;
    return std::make_pair(c->dom, c->cod);
  }

  bool codeEq(const C& a, const C& b) const {
    if (a == b) return true;
    if (a->kind != b->kind || a->level != b->level || a->stage != b->stage) return false;
    switch (a->kind) {
      case CodeKind::Up:
        return host_.elemEq(a->up, b->up);
      case CodeKind::Bool:
      case CodeKind::Unit:
        return true;
      case CodeKind::Uni:
        return a->uni == b->uni;
      case CodeKind::Fn:
      case CodeKind::Sg:
        return codeEq(a->dom, b->dom) && familyEq(a->cod, b->cod);
    }
    return false;
  }

  bool familyEq(const F& a, const F& b) const {
    if (a->constant != b->constant) return false;
    if (a->constant) return codeEq(a->value, b->value);
    if (a->entries.size() != b->entries.size()) return false;
    for (std::size_t i = 0; i < a->entries.size(); ++i)
      if (!codeEq(a->entries[i], b->entries[i])) return false;
    return true;
  }

  // Restriction of a code at stage c along u : d -> c.
  C restrict(const C& c, Arrow u) const {
    Stage d = host_.src(u);
    switch (c->kind) {
      case CodeKind::Up:
        return up(c->level, host_.restrictElem(c->up, u));
      case CodeKind::Bool:
      case CodeKind::Unit:
        return leaf(c->kind, c->level, d);
      case CodeKind::Uni:
        return uniCode(c->level, c->uni, d);
      case CodeKind::Fn:
      case CodeKind::Sg: {
        C dom = restrict(c->dom, u);
        if (c->cod->constant) return former(c->kind, dom, constant(restrict(c->cod->value, u)));
        auto map = host_.reindexMap(decode(c->dom), u);
        std::vector<C> entries;
        for (std::size_t j : map) entries.push_back(c->cod->entries[j]);
        return former(c->kind, dom, tabulated(std::move(entries)));
      }
    }
    throw std::logic_error("restrict: unknown code");
  }

  CanonVal encode(const C& c) const {
    auto tag = [](std::uint64_t t) { return CanonVal::atom(t); };
    switch (c->kind) {
      case CodeKind::Up:
        return CanonVal::tuple({tag(0), host_.encode(c->up)});
      case CodeKind::Bool:
        return CanonVal::tuple({tag(1)});
      case CodeKind::Unit:
        return CanonVal::tuple({tag(2)});
      case CodeKind::Uni:
        return CanonVal::tuple({tag(5), CanonVal::atom(c->uni)});
      case CodeKind::Fn:
      case CodeKind::Sg: {
        CanonVal fam;
        if (c->cod->constant) {
          fam = CanonVal::tuple({tag(1), encode(c->cod->value)});
        } else {
          std::vector<CanonVal> xs;
          for (const auto& e : c->cod->entries) xs.push_back(encode(e));
          fam = CanonVal::tuple({tag(0), CanonVal::tuple(std::move(xs))});
        }
        return CanonVal::tuple({tag(c->kind == CodeKind::Fn ? 3 : 4), encode(c->dom), fam});
      }
    }
    throw std::logic_error("encode: unknown code");
  }

  // Human-readable rendering for reports. Up leaves are shown by their
  // position in the stage set of their level.
  std::string show(const C& c) const {
    switch (c->kind) {
      case CodeKind::Up: {
        const auto& xs = host_.stageElements(std::min(c->level, host_.levels() - 1), c->stage);
        for (std::size_t i = 0; i < xs.size(); ++i)
          if (host_.elemEq(xs[i], c->up)) return "up#" + std::to_string(i);
        return "up(" + host_.encode(c->up).show() + ")";
      }
      case CodeKind::Bool:
        return "bool";
      case CodeKind::Unit:
        return "unit";
      case CodeKind::Uni:
        return "uni" + std::to_string(c->uni);
      case CodeKind::Fn:
      case CodeKind::Sg: {
        std::string s = c->kind == CodeKind::Fn ? "fn(" : "sg(";
        s += show(c->dom) + ", ";
        if (c->cod->constant) return s + "const " + show(c->cod->value) + ")";
        s += "[";
        for (std::size_t i = 0; i < c->cod->entries.size(); ++i) s += (i ? " " : "") + show(c->cod->entries[i]);
        return s + "])";
      }
    }
    return "?";
  }

  // ---- enumeration ----
  std::vector<C> leaves(std::size_t level, Stage c) const {
    std::vector<C> out;
    for (const Element& x : host_.stageElements(level, c)) out.push_back(up(level, x));
    out.push_back(boolCode(level, c));
    out.push_back(unitCode(level, c));
    for (std::size_t k = 0; k < level; ++k) out.push_back(uniCode(level, k, c));
    return out;
  }

  // Every natural tabulated family over the decoding of `dom` whose entry at
  // each index is drawn from candidates(stage of that index).
  std::vector<F> naturalFamilies(const C& dom, const std::function<const std::vector<C>&(Stage)>& candidates) const {
    Element d = decode(dom);
    std::size_t n = host_.indexCount(d);
    auto edges = host_.restrictionEdges(d);
    std::vector<std::vector<std::size_t>> checkAt(n);
    for (std::size_t e = 0; e < edges.size(); ++e) checkAt[std::max(edges[e].from, edges[e].to)].push_back(e);
    std::vector<F> out;
    std::vector<C> cur(n);
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (i == n) {
        if (out.size() >= host_.cap()) throw std::length_error("code family enumeration exceeds the resource cap");
        out.push_back(tabulated(cur));
        return;
      }
      for (const C& cand : candidates(host_.indexStage(d, i))) {
        cur[i] = cand;
        bool ok = true;
        for (std::size_t e : checkAt[i]) {
          const auto& edge = edges[e];
          if (!codeEq(restrict(cur[edge.from], edge.arrow), cur[edge.to])) {
            ok = false;
            break;
          }
        }
        if (ok) go(i + 1);
      }
    };
    go(0);
    return out;
  }

  // Exactly the codes of constructor depth <= depth with tabulated families.
  std::vector<C> enumCodes(std::size_t level, Stage c, std::size_t depth) const {
    std::vector<C> out = leaves(level, c);
    if (depth == 0) return out;
    std::vector<std::vector<C>> prev;
    for (Stage d = 0; d < host_.stages(); ++d) prev.push_back(enumCodes(level, d, depth - 1));
    for (CodeKind kind : {CodeKind::Fn, CodeKind::Sg})
      for (const C& a : prev[c])
        for (const F& b : naturalFamilies(a, [&](Stage d) -> const std::vector<C>& { return prev[d]; })) {
          if (out.size() >= host_.cap()) throw std::length_error("code enumeration exceeds the resource cap");
          out.push_back(former(kind, a, b));
        }
    return out;
  }

 private:
  C leaf(CodeKind kind, std::size_t level, Stage c) const {
    return std::make_shared<Code<H>>(kind, level, c, Element{}, 0, nullptr, nullptr);
  }

  C former(CodeKind kind, const C& dom, const F& cod) const {
    if (cod->constant) {
      if (cod->value->level != dom->level || cod->value->stage != dom->stage)
        throw std::invalid_argument("constant code family must live at the domain's level and stage");
    } else {
      Element d = decode(dom);
      if (cod->entries.size() != host_.indexCount(d))
        throw std::invalid_argument("code family has " + std::to_string(cod->entries.size()) + " entries but its domain has " +
                                    std::to_string(host_.indexCount(d)) + " indices");
      for (std::size_t i = 0; i < cod->entries.size(); ++i)
        if (cod->entries[i]->level != dom->level || cod->entries[i]->stage != host_.indexStage(d, i))
          throw std::invalid_argument("code family entry " + std::to_string(i) + " has the wrong level or stage");
    }
    return std::make_shared<Code<H>>(kind, dom->level, dom->stage, Element{}, 0, dom, cod);
  }

  C liftTo(const C& c, std::size_t j, bool direct) const {
    if (j < c->level) throw std::invalid_argument("cannot lift downwards");
    if (j == c->level) return c;
    if (!direct && j != c->level + 1) return liftTo(liftTo(c, c->level + 1, false), j, false);
    switch (c->kind) {
      case CodeKind::Up:
        return up(j, host_.hostLift(c->up, c->level, j));
      case CodeKind::Bool:
      case CodeKind::Unit:
        return leaf(c->kind, j, c->stage);
      case CodeKind::Uni:
        return uniCode(j, c->uni, c->stage);
      case CodeKind::Fn:
      case CodeKind::Sg: {
        C dom = liftTo(c->dom, j, direct);
        if (c->cod->constant) return former(c->kind, dom, constant(liftTo(c->cod->value, j, direct)));
        std::vector<C> entries;
        for (const C& e : c->cod->entries) entries.push_back(liftTo(e, j, direct));
        return former(c->kind, dom, tabulated(std::move(entries)));
      }
    }
    throw std::logic_error("lift: unknown code");
  }

  const H& host_;
  std::size_t uniDepth_;
  std::vector<std::vector<std::map<CanonVal, C>>> uniCodes_;  // [k][stage]
};

}  // namespace obtt
