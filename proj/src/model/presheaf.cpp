#include "obtt/presheaf.hpp"

#include <algorithm>

namespace obtt {

Slice makeSlice(const FinCat& c, std::size_t stage) {
  Slice s;
  s.stage = stage;
  s.objectOf.assign(c.arrows.size(), -1);
  for (std::size_t a = 0; a < c.arrows.size(); ++a)
    if (c.arrows[a].dst == stage) {
      s.objectOf[a] = static_cast<long>(s.objects.size());
      s.objects.push_back(a);
    }
  s.identityObject = static_cast<std::size_t>(s.objectOf[c.identity[stage]]);
  for (std::size_t gi = 0; gi < s.objects.size(); ++gi) {
    std::size_t g = s.objects[gi];
    for (std::size_t k = 0; k < c.arrows.size(); ++k) {
      if (c.arrows[k].dst != c.arrows[g].src || c.isIdentity(k)) continue;
      std::size_t h = c.compose(g, k);
      s.byArrowTo[{k, gi}] = s.arrows.size();
      s.arrows.push_back({k, static_cast<std::size_t>(s.objectOf[h]), gi});
    }
  }
  // The slice as a Shape: arrow i goes from `from` to `to`.
  s.shape.objects = s.objects.size();
  for (const auto& a : s.arrows) s.shape.arrows.push_back({a.from, a.to});
  const std::size_t m = s.arrows.size();
  s.shape.comp.assign(m * m, Shape::notComposable);
  for (std::size_t j = 0; j < m; ++j)      // g
    for (std::size_t i = 0; i < m; ++i) {  // f
      if (s.arrows[i].to != s.arrows[j].from) continue;
      std::size_t kk = c.compose(s.arrows[j].arrow, s.arrows[i].arrow);
      if (c.isIdentity(kk)) {
        s.shape.comp[j * m + i] = Shape::identityArrow;
      } else {
        s.shape.comp[j * m + i] = s.arrowIndex(kk, s.arrows[j].to);
      }
    }
  return s;
}

int compareFamilies(const FamilyData& a, const FamilyData& b) {
  if (a.stage != b.stage) return a.stage < b.stage ? -1 : 1;
  if (a.fibers.size() != b.fibers.size()) return a.fibers.size() < b.fibers.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.fibers.size(); ++i) {
    const auto& x = a.fibers[i];
    const auto& y = b.fibers[i];
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (int c = compare(x[j], y[j])) return c;
  }
  if (a.maps != b.maps) return a.maps < b.maps ? -1 : 1;
  return 0;
}

namespace {

std::vector<CanonVal> atoms(std::size_t n) {
  std::vector<CanonVal> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(CanonVal::atom(i));
  return xs;
}

std::vector<std::uint32_t> identityMap(std::size_t n) {
  std::vector<std::uint32_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<std::uint32_t>(i);
  return m;
}

std::vector<std::size_t> offsets(const FamilyData& x) {
  std::vector<std::size_t> off(x.fibers.size() + 1, 0);
  for (std::size_t i = 0; i < x.fibers.size(); ++i) off[i + 1] = off[i] + x.fibers[i].size();
  return off;
}

std::uint32_t locate(const std::vector<CanonVal>& fiber, const CanonVal& v, const char* what) {
  long i = indexIn(fiber, v);
  if (i < 0) throw NaturalityError(std::string(what) + ": restriction of " + v.show() + " is not in the target fiber");
  return static_cast<std::uint32_t>(i);
}

}  // namespace

PresheafHost::PresheafHost(FinCat cat, HostOptions opts) : cat_(std::move(cat)), opts_(std::move(opts)) {
  for (std::size_t c = 0; c < cat_.objects.size(); ++c) slices_.push_back(makeSlice(cat_, c));
  for (std::size_t level = 0; level < opts_.bounds.size(); ++level) {
    stageSets_.emplace_back();
    for (std::size_t c = 0; c < cat_.objects.size(); ++c) {
      const Slice& s = slices_[c];
      std::vector<Family> elems;
      for (auto& p : enumeratePresheaves(s.shape, opts_.bounds[level], opts_.cap)) {
        auto x = std::make_shared<FamilyData>();
        x->stage = c;
        for (auto n : p.sizes) x->fibers.push_back(atoms(n));
        x->maps = std::move(p.maps);
        elems.push_back(std::move(x));
      }
      std::sort(elems.begin(), elems.end(), [](const Family& a, const Family& b) { return compareFamilies(*a, *b) < 0; });
      stageSets_.back().push_back(std::move(elems));
    }
  }
}

bool PresheafHost::inStage(std::size_t level, const Family& x) const {
  const auto& xs = stageElements(level, x->stage);
  auto it = std::lower_bound(xs.begin(), xs.end(), x,
                             [](const Family& a, const Family& b) { return compareFamilies(*a, *b) < 0; });
  return it != xs.end() && compareFamilies(**it, *x) == 0;
}

bool PresheafHost::elemEq(const Family& a, const Family& b) const {
  return a == b || compareFamilies(*a, *b) == 0;
}

Family PresheafHost::restrictElem(const Family& x, Arrow u) const {
  const Slice& from = slices_[x->stage];
  const Slice& to = slices_[src(u)];
  auto y = std::make_shared<FamilyData>();
  y->stage = src(u);
  for (std::size_t g : to.objects) y->fibers.push_back(x->fibers[from.objectOf[compose(u, g)]]);
  for (const auto& a : to.arrows) {
    std::size_t target = static_cast<std::size_t>(from.objectOf[compose(u, to.objects[a.to])]);
    long i = from.arrowIndex(a.arrow, target);
    y->maps.push_back(x->maps[static_cast<std::size_t>(i)]);
  }
  return y;
}

std::size_t PresheafHost::indexCount(const Family& dom) const { return offsets(*dom).back(); }

PresheafHost::Arrow PresheafHost::indexArrow(const Family& dom, std::size_t idx) const {
  auto off = offsets(*dom);
  for (std::size_t g = 0; g < dom->fibers.size(); ++g)
    if (idx < off[g + 1]) return slices_[dom->stage].objects[g];
  throw std::out_of_range("code family index out of range");
}

std::size_t PresheafHost::indexElement(const Family& dom, std::size_t idx) const {
  auto off = offsets(*dom);
  for (std::size_t g = 0; g < dom->fibers.size(); ++g)
    if (idx < off[g + 1]) return idx - off[g];
  throw std::out_of_range("code family index out of range");
}

std::size_t PresheafHost::indexOf(const Family& dom, std::size_t sliceObject, std::size_t a) const {
  return offsets(*dom)[sliceObject] + a;
}

std::vector<PresheafHost::Edge> PresheafHost::restrictionEdges(const Family& dom) const {
  const Slice& s = slices_[dom->stage];
  auto off = offsets(*dom);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < s.arrows.size(); ++i) {
    const auto& a = s.arrows[i];
    for (std::size_t x = 0; x < dom->fibers[a.to].size(); ++x)
      edges.push_back({off[a.to] + x, off[a.from] + dom->maps[i][x], a.arrow});
  }
  return edges;
}

std::vector<std::size_t> PresheafHost::reindexMap(const Family& dom, Arrow u) const {
  const Slice& from = slices_[dom->stage];
  const Slice& to = slices_[src(u)];
  auto off = offsets(*dom);
  std::vector<std::size_t> out;
  for (std::size_t g : to.objects) {
    std::size_t obj = static_cast<std::size_t>(from.objectOf[compose(u, g)]);
    for (std::size_t a = 0; a < dom->fibers[obj].size(); ++a) out.push_back(off[obj] + a);
  }
  return out;
}

Family PresheafHost::constantElem(Stage c, std::size_t size) const {
  const Slice& s = slices_[c];
  auto x = std::make_shared<FamilyData>();
  x->stage = c;
  x->fibers.assign(s.objects.size(), atoms(size));
  x->maps.assign(s.arrows.size(), identityMap(size));
  return x;
}

Family PresheafHost::boolElem(Stage c) const { return constantElem(c, 2); }

Family PresheafHost::unitElem(Stage c) const {
  const Slice& s = slices_[c];
  auto x = std::make_shared<FamilyData>();
  x->stage = c;
  x->fibers.assign(s.objects.size(), {CanonVal::tuple({})});
  x->maps.assign(s.arrows.size(), identityMap(1));
  return x;
}

Family PresheafHost::tabulate(Stage c, const std::function<std::vector<CanonVal>(Stage)>& fiberAt,
                              const std::function<CanonVal(const CanonVal&, Arrow)>& restrictVal) const {
  const Slice& s = slices_[c];
  auto x = std::make_shared<FamilyData>();
  x->stage = c;
  for (std::size_t g : s.objects) {
    auto fiber = fiberAt(src(g));
    std::sort(fiber.begin(), fiber.end());
    x->fibers.push_back(std::move(fiber));
  }
  for (const auto& a : s.arrows) {
    std::vector<std::uint32_t> m;
    for (const auto& v : x->fibers[a.to]) m.push_back(locate(x->fibers[a.from], restrictVal(v, a.arrow), "tabulate"));
    x->maps.push_back(std::move(m));
  }
  return x;
}

DepFamily PresheafHost::dependent(const Family& dom, const std::vector<Family>& entries) const {
  const Slice& s = slices_[dom->stage];
  if (entries.size() != indexCount(dom)) throw NaturalityError("code family does not match its domain's index set");
  auto off = offsets(*dom);
  DepFamily d;
  for (std::size_t g = 0; g < s.objects.size(); ++g)
    for (std::size_t a = 0; a < dom->fibers[g].size(); ++a) {
      const Family& e = entries[off[g] + a];
      Stage at = src(s.objects[g]);
      if (e->stage != at) throw NaturalityError("code family entry lives at the wrong stage");
      d.sets.push_back(e->fibers[slices_[at].identityObject]);
    }
  for (std::size_t i = 0; i < s.arrows.size(); ++i) {
    const auto& sa = s.arrows[i];
    d.maps.emplace_back();
    for (std::size_t a = 0; a < dom->fibers[sa.to].size(); ++a) {
      const Family& e = entries[off[sa.to] + a];
      const Slice& es = slices_[e->stage];
      // in C/dom(g): the slice arrow k from k to the identity
      long inner = es.arrowIndex(sa.arrow, es.identityObject);
      std::size_t fromObj = static_cast<std::size_t>(es.objectOf[sa.arrow]);
      const auto& target = d.sets[off[sa.from] + dom->maps[i][a]];
      std::vector<std::uint32_t> m;
      for (std::uint32_t v : e->maps[static_cast<std::size_t>(inner)])
        m.push_back(locate(target, e->fibers[fromObj][v], "dependent family"));
      d.maps.back().push_back(std::move(m));
    }
  }
  return d;
}

namespace {

// Backtracking over the natural sections at one slice object. Keys are
// visited in increasing order and values by position in sorted sets, so
// sections come out already sorted and `choices` is sorted lexicographically.
struct SectionSearch {
  struct Key {
    CanonVal key;
    std::size_t depIndex;  // index into DepFamily::sets
  };
  struct Constraint {
    std::size_t lhs, rhs;  // positions in keys: s[lhs] must equal map(s[rhs])
    const std::vector<std::uint32_t>* map;
  };
  std::vector<Key> keys;
  std::vector<std::vector<Constraint>> byLast;
  const DepFamily* dep;
  std::vector<std::uint32_t> cur;
  std::vector<std::vector<std::uint32_t>> choices;
  std::size_t cap;

  void run(std::size_t i) {
    if (i == keys.size()) {
      if (choices.size() >= cap) throw CapExceeded("section enumeration", cap);
      choices.push_back(cur);
      return;
    }
    std::size_t n = dep->sets[keys[i].depIndex].size();
    for (std::uint32_t v = 0; v < n; ++v) {
      cur[i] = v;
      bool ok = true;
      for (const auto& c : byLast[i])
        if (cur[c.lhs] != (*c.map)[cur[c.rhs]]) {
          ok = false;
          break;
        }
      if (ok) run(i + 1);
    }
  }

  std::vector<CanonVal> values() const {
    std::vector<CanonVal> out;
    out.reserve(choices.size());
    for (const auto& ch : choices) {
      std::vector<std::pair<CanonVal, CanonVal>> entries;
      entries.reserve(keys.size());
      for (std::size_t j = 0; j < keys.size(); ++j) entries.push_back({keys[j].key, dep->sets[keys[j].depIndex][ch[j]]});
      out.push_back(CanonVal::funTableSorted(std::move(entries)));
    }
    return out;
  }
};

CanonVal sectionKey(std::size_t arrow, const CanonVal& a) { return CanonVal::tuple({CanonVal::atom(arrow), a}); }

}  // namespace

Family PresheafHost::sections(const Family& dom, const std::vector<Family>& entries) const {
  DepFamily dep = dependent(dom, entries);
  const Slice& s = slices_[dom->stage];
  auto off = offsets(*dom);
  auto y = std::make_shared<FamilyData>();
  y->stage = dom->stage;
  std::vector<SectionSearch> searches(s.objects.size());
  std::vector<std::map<std::pair<std::size_t, std::size_t>, std::size_t>> where(s.objects.size());  // (k, a) -> key
  for (std::size_t gi = 0; gi < s.objects.size(); ++gi) {
    std::size_t g = s.objects[gi];
    const Slice& sd = slices_[src(g)];
    SectionSearch& search = searches[gi];
    search.dep = &dep;
    search.cap = opts_.cap;
    // keys (k, a) for k into dom(g) and a in A(g∘k)
    std::vector<std::pair<std::size_t, std::size_t>> raw;
    for (std::size_t k : sd.objects) {
      std::size_t gk = static_cast<std::size_t>(s.objectOf[compose(g, k)]);
      for (std::size_t a = 0; a < dom->fibers[gk].size(); ++a) {
        raw.push_back({k, a});
        search.keys.push_back({sectionKey(k, dom->fibers[gk][a]), off[gk] + a});
      }
    }
    std::vector<std::size_t> order(raw.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t z) { return search.keys[x].key < search.keys[z].key; });
    std::vector<SectionSearch::Key> sortedKeys;
    for (std::size_t i = 0; i < order.size(); ++i) {
      sortedKeys.push_back(search.keys[order[i]]);
      where[gi][raw[order[i]]] = i;
    }
    search.keys = std::move(sortedKeys);
    search.byLast.resize(search.keys.size());
    // naturality: for m : k∘m -> k in C/dom(g), s(k∘m, A(m)a) = D(m, a)(s(k, a))
    for (const auto& m : sd.arrows) {
      std::size_t k = sd.objects[m.to];
      std::size_t km = sd.objects[m.from];
      std::size_t gk = static_cast<std::size_t>(s.objectOf[compose(g, k)]);
      long sa = s.arrowIndex(m.arrow, gk);
      for (std::size_t a = 0; a < dom->fibers[gk].size(); ++a) {
        std::size_t a2 = dom->maps[static_cast<std::size_t>(sa)][a];
        std::size_t lhs = where[gi].at({km, a2}), rhs = where[gi].at({k, a});
        search.byLast[std::max(lhs, rhs)].push_back({lhs, rhs, &dep.maps[static_cast<std::size_t>(sa)][a]});
      }
    }
    search.cur.assign(search.keys.size(), 0);
    search.run(0);
    y->fibers.push_back(search.values());
  }
  // restriction along m : g∘m -> g sends s to k' |-> s(m∘k'); the value sets
  // agree since (g∘m)∘k' = g∘(m∘k'), so this is a gather on choice vectors
  for (const auto& sa : s.arrows) {
    const auto& fromSearch = searches[sa.from];
    std::vector<std::size_t> gather(fromSearch.keys.size());
    for (const auto& [ka, pos] : where[sa.from]) gather[pos] = where[sa.to].at({compose(sa.arrow, ka.first), ka.second});
    std::vector<std::uint32_t> map;
    std::vector<std::uint32_t> moved(gather.size());
    for (const auto& ch : searches[sa.to].choices) {
      for (std::size_t j = 0; j < gather.size(); ++j) moved[j] = ch[gather[j]];
      auto it = std::lower_bound(fromSearch.choices.begin(), fromSearch.choices.end(), moved);
      if (it == fromSearch.choices.end() || *it != moved) throw NaturalityError("sections: restriction is not a section");
      map.push_back(static_cast<std::uint32_t>(it - fromSearch.choices.begin()));
    }
    y->maps.push_back(std::move(map));
  }
  return y;
}

Family PresheafHost::pairs(const Family& dom, const std::vector<Family>& entries) const {
  DepFamily dep = dependent(dom, entries);
  const Slice& s = slices_[dom->stage];
  auto off = offsets(*dom);
  auto y = std::make_shared<FamilyData>();
  y->stage = dom->stage;
  for (std::size_t g = 0; g < s.objects.size(); ++g) {
    std::vector<CanonVal> fiber;
    for (std::size_t a = 0; a < dom->fibers[g].size(); ++a)
      for (const auto& b : dep.sets[off[g] + a]) fiber.push_back(CanonVal::tuple({dom->fibers[g][a], b}));
    if (fiber.size() > opts_.cap) throw CapExceeded("pair enumeration", opts_.cap);
    std::sort(fiber.begin(), fiber.end());
    y->fibers.push_back(std::move(fiber));
  }
  for (std::size_t i = 0; i < s.arrows.size(); ++i) {
    const auto& sa = s.arrows[i];
    std::vector<std::uint32_t> map;
    for (const auto& p : y->fibers[sa.to]) {
      std::size_t a = static_cast<std::size_t>(indexIn(dom->fibers[sa.to], p.items()[0]));
      std::size_t b = static_cast<std::size_t>(indexIn(dep.sets[off[sa.to] + a], p.items()[1]));
      std::uint32_t a2 = dom->maps[i][a];
      const auto& bset = dep.sets[off[sa.from] + a2];
      CanonVal moved = CanonVal::tuple({dom->fibers[sa.from][a2], bset[dep.maps[i][a][b]]});
      map.push_back(locate(y->fibers[sa.from], moved, "pairs"));
    }
    y->maps.push_back(std::move(map));
  }
  return y;
}

Family PresheafHost::renameToPositions(const Family& x) {
  auto y = std::make_shared<FamilyData>(*x);
  for (auto& f : y->fibers) f = atoms(f.size());
  return y;
}

Family PresheafHost::hostPi(const Family& dom, const std::vector<Family>& entries) const {
  Family s = sections(dom, entries);
  return opts_.strict ? s : renameToPositions(s);
}

bool PresheafHost::isomorphicByPosition(const Family& a, const Family& b) const {
  if (a->stage != b->stage || a->fibers.size() != b->fibers.size() || a->maps != b->maps) return false;
  for (std::size_t i = 0; i < a->fibers.size(); ++i)
    if (a->fibers[i].size() != b->fibers[i].size()) return false;
  return true;
}

CanonVal PresheafHost::encode(const Family& x) const {
  std::vector<CanonVal> fibers, maps;
  for (const auto& f : x->fibers) fibers.push_back(CanonVal::tuple(f));
  for (const auto& m : x->maps) {
    std::vector<CanonVal> row;
    for (auto v : m) row.push_back(CanonVal::atom(v));
    maps.push_back(CanonVal::tuple(std::move(row)));
  }
  return CanonVal::tuple({CanonVal::atom(x->stage), CanonVal::tuple(std::move(fibers)), CanonVal::tuple(std::move(maps))});
}

}  // namespace obtt
