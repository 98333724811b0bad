#include "obtt/fincat.hpp"

#include <map>
#include <set>

namespace obtt {

std::size_t FinCat::objectIndex(const std::string& name) const {
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects[i] == name) return i;
  return none;
}

std::size_t FinCat::arrowIndex(const std::string& id) const {
  for (std::size_t i = 0; i < arrows.size(); ++i)
    if (arrows[i].id == id) return i;
  return none;
}

namespace {
std::string joinLines(const std::vector<std::string>& xs) {
  std::string s = "invalid category:";
  for (const auto& x : xs) s += "\n  " + x;
  return s;
}
}  // namespace

CategoryError::CategoryError(std::vector<std::string> violations)
    : std::runtime_error(joinLines(violations)), violations_(std::move(violations)) {}

CapExceeded::CapExceeded(const std::string& what, std::size_t cap)
    : std::runtime_error(what + " exceeds the resource cap of " + std::to_string(cap)) {}

FinCat validateCat(const nlohmann::json& raw) {
  std::vector<std::string> errs;
  FinCat c;
  if (!raw.is_object()) throw CategoryError({"category must be a JSON object"});
  for (const char* field : {"objects", "arrows", "identities"})
    if (!raw.contains(field)) errs.push_back(std::string("missing field '") + field + "'");
  if (!errs.empty()) throw CategoryError(errs);

  try {
    for (const auto& o : raw.at("objects")) {
      std::string name = o.get<std::string>();
      if (c.objectIndex(name) != FinCat::none) errs.push_back("duplicate object '" + name + "'");
      c.objects.push_back(name);
    }
    for (const auto& a : raw.at("arrows")) {
      CatArrow arr;
      arr.id = a.at("id").get<std::string>();
      std::string s = a.at("src").get<std::string>(), d = a.at("dst").get<std::string>();
      arr.src = c.objectIndex(s);
      arr.dst = c.objectIndex(d);
      if (arr.src == FinCat::none) errs.push_back("arrow '" + arr.id + "' has unknown source '" + s + "'");
      if (arr.dst == FinCat::none) errs.push_back("arrow '" + arr.id + "' has unknown target '" + d + "'");
      if (c.arrowIndex(arr.id) != FinCat::none) errs.push_back("duplicate arrow '" + arr.id + "'");
      c.arrows.push_back(arr);
    }
  } catch (const nlohmann::json::exception& e) {
    throw CategoryError({std::string("malformed category: ") + e.what()});
  }
  if (!errs.empty()) throw CategoryError(errs);

  const std::size_t n = c.arrows.size();
  c.identity.assign(c.objects.size(), FinCat::none);
  for (const auto& [obj, idv] : raw.at("identities").items()) {
    std::size_t o = c.objectIndex(obj);
    std::string id = idv.get<std::string>();
    std::size_t a = c.arrowIndex(id);
    if (o == FinCat::none) {
      errs.push_back("identity given for unknown object '" + obj + "'");
      continue;
    }
    if (a == FinCat::none) {
      errs.push_back("identity of '" + obj + "' is unknown arrow '" + id + "'");
      continue;
    }
    if (c.arrows[a].src != o || c.arrows[a].dst != o)
      errs.push_back("identity '" + id + "' of '" + obj + "' is not an endo-arrow on it");
    c.identity[o] = a;
  }
  for (std::size_t o = 0; o < c.objects.size(); ++o)
    if (c.identity[o] == FinCat::none) errs.push_back("object '" + c.objects[o] + "' has no identity");
  if (!errs.empty()) throw CategoryError(errs);

  c.comp_.assign(n * n, FinCat::none);
  auto name = [&](std::size_t a) { return "'" + c.arrows[a].id + "'"; };
  if (raw.contains("comp")) {
    for (const auto& row : raw.at("comp")) {
      if (!row.is_array() || row.size() != 3) {
        errs.push_back("composition entries must be [g, f, g∘f] triples");
        continue;
      }
      std::size_t g = c.arrowIndex(row[0].get<std::string>());
      std::size_t f = c.arrowIndex(row[1].get<std::string>());
      std::size_t h = c.arrowIndex(row[2].get<std::string>());
      if (g == FinCat::none || f == FinCat::none || h == FinCat::none) {
        errs.push_back("composition entry " + row.dump() + " names an unknown arrow");
        continue;
      }
      if (c.arrows[f].dst != c.arrows[g].src) {
        errs.push_back("composition entry " + row.dump() + ": " + name(g) + " and " + name(f) + " are not composable");
        continue;
      }
      if (c.arrows[h].src != c.arrows[f].src || c.arrows[h].dst != c.arrows[g].dst) {
        errs.push_back("composition entry " + row.dump() + ": result has the wrong endpoints");
        continue;
      }
      std::size_t& slot = c.comp_[g * n + f];
      if (slot != FinCat::none && slot != h)
        errs.push_back("composition of " + name(g) + " after " + name(f) + " is given twice, differently");
      slot = h;
    }
  }
  // Unit laws: fill omitted identity composites, flag contradicting ones.
  for (std::size_t f = 0; f < n; ++f) {
    std::size_t idDst = c.identity[c.arrows[f].dst], idSrc = c.identity[c.arrows[f].src];
    for (auto [slot, which] : {std::pair{&c.comp_[idDst * n + f], "left"}, std::pair{&c.comp_[f * n + idSrc], "right"}}) {
      if (*slot == FinCat::none)
        *slot = f;
      else if (*slot != f)
        errs.push_back(std::string(which) + " unit law fails for " + name(f));
    }
  }
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t f = 0; f < n; ++f)
      if (c.arrows[f].dst == c.arrows[g].src && c.comp_[g * n + f] == FinCat::none)
        errs.push_back("missing composite of " + name(g) + " after " + name(f));
  if (!errs.empty()) throw CategoryError(errs);

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (c.arrows[b].dst != c.arrows[a].src) continue;
      for (std::size_t cc = 0; cc < n; ++cc) {
        if (c.arrows[cc].dst != c.arrows[b].src) continue;
        std::size_t left = c.compose(a, c.compose(b, cc));
        std::size_t right = c.compose(c.compose(a, b), cc);
        if (left != right)
          errs.push_back("associativity fails for a=" + name(a) + ", b=" + name(b) + ", c=" + name(cc) + ": a(bc) = " +
                         name(left) + " but (ab)c = " + name(right));
      }
    }
  if (!errs.empty()) throw CategoryError(errs);
  return c;
}

Shape shapeOf(const FinCat& c) {
  Shape s;
  s.objects = c.objects.size();
  std::vector<long> index(c.arrows.size(), Shape::identityArrow);
  for (std::size_t a = 0; a < c.arrows.size(); ++a) {
    if (c.isIdentity(a)) continue;
    index[a] = static_cast<long>(s.arrows.size());
    s.arrows.push_back({c.arrows[a].src, c.arrows[a].dst});
  }
  const std::size_t m = s.arrows.size();
  s.comp.assign(m * m, Shape::notComposable);
  for (std::size_t g = 0; g < c.arrows.size(); ++g)
    for (std::size_t f = 0; f < c.arrows.size(); ++f) {
      if (index[g] < 0 || index[f] < 0) continue;
      std::size_t h = c.compose(g, f);
      if (h == FinCat::none) continue;
      s.comp[index[g] * m + index[f]] = index[h];
    }
  return s;
}

bool isFunctorial(const Shape& s, const TabPresheaf& p) {
  const std::size_t m = s.arrows.size();
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t f = 0; f < m; ++f) {
      long h = s.compose(g, f);
      if (h == Shape::notComposable) continue;
      // P(g∘f) = P(f) ∘ P(g) as maps P(dst g) -> P(src f)
      for (std::uint32_t i = 0; i < p.sizes[s.arrows[g].dst]; ++i) {
        std::uint32_t via = p.maps[f][p.maps[g][i]];
        std::uint32_t direct = h == Shape::identityArrow ? i : p.maps[h][i];
        if (via != direct) return false;
      }
    }
  return true;
}

namespace {

struct PresheafSearch {
  const Shape& s;
  std::size_t cap;
  TabPresheaf cur;
  std::vector<TabPresheaf> out;
  // constraints[k]: (g, f) pairs whose check becomes possible once arrow k is set
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> constraints;

  PresheafSearch(const Shape& shape, std::size_t c) : s(shape), cap(c) {
    const std::size_t m = s.arrows.size();
    constraints.resize(m);
    for (std::size_t g = 0; g < m; ++g)
      for (std::size_t f = 0; f < m; ++f) {
        long h = s.compose(g, f);
        if (h == Shape::notComposable) continue;
        std::size_t last = std::max(g, f);
        if (h >= 0) last = std::max<std::size_t>(last, static_cast<std::size_t>(h));
        constraints[last].push_back({g, f});
      }
  }

  bool holds(std::size_t g, std::size_t f) const {
    long h = s.compose(g, f);
    for (std::uint32_t i = 0; i < cur.sizes[s.arrows[g].dst]; ++i) {
      std::uint32_t via = cur.maps[f][cur.maps[g][i]];
      std::uint32_t direct = h == Shape::identityArrow ? i : cur.maps[h][i];
      if (via != direct) return false;
    }
    return true;
  }

  void arrows(std::size_t k) {
    if (k == s.arrows.size()) {
      if (out.size() >= cap) throw CapExceeded("presheaf enumeration", cap);
      out.push_back(cur);
      return;
    }
    std::uint32_t from = cur.sizes[s.arrows[k].dst], to = cur.sizes[s.arrows[k].src];
    auto& map = cur.maps[k];
    map.assign(from, 0);
    if (from > 0 && to == 0) return;
    // odometer over all functions from -> to
    while (true) {
      bool ok = true;
      for (auto [g, f] : constraints[k])
        if (!holds(g, f)) {
          ok = false;
          break;
        }
      if (ok) arrows(k + 1);
      bool carry = true;
      for (std::size_t i = from; i-- > 0;) {
        if (++map[i] < to) {
          carry = false;
          break;
        }
        map[i] = 0;
      }
      if (carry) break;
    }
  }

  void sizes(std::size_t obj, std::size_t bound) {
    if (obj == s.objects) {
      arrows(0);
      return;
    }
    for (std::uint32_t n = 0; n <= bound; ++n) {
      cur.sizes[obj] = n;
      sizes(obj + 1, bound);
    }
  }
};

}  // namespace

std::vector<TabPresheaf> enumeratePresheaves(const Shape& s, std::size_t bound, std::size_t cap) {
  PresheafSearch search(s, cap);
  search.cur.sizes.assign(s.objects, 0);
  search.cur.maps.assign(s.arrows.size(), {});
  search.sizes(0, bound);
  return std::move(search.out);
}

}  // namespace obtt
