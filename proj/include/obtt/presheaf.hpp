#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "obtt/canon.hpp"
#include "obtt/fincat.hpp"

namespace obtt {

// The slice C/c. Objects are the arrows into c; a slice arrow is k : g∘k -> g.
struct Slice {
  struct Arr {
    std::size_t arrow;     // k in C
    std::size_t from, to;  // slice object indices of g∘k and g
  };

  std::size_t stage = 0;
  std::vector<std::size_t> objects;  // arrows of C into the stage, increasing
  std::vector<long> objectOf;        // arrow of C -> slice object, or -1
  std::size_t identityObject = 0;
  std::vector<Arr> arrows;  // identity arrows of C are left out
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> byArrowTo;
  Shape shape;

  long arrowIndex(std::size_t k, std::size_t to) const {
    auto it = byArrowTo.find({k, to});
    return it == byArrowTo.end() ? -1 : static_cast<long>(it->second);
  }
};

Slice makeSlice(const FinCat& c, std::size_t stage);

// A presheaf on C/stage. maps[i] sends fibers[arrows[i].to] to
// fibers[arrows[i].from], by position. Fibers are sorted.
struct FamilyData {
  std::size_t stage = 0;
  std::vector<std::vector<CanonVal>> fibers;
  std::vector<std::vector<std::uint32_t>> maps;
};
using Family = std::shared_ptr<const FamilyData>;

int compareFamilies(const FamilyData& a, const FamilyData& b);

class NaturalityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dependent family over a family A at stage c, read off from the decoded
// entries of a code family: sets[idx(g,a)] and, per slice arrow and a,
// the restriction map by position.
struct DepFamily {
  std::vector<std::vector<CanonVal>> sets;
  std::vector<std::vector<std::vector<std::uint32_t>>> maps;  // [slice arrow][a]
};

struct HostOptions {
  std::vector<std::size_t> bounds{2, 3};
  bool strict = true;
  std::size_t cap = 1000000;
};

// Bounded Hofmann–Streicher-style universes in presheaves over a finite
// category. Elements at level i and stage c are presheaves on C/c with
// fibers {0..k-1}, k <= bounds[i].
class PresheafHost {
 public:
  using Element = Family;
  using Stage = std::size_t;
  using Arrow = std::size_t;
  struct Edge {
    std::size_t from, to;
    Arrow arrow;
  };

  PresheafHost(FinCat cat, HostOptions opts);

  const FinCat& category() const { return cat_; }
  const Slice& slice(Stage c) const { return slices_[c]; }
  std::size_t stages() const { return cat_.objects.size(); }
  std::size_t levels() const { return opts_.bounds.size(); }
  std::size_t bound(std::size_t level) const { return opts_.bounds.at(level); }
  std::size_t cap() const { return opts_.cap; }
  bool strictPi() const { return opts_.strict; }

  // Memoized; filled for every level and stage by the constructor so that
  // concurrent readers never race with a writer.
  const std::vector<Family>& stageElements(std::size_t level, Stage c) const { return stageSets_.at(level).at(c); }
  bool inStage(std::size_t level, const Family& x) const;

  bool elemEq(const Family& a, const Family& b) const;
  Stage stageOf(const Family& x) const { return x->stage; }
  Stage src(Arrow u) const { return cat_.arrows[u].src; }
  Stage dst(Arrow u) const { return cat_.arrows[u].dst; }
  Arrow identity(Stage c) const { return cat_.identity[c]; }
  Arrow compose(Arrow g, Arrow f) const { return cat_.compose(g, f); }
  // Arrows of C into c, identity included.
  std::vector<Arrow> arrowsInto(Stage c) const { return slices_[c].objects; }

  Family restrictElem(const Family& x, Arrow u) const;

  // Index discipline for code families over a decoded domain.
  std::size_t indexCount(const Family& dom) const;
  Arrow indexArrow(const Family& dom, std::size_t idx) const;
  std::size_t indexElement(const Family& dom, std::size_t idx) const;
  std::size_t indexOf(const Family& dom, std::size_t sliceObject, std::size_t a) const;
  Stage indexStage(const Family& dom, std::size_t idx) const { return src(indexArrow(dom, idx)); }
  // Entry `to` must be the restriction of entry `from` along `arrow`.
  std::vector<Edge> restrictionEdges(const Family& dom) const;
  // reindexMap(dom, u)[j] is the index in dom of index j of restrictElem(dom, u).
  std::vector<std::size_t> reindexMap(const Family& dom, Arrow u) const;

  Family boolElem(Stage c) const;
  Family unitElem(Stage c) const;
  Family constantElem(Stage c, std::size_t size) const;
  // fiber at g = fiberAt(src g); restriction along a slice arrow k by restrictVal
  Family tabulate(Stage c, const std::function<std::vector<CanonVal>(Stage)>& fiberAt,
                  const std::function<CanonVal(const CanonVal&, Arrow)>& restrictVal) const;

  DepFamily dependent(const Family& dom, const std::vector<Family>& entries) const;
  // The literal family of natural dependent sections.
  Family sections(const Family& dom, const std::vector<Family>& entries) const;
  Family pairs(const Family& dom, const std::vector<Family>& entries) const;
  // The host's own Π: sections in strict mode; in weak mode the sections with
  // fibers renamed to positions, isomorphic but not equal.
  Family hostPi(const Family& dom, const std::vector<Family>& entries) const;
  // Bound-relaxing inclusion.
  Family hostLift(const Family& x, std::size_t /*from*/, std::size_t /*to*/) const { return x; }

  // Same fiber sizes and position maps: the renaming by position is an iso.
  bool isomorphicByPosition(const Family& a, const Family& b) const;
  static Family renameToPositions(const Family& x);

  CanonVal encode(const Family& x) const;

 private:
  FinCat cat_;
  HostOptions opts_;
  std::vector<Slice> slices_;
  std::vector<std::vector<std::vector<Family>>> stageSets_;  // [level][stage]
};

}  // namespace obtt
