#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace obtt {

struct CatArrow {
  std::string id;
  std::size_t src = 0, dst = 0;
};

// A finite category with an explicit composition table.
class FinCat {
 public:
  static constexpr std::size_t none = static_cast<std::size_t>(-1);

  std::vector<std::string> objects;
  std::vector<CatArrow> arrows;
  std::vector<std::size_t> identity;  // per object

  // g after f, or `none` when dst(f) != src(g).
  std::size_t compose(std::size_t g, std::size_t f) const { return comp_[g * arrows.size() + f]; }
  bool isIdentity(std::size_t a) const { return identity[arrows[a].src] == a && arrows[a].src == arrows[a].dst; }
  std::size_t objectIndex(const std::string& name) const;
  std::size_t arrowIndex(const std::string& id) const;

 private:
  friend FinCat validateCat(const nlohmann::json& raw);
  std::vector<std::size_t> comp_;
};

class CategoryError : public std::runtime_error {
 public:
  explicit CategoryError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Reads {"objects", "arrows": [{"id","src","dst"}], "identities": {obj: id},
// "comp": [[g, f, g∘f], ...]}. Composites with an identity may be omitted.
// Every law is checked; all violations are reported together.
FinCat validateCat(const nlohmann::json& raw);

// A finite category presented for presheaf enumeration. Only non-identity
// arrows are listed.
struct Shape {
  static constexpr long identityArrow = -1;
  static constexpr long notComposable = -2;

  std::size_t objects = 0;
  struct Arr {
    std::size_t src, dst;
  };
  std::vector<Arr> arrows;
  // comp[g * arrows.size() + f]: index of g∘f, identityArrow, or notComposable
  std::vector<long> comp;

  long compose(std::size_t g, std::size_t f) const { return comp[g * arrows.size() + f]; }
};

Shape shapeOf(const FinCat& c);

// A presheaf on a Shape with fibers {0..size-1}. maps[a] sends P(dst a) to
// P(src a).
struct TabPresheaf {
  std::vector<std::uint32_t> sizes;
  std::vector<std::vector<std::uint32_t>> maps;

  friend bool operator==(const TabPresheaf&, const TabPresheaf&) = default;
  friend auto operator<=>(const TabPresheaf&, const TabPresheaf&) = default;
};

bool isFunctorial(const Shape& s, const TabPresheaf& p);

class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::size_t cap);
};

// All functorial presheaves with every fiber of size <= bound, in increasing
// order. Throws CapExceeded rather than truncating.
std::vector<TabPresheaf> enumeratePresheaves(const Shape& s, std::size_t bound, std::size_t cap);

}  // namespace obtt
