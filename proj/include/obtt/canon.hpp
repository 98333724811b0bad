#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace obtt {

// Canonical values for presheaf fibers. Equality is structural and the order
// is total, so sorted fibers make "on the nose" equality decidable.
class CanonVal {
 public:
  enum class Kind : std::uint8_t { Atom, Tuple, FunTable };

  CanonVal() = default;  // atom 0

  static CanonVal atom(std::uint64_t n);
  static CanonVal tuple(std::vector<CanonVal> items);
  // Pairs are (key, value); keys must be distinct. Sorted on construction.
  static CanonVal funTable(std::vector<std::pair<CanonVal, CanonVal>> entries);
  // Same, for entries already strictly increasing by key. Not re-checked.
  static CanonVal funTableSorted(std::vector<std::pair<CanonVal, CanonVal>> entries);

  Kind kind() const { return kind_; }
  std::uint64_t atomValue() const { return atom_; }
  // Tuple components, or the flattened (key, value) 2-tuples of a FunTable.
  const std::vector<CanonVal>& items() const;
  // FunTable lookup; nullptr if absent.
  const CanonVal* lookup(const CanonVal& key) const;

  std::string show() const;

  friend int compare(const CanonVal& a, const CanonVal& b);
  friend bool operator==(const CanonVal& a, const CanonVal& b) { return compare(a, b) == 0; }
  friend bool operator!=(const CanonVal& a, const CanonVal& b) { return compare(a, b) != 0; }
  friend bool operator<(const CanonVal& a, const CanonVal& b) { return compare(a, b) < 0; }

 private:
  Kind kind_ = Kind::Atom;
  std::uint64_t atom_ = 0;
  std::shared_ptr<const std::vector<CanonVal>> items_;
};

// Position of v in a sorted fiber, or -1.
long indexIn(const std::vector<CanonVal>& sorted, const CanonVal& v);

}  // namespace obtt
