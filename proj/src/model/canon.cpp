#include "obtt/canon.hpp"

#include <algorithm>
#include <stdexcept>

namespace obtt {

namespace {
const std::vector<CanonVal>& noItems() {
  static const std::vector<CanonVal> empty;
  return empty;
}
}  // namespace

CanonVal CanonVal::atom(std::uint64_t n) {
  CanonVal v;
  v.kind_ = Kind::Atom;
  v.atom_ = n;
  v.items_ = nullptr;
  return v;
}

CanonVal CanonVal::tuple(std::vector<CanonVal> items) {
  CanonVal v;
  v.kind_ = Kind::Tuple;
  v.atom_ = 0;
  v.items_ = std::make_shared<const std::vector<CanonVal>>(std::move(items));
  return v;
}

CanonVal CanonVal::funTable(std::vector<std::pair<CanonVal, CanonVal>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<CanonVal> flat;
  flat.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i - 1].first == entries[i].first)
      throw std::invalid_argument("funTable: duplicate key " + entries[i].first.show());
    flat.push_back(tuple({std::move(entries[i].first), std::move(entries[i].second)}));
  }
  CanonVal v;
  v.kind_ = Kind::FunTable;
  v.atom_ = 0;
  v.items_ = std::make_shared<const std::vector<CanonVal>>(std::move(flat));
  return v;
}

CanonVal CanonVal::funTableSorted(std::vector<std::pair<CanonVal, CanonVal>> entries) {
  std::vector<CanonVal> flat;
  flat.reserve(entries.size());
  for (auto& e : entries) flat.push_back(tuple({std::move(e.first), std::move(e.second)}));
  CanonVal v;
  v.kind_ = Kind::FunTable;
  v.items_ = std::make_shared<const std::vector<CanonVal>>(std::move(flat));
  return v;
}

const std::vector<CanonVal>& CanonVal::items() const { return items_ ? *items_ : noItems(); }

const CanonVal* CanonVal::lookup(const CanonVal& key) const {
  if (kind_ != Kind::FunTable) return nullptr;
  const auto& xs = items();
  auto it = std::lower_bound(xs.begin(), xs.end(), key,
                             [](const CanonVal& entry, const CanonVal& k) { return entry.items()[0] < k; });
  if (it == xs.end() || it->items()[0] != key) return nullptr;
  return &it->items()[1];
}

int compare(const CanonVal& a, const CanonVal& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
  if (a.kind_ == CanonVal::Kind::Atom) return a.atom_ == b.atom_ ? 0 : (a.atom_ < b.atom_ ? -1 : 1);
  if (a.items_ == b.items_) return 0;
  const auto& xs = a.items();
  const auto& ys = b.items();
  std::size_t n = std::min(xs.size(), ys.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare(xs[i], ys[i])) return c;
  if (xs.size() == ys.size()) return 0;
  return xs.size() < ys.size() ? -1 : 1;
}

std::string CanonVal::show() const {
  switch (kind_) {
    case Kind::Atom:
      return std::to_string(atom_);
    case Kind::Tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < items().size(); ++i) s += (i ? "," : "") + items()[i].show();
      return s + ")";
    }
    case Kind::FunTable: {
      std::string s = "{";
      for (std::size_t i = 0; i < items().size(); ++i)
        s += (i ? "," : "") + items()[i].items()[0].show() + "->" + items()[i].items()[1].show();
      return s + "}";
    }
  }
  return "?";
}

long indexIn(const std::vector<CanonVal>& sorted, const CanonVal& v) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  if (it == sorted.end() || *it != v) return -1;
  return it - sorted.begin();
}

}  // namespace obtt
