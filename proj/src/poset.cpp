#include "forge/poset.hpp"

#include <algorithm>
#include <numeric>

namespace forge {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::LT: return "LT";
    case Relation::GT: return "GT";
    case Relation::INC: return "INC";
  }
  return "?";
}

ElementSet make_set(std::vector<ElementId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

bool set_contains(const ElementSet& s, ElementId id) {
  return std::binary_search(s.begin(), s.end(), id);
}

ElementSet set_union(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ElementSet set_intersection(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ElementSet set_difference(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool set_includes(const ElementSet& super, const ElementSet& sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

FinitePoset::FinitePoset(const std::vector<ElementId>& ids) {
  for (ElementId id : ids) append_isolated(id);
}

std::optional<std::size_t> FinitePoset::find(ElementId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FinitePoset::index_of(ElementId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownElement, "element " + std::to_string(id));
  return it->second;
}

Relation FinitePoset::rel(ElementId x, ElementId y) const {
  if (x == y) throw Error(ErrorCode::UnknownElement, "relation requested for identical ids");
  return rel_at(index_of(x), index_of(y));
}

void FinitePoset::grow_capacity(std::size_t need) {
  if (need <= cap_) return;
  std::size_t cap = std::max<std::size_t>(64, cap_);
  while (cap < need) cap *= 2;
  for (auto& r : above_) r.resize(cap);
  for (auto& r : below_) r.resize(cap);
  cap_ = cap;
}

std::size_t FinitePoset::append(ElementId id, const Bitset& below, const Bitset& above) {
  if (index_.count(id) != 0) throw Error(ErrorCode::Internal, "duplicate element id " + std::to_string(id));
  const std::size_t n = ids_.size();
  grow_capacity(n + 1);
  Bitset up(cap_), down(cap_);
  for_each_bit(below, [&](std::size_t j) {
    if (j < n) {
      down.set(j);
      above_[j].set(n);
    }
  });
  for_each_bit(above, [&](std::size_t j) {
    if (j < n) {
      up.set(j);
      below_[j].set(n);
    }
  });
  ids_.push_back(id);
  index_.emplace(id, n);
  above_.push_back(std::move(up));
  below_.push_back(std::move(down));
  return n;
}

std::size_t FinitePoset::append_isolated(ElementId id) { return append(id, Bitset{}, Bitset{}); }

void FinitePoset::force_relation_at(std::size_t i, std::size_t j, Relation r) {
  above_[i].reset(j);
  above_[j].reset(i);
  below_[i].reset(j);
  below_[j].reset(i);
  if (r == Relation::LT) {
    above_[i].set(j);
    below_[j].set(i);
  } else if (r == Relation::GT) {
    above_[j].set(i);
    below_[i].set(j);
  }
}

bool FinitePoset::is_strict_order() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (above_[i].test(i)) return false;
    if (above_[i].intersects(below_[i])) return false;
    bool ok = true;
    for_each_bit(above_[i], [&](std::size_t j) {
      if (ok && !above_[j].is_subset_of(above_[i])) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

std::vector<std::pair<ElementId, ElementId>> FinitePoset::hasse_edges() const {
  std::vector<std::pair<ElementId, ElementId>> out;
  for (std::size_t i = 0; i < size(); ++i) {
    Bitset cover = above_[i];
    for_each_bit(above_[i], [&](std::size_t j) { cover.and_not(above_[j]); });
    for_each_bit(cover, [&](std::size_t j) { out.emplace_back(ids_[i], ids_[j]); });
  }
  return out;
}

FinitePoset FinitePoset::restrict_to(const std::vector<ElementId>& ids) const {
  std::vector<std::size_t> idx;
  idx.reserve(ids.size());
  for (ElementId id : ids) idx.push_back(index_of(id));
  std::sort(idx.begin(), idx.end());
  FinitePoset out;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    Bitset below(k), above(k);
    for (std::size_t m = 0; m < k; ++m) {
      Relation r = rel_at(idx[k], idx[m]);
      if (r == Relation::GT) below.set(m);
      if (r == Relation::LT) above.set(m);
    }
    out.append(ids_[idx[k]], below, above);
  }
  return out;
}

bool operator==(const FinitePoset& a, const FinitePoset& b) {
  if (a.ids_ != b.ids_) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a.above_[i] == b.above_[i])) return false;
  return true;
}

FinitePoset transitive_close(const std::vector<ElementId>& elements,
                             const std::vector<std::pair<ElementId, ElementId>>& generating_pairs) {
  const std::size_t n = elements.size();
  std::unordered_map<ElementId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(elements[i], i).second)
      throw Error(ErrorCode::Internal, "duplicate element id " + std::to_string(elements[i]));
  }
  std::vector<Bitset> reach(n, Bitset(n));
  for (auto [x, y] : generating_pairs) {
    auto ix = index.find(x), iy = index.find(y);
    if (ix == index.end() || iy == index.end())
      throw Error(ErrorCode::UnknownElement, "pair mentions unknown element");
    reach[ix->second].set(iy->second);
  }
  // Warshall over bit rows.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i].test(k)) reach[i] |= reach[k];
  for (std::size_t i = 0; i < n; ++i)
    if (reach[i].test(i))
      throw Error(ErrorCode::CycleDetected, "closure forces " + std::to_string(elements[i]) + " < itself");

  FinitePoset out;
  for (std::size_t i = 0; i < n; ++i) {
    Bitset below(i), above(i);
    for (std::size_t j = 0; j < i; ++j) {
      if (reach[j].test(i)) below.set(j);
      if (reach[i].test(j)) above.set(j);
    }
    out.append(elements[i], below, above);
  }
  return out;
}

namespace {

ElementSet closure(const FinitePoset& p, const ElementSet& q, bool downward) {
  Bitset acc(p.size());
  for (ElementId id : q) {
    const std::size_t i = p.index_of(id);
    acc.set(i);
    acc |= downward ? p.below_row(i) : p.above_row(i);
  }
  ElementSet out;
  for_each_bit(acc, [&](std::size_t i) { out.push_back(p.id_at(i)); });
  return make_set(std::move(out));
}

}  // namespace

ElementSet down_closure(const FinitePoset& p, const ElementSet& q) { return closure(p, q, true); }
ElementSet up_closure(const FinitePoset& p, const ElementSet& q) { return closure(p, q, false); }

FinitePoset opposite(const FinitePoset& p) {
  FinitePoset out;
  for (std::size_t i = 0; i < p.size(); ++i) out.append(p.id_at(i), p.above_row(i), p.below_row(i));
  return out;
}

std::vector<std::vector<std::size_t>> automorphisms(const FinitePoset& p, std::size_t bound) {
  const std::size_t n = p.size();
  if (n > bound)
    throw Error(ErrorCode::SizeBound, "automorphism search limited to " + std::to_string(bound) + " elements");
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> perm(n);
  std::vector<bool> used(n, false);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n) {
      out.push_back(perm);
      return;
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) ok = p.rel_at(k, j) == p.rel_at(c, perm[j]);
      if (!ok) continue;
      used[c] = true;
      perm[k] = c;
      rec(k + 1);
      used[c] = false;
    }
  };
  rec(0);
  return out;
}

void for_each_poset(std::size_t n, const std::function<void(const FinitePoset&)>& fn) {
  if (n > 5) throw Error(ErrorCode::SizeBound, "poset enumeration limited to n <= 5");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<ElementId> ids(n);
  std::iota(ids.begin(), ids.end(), ElementId{0});

  std::size_t total = 1;
  for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;
  std::vector<std::vector<Relation>> table(n, std::vector<Relation>(n, Relation::INC));
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto [i, j] : pairs) {
      const auto r = static_cast<Relation>(c % 3);
      c /= 3;
      table[i][j] = r;
      table[j][i] = flip(r);
    }
    bool transitive = true;
    for (std::size_t x = 0; x < n && transitive; ++x)
      for (std::size_t y = 0; y < n && transitive; ++y)
        for (std::size_t z = 0; z < n && transitive; ++z)
          if (x != y && y != z && x != z && table[x][y] == Relation::LT && table[y][z] == Relation::LT &&
              table[x][z] != Relation::LT)
            transitive = false;
    if (!transitive) continue;
    FinitePoset p;
    for (std::size_t i = 0; i < n; ++i) {
      Bitset below(i), above(i);
      for (std::size_t j = 0; j < i; ++j) {
        if (table[i][j] == Relation::GT) below.set(j);
        if (table[i][j] == Relation::LT) above.set(j);
      }
      p.append(ids[i], below, above);
    }
    fn(p);
  }
}

std::vector<FinitePoset> enumerate_posets(std::size_t n) {
  std::vector<FinitePoset> out;
  for_each_poset(n, [&](const FinitePoset& p) { out.push_back(p); });
  return out;
}

}  // namespace forge
