#include <random>

#include "forge/verifier.hpp"

namespace forge {

namespace {

constexpr ElementId kB = 1000;
constexpr ElementId kC = 1001;

// Dense relation matrix with a direct strict-order scan.
struct Matrix {
  std::vector<ElementId> ids;
  std::vector<std::vector<bool>> lt;

  explicit Matrix(const FinitePoset& a) : ids(a.elements()), lt(ids.size(), std::vector<bool>(ids.size())) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j) lt[i][j] = i != j && a.less_at(i, j);
  }
  std::size_t add(ElementId id) {
    ids.push_back(id);
    for (auto& row : lt) row.push_back(false);
    lt.emplace_back(ids.size(), false);
    return ids.size() - 1;
  }
  void place(std::size_t k, std::size_t n, const ValidTriple& t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (set_contains(t.U, ids[i])) lt[i][k] = true;
      if (set_contains(t.W, ids[i])) lt[k][i] = true;
    }
  }
  bool is_order() const {
    const std::size_t n = ids.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (lt[i][i]) return false;
      for (std::size_t j = 0; j < n; ++j) {
        if (lt[i][j] && lt[j][i]) return false;
        for (std::size_t k = 0; k < n; ++k)
          if (lt[i][j] && lt[j][k] && !lt[i][k]) return false;
      }
    }
    return true;
  }
};

std::vector<ValidTriple> partitions(const FinitePoset& a) {
  std::vector<ValidTriple> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < a.size(); ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    ValidTriple t;
    std::size_t c = code;
    for (ElementId id : a.elements()) {
      (c % 3 == 0 ? t.U : c % 3 == 1 ? t.V : t.W).push_back(id);
      c /= 3;
    }
    t.U = make_set(t.U);
    t.V = make_set(t.V);
    t.W = make_set(t.W);
    out.push_back(t);
  }
  return out;
}

bool one_point(const FinitePoset& a, const ValidTriple& t) {
  Matrix m(a);
  m.place(m.add(kB), a.size(), t);
  return m.is_order();
}

bool two_point(const FinitePoset& a, const ValidTriple& p, const ValidTriple& q, bool b_below_c) {
  Matrix m(a);
  const std::size_t b = m.add(kB), c = m.add(kC);
  m.place(b, a.size(), p);
  m.place(c, a.size(), q);
  if (b_below_c) m.lt[b][c] = true;
  return m.is_order();
}

std::string show(const ValidTriple& t) { return to_json(t).dump(); }

}  // namespace

AuditReport oracle_suite(std::size_t n_max, OracleFault fault, std::size_t sampled_opens, std::uint64_t seed) {
  if (n_max > 4) throw Error(ErrorCode::SizeBound, "oracle suite limited to n <= 4");
  AuditReport rep;
  rep.audit = "oracles";
  auto meet_fn = [&](const ValidTriple& p, const ValidTriple& q) {
    return fault == OracleFault::PerturbedMeet && p != q ? join(p, q) : meet(p, q);
  };
  // First mismatch per check only: posets come smallest first, so it is a
  // minimal certificate.
  std::map<std::string, bool> reported;
  auto mismatch = [&](const std::string& check, const FinitePoset& a, const std::string& detail) {
    ++rep.counts["mismatches:" + check];
    if (reported[check]) return;
    reported[check] = true;
    rep.fail({check, a.elements(), a.hasse_edges(), detail});
  };
  std::size_t posets = 0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    for_each_poset(n, [&](const FinitePoset& a) {
      ++posets;
      std::vector<ValidTriple> valid;
      for (const ValidTriple& t : partitions(a)) {
        ++rep.checks;
        const bool want = one_point(a, t);
        if (is_valid_triple(a, t) != want) mismatch("valid_triple", a, show(t));
        if (want) valid.push_back(t);
      }
      auto oracle_ll = [&](const ValidTriple& p, const ValidTriple& q) { return p != q && two_point(a, p, q, true); };
      auto leq = [&](const ValidTriple& p, const ValidTriple& q) { return p == q || oracle_ll(p, q); };
      std::vector<std::vector<bool>> le(valid.size(), std::vector<bool>(valid.size()));
      for (std::size_t i = 0; i < valid.size(); ++i)
        for (std::size_t j = 0; j < valid.size(); ++j) {
          const ValidTriple &p = valid[i], &q = valid[j];
          rep.checks += 2;
          const bool lt = two_point(a, p, q, true);
          const bool inc = two_point(a, p, q, false);
          if (lt_valid(p, q) != lt) mismatch("lt_valid", a, show(p) + " " + show(q));
          if (inc_valid(p, q) != inc) mismatch("inc_valid", a, show(p) + " " + show(q));
          le[i][j] = leq(p, q);
        }
      for (std::size_t i = 0; i < valid.size(); ++i)
        for (std::size_t j = 0; j < valid.size(); ++j) {
          std::optional<std::size_t> inf, sup;
          for (std::size_t r = 0; r < valid.size(); ++r) {
            if (le[r][i] && le[r][j]) {
              bool top = true;
              for (std::size_t x = 0; x < valid.size() && top; ++x)
                if (le[x][i] && le[x][j]) top = le[x][r];
              if (top) inf = r;
            }
            if (le[i][r] && le[j][r]) {
              bool bottom = true;
              for (std::size_t x = 0; x < valid.size() && bottom; ++x)
                if (le[i][x] && le[j][x]) bottom = le[r][x];
              if (bottom) sup = r;
            }
          }
          rep.checks += 2;
          const ValidTriple &p = valid[i], &q = valid[j];
          if (!inf || meet_fn(p, q) != valid[*inf]) mismatch("meet", a, show(p) + " " + show(q));
          if (!sup || join(p, q) != valid[*sup]) mismatch("join", a, show(p) + " " + show(q));
        }
      // σ⁺ : λ(A) -> μ(A), order-preserving bijection.
      std::vector<std::size_t> lam, mu;
      for (std::size_t i = 0; i < valid.size(); ++i) {
        if (valid[i].U.empty()) lam.push_back(i);
        if (valid[i].W.empty()) mu.push_back(i);
      }
      ++rep.checks;
      if (lam.size() != mu.size()) mismatch("shift", a, "|λ| != |μ|");
      for (std::size_t i : lam) {
        ++rep.checks;
        const ValidTriple img = shift_up(valid[i]);
        std::optional<std::size_t> k;
        for (std::size_t m : mu)
          if (valid[m] == img) k = m;
        if (!k || shift_down(img) != valid[i]) {
          mismatch("shift", a, show(valid[i]));
          continue;
        }
        for (std::size_t j : lam) {
          const ValidTriple img2 = shift_up(valid[j]);
          for (std::size_t m : mu)
            if (valid[m] == img2 && le[i][j] != le[*k][m]) mismatch("shift", a, show(valid[i]) + " " + show(valid[j]));
        }
      }
    });
  }
  rep.counts["posets"] = posets;

  // Basic opens: a random subset of a random poset with a valid triple on it.
  std::mt19937_64 rng(seed);
  std::vector<FinitePoset> four;
  for_each_poset(std::min<std::size_t>(n_max, 4), [&](const FinitePoset& a) { four.push_back(a); });
  for (std::size_t k = 0; k < sampled_opens && !four.empty(); ++k) {
    const FinitePoset& a = four[rng() % four.size()];
    ElementSet sub;
    for (ElementId x : a.elements())
      if (rng() % 2 == 0) sub.push_back(x);
    const auto opens = all_valid_triples(a.restrict_to(make_set(sub)));
    const ValidTriple& open = opens[rng() % opens.size()];
    std::vector<ValidTriple> in;
    for (const ValidTriple& t : all_valid_triples(a))
      if (in_basic_open(t, open)) in.push_back(t);
    for (const auto& p : in)
      for (const auto& q : in) {
        ++rep.checks;
        if (!in_basic_open(meet_fn(p, q), open)) mismatch("open_meet", a, show(open) + " " + show(p) + " " + show(q));
        if (!in_basic_open(join(p, q), open)) mismatch("open_join", a, show(open) + " " + show(p) + " " + show(q));
      }
  }
  rep.counts["sampled_opens"] = sampled_opens;
  return rep;
}

}  // namespace forge
