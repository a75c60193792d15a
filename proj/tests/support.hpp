#pragma once

// Independent reference implementations used by the test suites. Nothing here
// calls into the library's own algorithms except to read plain data back out.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "promc/promc.hpp"

namespace oracle {

using namespace promc;

// ---------------------------------------------------------------------------
// Relations and posets

using Relation = std::vector<std::vector<bool>>;

struct AxiomReport {
  bool reflexive = true, antisymmetric = true, transitive = true, directed = true;
  bool all() const { return reflexive && antisymmetric && transitive && directed; }
};

inline AxiomReport check_axioms(const Relation& r) {
  const std::size_t n = r.size();
  AxiomReport a;
  for (std::size_t i = 0; i < n; ++i) a.reflexive = a.reflexive && r[i][i];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && r[i][j] && r[j][i]) a.antisymmetric = false;
      for (std::size_t k = 0; k < n; ++k)
        if (r[i][j] && r[j][k] && !r[i][k]) a.transitive = false;
      bool bound = false;
      for (std::size_t u = 0; u < n; ++u) bound = bound || (r[i][u] && r[j][u]);
      if (!bound) a.directed = false;
    }
  return a;
}

inline Relation relation_from_code(std::size_t n, std::uint64_t code) {
  Relation r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = (code >> (i * n + j)) & 1u;
  return r;
}

inline std::vector<std::pair<std::string, std::string>> pairs_of(const Relation& r) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r[i][j]) out.emplace_back(std::to_string(i), std::to_string(j));
  return out;
}

inline std::vector<std::string> numerals(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

/// Smallest code over all relabelings.
inline std::uint64_t canonical(const Relation& r) {
  const std::size_t n = r.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~std::uint64_t(0);
  do {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[perm[i]][perm[j]]) c |= std::uint64_t(1) << (i * n + j);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// One representative of every directed partial order on 1..max_size points.
inline std::vector<IndexPoset> directed_posets(std::size_t max_size) {
  std::vector<IndexPoset> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << (n * n)); ++code) {
      const auto r = relation_from_code(n, code);
      if (!check_axioms(r).all() || !seen.insert(canonical(r)).second) continue;
      out.push_back(*validate_index(numerals(n), pairs_of(r), false).poset);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite sets

/// Every function [a] -> [b] as an image vector, in lexicographic order.
inline std::vector<std::vector<std::size_t>> all_functions(std::size_t a, std::size_t b) {
  std::vector<std::vector<std::size_t>> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < a; ++i) total *= b;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::size_t> img(a);
    std::size_t c = code;
    for (std::size_t i = a; i-- > 0;) {
      img[i] = c % b;
      c /= b;
    }
    out.push_back(img);
  }
  return out;
}

inline FinSet set_of(std::size_t n, const std::string& prefix = "e") {
  FinSet s;
  for (std::size_t i = 0; i < n; ++i) s.elements.push_back(prefix + std::to_string(i));
  return s;
}

/// Every SetBij pro-object over `index` whose level sets have at most max_size elements.
inline std::vector<ProObject<SetBij>> all_set_objects(const IndexPoset& index, std::size_t max_size) {
  std::vector<ProObject<SetBij>> out;
  const auto covers = index.covers();
  const std::size_t n = index.size();
  std::vector<std::size_t> sizes(n, 0);
  std::vector<std::vector<std::size_t>> images(covers.size());
  std::vector<FinSet> values;

  std::function<void(std::size_t)> choose_maps = [&](std::size_t c) {
    if (c == covers.size()) {
      ProObject<SetBij>::CoverMaps cm;
      for (std::size_t q = 0; q < covers.size(); ++q) {
        auto [lo, hi] = covers[q];
        cm.emplace(std::make_pair(hi, lo), FinMap{values[hi], values[lo], images[q]});
      }
      // Non-commuting diamonds are rejected by the constructor.
      try {
        out.push_back(ProObject<SetBij>::finite(index, values, cm));
      } catch (const Error&) {
      }
      return;
    }
    auto [lo, hi] = covers[c];
    for (const auto& img : all_functions(sizes[hi], sizes[lo])) {
      images[c] = img;
      choose_maps(c + 1);
    }
  };
  std::function<void(std::size_t)> choose_sizes = [&](std::size_t k) {
    if (k == n) {
      values.clear();
      for (std::size_t s = 0; s < n; ++s) values.push_back(set_of(sizes[s]));
      choose_maps(0);
      return;
    }
    for (std::size_t v = 0; v <= max_size; ++v) {
      sizes[k] = v;
      choose_sizes(k + 1);
    }
  };
  choose_sizes(0);
  return out;
}

/// Number of commuting diagrams over `index` with sets of size <= max_size,
/// counted directly from the relation without building any objects.
inline std::size_t count_set_diagrams(const IndexPoset& index, std::size_t max_size) {
  const std::size_t n = index.size();
  std::vector<std::pair<std::size_t, std::size_t>> strict;  // (lo, hi), lo < hi
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && index.leq(a, b)) strict.emplace_back(a, b);
  std::size_t count = 0;
  std::vector<std::size_t> sizes(n);
  std::vector<std::vector<std::size_t>> maps(strict.size());
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k < n) {
      for (std::size_t v = 0; v <= max_size; ++v) {
        sizes[k] = v;
        rec(k + 1);
      }
      return;
    }
    std::function<void(std::size_t)> pick = [&](std::size_t q) {
      if (q == strict.size()) {
        auto find = [&](std::size_t lo, std::size_t hi) -> const std::vector<std::size_t>& {
          for (std::size_t i = 0; i < strict.size(); ++i)
            if (strict[i] == std::make_pair(lo, hi)) return maps[i];
          throw std::logic_error("missing relation");
        };
        for (auto [a, b] : strict)
          for (auto [c, d] : strict)
            if (b == c) {
              const auto& ab = find(a, b);
              const auto& bd = find(b, d);
              const auto& ad = find(a, d);
              for (std::size_t e = 0; e < sizes[d]; ++e)
                if (ab[bd[e]] != ad[e]) return;
            }
        ++count;
        return;
      }
      auto [lo, hi] = strict[q];
      for (const auto& img : all_functions(sizes[hi], sizes[lo])) {
        maps[q] = img;
        pick(q + 1);
      }
    };
    pick(0);
  };
  rec(0);
  return count;
}

// ---------------------------------------------------------------------------
// hom = lim_s colim_t Hom(X_t, Y_s), by brute force over functions

inline std::size_t encode(const std::vector<std::size_t>& img, std::size_t base) {
  std::size_t c = 0;
  for (auto v : img) c = c * base + v;
  return c;
}

inline std::size_t power(std::size_t b, std::size_t e) {
  std::size_t p = 1;
  while (e--) p *= b;
  return p;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

/// colim_t Hom(X_t, [k]) for one source pro-object and every k <= max_size.
class SourceColimits {
 public:
  SourceColimits(const ProObject<SetBij>& x, std::size_t max_size) : x_(x) {
    const std::size_t n = x.index().size();
    for (std::size_t k = 0; k <= max_size; ++k) {
      Table tb;
      tb.offset.resize(n + 1, 0);
      for (std::size_t t = 0; t < n; ++t) tb.offset[t + 1] = tb.offset[t] + power(k, x.value(t).size());
      UnionFind uf(tb.offset[n]);
      for (std::size_t t = 0; t < n; ++t)
        for (std::size_t u = 0; u < n; ++u) {
          if (t == u || !x.index().leq(t, u)) continue;
          const auto& step = x.structure(u, t).image;
          for (const auto& g : all_functions(x.value(t).size(), k)) {
            std::vector<std::size_t> pulled(step.size());
            for (std::size_t e = 0; e < step.size(); ++e) pulled[e] = g[step[e]];
            uf.unite(tb.offset[t] + encode(g, k), tb.offset[u] + encode(pulled, k));
          }
        }
      tb.cls.resize(tb.offset[n]);
      std::map<std::size_t, std::size_t> ids;
      for (std::size_t i = 0; i < tb.offset[n]; ++i) {
        auto [it, fresh] = ids.emplace(uf.find(i), ids.size());
        tb.cls[i] = it->second;
        if (fresh) tb.reps.push_back(i);
      }
      tables_.push_back(std::move(tb));
    }
    pushed_.assign(max_size + 1, std::vector<std::vector<std::size_t>>(max_size + 1));
    for (std::size_t from = 0; from <= max_size; ++from)
      for (std::size_t k = 0; k <= max_size; ++k)
        for (const auto& step : all_functions(from, k))
          for (std::size_t c = 0; c < classes(from); ++c) pushed_[from][k].push_back(push_slow(from, c, step, k));
  }

  std::size_t classes(std::size_t k) const { return tables_[k].reps.size(); }

  /// Class of step o rep(c), where step is a function [from] -> [k].
  std::size_t push(std::size_t from, std::size_t c, const std::vector<std::size_t>& step, std::size_t k) const {
    return pushed_[from][k][encode(step, k) * classes(from) + c];
  }

 private:
  std::size_t push_slow(std::size_t from, std::size_t c, const std::vector<std::size_t>& step, std::size_t k) const {
    const auto& src = tables_[from];
    std::size_t code = src.reps[c];
    std::size_t t = 0;
    while (src.offset[t + 1] <= code) ++t;
    code -= src.offset[t];
    const std::size_t len = x_.value(t).size();
    std::vector<std::size_t> g(len);
    for (std::size_t e = len; e-- > 0;) {
      g[e] = code % from;
      code /= from;
    }
    for (auto& v : g) v = step[v];
    return tables_[k].cls[tables_[k].offset[t] + encode(g, k)];
  }

  struct Table {
    std::vector<std::size_t> offset;
    std::vector<std::size_t> cls;
    std::vector<std::size_t> reps;
  };
  ProObject<SetBij> x_;
  std::vector<Table> tables_;
  std::vector<std::vector<std::vector<std::size_t>>> pushed_;  // [from][k][step * classes(from) + c]
};

/// A target pro-object flattened to sizes and the maps between related levels.
struct TargetShape {
  std::vector<std::size_t> size;
  std::vector<std::size_t> order;  // larger elements first so that constraints bite early
  struct Step {
    std::size_t hi, lo;
    std::vector<std::size_t> image;
  };
  std::vector<std::vector<Step>> above;  // above[s]: steps (hi -> s) with hi placed before s

  explicit TargetShape(const ProObject<SetBij>& y) {
    const auto& index = y.index();
    const std::size_t n = index.size();
    for (std::size_t s = 0; s < n; ++s) size.push_back(y.value(s).size());
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> below(n, 0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t s = 0; s < n; ++s) below[a] += index.leq(s, a);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return below[a] != below[b] ? below[a] > below[b] : a < b; });
    above.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t hi = order[j], lo = order[k];
        if (index.leq(lo, hi)) above[lo].push_back({hi, lo, y.structure(hi, lo).image});
      }
  }
};

/// Compatible families (c_s) with Y(s' -> s) . c_s' = c_s for every related pair.
/// In a directed poset two related elements are visited larger first.
inline std::size_t brute_hom_count(const SourceColimits& cx, const TargetShape& y) {
  const std::size_t n = y.size.size();
  std::vector<std::size_t> pick(n, 0);
  std::size_t count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n) {
      ++count;
      return;
    }
    const std::size_t s = y.order[k];
    for (std::size_t c = 0; c < cx.classes(y.size[s]); ++c) {
      bool ok = true;
      for (const auto& st : y.above[s])
        if (cx.push(y.size[st.hi], pick[st.hi], st.image, y.size[s]) != c) {
          ok = false;
          break;
        }
      if (!ok) continue;
      pick[s] = c;
      rec(k + 1);
    }
  };
  rec(0);
  return count;
}

inline std::size_t brute_hom_count(const ProObject<SetBij>& x, const ProObject<SetBij>& y, std::size_t max_size = 3) {
  return brute_hom_count(SourceColimits(x, max_size), TargetShape(y));
}

/// Size of lim Y: compatible families of elements, counted directly.
inline std::size_t brute_limit_size(const ProObject<SetBij>& y) {
  const std::size_t n = y.index().size();
  std::vector<std::size_t> pick(n);
  std::size_t count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t s) {
    if (s == n) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (a != b && y.index().leq(a, b) && y.structure(b, a).image[pick[b]] != pick[a]) return;
      ++count;
      return;
    }
    for (std::size_t e = 0; e < y.value(s).size(); ++e) {
      pick[s] = e;
      rec(s + 1);
    }
  };
  rec(0);
  return count;
}

// ---------------------------------------------------------------------------
// Chain complexes over GF(2), by enumerating vectors

using Vec = std::uint64_t;

inline Vec apply(const gf2::Matrix& m, Vec v) {
  Vec out = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    bool bit = false;
    for (std::size_t c = 0; c < m.cols(); ++c) bit ^= m.get(r, c) && ((v >> c) & 1u);
    if (bit) out |= Vec(1) << r;
  }
  return out;
}

inline std::set<Vec> cycles(const Complex& c, int n) {
  std::set<Vec> out;
  for (Vec v = 0; v < (Vec(1) << c.dim(n)); ++v)
    if (apply(c.boundary(n), v) == 0) out.insert(v);
  return out;
}

inline std::set<Vec> boundaries(const Complex& c, int n) {
  std::set<Vec> out;
  for (Vec v = 0; v < (Vec(1) << c.dim(n + 1)); ++v) out.insert(apply(c.boundary(n + 1), v));
  return out;
}

inline std::size_t brute_homology_dim(const Complex& c, int n) {
  const auto z = cycles(c, n).size(), b = boundaries(c, n).size();
  std::size_t d = 0;
  while ((b << d) < z) ++d;
  return d;
}

/// we: H(f) bijective; cof: injective; fib: surjective. Degreewise, by enumeration.
inline MapClass brute_classify(const ChainMap& f) {
  const auto& x = f.source();
  const auto& y = f.target();
  const int lo = std::min(x.is_zero() ? 0 : x.lo(), y.is_zero() ? 0 : y.lo());
  const int hi = std::max(x.is_zero() ? 0 : x.hi(), y.is_zero() ? 0 : y.hi());
  MapClass c{true, true, true};
  for (int n = lo; n <= hi; ++n) {
    const auto m = f.component(n);
    std::set<Vec> image;
    for (Vec v = 0; v < (Vec(1) << x.dim(n)); ++v) {
      const Vec w = apply(m, v);
      if (v != 0 && w == 0) c.cof = false;
      image.insert(w);
    }
    if (image.size() != (std::size_t(1) << y.dim(n))) c.fib = false;

    const auto zx = cycles(x, n), bx = boundaries(x, n), zy = cycles(y, n), by = boundaries(y, n);
    // Injective on homology: f z a boundary forces z a boundary.
    for (Vec z : zx)
      if (by.count(apply(m, z)) && !bx.count(z)) c.we = false;
    // Surjective on homology: every cycle of Y is f z + b.
    for (Vec z : zy) {
      bool hit = false;
      for (Vec u : zx) {
        const Vec w = apply(m, u);
        if (by.count(w ^ z)) {
          hit = true;
          break;
        }
      }
      if (!hit) c.we = false;
    }
  }
  return c;
}

/// d o d = 0 and f d = d f, checked by enumeration.
inline bool brute_is_chain_map(const ChainMap& f) {
  const auto& x = f.source();
  const auto& y = f.target();
  for (int n = std::min(x.lo(), y.lo()) - 1; n <= std::max(x.hi(), y.hi()) + 1; ++n)
    for (Vec v = 0; v < (Vec(1) << x.dim(n)); ++v)
      if (apply(f.component(n - 1), apply(x.boundary(n), v)) != apply(y.boundary(n), apply(f.component(n), v)))
        return false;
  return true;
}

}  // namespace oracle
