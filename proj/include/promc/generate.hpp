#pragma once

// Random generators for indices, pro-objects and level maps, and the
// configurations the property suites are assembled from.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "promc/chain_f2.hpp"
#include "promc/index.hpp"
#include "promc/pro.hpp"
#include "promc/set_bij.hpp"
#include "promc/strict.hpp"

namespace promc::gen {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct Params {
  std::size_t max_index = 5;  // elements in a random index
  std::size_t max_set = 4;    // SetBij: elements per level
  std::size_t max_dim = 3;    // ChainF2: dimension per degree
  int max_degree = 2;         // ChainF2: degrees 0..max_degree
};

/// Elements "0".."n-1" with n-1 the maximum; other relations at random.
inline IndexPoset random_index(Rng& rng, std::size_t max_elements) {
  const std::size_t n = pick(rng, 1, std::max<std::size_t>(1, max_elements));
  std::vector<std::string> names;
  for (std::size_t k = 0; k < n; ++k) names.push_back(std::to_string(k));
  std::vector<std::pair<std::string, std::string>> rel;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    rel.emplace_back(names[i], names[n - 1]);
    for (std::size_t j = i + 1; j + 1 < n; ++j)
      if (coin(rng, 0.4)) rel.emplace_back(names[i], names[j]);
  }
  auto v = validate_index(names, rel, true);
  require(v.ok(), ErrorKind::validation, "internal: generated index is not a directed poset");
  return *v.poset;
}

/// Strictly larger elements that cover s.
inline std::vector<std::size_t> upper_covers(const IndexPoset& p, std::size_t s) {
  std::vector<std::size_t> out;
  for (auto [lo, hi] : p.covers())
    if (lo == s) out.push_back(hi);
  return out;
}

/// Inverse of a levelwise isomorphism.
template <ModelCategory M>
ProMap<M> level_inverse(const ProMap<M>& f) {
  std::vector<typename M::Map> cs;
  for (std::size_t s = 0; s < f.target().index().size(); ++s) cs.push_back(M::inverse(f.level_component(s)));
  return ProMap<M>::level(f.target(), f.source(), std::move(cs));
}

/// h_{Ms} = X(M -> s) o f_M^{-1} for every s below the maximum.
template <ModelCategory M>
Witnesses<M> witnesses_from_top(const ProMap<M>& f) {
  const auto& x = f.source();
  const auto top = x.top();
  const auto inv = M::inverse(f.level_component(top));
  Witnesses<M> w;
  for (std::size_t s = 0; s < x.index().size(); ++s)
    if (s != top) w.emplace(std::make_pair(top, s), M::compose(x.structure(top, s), inv));
  return w;
}

template <class M>
struct Gen;

// ---------------------------------------------------------------------------
// Finite sets

template <>
struct Gen<SetBij> {
  static FinSet named_set(const std::string& prefix, std::size_t n) {
    FinSet s;
    for (std::size_t k = 0; k < n; ++k) s.elements.push_back(prefix + std::to_string(k));
    return s;
  }

  static ProObject<SetBij> constant_over(const IndexPoset& index, const FinSet& s) {
    typename ProObject<SetBij>::CoverMaps covers;
    for (auto [lo, hi] : index.covers()) covers.emplace(std::make_pair(hi, lo), SetBij::identity(s));
    return ProObject<SetBij>::finite(index, std::vector<FinSet>(index.size(), s), covers);
  }

  /// A natural map out of x into a new pro-object: quotients of a new top set, copies of
  /// the elements x(M -> s) misses, and extra elements that follow some top element.
  static ProMap<SetBij> map_from(Rng& rng, const ProObject<SetBij>& x, const Params& prm, bool bijective_top = false) {
    const auto& index = x.index();
    const std::size_t n = index.size();
    const auto top = x.top();
    const FinSet xm = x.value(top);
    std::vector<std::vector<std::size_t>> missed(n);  // elements of x_s outside the image from the top
    std::vector<std::vector<std::optional<std::size_t>>> from_top(n);  // some top preimage of each element
    std::size_t most_missed = 0;
    for (std::size_t s = 0; s < n; ++s) {
      const auto down = x.structure(top, s);
      from_top[s].assign(x.value(s).size(), std::nullopt);
      for (std::size_t i = 0; i < xm.size(); ++i)
        if (!from_top[s][down.image[i]]) from_top[s][down.image[i]] = i;
      for (std::size_t e = 0; e < x.value(s).size(); ++e)
        if (!from_top[s][e]) missed[s].push_back(e);
      most_missed = std::max(most_missed, missed[s].size());
    }
    std::size_t k;
    if (bijective_top) {
      k = xm.size();
    } else {
      const std::size_t lo = xm.size() ? 1 : 0;
      const std::size_t hi = prm.max_set > most_missed ? prm.max_set - most_missed : 1;
      k = pick(rng, lo, std::max(lo, hi));
    }
    std::vector<std::size_t> hm(xm.size());
    if (bijective_top) {
      std::iota(hm.begin(), hm.end(), 0);
      std::shuffle(hm.begin(), hm.end(), rng);
    } else {
      for (auto& v : hm) v = pick(rng, 0, k - 1);
    }

    // Partition of the new top set at each level, coarser going down.
    std::vector<std::vector<std::size_t>> cls(n, std::vector<std::size_t>(k));
    const auto order = linear_extension(index).order;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto s = *it;
      std::vector<std::size_t> parent(k);
      std::iota(parent.begin(), parent.end(), 0);
      std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
        return parent[a] == a ? a : parent[a] = find(parent[a]);
      };
      auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
      if (s != top) {
        for (auto t : upper_covers(index, s))
          for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
              if (cls[t][a] == cls[t][b]) unite(a, b);
        const auto down = x.structure(top, s);
        for (std::size_t i = 0; i < xm.size(); ++i)
          for (std::size_t j = i + 1; j < xm.size(); ++j)
            if (down.image[i] == down.image[j]) unite(hm[i], hm[j]);
        if (k >= 2 && coin(rng, 0.35)) unite(pick(rng, 0, k - 1), pick(rng, 0, k - 1));
      }
      std::map<std::size_t, std::size_t> block;
      for (std::size_t a = 0; a < k; ++a) {
        auto r = find(a);
        if (!block.count(r)) block.emplace(r, block.size());
        cls[s][a] = block.at(r);
      }
    }
    auto blocks = [&](std::size_t s) { return k ? *std::max_element(cls[s].begin(), cls[s].end()) + 1 : 0; };

    // Elements: blocks, then copies of missed elements, then followers of top elements.
    std::vector<FinSet> values(n);
    std::vector<std::vector<std::size_t>> follows(n);  // top element followed by each extra
    for (std::size_t s = 0; s < n; ++s) {
      const std::string p = s == top ? "v" : "q";
      for (std::size_t b = 0; b < blocks(s); ++b) values[s].elements.push_back(p + std::to_string(b));
      for (std::size_t e = 0; e < missed[s].size(); ++e) values[s].elements.push_back("c" + std::to_string(e));
      if (s != top && k > 0 && values[s].size() < prm.max_set && coin(rng, 0.3)) {
        follows[s].push_back(pick(rng, 0, k - 1));
        values[s].elements.push_back("m0");
      }
    }
    // h_s : x_s -> v_s
    std::vector<std::vector<std::size_t>> h(n);
    for (std::size_t s = 0; s < n; ++s) {
      h[s].resize(x.value(s).size());
      for (std::size_t e = 0; e < x.value(s).size(); ++e) {
        if (from_top[s][e]) {
          h[s][e] = cls[s][hm[*from_top[s][e]]];
        } else {
          auto pos = std::find(missed[s].begin(), missed[s].end(), e) - missed[s].begin();
          h[s][e] = blocks(s) + std::size_t(pos);
        }
      }
    }
    typename ProObject<SetBij>::CoverMaps covers;
    for (auto [s, t] : index.covers()) {
      FinMap m{values[t], values[s], std::vector<std::size_t>(values[t].size())};
      std::vector<std::size_t> rep(blocks(t), 0);
      for (std::size_t a = 0; a < k; ++a) rep[cls[t][a]] = a;
      for (std::size_t b = 0; b < blocks(t); ++b) m.image[b] = cls[s][rep[b]];
      const auto xs = x.structure(t, s);
      for (std::size_t e = 0; e < missed[t].size(); ++e) m.image[blocks(t) + e] = h[s][xs.image[missed[t][e]]];
      for (std::size_t e = 0; e < follows[t].size(); ++e)
        m.image[blocks(t) + missed[t].size() + e] = cls[s][follows[t][e]];
      covers.emplace(std::make_pair(t, s), std::move(m));
    }
    auto v = ProObject<SetBij>::finite(index, values, covers);
    std::vector<FinMap> comps;
    for (std::size_t s = 0; s < n; ++s) comps.push_back(FinMap{x.value(s), values[s], h[s]});
    return ProMap<SetBij>::level(x, v, std::move(comps));
  }

  static ProObject<SetBij> object(Rng& rng, const IndexPoset& index, const Params& prm) {
    const auto base = constant_over(index, named_set("x", pick(rng, 0, prm.max_set)));
    return map_from(rng, base, prm).target();
  }

  static ProMap<SetBij> level_map(Rng& rng, const IndexPoset& index, const Params& prm) {
    return map_from(rng, object(rng, index, prm), prm);
  }

  /// A levelwise bijection renaming every element.
  static ProMap<SetBij> iso_from(Rng& rng, const ProObject<SetBij>& x) {
    const auto& index = x.index();
    std::vector<FinSet> values(index.size());
    std::vector<FinMap> comps;
    for (std::size_t s = 0; s < index.size(); ++s) {
      const auto xs = x.value(s);
      std::vector<std::size_t> perm(xs.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      values[s] = named_set("r", xs.size());
      comps.push_back(FinMap{xs, values[s], perm});
    }
    typename ProObject<SetBij>::CoverMaps covers;
    for (auto [s, t] : index.covers())
      covers.emplace(std::make_pair(t, s),
                     SetBij::compose(comps[s], SetBij::compose(x.structure(t, s), SetBij::inverse(comps[t]))));
    auto y = ProObject<SetBij>::finite(index, values, covers);
    for (std::size_t s = 0; s < index.size(); ++s) comps[s] = FinMap{x.value(s), values[s], comps[s].image};
    return ProMap<SetBij>::level(x, y, std::move(comps));
  }

  static ProMap<SetBij> iso_onto(Rng& rng, const ProObject<SetBij>& y) { return level_inverse(iso_from(rng, y)); }
  static ProMap<SetBij> we_from(Rng& rng, const ProObject<SetBij>& x) { return iso_from(rng, x); }
  static ProMap<SetBij> we_onto(Rng& rng, const ProObject<SetBij>& y) { return iso_onto(rng, y); }

  static ProMap<SetBij> pro_iso_from(Rng& rng, const ProObject<SetBij>& x, const Params& prm) {
    return map_from(rng, x, prm, true);
  }

  /// y x F -> y with F a constant set, then renamed.
  static ProMap<SetBij> fib_onto(Rng& rng, const ProObject<SetBij>& y, const Params& prm) {
    const auto& index = y.index();
    const std::size_t f = pick(rng, 1, std::max<std::size_t>(1, prm.max_set / 2));
    std::vector<FinSet> values(index.size());
    std::vector<FinMap> comps;
    for (std::size_t s = 0; s < index.size(); ++s) {
      const auto ys = y.value(s);
      FinMap pr{{}, ys, {}};
      for (std::size_t a = 0; a < ys.size(); ++a)
        for (std::size_t b = 0; b < f; ++b) {
          values[s].elements.push_back("(" + ys.elements[a] + "," + std::to_string(b) + ")");
          pr.image.push_back(a);
        }
      pr.source = values[s];
      comps.push_back(pr);
    }
    typename ProObject<SetBij>::CoverMaps covers;
    for (auto [s, t] : index.covers()) {
      const auto yts = y.structure(t, s);
      FinMap m{values[t], values[s], std::vector<std::size_t>(values[t].size())};
      for (std::size_t k = 0; k < values[t].size(); ++k) m.image[k] = yts.image[k / f] * f + k % f;
      covers.emplace(std::make_pair(t, s), m);
    }
    auto x = ProObject<SetBij>::finite(index, values, covers);
    auto p = ProMap<SetBij>::level(x, y, std::move(comps));
    return compose(p, iso_onto(rng, x));
  }
};

// ---------------------------------------------------------------------------
// Chain complexes over the two-element field

template <>
struct Gen<ChainF2> {
  static Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m.set(i, j, coin(rng));
    return m;
  }

  static Complex complex(Rng& rng, std::size_t max_dim, int max_degree) {
    std::map<int, std::size_t> dims;
    for (int n = 0; n <= max_degree; ++n) dims[n] = pick(rng, 0, max_dim);
    std::map<int, Matrix> bd;
    for (int n = 1; n <= max_degree; ++n) bd[n] = random_matrix(rng, dims[n - 1], dims[n]);
    for (int n = 1; n < max_degree; ++n) {
      // keep d_n d_{n+1} = 0 by rejecting or zeroing
      bool ok = false;
      for (int tries = 0; tries < 16 && !ok; ++tries) {
        ok = (bd[n] * bd[n + 1]).rows() == 0 || gf2::rank(bd[n] * bd[n + 1]) == 0;
        if (!ok) bd[n] = random_matrix(rng, dims[n - 1], dims[n]);
      }
      if (!ok) bd[n] = Matrix(dims[n - 1], dims[n]);
    }
    return Complex::from_degrees(dims, bd);
  }

  static Complex disk(int n) {
    return Complex::from_degrees({{n - 1, 1}, {n, 1}}, {{n, Matrix::identity(1)}});
  }

  static ChainMap random_chain_map(Rng& rng, const Complex& a, const Complex& b) {
    ChainMap out(a, b);
    for (const auto& g : ChainF2::hom_basis(a, b))
      if (coin(rng)) out = add(out, g);
    return out;
  }

  static ChainMap add(const ChainMap& f, const ChainMap& g) {
    std::map<int, Matrix> cs;
    for (int n = f.source().lo(); n <= f.source().hi() && !f.source().is_zero(); ++n)
      cs[n] = f.component(n) + g.component(n);
    return ChainMap(f.source(), f.target(), cs);
  }

  static Complex sum(const std::vector<Complex>& parts) {
    std::map<int, std::size_t> dims;
    std::map<int, Matrix> bd;
    int lo = 0, hi = -1;
    bool any = false;
    for (const auto& p : parts)
      if (!p.is_zero()) {
        lo = any ? std::min(lo, p.lo()) : p.lo();
        hi = any ? std::max(hi, p.hi()) : p.hi();
        any = true;
      }
    if (!any) return Complex::zero();
    for (int n = lo; n <= hi; ++n) {
      std::size_t d = 0;
      for (const auto& p : parts) d += p.dim(n);
      dims[n] = d;
    }
    for (int n = lo + 1; n <= hi; ++n) {
      Matrix m(dims[n - 1], dims[n]);
      std::size_t r = 0, c = 0;
      for (const auto& p : parts) {
        m.put(r, c, p.boundary(n));
        r += p.dim(n - 1);
        c += p.dim(n);
      }
      bd[n] = m;
    }
    return Complex::from_degrees(dims, bd);
  }

  /// The map between sums whose (row j, column i) block is block(j, i), or zero.
  static ChainMap block_map(const std::vector<Complex>& src, const std::vector<Complex>& tgt,
                            const std::function<std::optional<ChainMap>(std::size_t, std::size_t)>& block) {
    const auto a = sum(src), b = sum(tgt);
    std::map<int, Matrix> cs;
    for (int n = a.lo(); n <= a.hi() && !a.is_zero(); ++n) {
      Matrix m(b.dim(n), a.dim(n));
      std::size_t r = 0;
      for (std::size_t j = 0; j < tgt.size(); ++j) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < src.size(); ++i) {
          if (auto f = block(j, i)) m.put(r, c, f->component(n));
          c += src[i].dim(n);
        }
        r += tgt[j].dim(n);
      }
      cs[n] = m;
    }
    return ChainMap(a, b, cs);
  }

  /// A complex placed on an up-set or down-set of the index, identities inside, zero outside.
  struct Piece {
    Complex value;
    std::vector<bool> inside;
  };

  static Piece piece(Rng& rng, const IndexPoset& index, Complex c) {
    Piece p{std::move(c), std::vector<bool>(index.size(), true)};
    const auto r = pick(rng, 0, index.size() - 1);
    const auto kind = pick(rng, 0, 2);
    for (std::size_t s = 0; s < index.size(); ++s) {
      if (kind == 1) p.inside[s] = index.leq(r, s);
      if (kind == 2) p.inside[s] = index.leq(s, r);
    }
    return p;
  }

  static std::vector<Complex> parts_at(const std::vector<Piece>& ps, std::size_t s) {
    std::vector<Complex> out;
    for (const auto& p : ps) out.push_back(p.inside[s] ? p.value : Complex::zero());
    return out;
  }

  static ProObject<ChainF2> pieces_object(const IndexPoset& index, const std::vector<Piece>& ps) {
    std::vector<Complex> values;
    for (std::size_t s = 0; s < index.size(); ++s) values.push_back(sum(parts_at(ps, s)));
    typename ProObject<ChainF2>::CoverMaps covers;
    for (auto [s, t] : index.covers())
      covers.emplace(std::make_pair(t, s),
                     block_map(parts_at(ps, t), parts_at(ps, s), [&](std::size_t j, std::size_t i) -> std::optional<ChainMap> {
                       if (i != j || !ps[i].inside[t] || !ps[i].inside[s]) return std::nullopt;
                       return ChainF2::identity(ps[i].value);
                     }));
    return ProObject<ChainF2>::finite(index, values, covers);
  }

  static std::vector<Piece> random_pieces(Rng& rng, const IndexPoset& index, const Params& prm) {
    std::vector<Piece> ps;
    const std::size_t count = pick(rng, 1, 2);
    std::size_t budget = prm.max_dim;
    for (std::size_t k = 0; k < count && budget > 0; ++k) {
      const std::size_t d = k + 1 == count ? budget : pick(rng, 1, budget);
      ps.push_back(piece(rng, index, complex(rng, d, prm.max_degree)));
      budget -= d;
    }
    return ps;
  }

  /// a (+) b with structure [[a, 0], [g_s a + b g_t, b]] and the maps that come with it.
  struct TwistedSum {
    ProObject<ChainF2> object;
    ProMap<ChainF2> section;     // a -> sum, [1; g]
    ProMap<ChainF2> projection;  // sum -> a, [1, 0]
    ProMap<ChainF2> inclusion;   // b -> sum, [0; 1]
  };

  static TwistedSum twisted_sum(Rng& rng, const ProObject<ChainF2>& a, const ProObject<ChainF2>& b) {
    const auto& index = a.index();
    std::vector<ChainMap> g;
    for (std::size_t s = 0; s < index.size(); ++s) g.push_back(random_chain_map(rng, a.value(s), b.value(s)));
    std::vector<Complex> values;
    for (std::size_t s = 0; s < index.size(); ++s) values.push_back(sum({a.value(s), b.value(s)}));
    typename ProObject<ChainF2>::CoverMaps covers;
    for (auto [s, t] : index.covers()) {
      const auto at = a.structure(t, s), bt = b.structure(t, s);
      const auto twist = add(ChainF2::compose(g[s], at), ChainF2::compose(bt, g[t]));
      covers.emplace(std::make_pair(t, s), block_map({a.value(t), b.value(t)}, {a.value(s), b.value(s)},
                                                     [&](std::size_t j, std::size_t i) -> std::optional<ChainMap> {
                                                       if (j == 0 && i == 0) return at;
                                                       if (j == 1 && i == 0) return twist;
                                                       if (j == 1 && i == 1) return bt;
                                                       return std::nullopt;
                                                     }));
    }
    auto v = ProObject<ChainF2>::finite(index, values, covers);
    std::vector<ChainMap> sec, pr, inc;
    for (std::size_t s = 0; s < index.size(); ++s) {
      const auto as = a.value(s), bs = b.value(s);
      sec.push_back(block_map({as}, {as, bs}, [&](std::size_t j, std::size_t) -> std::optional<ChainMap> {
        return j == 0 ? ChainF2::identity(as) : g[s];
      }));
      pr.push_back(block_map({as, bs}, {as}, [&](std::size_t, std::size_t i) -> std::optional<ChainMap> {
        if (i == 0) return ChainF2::identity(as);
        return std::nullopt;
      }));
      inc.push_back(block_map({bs}, {as, bs}, [&](std::size_t j, std::size_t) -> std::optional<ChainMap> {
        if (j == 1) return ChainF2::identity(bs);
        return std::nullopt;
      }));
    }
    return {v, ProMap<ChainF2>::level(a, v, sec), ProMap<ChainF2>::level(v, a, pr), ProMap<ChainF2>::level(b, v, inc)};
  }

  static ProObject<ChainF2> object(Rng& rng, const IndexPoset& index, const Params& prm) {
    const auto ps = random_pieces(rng, index, prm);
    if (ps.size() < 2) return pieces_object(index, ps);
    return twisted_sum(rng, pieces_object(index, {ps[0]}), pieces_object(index, {ps[1]})).object;
  }

  /// Natural block maps between sums of pieces; a block survives only where its
  /// constant component commutes with the identity/zero structure.
  static ProMap<ChainF2> level_map(Rng& rng, const IndexPoset& index, const Params& prm) {
    const auto src = random_pieces(rng, index, prm), tgt = random_pieces(rng, index, prm);
    std::vector<std::vector<std::optional<ChainMap>>> phi(tgt.size(), std::vector<std::optional<ChainMap>>(src.size()));
    for (std::size_t j = 0; j < tgt.size(); ++j)
      for (std::size_t i = 0; i < src.size(); ++i) {
        bool natural = true;
        for (auto [s, t] : index.covers()) {
          const bool lhs = tgt[j].inside[t] && tgt[j].inside[s] && src[i].inside[t];
          const bool rhs = src[i].inside[t] && src[i].inside[s] && tgt[j].inside[s];
          natural = natural && lhs == rhs;
        }
        if (natural) phi[j][i] = random_chain_map(rng, src[i].value, tgt[j].value);
      }
    const auto x = pieces_object(index, src), y = pieces_object(index, tgt);
    std::vector<ChainMap> cs;
    for (std::size_t s = 0; s < index.size(); ++s)
      cs.push_back(block_map(parts_at(src, s), parts_at(tgt, s), [&](std::size_t j, std::size_t i) -> std::optional<ChainMap> {
        if (!phi[j][i] || !src[i].inside[s] || !tgt[j].inside[s]) return std::nullopt;
        return phi[j][i];
      }));
    auto f = ProMap<ChainF2>::level(x, y, cs);
    if (coin(rng, 0.3)) f = compose(twisted_sum(rng, y, object(rng, index, prm)).section, f);
    return f;
  }

  static ProMap<ChainF2> map_from(Rng& rng, const ProObject<ChainF2>& x, const Params& prm) {
    return twisted_sum(rng, x, object(rng, x.index(), prm)).section;
  }

  static ProObject<ChainF2> contractible(Rng& rng, const IndexPoset& index, const Params& prm) {
    return pieces_object(index, {piece(rng, index, disk(int(pick(rng, 1, std::size_t(std::max(1, prm.max_degree))))))});
  }

  static ProMap<ChainF2> iso_from(Rng&, const ProObject<ChainF2>& x) { return ProMap<ChainF2>::identity(x); }
  static ProMap<ChainF2> iso_onto(Rng&, const ProObject<ChainF2>& y) { return ProMap<ChainF2>::identity(y); }

  static ProMap<ChainF2> we_from(Rng& rng, const ProObject<ChainF2>& x, const Params& prm = {}) {
    return twisted_sum(rng, x, contractible(rng, x.index(), prm)).section;
  }
  static ProMap<ChainF2> we_onto(Rng& rng, const ProObject<ChainF2>& y, const Params& prm = {}) {
    return twisted_sum(rng, y, contractible(rng, y.index(), prm)).projection;
  }

  /// x -> x (+) P with P vanishing at the maximum, so the top component is invertible.
  static ProMap<ChainF2> pro_iso_from(Rng& rng, const ProObject<ChainF2>& x, const Params& prm) {
    const auto& index = x.index();
    const auto top = index.maximum();
    Piece p{complex(rng, std::max<std::size_t>(1, prm.max_dim / 2), prm.max_degree), std::vector<bool>(index.size(), false)};
    if (index.size() > 1) {
      auto r = pick(rng, 0, index.size() - 2);
      if (r >= top) ++r;
      for (std::size_t s = 0; s < index.size(); ++s) p.inside[s] = index.leq(s, r);
    }
    return twisted_sum(rng, x, pieces_object(index, {p})).section;
  }

  static ProMap<ChainF2> fib_onto(Rng& rng, const ProObject<ChainF2>& y, const Params& prm) {
    return twisted_sum(rng, y, object(rng, y.index(), prm)).projection;
  }
};

// ---------------------------------------------------------------------------
// Configurations

template <ModelCategory M>
struct LiftCase {
  ProSquare<M> square;
  StrictMode mode;
};

/// i from factoring a random map, p from factoring u o i for a random u out of B.
template <ModelCategory M>
LiftCase<M> lift_case(Rng& rng, const Params& prm, StrictMode mode) {
  const auto index = random_index(rng, prm.max_index);
  const auto f = Gen<M>::level_map(rng, index, prm);
  const auto fi = factor_strict(f, mode);
  const auto u = Gen<M>::map_from(rng, fi.middle, prm);
  const auto g = compose(u, fi.left);
  const auto fg = factor_strict(g, mode);
  return {{fi.left, fg.right, fg.left, u}, mode};
}

template <ModelCategory M>
struct ZigzagCase {
  ProMap<M> f, h, g;
  Witnesses<M> witnesses;
};

template <ModelCategory M>
ZigzagCase<M> zigzag_case(Rng& rng, const Params& prm) {
  const auto index = random_index(rng, prm.max_index);
  const auto z = Gen<M>::object(rng, index, prm);
  const auto h = Gen<M>::pro_iso_from(rng, z, prm);
  const auto f = Gen<M>::we_onto(rng, h.target());
  const auto g = Gen<M>::we_from(rng, z);
  return {f, h, g, witnesses_from_top(h)};
}

template <ModelCategory M>
struct SquareCase {
  CancelSide side;
  ProMap<M> top, left, right, bottom;
  Witnesses<M> witnesses;
};

template <ModelCategory M>
SquareCase<M> two_of_three_case(Rng& rng, const Params& prm, CancelSide side) {
  const auto index = random_index(rng, prm.max_index);
  if (side == CancelSide::left) {
    const auto w = Gen<M>::object(rng, index, prm);
    const auto e = Gen<M>::pro_iso_from(rng, w, prm);  // W -> Z
    const auto v = Gen<M>::we_onto(rng, w);             // X -> W
    const auto g = Gen<M>::iso_onto(rng, e.target());   // Y -> Z
    const auto f = compose(level_inverse(g), compose(e, v));
    return {side, f, v, g, e, witnesses_from_top(e)};
  }
  const auto x = Gen<M>::object(rng, index, prm);
  const auto e = Gen<M>::pro_iso_from(rng, x, prm);  // X -> W
  const auto f = Gen<M>::iso_from(rng, x);            // X -> Y
  const auto w = Gen<M>::we_from(rng, e.target());    // W -> Z
  const auto g = compose(w, compose(e, level_inverse(f)));
  return {side, e, f, w, g, witnesses_from_top(e)};
}

template <ModelCategory M>
struct ProperCase {
  ProMap<M> p, f, g;
  Witnesses<M> witnesses;
};

template <ModelCategory M>
ProperCase<M> proper_case(Rng& rng, const Params& prm) {
  const auto index = random_index(rng, prm.max_index);
  const auto w = Gen<M>::object(rng, index, prm);
  const auto g = Gen<M>::pro_iso_from(rng, w, prm);
  const auto f = Gen<M>::we_onto(rng, w);
  const auto p = Gen<M>::fib_onto(rng, g.target(), prm);
  return {p, f, g, witnesses_from_top(g)};
}

template <ModelCategory M>
struct ProIsoCase {
  ProMap<M> f;
  Witnesses<M> witnesses;
};

/// A map with invertible top component, witnesses out of the maximum, and for SetBij
/// any further witnesses a small search turns up.
template <ModelCategory M>
ProIsoCase<M> pro_iso_case(Rng& rng, const Params& prm) {
  const auto index = random_index(rng, prm.max_index);
  const auto x = Gen<M>::object(rng, index, prm);
  const auto f = Gen<M>::pro_iso_from(rng, x, prm);
  auto w = witnesses_from_top(f);
  if constexpr (EnumerableHom<M>) {
    const auto top = index.maximum();
    for (std::size_t t = 0; t < index.size(); ++t)
      for (std::size_t s = 0; s < index.size(); ++s) {
        if (t == top || !index.less(s, t) || !coin(rng, 0.5)) continue;
        for (const auto& h : M::enumerate_maps(f.target().value(t), f.source().value(s)))
          if (M::equal(M::compose(h, f.level_component(t)), f.source().structure(t, s)) &&
              M::equal(M::compose(f.level_component(s), h), f.target().structure(t, s))) {
            w.emplace(std::make_pair(t, s), h);
            break;
          }
      }
  }
  return {f, w};
}

}  // namespace promc::gen
