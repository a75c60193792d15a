#pragma once

// Relative matching maps, special fibrations, strict factorizations and lifts,
// factorization of pro-isomorphisms, and the constructions behind
// two-out-of-three, retracts and properness.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "promc/error.hpp"
#include "promc/index.hpp"
#include "promc/model.hpp"
#include "promc/pro.hpp"

namespace promc {

// ---------------------------------------------------------------------------
// Matching objects

/// The limit of the diagram {U_s, Y_s : s < t} + Y_t, i.e. lim U x_{lim Y} Y_t.
template <ModelCategory M>
struct Matching {
  Diagram<M> diagram;
  Cone<M> cone;
  std::vector<std::size_t> preds;
  std::map<std::size_t, std::size_t> upper_pos;
  std::map<std::size_t, std::size_t> lower_pos;
  std::size_t top_pos = 0;

  const typename M::Object& object() const { return cone.apex; }
  typename M::Map top_leg() const { return cone.legs[top_pos]; }
  typename M::Map upper_leg(std::size_t s) const { return cone.legs[upper_pos.at(s)]; }

  /// The map W -> matching object with the given legs.
  typename M::Map induce(const typename M::Object& w, const std::function<typename M::Map(std::size_t)>& upper,
                         const std::function<typename M::Map(std::size_t)>& lower,
                         const typename M::Map& top) const {
    std::vector<typename M::Map> legs(diagram.objects.size(), top);
    for (auto s : preds) {
      legs[upper_pos.at(s)] = upper(s);
      legs[lower_pos.at(s)] = lower(s);
    }
    legs[top_pos] = top;
    return M::limit_induced(diagram, cone, w, legs);
  }
};

template <ModelCategory M>
Matching<M> matching_object(const IndexPoset& index, std::size_t t,
                            const std::function<typename M::Object(std::size_t)>& upper_value,
                            const std::function<typename M::Map(std::size_t, std::size_t)>& upper_structure,
                            const ProObject<M>& lower, const std::function<typename M::Map(std::size_t)>& f) {
  Matching<M> m;
  m.preds = index.predecessors(t);
  for (auto s : m.preds) m.upper_pos[s] = m.diagram.add(upper_value(s));
  for (auto s : m.preds) m.lower_pos[s] = m.diagram.add(lower.value(s));
  m.top_pos = m.diagram.add(lower.value(t));
  for (auto hi : m.preds)
    for (auto lo : index.lower_covers(hi)) {
      m.diagram.connect(m.upper_pos[hi], m.upper_pos[lo], upper_structure(hi, lo));
      m.diagram.connect(m.lower_pos[hi], m.lower_pos[lo], lower.structure(hi, lo));
    }
  for (auto s : m.preds) m.diagram.connect(m.upper_pos[s], m.lower_pos[s], f(s));
  for (auto c : index.lower_covers(t)) m.diagram.connect(m.top_pos, m.lower_pos[c], lower.structure(t, c));
  m.cone = M::limit(m.diagram);
  return m;
}

template <ModelCategory M>
struct MatchingMap {
  Matching<M> matching;
  typename M::Map map;  // X_t -> matching object
};

namespace strict_detail {

template <ModelCategory M>
void require_finite_level(const ProMap<M>& f, const char* what) {
  require(f.is_level(), ErrorKind::precondition, std::string(what) + " needs a level presentation; levelize first");
  require(f.target().is_finite(), ErrorKind::unsupported_regime,
          std::string(what) + " runs over finite indices; truncate towers first");
}

}  // namespace strict_detail

/// M_t f : X_t -> lim_{s<t} X_s x_{lim_{s<t} Y_s} Y_t.
template <ModelCategory M>
MatchingMap<M> matching_map(const ProMap<M>& f, std::size_t t) {
  const auto& x = f.source();
  const auto& y = f.target();
  const ProMap<M> g = f.target().is_finite() ? f : truncate(f, t + 1);
  strict_detail::require_finite_level(g, "matching_map");
  const auto& index = g.target().index();
  auto m = matching_object<M>(
      index, t, [&](std::size_t s) { return g.source().value(s); },
      [&](std::size_t a, std::size_t b) { return g.source().structure(a, b); }, g.target(),
      [&](std::size_t s) { return g.level_component(s); });
  const auto xt = g.source().value(t);
  auto map = m.induce(
      xt, [&](std::size_t s) { return g.source().structure(t, s); },
      [&](std::size_t s) { return M::compose(g.level_component(s), g.source().structure(t, s)); },
      g.level_component(t));
  (void)x;
  (void)y;
  return {std::move(m), std::move(map)};
}

enum class SpecialKind { fibration, acyclic_fibration };

inline const char* to_string(SpecialKind k) { return k == SpecialKind::fibration ? "fib" : "acyclic-fib"; }

struct LevelVerdict {
  std::size_t index;
  std::string name;
  MapClass cls;
};

struct SpecialReport {
  SpecialKind kind;
  std::vector<LevelVerdict> levels;  // in processing order
  std::optional<std::size_t> failing;
  bool depth_qualified = false;
  std::size_t depth = 0;

  bool ok() const { return !failing.has_value(); }
};

template <ModelCategory M>
SpecialReport detect_special(const ProMap<M>& f, SpecialKind kind) {
  require(f.is_level(), ErrorKind::precondition, "detect_special needs a level presentation; levelize first");
  const ProMap<M> g = f.target().is_finite() ? f : truncate(f);
  SpecialReport r{kind, {}, std::nullopt, !f.target().is_finite(), f.target().is_finite() ? 0 : f.target().index().depth()};
  const auto& index = g.target().index();
  for (auto t : linear_extension(index).order) {
    const auto c = M::classify(matching_map(g, t).map);
    r.levels.push_back({t, index.name(t), c});
    const bool good = kind == SpecialKind::fibration ? c.fib : c.acyclic_fib();
    if (!good && !r.failing) r.failing = t;
  }
  return r;
}

/// First level whose component is not in the class, if any.
template <ModelCategory M>
std::optional<std::size_t> levelwise_failure(const ProMap<M>& f, ClassName c) {
  require(f.is_level(), ErrorKind::precondition, "levelwise classes need a level presentation");
  const std::size_t n = f.target().index().size();
  for (std::size_t s = 0; s < n; ++s)
    if (!in_class(M::classify(f.level_component(s)), c)) return s;
  return std::nullopt;
}

template <ModelCategory M>
std::vector<LevelVerdict> levelwise_verdicts(const ProMap<M>& f) {
  std::vector<LevelVerdict> out;
  const auto& index = f.target().index();
  for (std::size_t s = 0; s < index.size(); ++s) out.push_back({s, index.name(s), M::classify(f.level_component(s))});
  return out;
}

// ---------------------------------------------------------------------------
// Strict factorizations

enum class StrictMode { L1, L2 };

inline const char* to_string(StrictMode m) { return m == StrictMode::L1 ? "L1" : "L2"; }

template <ModelCategory M>
struct StrictFactorization {
  ProMap<M> input;
  ProObject<M> middle;
  ProMap<M> left;
  ProMap<M> right;
  StrictMode mode;
  bool depth_qualified = false;
  std::size_t depth = 0;
};

template <ModelCategory M>
StrictFactorization<M> factor_strict(const ProMap<M>& f_in, StrictMode mode) {
  require(f_in.is_level(), ErrorKind::precondition, "factor_strict needs a level presentation; levelize first");
  const bool dq = !f_in.target().is_finite();
  const ProMap<M> f = dq ? truncate(f_in) : f_in;
  const auto& x = f.source();
  const auto& y = f.target();
  const auto& index = y.index();
  const std::size_t n = index.size();
  const FactorMode base_mode = mode == StrictMode::L1 ? FactorMode::cof_then_acyclic_fib : FactorMode::acyclic_cof_then_fib;

  std::vector<std::optional<typename M::Object>> z(n);
  std::vector<std::optional<typename M::Map>> left(n), right(n);
  typename ProObject<M>::CoverMaps zcovers;
  for (auto s : linear_extension(index).order) {
    auto m = matching_object<M>(
        index, s, [&](std::size_t t) { return *z[t]; },
        [&](std::size_t a, std::size_t b) { return zcovers.at({a, b}); }, y, [&](std::size_t t) { return *right[t]; });
    const auto comparison = m.induce(
        x.value(s), [&](std::size_t t) { return M::compose(*left[t], x.structure(s, t)); },
        [&](std::size_t t) { return M::compose(f.level_component(t), x.structure(s, t)); }, f.level_component(s));
    auto fac = M::factor(comparison, base_mode);
    z[s] = fac.middle();
    left[s] = fac.left;
    right[s] = M::compose(m.top_leg(), fac.right);
    for (auto c : index.lower_covers(s)) zcovers.emplace(std::make_pair(s, c), M::compose(m.upper_leg(c), fac.right));
  }
  std::vector<typename M::Object> zv;
  std::vector<typename M::Map> lv, rv;
  for (std::size_t s = 0; s < n; ++s) {
    zv.push_back(*z[s]);
    lv.push_back(*left[s]);
    rv.push_back(*right[s]);
  }
  auto zo = ProObject<M>::finite(index, std::move(zv), zcovers);
  auto i = ProMap<M>::level(x, zo, std::move(lv));
  auto p = ProMap<M>::level(zo, y, std::move(rv));
  return {f, zo, i, p, mode, dq, dq ? f_in.target().index().depth() : 0};
}

/// Postconditions of a strict factorization, re-derived from the output.
template <ModelCategory M>
Check check_strict_factorization(const StrictFactorization<M>& sf) {
  const ClassName want = sf.mode == StrictMode::L1 ? ClassName::cofibration : ClassName::acyclic_cofibration;
  if (auto s = levelwise_failure(sf.left, want))
    return Check::fail_with("left factor is not a levelwise " + std::string(to_string(want)) + " at index " +
                            sf.left.target().index().name(*s));
  const auto kind = sf.mode == StrictMode::L1 ? SpecialKind::acyclic_fibration : SpecialKind::fibration;
  const auto rep = detect_special(sf.right, kind);
  if (!rep.ok())
    return Check::fail_with("right factor is not a special " + std::string(to_string(kind)) + " at index " +
                            sf.right.target().index().name(*rep.failing));
  if (auto s = pro_disagreement(compose(sf.right, sf.left), sf.input))
    return Check::fail_with("composite differs from the input at index " + sf.input.target().index().name(*s));
  return Check::pass(sf.depth_qualified);
}

// ---------------------------------------------------------------------------
// Strict lifts

enum class LiftPairing { cof_vs_special_acyclic_fib, acyclic_cof_vs_special_fib };

inline const char* to_string(LiftPairing p) {
  return p == LiftPairing::cof_vs_special_acyclic_fib ? "cof-vs-special-acyclic-fib" : "acyclic-cof-vs-special-fib";
}

/// A level square over one finite index: p o top = bottom o i.
template <ModelCategory M>
struct ProSquare {
  ProMap<M> i;       // A -> B
  ProMap<M> p;       // X -> Y
  ProMap<M> top;     // A -> X
  ProMap<M> bottom;  // B -> Y
};

template <ModelCategory M>
struct StrictLift {
  ProMap<M> lift;                 // B -> X, general presentation
  std::vector<std::size_t> chosen;  // a(s) per index element
  LiftPairing pairing;
};

template <ModelCategory M>
StrictLift<M> lift_strict(const ProSquare<M>& sq) {
  for (const auto* m : {&sq.i, &sq.p, &sq.top, &sq.bottom}) strict_detail::require_finite_level(*m, "lift_strict");
  const auto& index = sq.i.target().index();
  require(sq.p.target().index() == index && sq.top.target().index() == index && sq.bottom.target().index() == index,
          ErrorKind::precondition, "lifting square is not level over one index");
  require(same_pro_object(sq.top.source(), sq.i.source()) && same_pro_object(sq.top.target(), sq.p.source()) &&
              same_pro_object(sq.bottom.source(), sq.i.target()) &&
              same_pro_object(sq.bottom.target(), sq.p.target()),
          ErrorKind::precondition, "lifting square ends do not match");
  if (auto s = pro_disagreement(compose(sq.p, sq.top), compose(sq.bottom, sq.i)))
    fail(ErrorKind::precondition, "lifting square does not commute", index.name(*s));

  LiftPairing pairing;
  if (!levelwise_failure(sq.i, ClassName::cofibration) && detect_special(sq.p, SpecialKind::acyclic_fibration).ok())
    pairing = LiftPairing::cof_vs_special_acyclic_fib;
  else if (!levelwise_failure(sq.i, ClassName::acyclic_cofibration) && detect_special(sq.p, SpecialKind::fibration).ok())
    pairing = LiftPairing::acyclic_cof_vs_special_fib;
  else
    fail(ErrorKind::precondition,
         "lift_strict needs a levelwise cofibration against a special acyclic fibration, or a levelwise acyclic "
         "cofibration against a special fibration");

  const auto& a = sq.i.source();
  const auto& b = sq.i.target();
  const auto& x = sq.p.source();
  const auto& y = sq.p.target();
  const auto order = linear_extension(index);
  const std::size_t n = index.size();
  std::vector<std::size_t> chosen(n, 0);
  std::vector<std::optional<typename M::Map>> h(n);
  for (auto s : order.order) {
    // a(s): the first index in the ordering above s and above every earlier choice.
    std::optional<std::size_t> pick;
    for (auto u : order.order) {
      bool ok = index.leq(s, u);
      for (auto t : index.predecessors(s)) ok = ok && index.leq(chosen[t], u);
      if (ok) {
        pick = u;
        break;
      }
    }
    const auto as = *pick;
    chosen[s] = as;
    auto m = matching_object<M>(
        index, s, [&](std::size_t t) { return x.value(t); }, [&](std::size_t p, std::size_t q) { return x.structure(p, q); },
        y, [&](std::size_t t) { return sq.p.level_component(t); });
    const auto ms = m.induce(
        x.value(s), [&](std::size_t t) { return x.structure(s, t); },
        [&](std::size_t t) { return M::compose(sq.p.level_component(t), x.structure(s, t)); }, sq.p.level_component(s));
    const auto bottom = m.induce(
        b.value(as), [&](std::size_t t) { return M::compose(*h[t], b.structure(as, chosen[t])); },
        [&](std::size_t t) { return M::compose(sq.bottom.level_component(t), b.structure(as, t)); },
        M::compose(sq.bottom.level_component(s), b.structure(as, s)));
    LiftSquare<M> base{sq.i.level_component(as), ms, M::compose(sq.top.level_component(s), a.structure(as, s)), bottom};
    auto hs = M::lift(base);
    require(hs.has_value(), ErrorKind::validation, "internal: base lift missing although classes hold",
            index.name(s));
    h[s] = *hs;
  }
  std::vector<Component<M>> comps;
  for (std::size_t s = 0; s < n; ++s) comps.push_back({chosen[s], *h[s]});
  return {ProMap<M>::general(b, x, std::move(comps)), chosen, pairing};
}

template <ModelCategory M>
Check check_lift(const ProSquare<M>& sq, const ProMap<M>& h) {
  if (auto s = pro_disagreement(compose(h, sq.i), sq.top))
    return Check::fail_with("upper triangle fails at index " + sq.top.target().index().name(*s));
  if (auto s = pro_disagreement(compose(sq.p, h), sq.bottom))
    return Check::fail_with("lower triangle fails at index " + sq.bottom.target().index().name(*s));
  return Check::pass();
}

// ---------------------------------------------------------------------------
// Factorization of pro-isomorphisms

/// h_{ts} : Y_t -> X_s for t > s, keyed by (t, s).
template <ModelCategory M>
using Witnesses = std::map<std::pair<std::size_t, std::size_t>, typename M::Map>;

/// Checks the two triangles of every witness and that the maximum has an inverse.
template <ModelCategory M>
void check_witnesses(const ProMap<M>& f, const Witnesses<M>& w) {
  strict_detail::require_finite_level(f, "pro-isomorphism witnesses");
  const auto& x = f.source();
  const auto& y = f.target();
  const auto& index = y.index();
  const auto top = index.maximum();
  require(M::is_iso(f.level_component(top)), ErrorKind::precondition,
          "component at the maximum is not an isomorphism, so the map is not a pro-isomorphism", index.name(top));
  for (std::size_t s = 0; s < index.size(); ++s)
    if (s != top)
      require(w.count({top, s}) > 0, ErrorKind::precondition, "missing inverse witness",
              index.name(top) + ">" + index.name(s));
  for (const auto& [key, h] : w) {
    const auto [t, s] = key;
    const std::string pair = index.name(t) + ">" + index.name(s);
    require(t < index.size() && s < index.size() && index.less(s, t), ErrorKind::precondition,
            "witness keyed by a pair that is not t > s", pair);
    M::validate(h);
    require(M::same_object(M::source(h), y.value(t)) && M::same_object(M::target(h), x.value(s)),
            ErrorKind::precondition, "witness ends do not match", pair);
    require(M::equal(M::compose(h, f.level_component(t)), x.structure(t, s)), ErrorKind::precondition,
            "witness upper triangle does not commute", pair);
    require(M::equal(M::compose(f.level_component(s), h), y.structure(t, s)), ErrorKind::precondition,
            "witness lower triangle does not commute", pair);
  }
}

/// The witness h_{ts}, with h_{MM} read as the inverse of the top component.
template <ModelCategory M>
typename M::Map witness_at(const ProMap<M>& f, const Witnesses<M>& w, std::size_t t, std::size_t s) {
  if (t == s) return M::inverse(f.level_component(t));
  return w.at({t, s});
}

/// The inverse Y -> X represented by the witnesses out of the maximum.
template <ModelCategory M>
ProMap<M> inverse_from_witnesses(const ProMap<M>& f, const Witnesses<M>& w) {
  check_witnesses(f, w);
  const auto top = f.target().top();
  std::vector<Component<M>> comps;
  for (std::size_t s = 0; s < f.source().index().size(); ++s) comps.push_back({top, witness_at(f, w, top, s)});
  return ProMap<M>::general(f.target(), f.source(), std::move(comps));
}

/// Inverse of a finite level map whose top component is an isomorphism.
template <ModelCategory M>
IsoCertificate<M> top_inverse_certificate(const ProMap<M>& f) {
  const auto& x = f.source();
  const auto& y = f.target();
  const auto top = normalized(f, y.top());
  require(M::is_iso(top), ErrorKind::precondition, "component at the maxima is not an isomorphism",
          y.index().name(y.top()));
  const auto inv = M::inverse(top);
  std::vector<Component<M>> comps;
  for (std::size_t s = 0; s < x.index().size(); ++s) comps.push_back({y.top(), M::compose(x.structure(x.top(), s), inv)});
  return {f, ProMap<M>::general(y, x, std::move(comps))};
}

/// M above every other element, the others pairwise incomparable.
inline IndexPoset star_of(const IndexPoset& index) {
  const auto top = index.maximum();
  std::vector<std::pair<std::string, std::string>> covers;
  for (std::size_t s = 0; s < index.size(); ++s)
    if (s != top) covers.emplace_back(index.name(s), index.name(top));
  return IndexPoset::from_covers(index.names(), covers);
}

inline std::vector<std::size_t> identity_along(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = k;
  return v;
}

struct RealizedArrows {
  std::size_t upper;
  std::size_t lower;
  std::size_t chains;    // realized composites, one per first step
  std::size_t distinct;  // after identifying equal maps
};

template <ModelCategory M>
struct ProIsoFactorization {
  ProMap<M> input;            // f, reindexed when the star presentation is used
  ProObject<M> middle;
  ProMap<M> left;             // levelwise cofibration
  ProMap<M> right;            // levelwise fibration
  IsoCertificate<M> left_iso;
  IsoCertificate<M> right_iso;
  bool on_star = false;       // presented over the star poset instead of the input index
  std::vector<RealizedArrows> arrows;
  IsoCertificate<M> source_reindex;  // original source -> reindexed source
  IsoCertificate<M> target_reindex;
};

template <ModelCategory M>
ProIsoFactorization<M> pro_factor_iso(const ProMap<M>& f, const Witnesses<M>& w,
                                      FactorMode mode = FactorMode::cof_then_acyclic_fib) {
  check_witnesses(f, w);
  const auto& x = f.source();
  const auto& y = f.target();
  const auto& index = y.index();
  const std::size_t n = index.size();
  const auto top = index.maximum();

  std::vector<typename M::Object> z(n);
  std::vector<std::optional<typename M::Map>> j(n), q(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (s == top) {
      z[s] = x.value(s);
      j[s] = M::identity(x.value(s));
      q[s] = f.level_component(s);
      continue;
    }
    auto fac = M::factor(f.level_component(s), mode);
    z[s] = fac.middle();
    j[s] = fac.left;
    q[s] = fac.right;
  }
  // Realized composites Z_t -> Y_t -> X_u -> X_s -> Z_s, hash-consed per pair.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<typename M::Map>> realized;
  std::vector<RealizedArrows> stats;
  bool posetal = true, complete = true;
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t s = 0; s < n; ++s) {
      if (!index.less(s, t)) continue;
      std::vector<typename M::Map> distinct;
      std::size_t chains = 0;
      for (std::size_t u = 0; u < n; ++u) {
        if (!index.less(u, t) || !index.leq(s, u) || !w.count({t, u})) continue;
        ++chains;
        auto r = M::compose(*j[s], M::compose(x.structure(u, s), M::compose(w.at({t, u}), *q[t])));
        if (std::none_of(distinct.begin(), distinct.end(), [&](const auto& d) { return M::equal(d, r); }))
          distinct.push_back(std::move(r));
      }
      stats.push_back({t, s, chains, distinct.size()});
      if (distinct.size() > 1) posetal = false;
      if (distinct.empty()) complete = false;
      realized[{t, s}] = std::move(distinct);
    }
  const bool on_star = !(posetal && complete);
  const IndexPoset k = on_star ? star_of(index) : index;
  const auto along = identity_along(n);
  const ProObject<M> xr = on_star ? reindex(x, k, along) : x;
  const ProObject<M> yr = on_star ? reindex(y, k, along) : y;
  const ProMap<M> fr = on_star ? reindex(f, xr, yr, along) : f;

  typename ProObject<M>::CoverMaps covers;
  for (auto [s, t] : k.covers()) covers.emplace(std::make_pair(t, s), realized.at({t, s}).front());
  auto zo = ProObject<M>::finite(k, z, covers);
  std::vector<typename M::Map> jv, qv;
  for (std::size_t s = 0; s < n; ++s) {
    jv.push_back(*j[s]);
    qv.push_back(*q[s]);
  }
  auto left = ProMap<M>::level(xr, zo, std::move(jv));
  auto right = ProMap<M>::level(zo, yr, std::move(qv));

  // Diagonals Z_M -> Y_M -> X_s and Y_M -> X_s -> Z_s.
  std::vector<Component<M>> back_left, back_right;
  for (std::size_t s = 0; s < n; ++s) {
    const auto h = witness_at(f, w, top, s);
    back_left.push_back({top, M::compose(h, *q[top])});
    back_right.push_back({top, M::compose(*j[s], h)});
  }
  IsoCertificate<M> li{left, ProMap<M>::general(zo, xr, std::move(back_left))};
  IsoCertificate<M> ri{right, ProMap<M>::general(yr, zo, std::move(back_right))};
  IsoCertificate<M> sx = on_star ? reindex_certificate(x, xr, along) : identity_certificate(x);
  IsoCertificate<M> sy = on_star ? reindex_certificate(y, yr, along) : identity_certificate(y);
  return {fr, zo, left, right, li, ri, on_star, stats, sx, sy};
}

template <ModelCategory M>
Check check_pro_iso_factorization(const ProIsoFactorization<M>& r) {
  if (auto s = levelwise_failure(r.left, ClassName::cofibration))
    return Check::fail_with("left factor is not a levelwise cofibration at " + r.left.target().index().name(*s));
  if (auto s = levelwise_failure(r.right, ClassName::fibration))
    return Check::fail_with("right factor is not a levelwise fibration at " + r.right.target().index().name(*s));
  if (auto c = verify_iso(r.left_iso); !c.ok) return Check::fail_with("left iso certificate: " + c.failure);
  if (auto c = verify_iso(r.right_iso); !c.ok) return Check::fail_with("right iso certificate: " + c.failure);
  if (auto s = pro_disagreement(compose(r.right, r.left), r.input))
    return Check::fail_with("composite differs from the input at " + r.input.target().index().name(*s));
  return Check::pass();
}

// ---------------------------------------------------------------------------
// Constructions for two-out-of-three and properness

namespace strict_detail {

/// Level map W -> pullback apex induced by legs into both corners.
template <ModelCategory M>
ProMap<M> into_pullback(const ProMap<M>& a, const ProMap<M>& b, const ProCone<M>& pb, const ProMap<M>& to_a,
                        const ProMap<M>& to_b) {
  const auto& w = to_a.source();
  const auto& index = w.index();
  std::vector<typename M::Map> comps;
  for (std::size_t s = 0; s < index.size(); ++s) {
    Diagram<M> d;
    d.add(a.source().value(s));
    d.add(b.source().value(s));
    d.add(a.target().value(s));
    d.connect(0, 2, a.level_component(s));
    d.connect(1, 2, b.level_component(s));
    Cone<M> c{pb.apex.value(s), {pb.legs[0].level_component(s), pb.legs[1].level_component(s),
                                 M::compose(a.level_component(s), pb.legs[0].level_component(s))}};
    comps.push_back(M::limit_induced(d, c, w.value(s),
                                     {to_a.level_component(s), to_b.level_component(s),
                                      M::compose(a.level_component(s), to_a.level_component(s))}));
  }
  return ProMap<M>::level(w, pb.apex, std::move(comps));
}

/// Level map pushout apex -> W induced by legs out of both corners.
template <ModelCategory M>
ProMap<M> out_of_pushout(const ProMap<M>& a, const ProMap<M>& b, const ProCone<M>& po, const ProMap<M>& from_a,
                         const ProMap<M>& from_b) {
  const auto& w = from_a.target();
  const auto& index = w.index();
  std::vector<typename M::Map> comps;
  for (std::size_t s = 0; s < index.size(); ++s) {
    Diagram<M> d;
    d.add(a.target().value(s));
    d.add(b.target().value(s));
    d.add(a.source().value(s));
    d.connect(2, 0, a.level_component(s));
    d.connect(2, 1, b.level_component(s));
    Cone<M> c{po.apex.value(s), {po.legs[0].level_component(s), po.legs[1].level_component(s),
                                 M::compose(po.legs[0].level_component(s), a.level_component(s))}};
    comps.push_back(M::colimit_induced(d, c, w.value(s),
                                       {from_a.level_component(s), from_b.level_component(s),
                                        M::compose(from_a.level_component(s), a.level_component(s))}));
  }
  return ProMap<M>::level(po.apex, w, std::move(comps));
}

template <ModelCategory M>
ProMap<M> onto(const ProMap<M>& f, const ProIsoFactorization<M>& r) {
  if (!r.on_star) return f;
  const auto& k = r.middle.index();
  const auto along = identity_along(k.size());
  return reindex(f, reindex(f.source(), k, along), reindex(f.target(), k, along), along);
}

}  // namespace strict_detail

template <ModelCategory M>
struct LevelWeResult {
  ProMap<M> map;                        // the levelwise weak equivalence
  std::vector<LevelVerdict> levels;     // classification of every level
  std::vector<IsoCertificate<M>> isos;  // identifications with the original ends
  bool on_star = false;
};

template <ModelCategory M>
Check check_levelwise_we(const LevelWeResult<M>& r) {
  if (auto s = levelwise_failure(r.map, ClassName::weak_equivalence))
    return Check::fail_with("level " + r.map.target().index().name(*s) + " is not a weak equivalence");
  for (const auto& c : r.isos)
    if (auto v = verify_iso(c); !v.ok) return Check::fail_with("iso certificate: " + v.failure);
  return Check::pass();
}

/// X -f-> Y <-h- Z -g-> W with f, g levelwise weak equivalences and h a pro-isomorphism.
template <ModelCategory M>
LevelWeResult<M> compose_zigzag_we(const ProMap<M>& f, const ProMap<M>& h, const ProMap<M>& g, const Witnesses<M>& w) {
  for (const auto* m : {&f, &h, &g}) strict_detail::require_finite_level(*m, "compose_zigzag_we");
  require(same_pro_object(f.target(), h.target()) && same_pro_object(h.source(), g.source()), ErrorKind::precondition,
          "zigzag ends do not match");
  require(!levelwise_failure(f, ClassName::weak_equivalence) && !levelwise_failure(g, ClassName::weak_equivalence),
          ErrorKind::precondition, "outer zigzag maps must be levelwise weak equivalences");
  const auto r = pro_factor_iso(h, w, FactorMode::cof_then_acyclic_fib);
  const auto fr = strict_detail::onto(f, r);
  const auto gr = strict_detail::onto(g, r);
  const auto pb = levelwise_pullback(fr, r.right);  // B = X x_Y A
  const auto po = levelwise_pushout(r.left, gr);    // C = A u_Z W
  const auto out = compose(po.legs[0], pb.legs[1]);
  LevelWeResult<M> res{out, levelwise_verdicts(out), {}, r.on_star};
  res.isos.push_back(top_inverse_certificate(pb.legs[0]));
  res.isos.push_back(top_inverse_certificate(po.legs[1]));
  return res;
}

enum class CancelSide { left, right };

/// Left: square X -f-> Y, v: X -> W, g: Y -> Z, e: W -> Z a pro-iso; returns X -> B, B = A x_Z Y.
/// Right: square X -e-> W a pro-iso, f: X -> Y, w: W -> Z, g: Y -> Z; returns B -> Z, B = A u_X Y.
template <ModelCategory M>
LevelWeResult<M> two_of_three(CancelSide side, const ProMap<M>& top, const ProMap<M>& left_edge,
                              const ProMap<M>& right_edge, const ProMap<M>& bottom, const Witnesses<M>& w) {
  for (const auto* m : {&top, &left_edge, &right_edge, &bottom}) strict_detail::require_finite_level(*m, "two_of_three");
  const auto lhs = compose(right_edge, top), rhs = compose(bottom, left_edge);
  for (std::size_t s = 0; s < lhs.target().index().size(); ++s)
    require(M::equal(lhs.level_component(s), rhs.level_component(s)), ErrorKind::precondition,
            "two-out-of-three square does not commute levelwise", lhs.target().index().name(s));
  require(!levelwise_failure(left_edge, ClassName::weak_equivalence) &&
              !levelwise_failure(right_edge, ClassName::weak_equivalence),
          ErrorKind::precondition, "vertical maps must be levelwise weak equivalences");
  if (side == CancelSide::left) {
    const auto r = pro_factor_iso(bottom, w, FactorMode::acyclic_cof_then_fib);
    const auto f = strict_detail::onto(top, r);
    const auto v = strict_detail::onto(left_edge, r);
    const auto g = strict_detail::onto(right_edge, r);
    const auto pb = levelwise_pullback(r.right, g);  // B = A x_Z Y
    const auto out = strict_detail::into_pullback(r.right, g, pb, compose(r.left, v), f);
    LevelWeResult<M> res{out, levelwise_verdicts(out), {}, r.on_star};
    res.isos.push_back(top_inverse_certificate(pb.legs[1]));
    return res;
  }
  const auto r = pro_factor_iso(top, w, FactorMode::cof_then_acyclic_fib);
  const auto f = strict_detail::onto(left_edge, r);
  const auto wv = strict_detail::onto(right_edge, r);
  const auto g = strict_detail::onto(bottom, r);
  const auto po = levelwise_pushout(r.left, f);  // B = A u_X Y
  const auto out = strict_detail::out_of_pushout(r.left, f, po, compose(wv, r.right), g);
  LevelWeResult<M> res{out, levelwise_verdicts(out), {}, r.on_star};
  res.isos.push_back(top_inverse_certificate(po.legs[1]));
  return res;
}

/// Z -f-> W -g-> Y <-p- X with f levelwise we, g a pro-iso, p levelwise fib; returns
/// f' : Z x_Y X -> W x_Y X.
template <ModelCategory M>
LevelWeResult<M> proper_pullback(const ProMap<M>& p, const ProMap<M>& f, const ProMap<M>& g, const Witnesses<M>& w) {
  for (const auto* m : {&p, &f, &g}) strict_detail::require_finite_level(*m, "proper_pullback");
  require(same_pro_object(f.target(), g.source()) && same_pro_object(g.target(), p.target()), ErrorKind::precondition,
          "pullback data ends do not match");
  require(!levelwise_failure(f, ClassName::weak_equivalence), ErrorKind::precondition,
          "f must be a levelwise weak equivalence");
  require(!levelwise_failure(p, ClassName::fibration), ErrorKind::precondition, "p must be a levelwise fibration");
  const auto ginv = inverse_from_witnesses(g, w);
  const auto gf = compose(g, f);
  const auto outer = levelwise_pullback(g, p);  // W x_Y X
  const auto inner = levelwise_pullback(gf, p);  // Z x_Y X
  const auto out = strict_detail::into_pullback(g, p, outer, compose(f, inner.legs[0]), inner.legs[1]);
  LevelWeResult<M> res{out, levelwise_verdicts(out), {}, false};
  res.isos.push_back(IsoCertificate<M>{g, ginv});
  res.isos.push_back(top_inverse_certificate(outer.legs[1]));
  return res;
}

// ---------------------------------------------------------------------------
// Retracts

enum class RetractKind { acyclic_cof, acyclic_fib };

inline const char* to_string(RetractKind k) { return k == RetractKind::acyclic_cof ? "acyclic-cof" : "acyclic-fib"; }

/// f is a retract of g:  top row a1 then a2, bottom row b1 then b2, verticals f, g, f.
template <ModelCategory M>
struct RetractDiagram {
  ProMap<M> f;
  ProMap<M> g;
  ProMap<M> a1, a2;
  ProMap<M> b1, b2;
};

template <ModelCategory M>
Check check_retract(const RetractDiagram<M>& r) {
  if (pro_disagreement(compose(r.a2, r.a1), ProMap<M>::identity(r.f.source())))
    return Check::fail_with("top row does not compose to the identity");
  if (pro_disagreement(compose(r.b2, r.b1), ProMap<M>::identity(r.f.target())))
    return Check::fail_with("bottom row does not compose to the identity");
  if (pro_disagreement(compose(r.g, r.a1), compose(r.b1, r.f))) return Check::fail_with("left square does not commute");
  if (pro_disagreement(compose(r.f, r.a2), compose(r.b2, r.g))) return Check::fail_with("right square does not commute");
  return Check::pass();
}

template <ModelCategory M>
struct RetractResult {
  RetractDiagram<M> diagram;
  StrictFactorization<M> factorization;
  StrictLift<M> lift;
};

/// acyclic-cof: `we_form` is levelwise we and `lift_form` a levelwise cofibration presenting
/// the same map over the same index. acyclic-fib: `we_form` is levelwise we and
/// `lift_form` a special fibration presenting the same map.
template <ModelCategory M>
RetractResult<M> retract_exhibit(const ProMap<M>& we_form, const ProMap<M>& lift_form, RetractKind kind) {
  strict_detail::require_finite_level(we_form, "retract_exhibit");
  strict_detail::require_finite_level(lift_form, "retract_exhibit");
  require(we_form.target().index() == lift_form.target().index() && pro_equal(we_form, lift_form),
          ErrorKind::precondition, "the two presentations must share an index and agree");
  require(!levelwise_failure(we_form, ClassName::weak_equivalence), ErrorKind::precondition,
          "first presentation is not a levelwise weak equivalence");
  const auto sf = factor_strict(we_form, StrictMode::L1);
  if (kind == RetractKind::acyclic_cof) {
    require(!levelwise_failure(lift_form, ClassName::cofibration), ErrorKind::precondition,
            "second presentation is not a levelwise cofibration");
    const auto& a = lift_form.source();
    const auto& b = lift_form.target();
    ProSquare<M> sq{lift_form, sf.right, sf.left, ProMap<M>::identity(b)};
    auto lift = lift_strict(sq);
    RetractDiagram<M> d{lift_form, sf.left, ProMap<M>::identity(a), ProMap<M>::identity(a), lift.lift, sf.right};
    return {d, sf, lift};
  }
  require(detect_special(lift_form, SpecialKind::fibration).ok(), ErrorKind::precondition,
          "second presentation is not a special fibration");
  const auto& x = lift_form.source();
  const auto& y = lift_form.target();
  ProSquare<M> sq{sf.left, lift_form, ProMap<M>::identity(x), sf.right};
  auto lift = lift_strict(sq);
  RetractDiagram<M> d{lift_form, sf.right, sf.left, lift.lift, ProMap<M>::identity(y), ProMap<M>::identity(y)};
  return {d, sf, lift};
}

}  // namespace promc
