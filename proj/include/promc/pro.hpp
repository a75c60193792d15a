#pragma once

// Pro-objects over finite directed posets or the omega tower, pro-maps in
// level or general presentation, and the basic pro-category operations.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "promc/error.hpp"
#include "promc/gf2.hpp"
#include "promc/index.hpp"
#include "promc/model.hpp"

namespace promc {

/// Lazily extended, memoized sequence; evaluation order never changes the values.
template <class T>
class Memo {
 public:
  using Step = std::function<T(const std::vector<T>&)>;
  explicit Memo(Step step) : state_(std::make_shared<State>()) { state_->step = std::move(step); }

  T at(std::size_t n) const {
    std::lock_guard lock(state_->mutex);
    while (state_->values.size() <= n) state_->values.push_back(state_->step(state_->values));
    return state_->values[n];
  }

 private:
  struct State {
    std::mutex mutex;
    std::vector<T> values;
    Step step;
  };
  std::shared_ptr<State> state_;
};

template <ModelCategory M>
class ProObject {
 public:
  using Object = typename M::Object;
  using Map = typename M::Map;
  /// Keyed by (upper, lower) cover pair.
  using CoverMaps = std::map<std::pair<std::size_t, std::size_t>, Map>;

  static ProObject finite(IndexPoset index, std::vector<Object> values, const CoverMaps& covers) {
    require(index.is_finite(), ErrorKind::unsupported_regime, "finite pro-object over an omega index");
    require(values.size() == index.size(), ErrorKind::malformed, "one value per index element expected");
    for (const auto& v : values) M::validate(v);
    auto d = std::make_shared<Data>();
    const std::size_t n = index.size();
    d->structure.assign(n, std::vector<std::optional<Map>>(n));
    std::vector<std::vector<std::size_t>> via(n, std::vector<std::size_t>(n, 0));
    for (const auto& [key, m] : covers) {
      const auto [t, s] = key;
      require(t < n && s < n, ErrorKind::malformed, "structure map names a missing index element");
      const auto lc = index.lower_covers(t);
      require(std::find(lc.begin(), lc.end(), s) != lc.end(), ErrorKind::malformed,
              "structure map given for a pair that is not a cover", index.name(t) + ">" + index.name(s));
    }
    for (auto t : linear_extension(index).order) {
      d->structure[t][t] = M::identity(values[t]);
      via[t][t] = t;
      for (auto c : index.lower_covers(t)) {
        auto it = covers.find({t, c});
        require(it != covers.end(), ErrorKind::malformed, "missing structure map for a cover",
                index.name(t) + ">" + index.name(c));
        M::validate(it->second);
        require(M::same_object(M::source(it->second), values[t]) && M::same_object(M::target(it->second), values[c]),
                ErrorKind::malformed, "structure map ends do not match the values",
                index.name(t) + ">" + index.name(c));
        for (std::size_t s = 0; s < n; ++s) {
          if (!index.leq(s, c)) continue;
          Map cand = M::compose(*d->structure[c][s], it->second);
          if (!d->structure[t][s]) {
            d->structure[t][s] = std::move(cand);
            via[t][s] = c;
          } else if (!M::equal(*d->structure[t][s], cand)) {
            fail(ErrorKind::validation, "structure maps are not functorial",
                 index.name(t) + ">" + index.name(via[t][s]) + ">" + index.name(s) + " vs " + index.name(t) + ">" +
                     index.name(c) + ">" + index.name(s));
          }
        }
      }
    }
    d->index = std::move(index);
    d->values = std::move(values);
    return ProObject(std::move(d));
  }

  /// An omega tower from its levels and the steps n+1 -> n; checked to the index depth.
  static ProObject tower(IndexPoset index, std::function<Object(std::size_t)> value,
                         std::function<Map(std::size_t)> step) {
    require(index.is_omega(), ErrorKind::unsupported_regime, "tower over a finite index");
    auto d = std::make_shared<Data>();
    d->index = std::move(index);
    d->value = std::move(value);
    d->step = std::move(step);
    ProObject p(std::move(d));
    for (std::size_t n = 0; n + 1 < p.index().depth(); ++n) {
      const Map st = p.data_->step(n);
      M::validate(st);
      require(M::same_object(M::source(st), p.value(n + 1)) && M::same_object(M::target(st), p.value(n)),
              ErrorKind::malformed, "tower step ends do not match the levels", std::to_string(n + 1) + ">" +
                                                                                  std::to_string(n));
    }
    return p;
  }

  static ProObject constant(Object x, std::string name = "*") {
    return finite(IndexPoset::one_point(std::move(name)), {std::move(x)}, {});
  }

  static ProObject constant_tower(Object x, std::size_t depth = default_depth) {
    const Map id = M::identity(x);
    return tower(IndexPoset::omega(depth), [x](std::size_t) { return x; }, [id](std::size_t) { return id; });
  }

  const IndexPoset& index() const { return data_->index; }
  bool is_finite() const { return data_->index.is_finite(); }
  std::size_t top() const { return data_->index.maximum(); }

  Object value(std::size_t s) const {
    if (is_finite()) return data_->values.at(s);
    return data_->value(s);
  }

  /// The structure map X_t -> X_s for t >= s.
  Map structure(std::size_t t, std::size_t s) const {
    require(index().leq(s, t), ErrorKind::precondition, "structure map requested against the order",
            index().name(t) + ">" + index().name(s));
    if (is_finite()) return *data_->structure[t][s];
    Map out = M::identity(value(t));
    for (std::size_t n = t; n > s; --n) out = M::compose(data_->step(n - 1), out);
    return out;
  }

  /// Structure maps along covers, the data that serializes.
  CoverMaps cover_maps() const {
    CoverMaps out;
    for (auto [s, t] : index().covers()) out.emplace(std::make_pair(t, s), structure(t, s));
    return out;
  }

  std::vector<Object> values() const {
    std::vector<Object> out;
    for (std::size_t s = 0; s < index().size(); ++s) out.push_back(value(s));
    return out;
  }

 private:
  struct Data {
    IndexPoset index;
    std::vector<Object> values;
    std::vector<std::vector<std::optional<Map>>> structure;
    std::function<Object(std::size_t)> value;
    std::function<Map(std::size_t)> step;
  };
  explicit ProObject(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

/// Structural equality; omega towers are compared to their depth.
template <ModelCategory M>
bool same_pro_object(const ProObject<M>& a, const ProObject<M>& b) {
  if (!(a.index() == b.index())) return false;
  const std::size_t n = a.is_finite() ? a.index().size() : std::min(a.index().depth(), b.index().depth());
  for (std::size_t s = 0; s < n; ++s)
    if (!M::same_object(a.value(s), b.value(s))) return false;
  if (a.is_finite()) {
    for (auto [s, t] : a.index().covers())
      if (!M::equal(a.structure(t, s), b.structure(t, s))) return false;
  } else {
    for (std::size_t s = 0; s + 1 < n; ++s)
      if (!M::equal(a.structure(s + 1, s), b.structure(s + 1, s))) return false;
  }
  return true;
}

template <ModelCategory M>
struct Component {
  std::size_t source_index;
  typename M::Map map;
};

template <ModelCategory M>
class ProMap {
 public:
  using Map = typename M::Map;
  using Rule = std::function<Component<M>(std::size_t)>;

  static ProMap level(ProObject<M> source, ProObject<M> target, std::vector<Map> comps) {
    require(source.index() == target.index(), ErrorKind::precondition, "level map needs a shared index");
    require(comps.size() == target.index().size(), ErrorKind::malformed, "one level component per index element");
    std::vector<Component<M>> cs;
    for (std::size_t s = 0; s < comps.size(); ++s) cs.push_back({s, std::move(comps[s])});
    return ProMap(std::move(source), std::move(target), true, std::move(cs));
  }

  static ProMap level(ProObject<M> source, ProObject<M> target, std::function<Map(std::size_t)> rule) {
    require(source.index().is_omega() && target.index().is_omega(), ErrorKind::unsupported_regime,
            "level rule needs omega indices");
    return ProMap(std::move(source), std::move(target), true,
                  [rule = std::move(rule)](std::size_t n) { return Component<M>{n, rule(n)}; });
  }

  static ProMap general(ProObject<M> source, ProObject<M> target, std::vector<Component<M>> comps) {
    require(comps.size() == target.index().size(), ErrorKind::malformed, "one component per target index element");
    return ProMap(std::move(source), std::move(target), false, std::move(comps));
  }

  static ProMap general(ProObject<M> source, ProObject<M> target, Rule rule) {
    require(target.index().is_omega(), ErrorKind::unsupported_regime, "component rule needs an omega target");
    return ProMap(std::move(source), std::move(target), false, std::move(rule));
  }

  static ProMap identity(const ProObject<M>& x) {
    if (x.is_finite()) {
      std::vector<Map> comps;
      for (std::size_t s = 0; s < x.index().size(); ++s) comps.push_back(M::identity(x.value(s)));
      return level(x, x, comps);
    }
    return level(x, x, [x](std::size_t n) { return M::identity(x.value(n)); });
  }

  /// The constant pro-map c(g) over the one-point index.
  static ProMap constant(const Map& g) {
    return level(ProObject<M>::constant(M::source(g)), ProObject<M>::constant(M::target(g)), {g});
  }

  const ProObject<M>& source() const { return source_; }
  const ProObject<M>& target() const { return target_; }
  bool is_level() const { return level_; }

  Component<M> component(std::size_t s) const {
    if (target_.is_finite()) return comps_->at(s);
    return (*rule_)(s);
  }

  Map level_component(std::size_t s) const {
    require(level_, ErrorKind::precondition, "level component of a general presentation");
    return component(s).map;
  }

 private:
  ProMap(ProObject<M> s, ProObject<M> t, bool level, std::vector<Component<M>> cs)
      : source_(std::move(s)), target_(std::move(t)), level_(level),
        comps_(std::make_shared<const std::vector<Component<M>>>(std::move(cs))) {
    check();
  }
  ProMap(ProObject<M> s, ProObject<M> t, bool level, Rule rule)
      : source_(std::move(s)), target_(std::move(t)), level_(level), rule_(std::make_shared<const Rule>(std::move(rule))) {
    check();
  }

  void check() const;

  ProObject<M> source_;
  ProObject<M> target_;
  bool level_;
  std::shared_ptr<const std::vector<Component<M>>> comps_;
  std::shared_ptr<const Rule> rule_;
};

/// How far past the larger source index refinement searches look in omega towers.
template <ModelCategory M>
std::size_t refinement_window(const ProObject<M>& x) {
  return x.index().is_omega() ? x.index().depth() : 0;
}

/// Smallest source index u >= both at which the two maps agree after precomposition, if any.
template <ModelCategory M>
std::optional<std::size_t> agree_after_refinement(const ProObject<M>& x, const Component<M>& a, const Component<M>& b) {
  const auto& ix = x.index();
  if (ix.is_finite()) {
    const auto m = x.top();
    if (M::equal(M::compose(a.map, x.structure(m, a.source_index)), M::compose(b.map, x.structure(m, b.source_index))))
      return m;
    return std::nullopt;
  }
  const std::size_t lo = std::max(a.source_index, b.source_index);
  for (std::size_t u = lo; u <= lo + refinement_window(x); ++u)
    if (M::equal(M::compose(a.map, x.structure(u, a.source_index)), M::compose(b.map, x.structure(u, b.source_index))))
      return u;
  return std::nullopt;
}

/// g_s precomposed down from the source maximum (finite source only).
template <ModelCategory M>
typename M::Map normalized(const ProMap<M>& f, std::size_t s) {
  const auto c = f.component(s);
  return M::compose(c.map, f.source().structure(f.source().top(), c.source_index));
}

template <ModelCategory M>
void ProMap<M>::check() const {
  const auto& x = source_;
  const auto& y = target_;
  const auto& iy = y.index();
  const std::size_t n = iy.size();
  for (std::size_t s = 0; s < n; ++s) {
    const auto c = component(s);
    require(x.index().is_omega() || c.source_index < x.index().size(), ErrorKind::malformed,
            "component names a missing source index", iy.name(s));
    M::validate(c.map);
    require(M::same_object(M::source(c.map), x.value(c.source_index)) && M::same_object(M::target(c.map), y.value(s)),
            ErrorKind::malformed, "component ends do not match the levels", iy.name(s));
  }
  for (auto [s, t] : iy.covers()) {
    const auto ct = component(t), cs = component(s);
    const Component<M> pushed{ct.source_index, M::compose(y.structure(t, s), ct.map)};
    if (level_) {
      require(M::equal(pushed.map, M::compose(cs.map, x.structure(t, s))), ErrorKind::validation,
              "naturality square does not commute", iy.name(t) + ">" + iy.name(s));
    } else {
      require(agree_after_refinement(x, pushed, cs).has_value(), ErrorKind::validation,
              "components are not compatible", iy.name(t) + ">" + iy.name(s));
    }
  }
}

template <ModelCategory M>
ProMap<M> compose(const ProMap<M>& g, const ProMap<M>& f) {
  require(same_pro_object(f.target(), g.source()), ErrorKind::precondition, "composing pro-maps whose ends differ");
  const bool level = f.is_level() && g.is_level();
  auto at = [f, g](std::size_t s) {
    const auto cg = g.component(s);
    const auto cf = f.component(cg.source_index);
    return Component<M>{cf.source_index, M::compose(cg.map, cf.map)};
  };
  if (g.target().is_finite()) {
    std::vector<Component<M>> cs;
    for (std::size_t s = 0; s < g.target().index().size(); ++s) cs.push_back(at(s));
    if (level) {
      std::vector<typename M::Map> ms;
      for (auto& c : cs) ms.push_back(std::move(c.map));
      return ProMap<M>::level(f.source(), g.target(), std::move(ms));
    }
    return ProMap<M>::general(f.source(), g.target(), std::move(cs));
  }
  if (level) return ProMap<M>::level(f.source(), g.target(), [at](std::size_t n) { return at(n).map; });
  return ProMap<M>::general(f.source(), g.target(), typename ProMap<M>::Rule(at));
}

/// A target index where the two pro-maps differ, or nothing when they are equal
/// (omega: equal to the target depth).
template <ModelCategory M>
std::optional<std::size_t> pro_disagreement(const ProMap<M>& a, const ProMap<M>& b) {
  require(same_pro_object(a.source(), b.source()) && same_pro_object(a.target(), b.target()),
          ErrorKind::precondition, "comparing pro-maps with different ends");
  const auto& iy = a.target().index();
  if (iy.is_finite()) {
    const auto n = a.target().top();
    if (!agree_after_refinement(a.source(), a.component(n), b.component(n))) return n;
    return std::nullopt;
  }
  for (std::size_t s = 0; s < iy.depth(); ++s)
    if (!agree_after_refinement(a.source(), a.component(s), b.component(s))) return s;
  return std::nullopt;
}

template <ModelCategory M>
bool pro_equal(const ProMap<M>& a, const ProMap<M>& b) {
  return !pro_disagreement(a, b).has_value();
}

template <ModelCategory M>
bool depth_qualified(const ProMap<M>& f) {
  return f.source().index().is_omega() || f.target().index().is_omega();
}

// ---------------------------------------------------------------------------
// Limits of pro-objects

template <ModelCategory M>
struct LimitValue {
  typename M::Object value;
  std::vector<typename M::Map> projections;  // value -> Y_s, one per index element (omega: to depth)
  bool depth_qualified = false;
  bool stabilized = true;
  std::size_t stable_depth = 0;
  std::size_t depth = 0;
};

/// lim Y: the value at the maximum for finite indices; for towers the stable
/// images image(Y_{k+d} -> Y_k), which settle once transients are shorter than d.
template <ModelCategory M>
LimitValue<M> lim_functor(const ProObject<M>& y) {
  LimitValue<M> r;
  if (y.is_finite()) {
    const auto n = y.top();
    r.value = y.value(n);
    for (std::size_t s = 0; s < y.index().size(); ++s) r.projections.push_back(y.structure(n, s));
    return r;
  }
  const std::size_t d = y.index().depth();
  r.depth_qualified = true;
  r.depth = d;
  // Each level looks d steps further down the tower.
  std::vector<ImageFactorization<M>> stable;
  for (std::size_t k = 0; k < d; ++k) stable.push_back(M::image(y.structure(k + d, k)));
  // steps[k] : S_{k+1} -> S_k
  std::vector<typename M::Map> steps;
  for (std::size_t k = 0; k + 1 < d; ++k)
    steps.push_back(
        *M::factor_through_mono(stable[k].mono, M::compose(y.structure(k + 1, k), stable[k + 1].mono)));
  std::size_t k0 = d - 1;
  while (k0 > 0 && M::is_iso(steps[k0 - 1])) --k0;
  r.stable_depth = k0 + 1;
  r.stabilized = k0 + 1 < d;
  r.value = stable[k0].image;
  for (std::size_t n = 0; n < d; ++n) {
    if (n <= k0) {
      r.projections.push_back(M::compose(y.structure(k0, n), stable[k0].mono));
    } else {
      auto down = M::identity(stable[n].image);  // S_n -> S_k0
      for (std::size_t k = n; k > k0; --k) down = M::compose(steps[k - 1], down);
      r.projections.push_back(M::compose(stable[n].mono, M::inverse(down)));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Hom sets

template <class M>
concept EnumerableHom = requires(const typename M::Object& a) { M::enumerate_maps(a, a); };

template <class M>
concept LinearHom = requires(const typename M::Object& a) { M::hom_basis(a, a); };

/// All maps (enumerable instances) or a basis (linear instances).
template <ModelCategory M>
std::vector<typename M::Map> base_hom(const typename M::Object& a, const typename M::Object& b) {
  if constexpr (EnumerableHom<M>)
    return M::enumerate_maps(a, b);
  else
    return M::hom_basis(a, b);
}

/// Number of distinct maps, or the dimension of their span.
template <ModelCategory M>
std::size_t distinct_count(const std::vector<typename M::Map>& maps) {
  if constexpr (EnumerableHom<M>) {
    std::vector<typename M::Map> seen;
    for (const auto& m : maps)
      if (std::none_of(seen.begin(), seen.end(), [&](const auto& s) { return M::equal(s, m); })) seen.push_back(m);
    return seen.size();
  } else {
    if (maps.empty()) return 0;
    std::size_t bits = 0;
    for (const auto& [n, c] : maps.front().components()) bits += c.rows() * c.cols();
    gf2::Matrix flat(bits, maps.size());
    for (std::size_t k = 0; k < maps.size(); ++k) {
      std::size_t row = 0;
      for (const auto& [n, c] : maps[k].components())
        for (std::size_t i = 0; i < c.rows(); ++i)
          for (std::size_t j = 0; j < c.cols(); ++j) flat.set(row++, k, c.get(i, j));
    }
    return gf2::rank(flat);
  }
}

template <ModelCategory M>
struct HomResult {
  std::vector<ProMap<M>> classes;  // every class, or a basis for linear instances
  std::size_t count = 0;           // number of classes, or the dimension
  bool is_dimension = false;
  bool depth_qualified = false;
  std::size_t depth = 0;
  bool stabilized = true;
  std::size_t stable_depth = 0;

  std::string label() const {
    std::string s = std::to_string(count) + (is_dimension ? " dimensions" : count == 1 ? " class" : " classes");
    if (depth_qualified) {
      s += " (verified to depth " + std::to_string(depth);
      s += stabilized ? ", stabilized at depth " + std::to_string(stable_depth) + ")" : ", not stabilized)";
    }
    return s;
  }
};

/// hom(X, Y) = lim_s colim_t Hom(X_t, Y_s). Finite indices collapse to the maxima;
/// omega indices are read at the truncation depth. With classes = false only the
/// count is produced.
template <ModelCategory M>
HomResult<M> hom_pro(const ProObject<M>& x, const ProObject<M>& y, bool classes = true) {
  HomResult<M> r;
  r.is_dimension = LinearHom<M> && !EnumerableHom<M>;
  const bool xo = x.index().is_omega(), yo = y.index().is_omega();
  r.depth_qualified = xo || yo;
  const std::size_t d = std::max(xo ? x.index().depth() : 0, yo ? y.index().depth() : 0);
  r.depth = d;
  const std::size_t xt = xo ? d - 1 : x.top();
  const std::size_t yt = yo ? d - 1 : y.top();
  // Hom(X_t, -) preserves limits, so a tower target contributes Hom(X_t, lim Y).
  std::optional<LimitValue<M>> lim;
  if (yo) lim = lim_functor(y);
  const auto maps = base_hom<M>(x.value(xt), yo ? lim->value : y.value(yt));
  for (const auto& g : maps) {
    if (!classes) break;
    if (!yo) {
      std::vector<Component<M>> cs;
      for (std::size_t s = 0; s < y.index().size(); ++s) cs.push_back({xt, M::compose(y.structure(yt, s), g)});
      r.classes.push_back(ProMap<M>::general(x, y, std::move(cs)));
    } else {
      const auto projections = lim->projections;
      r.classes.push_back(ProMap<M>::general(x, y, typename ProMap<M>::Rule([projections, g, xt](std::size_t n) {
        require(n < projections.size(), ErrorKind::depth_exhausted, "hom class evaluated past its depth", std::to_string(n));
        return Component<M>{xt, M::compose(projections[n], g)};
      })));
    }
  }
  r.count = distinct_count<M>(maps);
  if (yo) {
    r.stable_depth = lim->stable_depth;
    r.stabilized = lim->stabilized;
  } else {
    r.stable_depth = xo ? d : 0;
    r.stabilized = !xo;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pro-isomorphisms

template <ModelCategory M>
struct IsoCertificate {
  ProMap<M> forward;
  ProMap<M> backward;
};

struct Check {
  bool ok = true;
  std::string failure;
  bool depth_qualified = false;

  static Check pass(bool dq = false) { return {true, {}, dq}; }
  static Check fail_with(std::string why) { return {false, std::move(why), false}; }
};

template <ModelCategory M>
IsoCertificate<M> identity_certificate(const ProObject<M>& x) {
  return {ProMap<M>::identity(x), ProMap<M>::identity(x)};
}

template <ModelCategory M>
Check verify_iso(const IsoCertificate<M>& c) {
  try {
    if (!same_pro_object(c.forward.target(), c.backward.source()) ||
        !same_pro_object(c.backward.target(), c.forward.source()))
      return Check::fail_with("certificate maps are not composable");
    if (auto s = pro_disagreement(compose(c.backward, c.forward), ProMap<M>::identity(c.forward.source())))
      return Check::fail_with("backward after forward differs from the identity at index " +
                              c.forward.source().index().name(*s));
    if (auto s = pro_disagreement(compose(c.forward, c.backward), ProMap<M>::identity(c.forward.target())))
      return Check::fail_with("forward after backward differs from the identity at index " +
                              c.forward.target().index().name(*s));
  } catch (const Error& e) {
    return Check::fail_with(std::string(e.what()) + (e.witness().empty() ? "" : " [" + e.witness() + "]"));
  }
  return Check::pass(depth_qualified(c.forward));
}

enum class IsoStatus { certified, absent, unknown };

inline const char* to_string(IsoStatus s) {
  switch (s) {
    case IsoStatus::certified: return "certified";
    case IsoStatus::absent: return "absent";
    case IsoStatus::unknown: return "unknown";
  }
  return "?";
}

template <ModelCategory M>
struct IsoVerdict {
  IsoStatus status = IsoStatus::unknown;
  std::optional<IsoCertificate<M>> certificate;
  std::string note;
};

/// Exhaustive searches above this many candidates fall back to the inverse at the maxima.
inline constexpr std::size_t exhaustive_limit = 200000;

template <ModelCategory M>
IsoVerdict<M> is_pro_iso(const ProMap<M>& f, const std::optional<ProMap<M>>& candidate = std::nullopt) {
  IsoVerdict<M> v;
  if (candidate) {
    IsoCertificate<M> c{f, *candidate};
    const auto chk = verify_iso(c);
    if (chk.ok) {
      v.status = IsoStatus::certified;
      v.certificate = std::move(c);
      if (chk.depth_qualified) v.note = "verified to depth " + std::to_string(f.target().index().depth());
    } else {
      v.status = IsoStatus::absent;
      v.note = "candidate rejected: " + chk.failure;
    }
    return v;
  }
  if (depth_qualified(f)) {
    v.note = "no candidate inverse supplied for an omega presentation";
    return v;
  }
  if constexpr (!EnumerableHom<M>) {
    v.note = "inverse search needs a candidate for this instance";
    return v;
  } else {
    const auto& x = f.source();
    const auto& y = f.target();
    const auto xm = x.value(x.top());
    const auto yn = y.value(y.top());
    auto as_pro = [&](const typename M::Map& g) {
      std::vector<Component<M>> cs;
      for (std::size_t s = 0; s < x.index().size(); ++s)
        cs.push_back({y.top(), M::compose(x.structure(x.top(), s), g)});
      return ProMap<M>::general(y, x, std::move(cs));
    };
    double space = 1;
    for (std::size_t k = 0; k < yn.size(); ++k) space *= double(xm.size());
    std::vector<typename M::Map> candidates;
    if (space <= double(exhaustive_limit)) {
      candidates = M::enumerate_maps(yn, xm);
      v.note = "exhaustive search over " + std::to_string(candidates.size()) + " candidates";
    } else {
      const auto top = normalized(f, y.top());
      if (M::is_iso(top)) candidates.push_back(M::inverse(top));
      v.note = "search reduced to the inverse at the maxima";
    }
    for (const auto& g : candidates) {
      IsoCertificate<M> c{f, as_pro(g)};
      if (verify_iso(c).ok) {
        v.status = IsoStatus::certified;
        v.certificate = std::move(c);
        return v;
      }
    }
    v.status = IsoStatus::absent;
    return v;
  }
}

// ---------------------------------------------------------------------------
// Level representations

template <ModelCategory M>
struct Levelized {
  ProMap<M> map;                      // level presentation
  IsoCertificate<M> source_iso;       // original source -> new source
  IsoCertificate<M> target_iso;       // original target -> new target
  std::vector<std::size_t> reindexing;  // omega: the chosen source levels, to depth
  std::optional<CofinalityVerdict> cofinality;
};

/// Re-presents a finite pro-object as the constant one at its maximum.
template <ModelCategory M>
IsoCertificate<M> collapse_to_top(const ProObject<M>& x) {
  const auto m = x.top();
  const auto c = ProObject<M>::constant(x.value(m));
  auto fwd = ProMap<M>::general(x, c, std::vector<Component<M>>{{m, M::identity(x.value(m))}});
  std::vector<Component<M>> back;
  for (std::size_t s = 0; s < x.index().size(); ++s) back.push_back({0, x.structure(m, s)});
  return {fwd, ProMap<M>::general(c, x, std::move(back))};
}

/// Re-presents a finite pro-object as the constant tower at its maximum.
template <ModelCategory M>
IsoCertificate<M> finite_as_tower(const ProObject<M>& x, std::size_t depth) {
  const auto m = x.top();
  const auto xm = x.value(m);
  const auto c = ProObject<M>::constant_tower(xm, depth);
  auto fwd = ProMap<M>::general(x, c, typename ProMap<M>::Rule([m, xm](std::size_t) {
    return Component<M>{m, M::identity(xm)};
  }));
  std::vector<Component<M>> back;
  for (std::size_t s = 0; s < x.index().size(); ++s) back.push_back({0, x.structure(m, s)});
  return {fwd, ProMap<M>::general(c, x, std::move(back))};
}

template <ModelCategory M>
Levelized<M> levelize(const ProMap<M>& f) {
  const auto& x = f.source();
  const auto& y = f.target();
  if (f.is_level()) return {f, identity_certificate(x), identity_certificate(y), {}, std::nullopt};
  if (x.is_finite() && y.is_finite()) {
    auto sx = collapse_to_top(x);
    auto sy = collapse_to_top(y);
    auto lvl = ProMap<M>::level(sx.forward.target(), sy.forward.target(), {normalized(f, y.top())});
    return {lvl, sx, sy, {}, std::nullopt};
  }
  const std::size_t depth = std::max(x.index().is_omega() ? x.index().depth() : 0,
                                     y.index().is_omega() ? y.index().depth() : 0);
  // Mixed regimes pass through the constant tower at the finite maximum.
  IsoCertificate<M> sx0 = x.is_finite() ? finite_as_tower(x, depth) : identity_certificate(x);
  IsoCertificate<M> sy0 = y.is_finite() ? finite_as_tower(y, depth) : identity_certificate(y);
  const ProObject<M> xt = sx0.forward.target();
  const ProObject<M> yt = sy0.forward.target();
  const ProMap<M> g = compose(sy0.forward, compose(f, sx0.backward));

  const std::size_t window = depth;
  auto agrees = [xt, yt, g](std::size_t n, std::size_t u) {
    const auto hi = g.component(n + 1), lo = g.component(n);
    return M::equal(M::compose(yt.structure(n + 1, n), M::compose(hi.map, xt.structure(u, hi.source_index))),
                    M::compose(lo.map, xt.structure(u, lo.source_index)));
  };
  Memo<std::size_t> tau([g, agrees, window](const std::vector<std::size_t>& prev) -> std::size_t {
    const std::size_t n = prev.size();
    if (n == 0) return g.component(0).source_index;
    const std::size_t lower = std::max({prev.back(), n, g.component(n).source_index});
    for (std::size_t u = lower; u <= lower + window; ++u)
      if (agrees(n - 1, u)) return u;
    fail(ErrorKind::depth_exhausted, "compatibility did not settle within the search window",
         "level " + std::to_string(n));
  });
  for (std::size_t n = 0; n < depth; ++n) tau.at(n);

  const IndexPoset omega = IndexPoset::omega(depth);
  auto xr = ProObject<M>::tower(
      omega, [xt, tau](std::size_t n) { return xt.value(tau.at(n)); },
      [xt, tau](std::size_t n) { return xt.structure(tau.at(n + 1), tau.at(n)); });
  auto lvl = ProMap<M>::level(xr, yt, [g, xt, tau](std::size_t n) {
    const auto c = g.component(n);
    return M::compose(c.map, xt.structure(tau.at(n), c.source_index));
  });
  auto fwd = ProMap<M>::general(xt, xr, typename ProMap<M>::Rule([xt, tau](std::size_t n) {
    return Component<M>{tau.at(n), M::identity(xt.value(tau.at(n)))};
  }));
  auto back = ProMap<M>::general(xr, xt, typename ProMap<M>::Rule([xt, tau](std::size_t n) {
    return Component<M>{n, xt.structure(tau.at(n), n)};
  }));
  IsoCertificate<M> sx{compose(fwd, sx0.forward), compose(sx0.backward, back)};
  std::vector<std::size_t> chosen;
  for (std::size_t n = 0; n < depth; ++n) chosen.push_back(tau.at(n));
  auto verdict = is_cofinal(CofinalMap{omega, omega, [tau](std::size_t n) { return tau.at(n); }});
  return {lvl, sx, sy0, chosen, verdict};
}

// ---------------------------------------------------------------------------
// Levelwise limits and colimits of finite loop-free diagrams

template <ModelCategory M>
struct ProArrow {
  std::size_t from;
  std::size_t to;
  ProMap<M> map;
};

template <ModelCategory M>
struct ProDiagram {
  std::vector<ProObject<M>> objects;
  std::vector<ProArrow<M>> arrows;
};

template <ModelCategory M>
struct ProCone {
  ProObject<M> apex;
  std::vector<ProMap<M>> legs;  // limit: apex -> object; colimit: object -> apex
};

namespace pro_detail {

template <ModelCategory M>
void check_level_diagram(const ProDiagram<M>& d) {
  require(!d.objects.empty(), ErrorKind::precondition, "levelwise limits need at least one object");
  const auto& index = d.objects.front().index();
  for (const auto& o : d.objects)
    require(o.index() == index, ErrorKind::precondition, "diagram objects do not share an index; levelize first");
  const std::size_t n = d.objects.size();
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t k = 0; k < d.arrows.size(); ++k) {
    const auto& a = d.arrows[k];
    require(a.from < n && a.to < n, ErrorKind::malformed, "diagram arrow refers to a missing object");
    require(a.from != a.to, ErrorKind::precondition, "diagram has a loop", "arrow " + std::to_string(k));
    require(a.map.is_level() && a.map.source().index() == index, ErrorKind::precondition,
            "diagram arrow is not level over the shared index; levelize first", "arrow " + std::to_string(k));
    require(same_pro_object(a.map.source(), d.objects[a.from]) && same_pro_object(a.map.target(), d.objects[a.to]),
            ErrorKind::malformed, "diagram arrow does not match its endpoints", "arrow " + std::to_string(k));
    out[a.from].push_back(a.to);
  }
  std::vector<int> colour(n, 0);
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    colour[v] = 1;
    for (auto w : out[v]) {
      require(colour[w] != 1, ErrorKind::precondition, "diagram has a loop", "object " + std::to_string(w));
      if (colour[w] == 0) visit(w);
    }
    colour[v] = 2;
  };
  for (std::size_t v = 0; v < n; ++v)
    if (colour[v] == 0) visit(v);
}

template <ModelCategory M>
Diagram<M> at_level(const ProDiagram<M>& d, std::size_t s) {
  Diagram<M> out;
  for (const auto& o : d.objects) out.add(o.value(s));
  for (const auto& a : d.arrows) out.connect(a.from, a.to, a.map.level_component(s));
  return out;
}

}  // namespace pro_detail

template <ModelCategory M>
ProCone<M> pro_limit_levelwise(const ProDiagram<M>& d, bool colimit = false) {
  pro_detail::check_level_diagram(d);
  const auto& index = d.objects.front().index();
  auto cone_at = [d, colimit](std::size_t s) {
    const auto ds = pro_detail::at_level(d, s);
    return colimit ? M::colimit(ds) : M::limit(ds);
  };
  auto step = [d, colimit, cone_at](std::size_t t, std::size_t s) {
    const auto dt = pro_detail::at_level(d, t), ds = pro_detail::at_level(d, s);
    const auto ct = cone_at(t), cs = cone_at(s);
    std::vector<typename M::Map> legs;
    for (std::size_t j = 0; j < d.objects.size(); ++j) {
      const auto xs = d.objects[j].structure(t, s);
      legs.push_back(colimit ? M::compose(cs.legs[j], xs) : M::compose(xs, ct.legs[j]));
    }
    return colimit ? M::colimit_induced(dt, ct, cs.apex, legs) : M::limit_induced(ds, cs, ct.apex, legs);
  };
  std::optional<ProObject<M>> apex;
  if (index.is_finite()) {
    std::vector<typename M::Object> values;
    for (std::size_t s = 0; s < index.size(); ++s) values.push_back(cone_at(s).apex);
    typename ProObject<M>::CoverMaps covers;
    for (auto [s, t] : index.covers()) covers.emplace(std::make_pair(t, s), step(t, s));
    apex = ProObject<M>::finite(index, std::move(values), covers);
  } else {
    apex = ProObject<M>::tower(
        index, [cone_at](std::size_t n) { return cone_at(n).apex; }, [step](std::size_t n) { return step(n + 1, n); });
  }
  ProCone<M> out{*apex, {}};
  for (std::size_t j = 0; j < d.objects.size(); ++j) {
    if (index.is_finite()) {
      std::vector<typename M::Map> comps;
      for (std::size_t s = 0; s < index.size(); ++s) comps.push_back(cone_at(s).legs[j]);
      out.legs.push_back(colimit ? ProMap<M>::level(d.objects[j], *apex, comps)
                                 : ProMap<M>::level(*apex, d.objects[j], comps));
    } else {
      auto rule = [cone_at, j](std::size_t n) { return cone_at(n).legs[j]; };
      out.legs.push_back(colimit ? ProMap<M>::level(d.objects[j], *apex, rule)
                                 : ProMap<M>::level(*apex, d.objects[j], rule));
    }
  }
  return out;
}

template <ModelCategory M>
ProCone<M> pro_colimit_levelwise(const ProDiagram<M>& d) {
  return pro_limit_levelwise(d, true);
}

/// Levelwise pullback of a -> c <- b over a shared index; legs are (to a, to b).
template <ModelCategory M>
ProCone<M> levelwise_pullback(const ProMap<M>& a, const ProMap<M>& b) {
  ProDiagram<M> d{{a.source(), b.source(), a.target()}, {{0, 2, a}, {1, 2, b}}};
  return pro_limit_levelwise(d);
}

/// Levelwise pushout of a <- c -> b over a shared index; legs are (from a, from b).
template <ModelCategory M>
ProCone<M> levelwise_pushout(const ProMap<M>& a, const ProMap<M>& b) {
  ProDiagram<M> d{{a.target(), b.target(), a.source()}, {{2, 0, a}, {2, 1, b}}};
  return pro_colimit_levelwise(d);
}

// ---------------------------------------------------------------------------
// The constant functor and its right adjoint

template <ModelCategory M>
ProObject<M> constant_embed(const typename M::Object& x) {
  return ProObject<M>::constant(x);
}


/// X composed with a monotone map of finite indices.
template <ModelCategory M>
ProObject<M> reindex(const ProObject<M>& x, const IndexPoset& j, const std::vector<std::size_t>& along) {
  require(j.is_finite() && along.size() == j.size(), ErrorKind::malformed, "reindexing needs one image per element");
  std::vector<typename M::Object> values;
  for (auto a : along) values.push_back(x.value(a));
  typename ProObject<M>::CoverMaps covers;
  for (auto [s, t] : j.covers()) covers.emplace(std::make_pair(t, s), x.structure(along[t], along[s]));
  return ProObject<M>::finite(j, std::move(values), covers);
}

template <ModelCategory M>
ProMap<M> reindex(const ProMap<M>& f, const ProObject<M>& new_source, const ProObject<M>& new_target,
                  const std::vector<std::size_t>& along) {
  require(f.is_level(), ErrorKind::precondition, "only level maps are reindexed");
  std::vector<typename M::Map> comps;
  for (auto a : along) comps.push_back(f.level_component(a));
  return ProMap<M>::level(new_source, new_target, std::move(comps));
}

/// The iso X -> reindex(X) along a map whose image contains the maximum of X.
template <ModelCategory M>
IsoCertificate<M> reindex_certificate(const ProObject<M>& x, const ProObject<M>& xr, const std::vector<std::size_t>& along) {
  const auto& j = xr.index();
  std::vector<Component<M>> fwd, back;
  for (std::size_t t = 0; t < j.size(); ++t) fwd.push_back({along[t], M::identity(x.value(along[t]))});
  const auto jm = j.maximum();
  for (std::size_t s = 0; s < x.index().size(); ++s) back.push_back({jm, x.structure(along[jm], s)});
  return {ProMap<M>::general(x, xr, std::move(fwd)), ProMap<M>::general(xr, x, std::move(back))};
}

/// Truncates towers to the finite chain of their first `depth` levels.
template <ModelCategory M>
ProObject<M> truncate(const ProObject<M>& x, std::optional<std::size_t> depth = std::nullopt) {
  if (x.is_finite()) return x;
  const std::size_t d = depth.value_or(x.index().depth());
  const auto chain = IndexPoset::chain(d);
  std::vector<typename M::Object> values;
  typename ProObject<M>::CoverMaps covers;
  for (std::size_t n = 0; n < d; ++n) values.push_back(x.value(n));
  for (std::size_t n = 0; n + 1 < d; ++n) covers.emplace(std::make_pair(n + 1, n), x.structure(n + 1, n));
  return ProObject<M>::finite(chain, std::move(values), covers);
}

template <ModelCategory M>
ProMap<M> truncate(const ProMap<M>& f, std::optional<std::size_t> depth = std::nullopt) {
  require(f.is_level(), ErrorKind::precondition, "only level maps are truncated");
  if (f.target().is_finite()) return f;
  const std::size_t d = depth.value_or(f.target().index().depth());
  std::vector<typename M::Map> comps;
  for (std::size_t n = 0; n < d; ++n) comps.push_back(f.level_component(n));
  return ProMap<M>::level(truncate(f.source(), d), truncate(f.target(), d), std::move(comps));
}

}  // namespace promc
