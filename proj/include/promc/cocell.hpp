#pragma once

// Cocell towers of special fibrations, their limits, and the c -| lim adjunction.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "promc/error.hpp"
#include "promc/index.hpp"
#include "promc/model.hpp"
#include "promc/pro.hpp"
#include "promc/strict.hpp"

namespace promc {

/// One successor stage: Z_{b+1} = Z_b x_{P} X_s along c(g), g = M_s f : X_s -> P.
template <ModelCategory M>
struct Attachment {
  std::size_t level;
  std::string level_name;
  typename M::Map g;           // the constant map being pulled back
  ClassName cls;
  typename M::Map to_base;     // Z_b -> P
  typename M::Map connecting;  // Z_{b+1} -> Z_b
  typename M::Map leg;         // Z_{b+1} -> X_s
};

/// A finite tower whose stages after Z_0 are constant. Z_0 is the pro-object Y,
/// read through its value at the maximum.
template <ModelCategory M>
struct Tower {
  ProObject<M> base;                          // Z_0
  std::vector<typename M::Object> stages;     // values of Z_1 .. Z_n
  std::vector<Attachment<M>> attachments;     // one per successor stage
  std::optional<ProMap<M>> presented;         // the map the tower was built from

  std::size_t length() const { return attachments.size(); }
  typename M::Object base_value() const { return base.value(base.top()); }
  typename M::Object value(std::size_t b) const { return b == 0 ? base_value() : stages[b - 1]; }

  ProObject<M> stage(std::size_t b) const { return b == 0 ? base : ProObject<M>::constant(stages[b - 1]); }

  /// Z_{b+1} -> Z_b as a pro-map.
  ProMap<M> connecting(std::size_t b) const {
    const auto& conn = attachments[b].connecting;
    if (b > 0) return ProMap<M>::constant(conn);
    std::vector<Component<M>> cs;
    for (std::size_t s = 0; s < base.index().size(); ++s) cs.push_back({0, M::compose(base.structure(base.top(), s), conn)});
    return ProMap<M>::general(stage(1), base, std::move(cs));
  }
};

namespace cocell_detail {

template <ModelCategory M>
Matching<M> matching_for(const ProMap<M>& f, std::size_t s) {
  return matching_object<M>(
      f.target().index(), s, [&](std::size_t t) { return f.source().value(t); },
      [&](std::size_t a, std::size_t b) { return f.source().structure(a, b); }, f.target(),
      [&](std::size_t t) { return f.level_component(t); });
}

template <ModelCategory M>
Diagram<M> cospan(const typename M::Map& a, const typename M::Map& b) {
  Diagram<M> d;
  d.add(M::source(a));
  d.add(M::source(b));
  d.add(M::target(a));
  d.connect(0, 2, a);
  d.connect(1, 2, b);
  return d;
}

}  // namespace cocell_detail

template <ModelCategory M>
Tower<M> build_cocell_tower(const ProMap<M>& f, SpecialKind kind) {
  strict_detail::require_finite_level(f, "build_cocell_tower");
  const auto rep = detect_special(f, kind);
  const auto& index = f.target().index();
  if (!rep.ok())
    fail(ErrorKind::precondition, std::string("missing matching-map certificate for class ") + to_string(kind),
         index.name(*rep.failing));
  const ClassName cls = kind == SpecialKind::fibration ? ClassName::fibration : ClassName::acyclic_fibration;
  const auto& x = f.source();
  const auto& y = f.target();
  const auto top = y.top();

  Tower<M> tower{y, {}, {}, f};
  typename M::Object current = y.value(top);
  auto to_base = M::identity(current);                           // Z_b -> Z_0
  std::vector<std::optional<typename M::Map>> legs(index.size());  // Z_b -> X_t for attached t
  for (auto s : linear_extension(index).order) {
    auto m = cocell_detail::matching_for(f, s);
    const auto g = m.induce(
        x.value(s), [&](std::size_t t) { return x.structure(s, t); },
        [&](std::size_t t) { return M::compose(f.level_component(t), x.structure(s, t)); }, f.level_component(s));
    const auto down = m.induce(
        current, [&](std::size_t t) { return *legs[t]; },
        [&](std::size_t t) { return M::compose(y.structure(top, t), to_base); },
        M::compose(y.structure(top, s), to_base));
    const auto cone = M::limit(cocell_detail::cospan<M>(down, g));
    const auto conn = cone.legs[0];
    for (auto& l : legs)
      if (l) l = M::compose(*l, conn);
    legs[s] = cone.legs[1];
    to_base = M::compose(to_base, conn);
    current = cone.apex;
    tower.stages.push_back(current);
    tower.attachments.push_back({s, index.name(s), g, cls, down, conn, cone.legs[1]});
  }
  return tower;
}

/// Independent replay: every connecting map is a base change of a constant map in its class.
template <ModelCategory M>
Check replay_tower(const Tower<M>& t) {
  if (t.stages.size() != t.attachments.size()) return Check::fail_with("stage and attachment counts differ");
  for (std::size_t b = 0; b < t.length(); ++b) {
    const auto& a = t.attachments[b];
    const std::string at = "stage " + std::to_string(b + 1) + " (level " + a.level_name + ")";
    if (!in_class(M::classify(a.g), a.cls)) return Check::fail_with(at + ": attaching map is not in its class");
    if (!M::same_object(M::source(a.to_base), t.value(b)) || !M::same_object(M::target(a.to_base), M::target(a.g)))
      return Check::fail_with(at + ": attaching square has mismatched ends");
    if (!M::same_object(M::source(a.connecting), t.value(b + 1)) || !M::same_object(M::target(a.connecting), t.value(b)) ||
        !M::same_object(M::source(a.leg), t.value(b + 1)) || !M::same_object(M::target(a.leg), M::source(a.g)))
      return Check::fail_with(at + ": stage maps have mismatched ends");
    if (!M::equal(M::compose(a.to_base, a.connecting), M::compose(a.g, a.leg)))
      return Check::fail_with(at + ": attaching square does not commute");
    const auto d = cocell_detail::cospan<M>(a.to_base, a.g);
    const auto pb = M::limit(d);
    const auto cmp = M::limit_induced(d, pb, t.value(b + 1), {a.connecting, a.leg, M::compose(a.g, a.leg)});
    if (!M::is_iso(cmp)) return Check::fail_with(at + ": stage is not the pullback");
  }
  return Check::pass();
}

template <ModelCategory M>
struct TowerLimit {
  ProObject<M> object;
  ProMap<M> projection;                     // lim Z -> Z_0
  std::optional<IsoCertificate<M>> iso;     // X -> lim Z, when the tower presents a map
  Check iso_check;
  Check projection_check;                   // projection o iso = f
};

template <ModelCategory M>
TowerLimit<M> tower_limit(const Tower<M>& t) {
  if (t.length() == 0)
    return {t.base, ProMap<M>::identity(t.base), std::nullopt, Check::pass(), Check::pass()};
  const auto& base = t.base;
  auto pr = M::identity(t.value(t.length()));  // Z_n -> Z_0
  for (std::size_t b = t.length(); b-- > 0;) pr = M::compose(t.attachments[b].connecting, pr);
  const auto apex = ProObject<M>::constant(t.value(t.length()));
  std::vector<Component<M>> cs;
  for (std::size_t s = 0; s < base.index().size(); ++s) cs.push_back({0, M::compose(base.structure(base.top(), s), pr)});
  TowerLimit<M> out{apex, ProMap<M>::general(apex, base, std::move(cs)), std::nullopt, Check::pass(), Check::pass()};
  if (!t.presented) return out;

  const auto& f = *t.presented;
  const auto& x = f.source();
  const auto top = x.top();
  auto phi = f.level_component(top);  // X_M -> Z_b
  for (std::size_t b = 0; b < t.length(); ++b) {
    const auto& a = t.attachments[b];
    const auto d = cocell_detail::cospan<M>(a.to_base, a.g);
    Cone<M> cone{t.value(b + 1), {a.connecting, a.leg, M::compose(a.g, a.leg)}};
    const auto leg = x.structure(top, a.level);
    phi = M::limit_induced(d, cone, x.value(top), {phi, leg, M::compose(a.g, leg)});
  }
  const auto forward = ProMap<M>::general(x, apex, std::vector<Component<M>>{{top, phi}});
  if (!M::is_iso(phi)) {
    out.iso_check = Check::fail_with("comparison from the source into the tower limit is not an isomorphism");
    return out;
  }
  const auto inv = M::inverse(phi);
  std::vector<Component<M>> back;
  for (std::size_t s = 0; s < x.index().size(); ++s) back.push_back({0, M::compose(x.structure(top, s), inv)});
  out.iso = IsoCertificate<M>{forward, ProMap<M>::general(apex, x, std::move(back))};
  out.iso_check = verify_iso(*out.iso);
  if (auto s = pro_disagreement(compose(out.projection, forward), f))
    out.projection_check = Check::fail_with("projection differs from the presented map at " + f.target().index().name(*s));
  return out;
}

/// An omega tower of constants, read to a finite depth.
template <ModelCategory M>
struct ConstantTower {
  std::size_t depth = default_depth;
  std::function<typename M::Object(std::size_t)> value;
  std::function<typename M::Map(std::size_t)> step;  // Z_{n+1} -> Z_n
};

template <ModelCategory M>
ProObject<M> tower_limit(const ConstantTower<M>& t) {
  return ProObject<M>::tower(IndexPoset::omega(t.depth), t.value, t.step);
}

// ---------------------------------------------------------------------------
// c -| lim

template <ModelCategory M>
struct AdjunctionWitness {
  HomResult<M> pro_side;                    // hom(cX, Y)
  std::vector<typename M::Map> base_side;   // Hom(X, lim Y), all maps or a basis
  LimitValue<M> limit;
  std::vector<typename M::Map> forward;     // image of each pro class
  std::vector<ProMap<M>> backward;          // image of each base map
  std::size_t pro_count = 0;
  std::size_t base_count = 0;
  bool is_dimension = false;
  Check verdict;
};

template <ModelCategory M>
AdjunctionWitness<M> adjunction_check(const typename M::Object& x, const ProObject<M>& y) {
  M::validate(x);
  const auto cx = ProObject<M>::constant(x);
  AdjunctionWitness<M> w{hom_pro(cx, y), {}, lim_functor(y), {}, {}, 0, 0, false, Check::pass()};
  w.base_side = base_hom<M>(x, w.limit.value);
  w.is_dimension = w.pro_side.is_dimension;
  w.pro_count = w.pro_side.count;
  w.base_count = distinct_count<M>(w.base_side);
  const bool dq = w.pro_side.depth_qualified;
  const std::size_t level = y.is_finite() ? y.top() : w.limit.stable_depth - 1;
  const auto& proj = w.limit.projections[level];

  auto to_base = [&](const ProMap<M>& phi) -> std::optional<typename M::Map> {
    return M::factor_through_mono(proj, normalized(phi, level));
  };
  auto to_pro = [&](const typename M::Map& g) {
    if (y.is_finite()) {
      std::vector<Component<M>> cs;
      for (std::size_t s = 0; s < y.index().size(); ++s) cs.push_back({0, M::compose(w.limit.projections[s], g)});
      return ProMap<M>::general(cx, y, std::move(cs));
    }
    const auto projections = w.limit.projections;
    return ProMap<M>::general(cx, y, typename ProMap<M>::Rule([projections, g](std::size_t n) {
      require(n < projections.size(), ErrorKind::depth_exhausted, "adjoint map evaluated past its depth",
              std::to_string(n));
      return Component<M>{0, M::compose(projections[n], g)};
    }));
  };

  if (w.pro_count != w.base_count) {
    w.verdict = Check::fail_with("hom(cX, Y) has " + std::to_string(w.pro_count) + " but Hom(X, lim Y) has " +
                                 std::to_string(w.base_count));
    return w;
  }
  for (std::size_t k = 0; k < w.pro_side.classes.size(); ++k) {
    const auto& phi = w.pro_side.classes[k];
    auto g = to_base(phi);
    if (!g) {
      w.verdict = Check::fail_with("pro class " + std::to_string(k) + " does not factor through lim Y");
      return w;
    }
    w.forward.push_back(*g);
    if (pro_disagreement(to_pro(*g), phi)) {
      w.verdict = Check::fail_with("round trip fails on pro class " + std::to_string(k));
      return w;
    }
  }
  for (std::size_t k = 0; k < w.base_side.size(); ++k) {
    const auto& g = w.base_side[k];
    auto phi = to_pro(g);
    w.backward.push_back(phi);
    auto back = to_base(phi);
    if (!back || !M::equal(*back, g)) {
      w.verdict = Check::fail_with("round trip fails on base map " + std::to_string(k));
      return w;
    }
  }
  // Naturality in X along endomorphisms of X.
  auto samples = base_hom<M>(x, x);
  if (samples.size() > 8) samples.resize(8);
  for (const auto& a : samples)
    for (std::size_t k = 0; k < w.pro_side.classes.size(); ++k) {
      const auto pre = compose(w.pro_side.classes[k], ProMap<M>::constant(a));
      auto lhs = to_base(pre);
      if (!lhs || !M::equal(*lhs, M::compose(w.forward[k], a))) {
        w.verdict = Check::fail_with("naturality fails for pro class " + std::to_string(k));
        return w;
      }
    }
  w.verdict = Check::pass(dq);
  return w;
}

}  // namespace promc
