#pragma once

// Finite sets with bijections as weak equivalences and every map both a
// cofibration and a fibration.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "promc/error.hpp"
#include "promc/model.hpp"

namespace promc {

struct FinSet {
  std::vector<std::string> elements;

  std::size_t size() const { return elements.size(); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (elements[i] == name) return i;
    return std::nullopt;
  }

  friend bool operator==(const FinSet&, const FinSet&) = default;
};

struct FinMap {
  FinSet source;
  FinSet target;
  std::vector<std::size_t> image;  // image[i] is the target position of source element i

  static FinMap from_pairs(FinSet source, FinSet target,
                           const std::vector<std::pair<std::string, std::string>>& pairs) {
    FinMap f{std::move(source), std::move(target), {}};
    f.image.assign(f.source.size(), static_cast<std::size_t>(-1));
    for (const auto& [a, b] : pairs) {
      auto i = f.source.index_of(a);
      auto j = f.target.index_of(b);
      require(i.has_value(), ErrorKind::malformed, "map names unknown source element", a);
      require(j.has_value(), ErrorKind::malformed, "map names unknown target element", b);
      f.image[*i] = *j;
    }
    return f;
  }

  const std::string& operator()(std::string_view a) const {
    auto i = source.index_of(a);
    require(i.has_value(), ErrorKind::malformed, "element not in source", std::string(a));
    return target.elements[image[*i]];
  }
};

struct SetBij {
  using Object = FinSet;
  using Map = FinMap;

  static constexpr std::string_view tag = "set-bij";

  static void validate(const Object& o) {
    std::set<std::string> seen;
    for (const auto& e : o.elements)
      require(seen.insert(e).second, ErrorKind::malformed, "duplicate element name", e);
  }

  static void validate(const Map& f) {
    validate(f.source);
    validate(f.target);
    require(f.image.size() == f.source.size(), ErrorKind::malformed, "map payload does not cover the source");
    for (std::size_t i = 0; i < f.image.size(); ++i)
      require(f.image[i] < f.target.size(), ErrorKind::malformed, "element has no image in the target",
              f.source.elements[i]);
  }

  static const Object& source(const Map& f) { return f.source; }
  static const Object& target(const Map& f) { return f.target; }

  static Map identity(const Object& o) {
    Map f{o, o, std::vector<std::size_t>(o.size())};
    std::iota(f.image.begin(), f.image.end(), std::size_t{0});
    return f;
  }

  /// g after f.
  static Map compose(const Map& g, const Map& f) {
    require(f.target == g.source, ErrorKind::precondition, "composing maps whose ends do not match");
    Map h{f.source, g.target, std::vector<std::size_t>(f.source.size())};
    for (std::size_t i = 0; i < h.image.size(); ++i) h.image[i] = g.image[f.image[i]];
    return h;
  }

  static bool equal(const Map& a, const Map& b) {
    return a.image == b.image && a.source == b.source && a.target == b.target;
  }
  static bool same_object(const Object& a, const Object& b) { return a == b; }

  static bool is_injective(const Map& f) {
    std::vector<bool> hit(f.target.size(), false);
    for (auto j : f.image) {
      if (hit[j]) return false;
      hit[j] = true;
    }
    return true;
  }
  static bool is_surjective(const Map& f) {
    std::vector<bool> hit(f.target.size(), false);
    for (auto j : f.image) hit[j] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  }

  static MapClass classify(const Map& f) {
    validate(f);
    return {f.source.size() == f.target.size() && is_injective(f), true, true};
  }

  static bool is_iso(const Map& f) { return f.source.size() == f.target.size() && is_injective(f); }

  static Map inverse(const Map& f) {
    require(is_iso(f), ErrorKind::precondition, "inverting a non-bijection");
    Map g{f.target, f.source, std::vector<std::size_t>(f.target.size())};
    for (std::size_t i = 0; i < f.image.size(); ++i) g.image[f.image[i]] = i;
    return g;
  }

  static Factorization<SetBij> factor(const Map& f, FactorMode mode) {
    validate(f);
    if (mode == FactorMode::cof_then_acyclic_fib) return {f, identity(f.target), mode};
    return {identity(f.source), f, mode};
  }

  static std::optional<Map> lift(const LiftSquare<SetBij>& sq) {
    validate(sq.i);
    validate(sq.p);
    require(sq.top.source == sq.i.source && sq.top.target == sq.p.source && sq.bottom.source == sq.i.target &&
                sq.bottom.target == sq.p.target,
            ErrorKind::precondition, "lifting square ends do not match");
    require(equal(compose(sq.p, sq.top), compose(sq.bottom, sq.i)), ErrorKind::precondition,
            "lifting square does not commute");
    // i is an acyclic cofibration exactly when it is a bijection, and p is an
    // acyclic fibration exactly when it is a bijection.
    if (is_iso(sq.i)) return compose(sq.top, inverse(sq.i));
    if (is_iso(sq.p)) return compose(inverse(sq.p), sq.bottom);
    return std::nullopt;
  }

  static Cone<SetBij> limit(const Diagram<SetBij>& d) {
    for (const auto& o : d.objects) validate(o);
    check_arrows(d);
    const std::size_t k = d.objects.size();
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<std::size_t> cur(k, 0);
    // Depth-first over objects in order; a value forced by an arrow from an
    // earlier object is the only candidate tried.
    auto consistent = [&](std::size_t upto) {
      for (const auto& a : d.arrows)
        if (a.from <= upto && a.to <= upto && a.map.image[cur[a.from]] != cur[a.to]) return false;
      return true;
    };
    auto rec = [&](auto&& self, std::size_t j) -> void {
      if (j == k) {
        tuples.push_back(cur);
        return;
      }
      std::optional<std::size_t> forced;
      for (const auto& a : d.arrows)
        if (a.to == j && a.from < j) {
          forced = a.map.image[cur[a.from]];
          break;
        }
      if (forced) {
        cur[j] = *forced;
        if (consistent(j)) self(self, j + 1);
        return;
      }
      for (std::size_t v = 0; v < d.objects[j].size(); ++v) {
        cur[j] = v;
        if (consistent(j)) self(self, j + 1);
      }
    };
    rec(rec, 0);

    std::vector<std::size_t> roots;
    for (std::size_t j = 0; j < k; ++j)
      if (std::none_of(d.arrows.begin(), d.arrows.end(), [&](const auto& a) { return a.to == j && a.from != j; }))
        roots.push_back(j);
    std::vector<std::size_t> all(k);
    std::iota(all.begin(), all.end(), std::size_t{0});

    auto names_over = [&](const std::vector<std::size_t>& cols) {
      std::vector<std::string> names;
      for (const auto& t : tuples) {
        if (cols.empty()) {
          names.push_back("*");
          continue;
        }
        std::string s = cols.size() == 1 ? "" : "(";
        for (std::size_t c = 0; c < cols.size(); ++c) {
          if (c) s += ",";
          s += d.objects[cols[c]].elements[t[cols[c]]];
        }
        if (cols.size() != 1) s += ")";
        names.push_back(std::move(s));
      }
      return names;
    };
    auto names = names_over(roots.empty() ? all : roots);
    if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) names = names_over(all);

    Cone<SetBij> cone{FinSet{names}, {}};
    for (std::size_t j = 0; j < k; ++j) {
      Map leg{cone.apex, d.objects[j], std::vector<std::size_t>(tuples.size())};
      for (std::size_t e = 0; e < tuples.size(); ++e) leg.image[e] = tuples[e][j];
      cone.legs.push_back(std::move(leg));
    }
    return cone;
  }

  static Map limit_induced(const Diagram<SetBij>& d, const Cone<SetBij>& cone, const Object& w,
                           const std::vector<Map>& legs) {
    require(legs.size() == d.objects.size(), ErrorKind::precondition, "cone has the wrong number of legs");
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t e = 0; e < cone.apex.size(); ++e) {
      std::vector<std::size_t> t;
      for (const auto& l : cone.legs) t.push_back(l.image[e]);
      index.emplace(std::move(t), e);
    }
    Map u{w, cone.apex, std::vector<std::size_t>(w.size())};
    for (std::size_t x = 0; x < w.size(); ++x) {
      std::vector<std::size_t> t;
      for (std::size_t j = 0; j < legs.size(); ++j) {
        require(legs[j].source == w && legs[j].target == d.objects[j], ErrorKind::precondition,
                "cone leg has the wrong ends");
        t.push_back(legs[j].image[x]);
      }
      auto it = index.find(t);
      require(it != index.end(), ErrorKind::precondition, "legs do not form a cone", w.elements[x]);
      u.image[x] = it->second;
    }
    return u;
  }

  static Cone<SetBij> colimit(const Diagram<SetBij>& d) {
    for (const auto& o : d.objects) validate(o);
    check_arrows(d);
    std::vector<std::size_t> offset(d.objects.size() + 1, 0);
    for (std::size_t j = 0; j < d.objects.size(); ++j) offset[j + 1] = offset[j] + d.objects[j].size();
    std::vector<std::size_t> parent(offset.back());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& a : d.arrows)
      for (std::size_t x = 0; x < d.objects[a.from].size(); ++x) {
        auto r1 = find(offset[a.from] + x), r2 = find(offset[a.to] + a.map.image[x]);
        if (r1 != r2) parent[std::max(r1, r2)] = std::min(r1, r2);
      }
    std::map<std::size_t, std::size_t> class_of_root;
    std::vector<std::pair<std::size_t, std::size_t>> reps;  // (object, element) of first member
    for (std::size_t j = 0; j < d.objects.size(); ++j)
      for (std::size_t x = 0; x < d.objects[j].size(); ++x) {
        auto r = find(offset[j] + x);
        if (class_of_root.emplace(r, reps.size()).second) reps.emplace_back(j, x);
      }
    std::vector<std::string> names;
    for (auto [j, x] : reps) names.push_back(d.objects[j].elements[x]);
    if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
      names.clear();
      for (auto [j, x] : reps) names.push_back(std::to_string(j) + "." + d.objects[j].elements[x]);
    }
    Cone<SetBij> cone{FinSet{names}, {}};
    for (std::size_t j = 0; j < d.objects.size(); ++j) {
      Map leg{d.objects[j], cone.apex, std::vector<std::size_t>(d.objects[j].size())};
      for (std::size_t x = 0; x < d.objects[j].size(); ++x) leg.image[x] = class_of_root[find(offset[j] + x)];
      cone.legs.push_back(std::move(leg));
    }
    return cone;
  }

  static Map colimit_induced(const Diagram<SetBij>& d, const Cone<SetBij>& cocone, const Object& w,
                             const std::vector<Map>& legs) {
    require(legs.size() == d.objects.size(), ErrorKind::precondition, "cocone has the wrong number of legs");
    std::vector<std::optional<std::size_t>> value(cocone.apex.size());
    for (std::size_t j = 0; j < legs.size(); ++j) {
      require(legs[j].source == d.objects[j] && legs[j].target == w, ErrorKind::precondition,
              "cocone leg has the wrong ends");
      for (std::size_t x = 0; x < d.objects[j].size(); ++x) {
        auto c = cocone.legs[j].image[x];
        if (value[c] && *value[c] != legs[j].image[x])
          fail(ErrorKind::precondition, "legs do not form a cocone", cocone.apex.elements[c]);
        value[c] = legs[j].image[x];
      }
    }
    Map u{cocone.apex, w, std::vector<std::size_t>(cocone.apex.size())};
    for (std::size_t c = 0; c < value.size(); ++c) u.image[c] = value[c].value();
    return u;
  }

  static ImageFactorization<SetBij> image(const Map& f) {
    std::vector<bool> hit(f.target.size(), false);
    for (auto j : f.image) hit[j] = true;
    FinSet img;
    std::vector<std::size_t> pos(f.target.size(), 0);
    Map mono{{}, f.target, {}};
    for (std::size_t j = 0; j < hit.size(); ++j)
      if (hit[j]) {
        pos[j] = img.size();
        img.elements.push_back(f.target.elements[j]);
        mono.image.push_back(j);
      }
    mono.source = img;
    Map epi{f.source, img, std::vector<std::size_t>(f.source.size())};
    for (std::size_t i = 0; i < f.image.size(); ++i) epi.image[i] = pos[f.image[i]];
    return {img, epi, mono};
  }

  /// u with m after u equal to g, when m is injective and g lands in its image.
  static std::optional<Map> factor_through_mono(const Map& m, const Map& g) {
    if (!(m.target == g.target)) return std::nullopt;
    std::vector<std::optional<std::size_t>> pre(m.target.size());
    for (std::size_t i = 0; i < m.image.size(); ++i) {
      if (pre[m.image[i]]) return std::nullopt;
      pre[m.image[i]] = i;
    }
    Map u{g.source, m.source, std::vector<std::size_t>(g.source.size())};
    for (std::size_t x = 0; x < g.image.size(); ++x) {
      if (!pre[g.image[x]]) return std::nullopt;
      u.image[x] = *pre[g.image[x]];
    }
    return u;
  }

  /// h with h after e equal to g, when g is constant on the fibres of e and e is surjective.
  static std::optional<Map> factor_through_epi(const Map& e, const Map& g) {
    if (!(e.source == g.source) || !is_surjective(e)) return std::nullopt;
    Map h{e.target, g.target, std::vector<std::size_t>(e.target.size(), 0)};
    std::vector<bool> set(e.target.size(), false);
    for (std::size_t x = 0; x < e.image.size(); ++x) {
      auto y = e.image[x];
      if (set[y] && h.image[y] != g.image[x]) return std::nullopt;
      h.image[y] = g.image[x];
      set[y] = true;
    }
    return h;
  }

  /// Every function a -> b, in lexicographic order of image tuples.
  static std::vector<Map> enumerate_maps(const Object& a, const Object& b) {
    std::vector<Map> out;
    if (b.size() == 0 && a.size() > 0) return out;
    std::vector<std::size_t> img(a.size(), 0);
    while (true) {
      out.push_back(Map{a, b, img});
      std::size_t i = a.size();
      while (i > 0) {
        --i;
        if (++img[i] < b.size()) break;
        img[i] = 0;
        if (i == 0) return out;
      }
      if (a.size() == 0) return out;
    }
  }

  static std::string describe(const Object& o) {
    std::string s = "{";
    for (std::size_t i = 0; i < o.size(); ++i) s += (i ? "," : "") + o.elements[i];
    return s + "}";
  }

  static std::string describe(const Map& f) {
    std::string s = "{";
    for (std::size_t i = 0; i < f.image.size(); ++i)
      s += (i ? "," : "") + f.source.elements[i] + "->" + f.target.elements[f.image[i]];
    return s + "}";
  }

 private:
  static void check_arrows(const Diagram<SetBij>& d) {
    for (const auto& a : d.arrows) {
      require(a.from < d.objects.size() && a.to < d.objects.size(), ErrorKind::malformed,
              "diagram arrow refers to a missing object");
      validate(a.map);
      require(a.map.source == d.objects[a.from] && a.map.target == d.objects[a.to], ErrorKind::malformed,
              "diagram arrow does not match its endpoints");
    }
  }
};

static_assert(ModelCategory<SetBij>);

}  // namespace promc
