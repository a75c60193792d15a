#pragma once

// The contract a concrete proper model category has to satisfy before the
// pro-category constructions can run over it.

#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace promc {

struct MapClass {
  bool we = false;
  bool cof = false;
  bool fib = false;

  bool acyclic_cof() const { return we && cof; }
  bool acyclic_fib() const { return we && fib; }
  friend bool operator==(const MapClass&, const MapClass&) = default;
};

/// Named classes used by certificates and class-tagged constructions.
enum class ClassName { weak_equivalence, cofibration, fibration, acyclic_cofibration, acyclic_fibration };

inline bool in_class(const MapClass& c, ClassName n) {
  switch (n) {
    case ClassName::weak_equivalence: return c.we;
    case ClassName::cofibration: return c.cof;
    case ClassName::fibration: return c.fib;
    case ClassName::acyclic_cofibration: return c.acyclic_cof();
    case ClassName::acyclic_fibration: return c.acyclic_fib();
  }
  return false;
}

inline const char* to_string(ClassName n) {
  switch (n) {
    case ClassName::weak_equivalence: return "we";
    case ClassName::cofibration: return "cof";
    case ClassName::fibration: return "fib";
    case ClassName::acyclic_cofibration: return "acyclic-cof";
    case ClassName::acyclic_fibration: return "acyclic-fib";
  }
  return "?";
}

inline std::optional<ClassName> parse_class(std::string_view s) {
  if (s == "we") return ClassName::weak_equivalence;
  if (s == "cof") return ClassName::cofibration;
  if (s == "fib") return ClassName::fibration;
  if (s == "acyclic-cof") return ClassName::acyclic_cofibration;
  if (s == "acyclic-fib") return ClassName::acyclic_fibration;
  return std::nullopt;
}

enum class FactorMode { cof_then_acyclic_fib, acyclic_cof_then_fib };

inline const char* to_string(FactorMode m) {
  return m == FactorMode::cof_then_acyclic_fib ? "cof-then-acyclicfib" : "acycliccof-then-fib";
}

template <class M>
struct Factorization {
  typename M::Map left;
  typename M::Map right;
  FactorMode mode;

  const typename M::Object& middle() const { return M::target(left); }
};

template <class M>
struct DiagramArrow {
  std::size_t from;
  std::size_t to;
  typename M::Map map;
};

/// A finite diagram: objects plus arrows between them by position.
template <class M>
struct Diagram {
  std::vector<typename M::Object> objects;
  std::vector<DiagramArrow<M>> arrows;

  std::size_t add(typename M::Object o) {
    objects.push_back(std::move(o));
    return objects.size() - 1;
  }
  void connect(std::size_t from, std::size_t to, typename M::Map m) { arrows.push_back({from, to, std::move(m)}); }
};

/// Limit cones carry legs apex -> object; colimit cocones carry legs object -> apex.
template <class M>
struct Cone {
  typename M::Object apex;
  std::vector<typename M::Map> legs;
};

template <class M>
struct LiftSquare {
  typename M::Map i;       // A -> B
  typename M::Map p;       // X -> Y
  typename M::Map top;     // A -> X
  typename M::Map bottom;  // B -> Y
};

template <class M>
struct ImageFactorization {
  typename M::Object image;
  typename M::Map epi;   // source -> image
  typename M::Map mono;  // image -> target
};

template <class M>
concept ModelCategory = requires(const typename M::Object& o, const typename M::Map& f, const typename M::Map& g,
                                 const Diagram<M>& d, const Cone<M>& cone, const LiftSquare<M>& sq,
                                 const std::vector<typename M::Map>& legs, FactorMode mode) {
  { M::tag } -> std::convertible_to<std::string_view>;
  { M::validate(o) };
  { M::validate(f) };
  { M::source(f) } -> std::convertible_to<const typename M::Object&>;
  { M::target(f) } -> std::convertible_to<const typename M::Object&>;
  { M::identity(o) } -> std::same_as<typename M::Map>;
  { M::compose(g, f) } -> std::same_as<typename M::Map>;
  { M::equal(f, g) } -> std::same_as<bool>;
  { M::same_object(o, o) } -> std::same_as<bool>;
  { M::classify(f) } -> std::same_as<MapClass>;
  { M::is_iso(f) } -> std::same_as<bool>;
  { M::inverse(f) } -> std::same_as<typename M::Map>;
  { M::factor(f, mode) } -> std::same_as<Factorization<M>>;
  { M::lift(sq) } -> std::same_as<std::optional<typename M::Map>>;
  { M::limit(d) } -> std::same_as<Cone<M>>;
  { M::limit_induced(d, cone, o, legs) } -> std::same_as<typename M::Map>;
  { M::colimit(d) } -> std::same_as<Cone<M>>;
  { M::colimit_induced(d, cone, o, legs) } -> std::same_as<typename M::Map>;
  { M::image(f) } -> std::same_as<ImageFactorization<M>>;
  { M::factor_through_mono(f, g) } -> std::same_as<std::optional<typename M::Map>>;
  { M::describe(o) } -> std::convertible_to<std::string>;
  { M::describe(f) } -> std::convertible_to<std::string>;
};

}  // namespace promc
