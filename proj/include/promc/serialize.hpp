#pragma once

// JSON documents: indices, pro-objects, pro-maps, witness bundles and declared
// class certificates for one base instance.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "promc/chain_f2.hpp"
#include "promc/error.hpp"
#include "promc/index.hpp"
#include "promc/model.hpp"
#include "promc/pro.hpp"
#include "promc/set_bij.hpp"
#include "promc/strict.hpp"

namespace promc::io {

using json = nlohmann::ordered_json;

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  require(j.is_object(), ErrorKind::malformed, "expected an object", where);
  auto it = j.find(key);
  require(it != j.end(), ErrorKind::malformed, "missing field '" + key + "'", where);
  return *it;
}

inline std::string text(const json& j, const std::string& where) {
  require(j.is_string(), ErrorKind::malformed, "expected a string", where);
  return j.get<std::string>();
}

inline int degree_key(const std::string& k, const std::string& where) {
  try {
    std::size_t used = 0;
    int n = std::stoi(k, &used);
    if (used == k.size()) return n;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::malformed, "degree keys must be integers", where + "." + k);
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m.get(i, k) ? 1 : 0);
    rows.push_back(row);
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  require(j.is_array() && j.size() == rows, ErrorKind::malformed,
          "matrix must have " + std::to_string(rows) + " rows", where);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(j[i].is_array() && j[i].size() == cols, ErrorKind::malformed,
            "matrix rows must have " + std::to_string(cols) + " entries", where);
    for (std::size_t k = 0; k < cols; ++k) {
      const auto& e = j[i][k];
      require(e.is_number_integer() && (e.get<int>() == 0 || e.get<int>() == 1), ErrorKind::malformed,
              "matrix entries must be 0 or 1", where);
      m.set(i, k, e.get<int>() == 1);
    }
  }
  return m;
}

}  // namespace detail

template <class M>
struct Codec;

template <>
struct Codec<SetBij> {
  static constexpr const char* tag = "set-bij";

  static json object(const FinSet& s) { return s.elements; }

  static FinSet object(const json& j, const std::string& where) {
    require(j.is_array(), ErrorKind::malformed, "a set is an array of element names", where);
    FinSet s;
    for (const auto& e : j) s.elements.push_back(detail::text(e, where));
    SetBij::validate(s);
    return s;
  }

  static json map(const FinMap& f) {
    json j = json::object();
    for (std::size_t i = 0; i < f.source.size(); ++i) j[f.source.elements[i]] = f.target.elements[f.image[i]];
    return j;
  }

  static FinMap map(const json& j, const FinSet& src, const FinSet& tgt, const std::string& where) {
    require(j.is_object(), ErrorKind::malformed, "a function is an object from source to target names", where);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& [k, v] : j.items()) pairs.emplace_back(k, detail::text(v, where + "." + k));
    try {
      return FinMap::from_pairs(src, tgt, pairs);
    } catch (const Error& e) {
      fail(ErrorKind::malformed, e.what(), where + (e.witness().empty() ? "" : "." + e.witness()));
    }
  }
};

template <>
struct Codec<ChainF2> {
  static constexpr const char* tag = "chain-f2";

  static json object(const Complex& c) {
    json dims = json::object(), bd = json::object();
    if (!c.is_zero())
      for (int n = c.lo(); n <= c.hi(); ++n) {
        dims[std::to_string(n)] = c.dim(n);
        if (c.dim(n) && c.dim(n - 1)) bd[std::to_string(n)] = detail::matrix_to_json(c.boundary(n));
      }
    return {{"dims", dims}, {"boundary", bd}};
  }

  static Complex object(const json& j, const std::string& where) {
    std::map<int, std::size_t> dims;
    for (const auto& [k, v] : detail::field(j, "dims", where).items()) {
      require(v.is_number_unsigned(), ErrorKind::malformed, "dimensions are non-negative integers", where + ".dims." + k);
      dims[detail::degree_key(k, where + ".dims")] = v.get<std::size_t>();
    }
    auto dim = [&](int n) { return dims.count(n) ? dims[n] : std::size_t{0}; };
    std::map<int, Matrix> bd;
    if (j.contains("boundary"))
      for (const auto& [k, v] : j.at("boundary").items()) {
        const int n = detail::degree_key(k, where + ".boundary");
        bd[n] = detail::matrix_from_json(v, dim(n - 1), dim(n), where + ".boundary." + k);
      }
    try {
      auto c = Complex::from_degrees(dims, bd);
      ChainF2::validate(c);
      return c;
    } catch (const Error& e) {
      fail(e.kind(), e.what(), where + (e.witness().empty() ? "" : " " + e.witness()));
    }
  }

  static json map(const ChainMap& f) {
    json j = json::object();
    for (const auto& [n, m] : f.components())
      if (m.rows() && m.cols()) j[std::to_string(n)] = detail::matrix_to_json(m);
    return j;
  }

  static ChainMap map(const json& j, const Complex& src, const Complex& tgt, const std::string& where) {
    require(j.is_object(), ErrorKind::malformed, "a chain map is an object from degree to matrix", where);
    std::map<int, Matrix> comps;
    for (const auto& [k, v] : j.items()) {
      const int n = detail::degree_key(k, where);
      comps[n] = detail::matrix_from_json(v, tgt.dim(n), src.dim(n), where + "." + k);
    }
    try {
      ChainMap f(src, tgt, comps);
      ChainF2::validate(f);
      return f;
    } catch (const Error& e) {
      fail(e.kind(), e.what(), where + (e.witness().empty() ? "" : " " + e.witness()));
    }
  }
};

inline std::string instance_tag(const json& doc) {
  const auto tag = detail::text(detail::field(doc, "instance", "document"), "document.instance");
  require(tag == Codec<SetBij>::tag || tag == Codec<ChainF2>::tag, ErrorKind::malformed,
          "unknown instance '" + tag + "'", "document.instance");
  return tag;
}

inline json index_to_json(const IndexPoset& p) {
  if (p.is_omega()) return "omega";
  json covers = json::array();
  for (auto [lo, hi] : p.covers()) covers.push_back({p.name(lo), p.name(hi)});
  return {{"elements", p.names()}, {"covers", covers}};
}

inline IndexPoset index_from_json(const json& j, std::size_t depth, const std::string& where) {
  if (j.is_string()) {
    require(j.get<std::string>() == "omega", ErrorKind::malformed, "the only named index is \"omega\"", where);
    return IndexPoset::omega(depth);
  }
  std::vector<std::string> names;
  for (const auto& e : detail::field(j, "elements", where)) names.push_back(detail::text(e, where + ".elements"));
  std::vector<std::pair<std::string, std::string>> pairs;
  if (j.contains("covers"))
    for (const auto& c : j.at("covers")) {
      require(c.is_array() && c.size() == 2, ErrorKind::malformed, "covers are [lower, upper] pairs", where + ".covers");
      pairs.emplace_back(detail::text(c[0], where), detail::text(c[1], where));
    }
  auto v = validate_index(names, pairs, true);
  if (!v.ok()) fail(ErrorKind::validation, "index poset: " + v.violation->describe(), where);
  return *v.poset;
}

/// A parsed document. Names resolve within their section.
template <ModelCategory M>
struct Document {
  std::size_t depth = default_depth;
  std::map<std::string, IndexPoset> indices;
  std::map<std::string, typename M::Object> base;
  std::map<std::string, ProObject<M>> objects;
  std::map<std::string, ProMap<M>> maps;
  struct WitnessBundle {
    std::string map;
    Witnesses<M> entries;
  };
  std::map<std::string, WitnessBundle> witnesses;
  struct DeclaredSpecial {
    std::string map;
    SpecialKind kind;
    std::map<std::string, MapClass> levels;  // claimed class of each matching map
  };
  std::map<std::string, DeclaredSpecial> special;

  const ProObject<M>& object(const std::string& name) const {
    auto it = objects.find(name);
    require(it != objects.end(), ErrorKind::malformed, "unknown pro-object", name);
    return it->second;
  }
  const ProMap<M>& map(const std::string& name) const {
    auto it = maps.find(name);
    require(it != maps.end(), ErrorKind::malformed, "unknown pro-map", name);
    return it->second;
  }
  const typename M::Object& base_object(const std::string& name) const {
    auto it = base.find(name);
    require(it != base.end(), ErrorKind::malformed, "unknown base object", name);
    return it->second;
  }
  /// Witnesses attached to the named map, if any bundle names it.
  std::optional<Witnesses<M>> witnesses_for(const std::string& map_name) const {
    for (const auto& [k, b] : witnesses)
      if (b.map == map_name) return b.entries;
    return std::nullopt;
  }
};

inline json class_to_json(const MapClass& c) { return {{"we", c.we}, {"cof", c.cof}, {"fib", c.fib}}; }

inline MapClass class_from_json(const json& j, const std::string& where) {
  MapClass c;
  for (auto [key, slot] : {std::pair{"we", &c.we}, std::pair{"cof", &c.cof}, std::pair{"fib", &c.fib}}) {
    const auto& v = detail::field(j, key, where);
    require(v.is_boolean(), ErrorKind::malformed, "class flags are booleans", where + "." + key);
    *slot = v.get<bool>();
  }
  return c;
}

inline SpecialKind special_kind_from(const std::string& s, const std::string& where) {
  if (s == "fib") return SpecialKind::fibration;
  if (s == "acyclic-fib") return SpecialKind::acyclic_fibration;
  fail(ErrorKind::malformed, "special kind must be fib or acyclic-fib", where);
}

namespace detail {

template <ModelCategory M>
ProObject<M> object_from_json(const json& j, const std::map<std::string, IndexPoset>& indices, const std::string& where) {
  const auto iname = text(field(j, "index", where), where + ".index");
  auto it = indices.find(iname);
  require(it != indices.end(), ErrorKind::malformed, "unknown index '" + iname + "'", where + ".index");
  const auto& index = it->second;
  const auto& values = field(j, "values", where);
  if (index.is_omega()) {
    // values v_0 .. v_{k-1}, steps v_{n+1} -> v_n; the last value repeats with identities.
    require(values.is_array() && !values.empty(), ErrorKind::malformed, "tower values are a non-empty array",
            where + ".values");
    std::vector<typename M::Object> vs;
    for (std::size_t n = 0; n < values.size(); ++n) vs.push_back(Codec<M>::object(values[n], where + ".values[" + std::to_string(n) + "]"));
    std::vector<typename M::Map> steps;
    const json empty = json::array();
    const auto& st = j.contains("structure") ? j.at("structure") : empty;
    require(st.is_array() && st.size() + 1 == vs.size(), ErrorKind::malformed,
            "a tower with k values needs k-1 structure maps", where + ".structure");
    for (std::size_t n = 0; n < st.size(); ++n)
      steps.push_back(Codec<M>::map(st[n], vs[n + 1], vs[n], where + ".structure[" + std::to_string(n) + "]"));
    return ProObject<M>::tower(
        index, [vs](std::size_t n) { return vs[std::min(n, vs.size() - 1)]; },
        [vs, steps](std::size_t n) { return n < steps.size() ? steps[n] : M::identity(vs.back()); });
  }
  require(values.is_object(), ErrorKind::malformed, "values map index elements to objects", where + ".values");
  std::vector<typename M::Object> vs(index.size());
  std::vector<bool> seen(index.size(), false);
  for (const auto& [k, v] : values.items()) {
    auto s = index.find(k);
    require(s.has_value(), ErrorKind::malformed, "value for unknown index element", where + ".values." + k);
    vs[*s] = Codec<M>::object(v, where + ".values." + k);
    seen[*s] = true;
  }
  for (std::size_t s = 0; s < index.size(); ++s)
    require(seen[s], ErrorKind::malformed, "missing value", where + ".values." + index.name(s));
  typename ProObject<M>::CoverMaps covers;
  if (j.contains("structure"))
    for (const auto& e : j.at("structure")) {
      const auto up = text(field(e, "upper", where + ".structure"), where);
      const auto lo = text(field(e, "lower", where + ".structure"), where);
      const std::string w = where + ".structure." + up + ">" + lo;
      auto u = index.find(up), l = index.find(lo);
      require(u && l, ErrorKind::malformed, "structure map names an unknown element", w);
      covers.emplace(std::make_pair(*u, *l), Codec<M>::map(field(e, "map", w), vs[*u], vs[*l], w));
    }
  try {
    return ProObject<M>::finite(index, std::move(vs), covers);
  } catch (const Error& e) {
    fail(e.kind(), e.what(), where + (e.witness().empty() ? "" : " " + e.witness()));
  }
}

/// Listed tower components; the last one repeats.
template <ModelCategory M>
std::function<typename M::Map(std::size_t)> listed_level(std::vector<typename M::Map> cs) {
  return [cs = std::move(cs)](std::size_t n) { return cs[std::min(n, cs.size() - 1)]; };
}

template <ModelCategory M>
typename ProMap<M>::Rule listed_components(std::vector<Component<M>> cs) {
  return [cs = std::move(cs)](std::size_t n) {
    require(n < cs.size(), ErrorKind::depth_exhausted, "component listed only to depth " + std::to_string(cs.size()));
    return cs[n];
  };
}

template <ModelCategory M>
ProMap<M> map_from_json(const json& j, const std::map<std::string, ProObject<M>>& objects, const std::string& where) {
  auto obj = [&](const char* key) -> const ProObject<M>& {
    const auto n = text(field(j, key, where), where + "." + key);
    auto it = objects.find(n);
    require(it != objects.end(), ErrorKind::malformed, "unknown pro-object '" + n + "'", where + "." + key);
    return it->second;
  };
  const auto& src = obj("source");
  const auto& tgt = obj("target");
  const auto& ti = tgt.index();
  try {
    if (j.contains("level")) {
      const auto& lv = j.at("level");
      if (ti.is_omega()) {
        require(lv.is_array() && !lv.empty(), ErrorKind::malformed, "tower components are a non-empty array", where);
        std::vector<typename M::Map> cs;
        for (std::size_t n = 0; n < lv.size(); ++n)
          cs.push_back(Codec<M>::map(lv[n], src.value(n), tgt.value(n), where + ".level[" + std::to_string(n) + "]"));
        return ProMap<M>::level(src, tgt, listed_level<M>(std::move(cs)));
      }
      std::vector<std::optional<typename M::Map>> cs(ti.size());
      for (const auto& [k, v] : lv.items()) {
        auto s = ti.find(k);
        require(s.has_value(), ErrorKind::malformed, "component for unknown index element", where + ".level." + k);
        cs[*s] = Codec<M>::map(v, src.value(*s), tgt.value(*s), where + ".level." + k);
      }
      std::vector<typename M::Map> out;
      for (std::size_t s = 0; s < ti.size(); ++s) {
        require(cs[s].has_value(), ErrorKind::malformed, "missing component", where + ".level." + ti.name(s));
        out.push_back(*cs[s]);
      }
      return ProMap<M>::level(src, tgt, std::move(out));
    }
    const auto& comps = field(j, "components", where);
    auto component = [&](const json& e, const std::string& w) {
      const auto from = text(field(e, "from", w), w + ".from");
      auto u = src.index().find(from);
      require(u.has_value(), ErrorKind::malformed, "component from an unknown source element", w + ".from");
      return std::make_pair(*u, e);
    };
    if (ti.is_omega()) {
      require(comps.is_array() && !comps.empty(), ErrorKind::malformed, "tower components are a non-empty array", where);
      std::vector<Component<M>> cs;
      for (std::size_t n = 0; n < comps.size(); ++n) {
        const std::string w = where + ".components[" + std::to_string(n) + "]";
        auto [u, e] = component(comps[n], w);
        cs.push_back({u, Codec<M>::map(field(e, "map", w), src.value(u), tgt.value(n), w)});
      }
      return ProMap<M>::general(src, tgt, listed_components<M>(std::move(cs)));
    }
    std::vector<std::optional<Component<M>>> cs(ti.size());
    for (const auto& [k, e] : comps.items()) {
      auto s = ti.find(k);
      const std::string w = where + ".components." + k;
      require(s.has_value(), ErrorKind::malformed, "component for unknown index element", w);
      auto [u, ee] = component(e, w);
      cs[*s] = Component<M>{u, Codec<M>::map(field(ee, "map", w), src.value(u), tgt.value(*s), w)};
    }
    std::vector<Component<M>> out;
    for (std::size_t s = 0; s < ti.size(); ++s) {
      require(cs[s].has_value(), ErrorKind::malformed, "missing component", where + ".components." + ti.name(s));
      out.push_back(*cs[s]);
    }
    return ProMap<M>::general(src, tgt, std::move(out));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::malformed && e.witness().rfind(where, 0) == 0) throw;
    fail(e.kind(), e.what(), where + (e.witness().empty() ? "" : " " + e.witness()));
  }
}

}  // namespace detail

template <ModelCategory M>
Document<M> parse_document(const json& j, std::optional<std::size_t> depth_override = std::nullopt) {
  require(j.is_object(), ErrorKind::malformed, "a document is a JSON object", "document");
  require(instance_tag(j) == Codec<M>::tag, ErrorKind::malformed, "document instance does not match", "document.instance");
  Document<M> doc;
  if (j.contains("depth")) {
    require(j.at("depth").is_number_unsigned() && j.at("depth").get<std::size_t>() >= 2, ErrorKind::malformed,
            "depth must be an integer of at least 2", "document.depth");
    doc.depth = j.at("depth").get<std::size_t>();
  }
  if (depth_override) doc.depth = *depth_override;
  auto section = [&](const char* key) -> const json& {
    static const json empty = json::object();
    if (!j.contains(key)) return empty;
    require(j.at(key).is_object(), ErrorKind::malformed, "section must be an object", std::string("document.") + key);
    return j.at(key);
  };
  for (const auto& [k, v] : section("indices").items()) doc.indices.emplace(k, index_from_json(v, doc.depth, "indices." + k));
  for (const auto& [k, v] : section("base").items()) doc.base.emplace(k, Codec<M>::object(v, "base." + k));
  for (const auto& [k, v] : section("objects").items())
    doc.objects.emplace(k, detail::object_from_json<M>(v, doc.indices, "objects." + k));
  for (const auto& [k, v] : section("maps").items()) doc.maps.emplace(k, detail::map_from_json<M>(v, doc.objects, "maps." + k));
  for (const auto& [k, v] : section("witnesses").items()) {
    const std::string where = "witnesses." + k;
    typename Document<M>::WitnessBundle b;
    b.map = detail::text(detail::field(v, "map", where), where + ".map");
    const auto& f = doc.map(b.map);
    const auto& index = f.target().index();
    for (const auto& e : detail::field(v, "entries", where)) {
      const auto up = detail::text(detail::field(e, "upper", where), where);
      const auto lo = detail::text(detail::field(e, "lower", where), where);
      const std::string w = where + "." + up + ">" + lo;
      auto u = index.find(up), l = index.find(lo);
      require(u && l, ErrorKind::malformed, "witness names an unknown element", w);
      b.entries.emplace(std::make_pair(*u, *l),
                        Codec<M>::map(detail::field(e, "map", w), f.target().value(*u), f.source().value(*l), w));
    }
    doc.witnesses.emplace(k, std::move(b));
  }
  for (const auto& [k, v] : section("special").items()) {
    const std::string where = "special." + k;
    typename Document<M>::DeclaredSpecial d;
    d.map = detail::text(detail::field(v, "map", where), where + ".map");
    (void)doc.map(d.map);
    d.kind = special_kind_from(detail::text(detail::field(v, "kind", where), where + ".kind"), where + ".kind");
    for (const auto& [lk, lv] : detail::field(v, "levels", where).items())
      d.levels[lk] = class_from_json(lv, where + ".levels." + lk);
    doc.special.emplace(k, std::move(d));
  }
  return doc;
}

/// Serializes named objects and maps; indices are named after first use.
template <ModelCategory M>
class Writer {
 public:
  explicit Writer(std::size_t depth = default_depth) : depth_(depth) {}

  std::string index(const IndexPoset& p) {
    for (const auto& [name, q] : indices_)
      if (q == p) return name;
    const std::string name = p.is_omega() ? "omega" : "I" + std::to_string(indices_.size());
    indices_.emplace_back(name, p);
    doc_["indices"][name] = index_to_json(p);
    return name;
  }

  std::string base(const std::string& name, const typename M::Object& o) {
    doc_["base"][name] = Codec<M>::object(o);
    return name;
  }

  /// Names the object, reusing an existing name for an identical object.
  std::string object(const std::string& name, const ProObject<M>& x) {
    for (const auto& [n, y] : objects_)
      if (same_pro_object(x, y)) return n;
    json j;
    j["index"] = index(x.index());
    if (x.index().is_omega()) {
      const std::size_t d = x.index().depth();
      json vs = json::array(), st = json::array();
      for (std::size_t n = 0; n < d; ++n) vs.push_back(Codec<M>::object(x.value(n)));
      for (std::size_t n = 0; n + 1 < d; ++n) st.push_back(Codec<M>::map(x.structure(n + 1, n)));
      j["values"] = vs;
      j["structure"] = st;
    } else {
      json vs = json::object(), st = json::array();
      for (std::size_t s = 0; s < x.index().size(); ++s) vs[x.index().name(s)] = Codec<M>::object(x.value(s));
      for (auto [lo, hi] : x.index().covers())
        st.push_back({{"upper", x.index().name(hi)}, {"lower", x.index().name(lo)}, {"map", Codec<M>::map(x.structure(hi, lo))}});
      j["values"] = vs;
      j["structure"] = st;
    }
    const std::string unique = fresh(name, "objects");
    doc_["objects"][unique] = j;
    objects_.emplace_back(unique, x);
    return unique;
  }

  std::string map(const std::string& name, const ProMap<M>& f) {
    json j;
    j["source"] = object(name + ".source", f.source());
    j["target"] = object(name + ".target", f.target());
    const auto& ti = f.target().index();
    const std::size_t n = ti.is_omega() ? ti.depth() : ti.size();
    if (f.is_level()) {
      json cs = ti.is_omega() ? json::array() : json::object();
      for (std::size_t s = 0; s < n; ++s) {
        if (ti.is_omega()) cs.push_back(Codec<M>::map(f.level_component(s)));
        else cs[ti.name(s)] = Codec<M>::map(f.level_component(s));
      }
      j["level"] = cs;
    } else {
      json cs = ti.is_omega() ? json::array() : json::object();
      for (std::size_t s = 0; s < n; ++s) {
        const auto c = f.component(s);
        json e = {{"from", f.source().index().name(c.source_index)}, {"map", Codec<M>::map(c.map)}};
        if (ti.is_omega()) cs.push_back(e);
        else cs[ti.name(s)] = e;
      }
      j["components"] = cs;
    }
    const std::string unique = fresh(name, "maps");
    doc_["maps"][unique] = j;
    return unique;
  }

  std::string witnesses(const std::string& name, const std::string& map_name, const ProMap<M>& f, const Witnesses<M>& w) {
    json entries = json::array();
    const auto& index = f.target().index();
    for (const auto& [key, h] : w)
      entries.push_back({{"upper", index.name(key.first)}, {"lower", index.name(key.second)}, {"map", Codec<M>::map(h)}});
    doc_["witnesses"][name] = {{"map", map_name}, {"entries", entries}};
    return name;
  }

  /// The finished document with the instance tag and depth first.
  json document() const {
    json out;
    out["instance"] = Codec<M>::tag;
    out["depth"] = depth_;
    for (const char* key : {"indices", "base", "objects", "maps", "witnesses"})
      if (doc_.contains(key)) out[key] = doc_.at(key);
    return out;
  }

 private:
  std::string fresh(const std::string& name, const char* section) const {
    if (!doc_.contains(section) || !doc_.at(section).contains(name)) return name;
    for (std::size_t k = 2;; ++k) {
      auto cand = name + "#" + std::to_string(k);
      if (!doc_.at(section).contains(cand)) return cand;
    }
  }

  std::size_t depth_;
  json doc_ = json::object();
  std::vector<std::pair<std::string, IndexPoset>> indices_;
  std::vector<std::pair<std::string, ProObject<M>>> objects_;
};

}  // namespace promc::io
