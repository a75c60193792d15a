#pragma once

// Certificate files: an embedded document plus claims about its maps, and a
// verifier that re-checks each claim from base predicates and composition.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "promc/cocell.hpp"
#include "promc/pro.hpp"
#include "promc/serialize.hpp"
#include "promc/strict.hpp"

namespace promc::cert {

using io::json;

inline constexpr const char* schema = "promc-certificate/1";

template <ModelCategory M>
class Builder {
 public:
  Builder(std::string command, std::size_t depth) : command_(std::move(command)), writer_(depth) {}

  io::Writer<M>& writer() { return writer_; }

  std::string map(const std::string& name, const ProMap<M>& f) { return writer_.map(name, f); }
  std::string object(const std::string& name, const ProObject<M>& x) { return writer_.object(name, x); }

  void levelwise(const std::string& map, ClassName cls) {
    claims_.push_back({{"kind", "levelwise"}, {"map", map}, {"class", to_string(cls)}});
  }

  void special(const std::string& map, const SpecialReport& r) {
    json levels = json::object();
    for (const auto& v : r.levels) levels[v.name] = io::class_to_json(v.cls);
    json c = {{"kind", "special"}, {"map", map}, {"special", to_string(r.kind)}, {"levels", levels}};
    if (r.depth_qualified) c["depth"] = r.depth;
    claims_.push_back(c);
  }

  /// Composites are listed outermost first: ["g", "f"] is g o f.
  void equal(std::vector<std::string> lhs, std::vector<std::string> rhs) {
    claims_.push_back({{"kind", "equal"}, {"lhs", lhs}, {"rhs", rhs}});
  }

  void iso(const std::string& forward, const std::string& backward) {
    claims_.push_back({{"kind", "iso"}, {"forward", forward}, {"backward", backward}});
  }

  void hom_count(const std::string& source, const std::string& target, const HomResult<M>& h) {
    json c = {{"kind", "hom-count"}, {"source", source}, {"target", target}, {"count", h.count},
              {"dimension", h.is_dimension}};
    if (h.depth_qualified) c["depth"] = h.depth;
    claims_.push_back(c);
  }

  void tower(const std::string& map, const Tower<M>& t, SpecialKind kind) {
    json steps = json::array();
    for (std::size_t b = 0; b < t.length(); ++b) {
      const auto& a = t.attachments[b];
      steps.push_back({{"level", a.level_name},
                       {"stage", io::Codec<M>::object(t.value(b + 1))},
                       {"g", io::Codec<M>::map(a.g)},
                       {"g_target", io::Codec<M>::object(M::target(a.g))},
                       {"to_base", io::Codec<M>::map(a.to_base)},
                       {"connecting", io::Codec<M>::map(a.connecting)},
                       {"leg", io::Codec<M>::map(a.leg)}});
    }
    claims_.push_back({{"kind", "tower"}, {"map", map}, {"special", to_string(kind)}, {"steps", steps}});
  }

  void note(const std::string& key, json value) { notes_[key] = std::move(value); }

  json finish() const {
    json out;
    out["schema"] = schema;
    out["command"] = command_;
    if (!notes_.empty()) out["report"] = notes_;
    out["document"] = writer_.document();
    out["claims"] = claims_;
    return out;
  }

 private:
  std::string command_;
  io::Writer<M> writer_;
  json claims_ = json::array();
  json notes_ = json::object();
};

struct Verdict {
  bool ok = true;
  std::vector<std::string> lines;
  std::string failure;  // the first failing claim and its witness
};

namespace verify_detail {

/// The relative matching map at t, assembled here rather than taken from the
/// construction side.
template <ModelCategory M>
std::pair<typename M::Map, typename M::Object> recomputed_matching(const ProMap<M>& f, std::size_t t) {
  const auto& x = f.source();
  const auto& y = f.target();
  const auto& index = y.index();
  std::vector<std::size_t> below;
  for (std::size_t s = 0; s < index.size(); ++s)
    if (index.less(s, t)) below.push_back(s);
  Diagram<M> d;
  std::vector<std::size_t> xs(index.size()), ys(index.size());
  for (auto s : below) {
    xs[s] = d.add(x.value(s));
    ys[s] = d.add(y.value(s));
  }
  const auto yt = d.add(y.value(t));
  for (auto s : below) {
    d.connect(xs[s], ys[s], f.level_component(s));
    for (auto u : below)
      if (index.less(s, u)) {
        d.connect(xs[u], xs[s], x.structure(u, s));
        d.connect(ys[u], ys[s], y.structure(u, s));
      }
    d.connect(yt, ys[s], y.structure(t, s));
  }
  const auto cone = M::limit(d);
  std::vector<typename M::Map> legs(d.objects.size());
  for (auto s : below) {
    legs[xs[s]] = x.structure(t, s);
    legs[ys[s]] = M::compose(f.level_component(s), x.structure(t, s));
  }
  legs[yt] = f.level_component(t);
  return {M::limit_induced(d, cone, x.value(t), legs), cone.apex};
}

template <ModelCategory M>
bool pro_agree(const ProMap<M>& f, const ProMap<M>& g, std::string& witness) {
  const auto& x = f.source();
  const auto& ti = f.target().index();
  for (std::size_t s = 0; s < ti.size(); ++s) {
    const auto a = f.component(s), b = g.component(s);
    const auto u = x.index().is_finite() ? x.top() : std::max(a.source_index, b.source_index);
    if (!M::equal(M::compose(a.map, x.structure(u, a.source_index)), M::compose(b.map, x.structure(u, b.source_index)))) {
      witness = "components at " + ti.name(s) + " differ";
      return false;
    }
  }
  return true;
}

template <ModelCategory M>
std::size_t base_hom_size(const typename M::Object& a, const typename M::Object& b) {
  if constexpr (EnumerableHom<M>) {
    return M::enumerate_maps(a, b).size();
  } else {
    return M::hom_basis(a, b).size();
  }
}

}  // namespace verify_detail

template <ModelCategory M>
Verdict verify_claims(const json& cert) {
  using namespace verify_detail;
  Verdict v;
  const auto doc = io::parse_document<M>(io::detail::field(cert, "document", "certificate"));
  const json maps_json = cert.at("document").value("maps", json::object());
  auto claim_fail = [&](const std::string& what) {
    if (v.ok) v.failure = what;
    v.ok = false;
    v.lines.push_back("FAIL " + what);
  };
  auto chain = [&](const json& names, const std::string& where) -> std::optional<ProMap<M>> {
    require(names.is_array() && !names.empty(), ErrorKind::malformed, "a composite lists at least one map", where);
    std::optional<ProMap<M>> acc;
    std::string prev;
    for (std::size_t i = names.size(); i-- > 0;) {
      const auto name = io::detail::text(names[i], where);
      const auto& f = doc.map(name);
      if (acc && maps_json.at(prev).at("target") != maps_json.at(name).at("source")) {
        claim_fail(where + ": " + name + " does not compose after " + prev);
        return std::nullopt;
      }
      acc = acc ? compose(f, *acc) : f;
      prev = name;
    }
    return acc;
  };

  std::size_t k = 0;
  for (const auto& c : io::detail::field(cert, "claims", "certificate")) {
    const std::string where = "claims[" + std::to_string(k++) + "]";
    const auto kind = io::detail::text(io::detail::field(c, "kind", where), where + ".kind");
    const std::string tag = where + " " + kind;
    if (kind == "levelwise") {
      const auto name = io::detail::text(io::detail::field(c, "map", where), where);
      const auto cls = parse_class(io::detail::text(io::detail::field(c, "class", where), where));
      require(cls.has_value(), ErrorKind::malformed, "unknown class", where + ".class");
      const auto& f = doc.map(name);
      require(f.is_level(), ErrorKind::malformed, "levelwise claims need a level map", where);
      bool ok = true;
      for (std::size_t s = 0; s < f.target().index().size() && ok; ++s)
        if (!in_class(M::classify(f.level_component(s)), *cls)) {
          claim_fail(tag + ": " + name + " at level " + f.target().index().name(s) + " is not " + to_string(*cls));
          ok = false;
        }
      if (ok) v.lines.push_back("ok   " + tag + " " + name + " " + to_string(*cls));
    } else if (kind == "special") {
      const auto name = io::detail::text(io::detail::field(c, "map", where), where);
      const auto sk = io::special_kind_from(io::detail::text(io::detail::field(c, "special", where), where), where);
      const ClassName need = sk == SpecialKind::fibration ? ClassName::fibration : ClassName::acyclic_fibration;
      const auto& f = doc.map(name);
      require(f.is_level(), ErrorKind::malformed, "special claims need a level map", where);
      const auto& index = f.target().index();
      const auto& levels = io::detail::field(c, "levels", where);
      bool ok = true;
      for (std::size_t t = 0; t < index.size() && ok; ++t) {
        const auto lname = index.name(t);
        const auto [m, apex] = recomputed_matching(f, t);
        const auto got = M::classify(m);
        if (!levels.contains(lname)) {
          claim_fail(tag + ": " + name + " has no declared verdict at level " + lname);
          ok = false;
        } else if (!(io::class_from_json(levels.at(lname), where + ".levels." + lname) == got)) {
          claim_fail(tag + ": " + name + " declared matching class at level " + lname + " does not match the recomputed one");
          ok = false;
        } else if (!in_class(got, need)) {
          claim_fail(tag + ": " + name + " matching map at level " + lname + " is not " + to_string(need));
          ok = false;
        }
      }
      if (ok) v.lines.push_back("ok   " + tag + " " + name + " " + to_string(sk) + (c.contains("depth") ? " (to depth " + c.at("depth").dump() + ")" : ""));
    } else if (kind == "equal") {
      const auto lhs = chain(io::detail::field(c, "lhs", where), where + ".lhs");
      const auto rhs = chain(io::detail::field(c, "rhs", where), where + ".rhs");
      if (!lhs || !rhs) continue;
      std::string w;
      if (!same_pro_object(lhs->source(), rhs->source()) || !same_pro_object(lhs->target(), rhs->target())) {
        claim_fail(tag + ": the two composites have different ends");
      } else if (!pro_agree(*lhs, *rhs, w)) {
        claim_fail(tag + ": " + c.at("lhs").dump() + " vs " + c.at("rhs").dump() + ": " + w);
      } else {
        v.lines.push_back("ok   " + tag + " " + c.at("lhs").dump() + " = " + c.at("rhs").dump());
      }
    } else if (kind == "iso") {
      const auto fw = io::detail::text(io::detail::field(c, "forward", where), where);
      const auto bw = io::detail::text(io::detail::field(c, "backward", where), where);
      const auto& f = doc.map(fw);
      const auto& g = doc.map(bw);
      std::string w;
      if (!same_pro_object(f.target(), g.source()) || !same_pro_object(g.target(), f.source())) {
        claim_fail(tag + ": " + fw + " and " + bw + " are not opposed");
      } else if (!pro_agree(compose(g, f), ProMap<M>::identity(f.source()), w)) {
        claim_fail(tag + ": " + bw + " o " + fw + " is not the identity: " + w);
      } else if (!pro_agree(compose(f, g), ProMap<M>::identity(f.target()), w)) {
        claim_fail(tag + ": " + fw + " o " + bw + " is not the identity: " + w);
      } else {
        v.lines.push_back("ok   " + tag + " " + fw + " / " + bw);
      }
    } else if (kind == "hom-count") {
      const auto& x = doc.object(io::detail::text(io::detail::field(c, "source", where), where));
      const auto& y = doc.object(io::detail::text(io::detail::field(c, "target", where), where));
      const auto claimed = io::detail::field(c, "count", where).template get<std::size_t>();
      if (x.index().is_omega() || y.index().is_omega()) {
        v.lines.push_back("ok   " + tag + " " + std::to_string(claimed) + " (depth-qualified, not re-enumerated)");
        continue;
      }
      const auto n = base_hom_size<M>(x.value(x.top()), y.value(y.top()));
      if (n != claimed) claim_fail(tag + ": claimed " + std::to_string(claimed) + ", recomputed " + std::to_string(n));
      else v.lines.push_back("ok   " + tag + " " + std::to_string(n));
    } else if (kind == "tower") {
      const auto name = io::detail::text(io::detail::field(c, "map", where), where);
      const auto sk = io::special_kind_from(io::detail::text(io::detail::field(c, "special", where), where), where);
      const ClassName need = sk == SpecialKind::fibration ? ClassName::fibration : ClassName::acyclic_fibration;
      const auto& f = doc.map(name);
      const auto& index = f.target().index();
      auto stage = f.target().value(f.target().top());
      bool ok = true;
      std::size_t b = 0;
      for (const auto& step : io::detail::field(c, "steps", where)) {
        const std::string sw = where + ".steps[" + std::to_string(b++) + "]";
        const auto lvl = index.find(io::detail::text(io::detail::field(step, "level", sw), sw));
        require(lvl.has_value(), ErrorKind::malformed, "unknown level", sw + ".level");
        const auto [m, apex] = recomputed_matching(f, *lvl);
        const auto gt = io::Codec<M>::object(io::detail::field(step, "g_target", sw), sw + ".g_target");
        const auto next = io::Codec<M>::object(io::detail::field(step, "stage", sw), sw + ".stage");
        const auto xs = f.source().value(*lvl);
        const auto g = io::Codec<M>::map(io::detail::field(step, "g", sw), xs, gt, sw + ".g");
        const auto to_base = io::Codec<M>::map(io::detail::field(step, "to_base", sw), stage, gt, sw + ".to_base");
        const auto conn = io::Codec<M>::map(io::detail::field(step, "connecting", sw), next, stage, sw + ".connecting");
        const auto leg = io::Codec<M>::map(io::detail::field(step, "leg", sw), next, xs, sw + ".leg");
        const std::string at = " at step " + std::to_string(b - 1) + " (level " + index.name(*lvl) + ")";
        if (!M::same_object(gt, apex) || !M::equal(g, m)) {
          claim_fail(tag + ": attached map is not the matching map" + at);
          ok = false;
        } else if (!in_class(M::classify(g), need)) {
          claim_fail(tag + ": attached map is not " + std::string(to_string(need)) + at);
          ok = false;
        } else if (!M::equal(M::compose(to_base, conn), M::compose(g, leg))) {
          claim_fail(tag + ": square does not commute" + at);
          ok = false;
        } else {
          Diagram<M> d;
          d.add(stage);
          d.add(xs);
          d.add(gt);
          d.connect(0, 2, to_base);
          d.connect(1, 2, g);
          const auto cone = M::limit(d);
          const auto cmp = M::limit_induced(d, cone, next, {conn, leg, M::compose(g, leg)});
          if (!M::is_iso(cmp)) {
            claim_fail(tag + ": stage is not the base change" + at);
            ok = false;
          }
        }
        if (!ok) break;
        stage = next;
      }
      if (ok) v.lines.push_back("ok   " + tag + " " + name + " " + std::to_string(b) + " attachments");
    } else {
      fail(ErrorKind::malformed, "unknown claim kind '" + kind + "'", where + ".kind");
    }
  }
  return v;
}

/// Checks the schema tag and dispatches on the embedded document's instance.
inline Verdict verify(const json& cert) {
  require(cert.is_object(), ErrorKind::malformed, "a certificate is a JSON object", "certificate");
  const auto tag = io::detail::text(io::detail::field(cert, "schema", "certificate"), "certificate.schema");
  require(tag == schema, ErrorKind::malformed, "unsupported certificate schema '" + tag + "'", "certificate.schema");
  const auto inst = io::instance_tag(io::detail::field(cert, "document", "certificate"));
  if (inst == io::Codec<SetBij>::tag) return verify_claims<SetBij>(cert);
  return verify_claims<ChainF2>(cert);
}

}  // namespace promc::cert
