#pragma once

// Command-line front end. Exit status: 0 success or verified, 1 property
// violation or failed verification, 2 parse or validation error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "promc/axioms.hpp"
#include "promc/certificate.hpp"
#include "promc/cocell.hpp"
#include "promc/pro.hpp"
#include "promc/serialize.hpp"
#include "promc/strict.hpp"

namespace promc::cli {

using io::json;

enum Exit : int { ok = 0, violation = 1, invalid = 2 };

struct Options {
  std::string file;
  std::optional<std::size_t> depth;
  std::string certificate;
  std::string map, source = "X", target = "Y", base = "A", object = "Y";
  std::string i, p, top, bottom, f, g, h, witnesses;
  std::string mode = "L1", side = "left", kind;
  std::optional<std::string> level;
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;
  std::string instance = "all";
};

/// A diagnostic that carries its own exit status.
struct Stop {
  int code;
  std::string message;
};

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Stop{invalid, "error: cannot read file '" + path + "'"};
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Stop{invalid, "error: '" + path + "' is not valid JSON: " + e.what()};
  }
}

inline std::uint64_t seed_of(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("PROMC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Stop{invalid, "error: PROMC_SEED must be a non-negative integer"};
    }
  }
  return 0;
}

template <ModelCategory M>
class Session {
 public:
  Session(const Options& o, std::ostream& out) : opt_(o), out_(out), doc_(io::parse_document<M>(read_json(o.file), o.depth)) {}

  const ProMap<M>& named_map(const std::string& name, const char* flag) const {
    if (!name.empty()) return doc_.map(name);
    if (doc_.maps.size() == 1) return doc_.maps.begin()->second;
    throw Stop{invalid, std::string("error: the document has several maps; choose one with ") + flag};
  }

  std::string map_name(const std::string& name) const {
    if (!name.empty()) return name;
    return doc_.maps.size() == 1 ? doc_.maps.begin()->first : "f";
  }

  Witnesses<M> witnesses_for(const std::string& map_name) const {
    if (!opt_.witnesses.empty()) {
      auto it = doc_.witnesses.find(opt_.witnesses);
      if (it == doc_.witnesses.end()) throw Stop{invalid, "error: unknown witness bundle '" + opt_.witnesses + "'"};
      return it->second.entries;
    }
    if (auto w = doc_.witnesses_for(map_name)) return *w;
    throw Stop{invalid, "error: no witness bundle for '" + map_name + "'; add one under \"witnesses\""};
  }

  cert::Builder<M> builder(const std::string& command) const { return cert::Builder<M>(command, doc_.depth); }

  void emit(const cert::Builder<M>& b) const {
    if (opt_.certificate.empty()) return;
    std::ofstream f(opt_.certificate);
    if (!f) throw Stop{invalid, "error: cannot write certificate '" + opt_.certificate + "'"};
    f << b.finish().dump(2) << '\n';
    out_ << "certificate: " << opt_.certificate << '\n';
  }

  int verdict(const Check& c, const std::string& what) const {
    if (c.ok) {
      out_ << what << ": verified" << (c.depth_qualified ? " (to depth " + std::to_string(doc_.depth) + ")" : "") << '\n';
      return ok;
    }
    out_ << what << ": FAILED: " << c.failure << '\n';
    return violation;
  }

  void special_lines(const SpecialReport& r) const {
    for (const auto& v : r.levels)
      out_ << "  level " << v.name << ": matching map " << describe_class(v.cls) << '\n';
  }

  static std::string describe_class(const MapClass& c) {
    std::string s;
    for (auto [flag, name] : {std::pair{c.we, "we"}, std::pair{c.cof, "cof"}, std::pair{c.fib, "fib"}})
      if (flag) s += s.empty() ? name : std::string("+") + name;
    return s.empty() ? "none" : s;
  }

  int hom() {
    const auto& x = doc_.object(opt_.source);
    const auto& y = doc_.object(opt_.target);
    const auto r = hom_pro(x, y);
    out_ << "hom(" << opt_.source << ", " << opt_.target << "): " << r.label() << '\n';
    auto b = builder("hom");
    b.hom_count(b.object(opt_.source, x), b.object(opt_.target, y), r);
    emit(b);
    return ok;
  }

  int levelize_cmd() {
    const auto name = map_name(opt_.map);
    const auto& f = named_map(opt_.map, "--map");
    const auto lv = levelize(f);
    const auto& idx = lv.map.target().index();
    out_ << "levelized " << name << " over " << (idx.is_omega() ? "omega (depth " + std::to_string(idx.depth()) + ")" : describe_index(idx))
         << '\n';
    if (!lv.reindexing.empty()) {
      out_ << "  reindexing:";
      for (auto r : lv.reindexing) out_ << ' ' << r;
      out_ << '\n';
    }
    auto b = builder("levelize");
    const auto fn = b.map(name, f);
    const auto ln = b.map(name + ".level", lv.map);
    const auto sf = b.map("source_iso", lv.source_iso.forward), sb = b.map("source_iso.inverse", lv.source_iso.backward);
    const auto tf = b.map("target_iso", lv.target_iso.forward), tb = b.map("target_iso.inverse", lv.target_iso.backward);
    b.iso(sf, sb);
    b.iso(tf, tb);
    b.equal({ln, sf}, {tf, fn});
    emit(b);
    const auto c1 = verify_iso(lv.source_iso), c2 = verify_iso(lv.target_iso);
    return verdict(!c1.ok ? c1 : c2, "iso certificates");
  }

  int matching() {
    const auto& f = named_map(opt_.map, "--map");
    strict_detail::require_finite_level(f, "matching");
    const auto& index = f.target().index();
    for (std::size_t t = 0; t < index.size(); ++t) {
      if (opt_.level && index.name(t) != *opt_.level) continue;
      const auto mm = matching_map(f, t);
      out_ << "level " << index.name(t) << ": M = " << M::describe(mm.matching.object()) << ", matching map "
           << describe_class(M::classify(mm.map)) << '\n';
    }
    if (opt_.level && !index.find(*opt_.level)) throw Stop{invalid, "error: unknown level '" + *opt_.level + "'"};
    return ok;
  }

  static SpecialKind kind_of(const std::string& k) {
    if (k == "fib") return SpecialKind::fibration;
    if (k == "acyclic-fib") return SpecialKind::acyclic_fibration;
    throw Stop{invalid, "error: --kind must be fib or acyclic-fib"};
  }

  int detect() {
    const auto name = map_name(opt_.map);
    const auto& f = named_map(opt_.map, "--map");
    const auto r = detect_special(f, kind_of(opt_.kind.empty() ? "fib" : opt_.kind));
    special_lines(r);
    const std::string dq = r.depth_qualified ? " (to depth " + std::to_string(r.depth) + ")" : "";
    if (!r.ok()) {
      out_ << name << ": not a special " << to_string(r.kind) << dq << "; fails at level " << r.levels[*r.failing].name << '\n';
      return violation;
    }
    out_ << name << ": special " << to_string(r.kind) << dq << '\n';
    auto b = builder("detect-special");
    b.special(b.map(name, f), r);
    emit(b);
    return ok;
  }

  int factor() {
    if (opt_.mode != "L1" && opt_.mode != "L2") throw Stop{invalid, "error: --mode must be L1 or L2"};
    const auto mode = opt_.mode == "L1" ? StrictMode::L1 : StrictMode::L2;
    const auto name = map_name(opt_.map);
    const auto& f = named_map(opt_.map, "--map");
    const auto sf = factor_strict(f, mode);
    const auto kind = mode == StrictMode::L1 ? SpecialKind::acyclic_fibration : SpecialKind::fibration;
    const auto report = detect_special(sf.right, kind);
    out_ << "factor " << opt_.mode << " of " << name << (sf.depth_qualified ? " (to depth " + std::to_string(sf.depth) + ")" : "") << '\n';
    out_ << "  middle: " << describe_object(sf.middle) << '\n';
    out_ << "  right factor, special " << to_string(kind) << ":\n";
    special_lines(report);
    auto b = builder("factor");
    const auto in = b.map(name, sf.input);
    const auto l = b.map(name + ".left", sf.left);
    const auto r = b.map(name + ".right", sf.right);
    b.levelwise(l, mode == StrictMode::L1 ? ClassName::cofibration : ClassName::acyclic_cofibration);
    b.special(r, report);
    b.equal({r, l}, {in});
    emit(b);
    return verdict(check_strict_factorization(sf), "factorization");
  }

  int lift() {
    ProSquare<M> sq{doc_.map(opt_.i), doc_.map(opt_.p), doc_.map(opt_.top), doc_.map(opt_.bottom)};
    const auto l = lift_strict(sq);
    out_ << "lift (" << to_string(l.pairing) << ")\n";
    const auto kind = l.pairing == LiftPairing::cof_vs_special_acyclic_fib ? SpecialKind::acyclic_fibration : SpecialKind::fibration;
    auto b = builder("lift");
    const auto in = b.map(opt_.i, sq.i), pn = b.map(opt_.p, sq.p);
    const auto tn = b.map(opt_.top, sq.top), bn = b.map(opt_.bottom, sq.bottom);
    const auto hn = b.map("lift", l.lift);
    b.levelwise(in, kind == SpecialKind::fibration ? ClassName::acyclic_cofibration : ClassName::cofibration);
    b.special(pn, detect_special(sq.p, kind));
    b.equal({hn, in}, {tn});
    b.equal({pn, hn}, {bn});
    emit(b);
    return verdict(check_lift(sq, l.lift), "lift");
  }

  void iso_claim(cert::Builder<M>& b, const std::string& name, const IsoCertificate<M>& c) {
    b.iso(b.map(name, c.forward), b.map(name + ".inverse", c.backward));
  }

  int pro_iso() {
    const auto name = map_name(opt_.map);
    const auto& f = named_map(opt_.map, "--map");
    const auto r = pro_factor_iso(f, witnesses_for(name));
    out_ << "pro-factor-iso of " << name << (r.on_star ? " (over the star poset)" : "") << '\n';
    out_ << "  middle: " << describe_object(r.middle) << '\n';
    auto b = builder("pro-factor-iso");
    const auto in = b.map(name, r.input);
    const auto l = b.map(name + ".left", r.left), rt = b.map(name + ".right", r.right);
    b.levelwise(l, ClassName::cofibration);
    b.levelwise(rt, ClassName::fibration);
    iso_claim(b, "left_iso", r.left_iso);
    iso_claim(b, "right_iso", r.right_iso);
    b.equal({rt, l}, {in});
    if (r.on_star) {
      iso_claim(b, "source_reindex", r.source_reindex);
      iso_claim(b, "target_reindex", r.target_reindex);
    }
    emit(b);
    return verdict(check_pro_iso_factorization(r), "pro-iso factorization");
  }

  int level_we(const std::string& command, const LevelWeResult<M>& r) {
    for (const auto& v : r.levels) out_ << "  level " << v.name << ": " << describe_class(v.cls) << '\n';
    auto b = builder(command);
    const auto n = b.map("result", r.map);
    b.levelwise(n, ClassName::weak_equivalence);
    for (std::size_t k = 0; k < r.isos.size(); ++k) iso_claim(b, "iso" + std::to_string(k), r.isos[k]);
    emit(b);
    return verdict(check_levelwise_we(r), command);
  }

  int zigzag() {
    out_ << "zigzag " << opt_.f << " / " << opt_.h << " / " << opt_.g << '\n';
    return level_we("zigzag-we", compose_zigzag_we(doc_.map(opt_.f), doc_.map(opt_.h), doc_.map(opt_.g), witnesses_for(opt_.h)));
  }

  int two_of_three_cmd() {
    if (opt_.side != "left" && opt_.side != "right") throw Stop{invalid, "error: --side must be left or right"};
    const auto side = opt_.side == "left" ? CancelSide::left : CancelSide::right;
    const auto& iso_name = side == CancelSide::left ? opt_.bottom : opt_.top;
    out_ << "two-of-three (" << opt_.side << ")\n";
    return level_we("two-of-three", two_of_three(side, doc_.map(opt_.top), doc_.map(opt_.f),
                                                 doc_.map(opt_.g), doc_.map(opt_.bottom), witnesses_for(iso_name)));
  }

  int proper() {
    out_ << "proper pullback of " << opt_.f << " along " << opt_.p << '\n';
    return level_we("proper-pullback", proper_pullback(doc_.map(opt_.p), doc_.map(opt_.f), doc_.map(opt_.g), witnesses_for(opt_.g)));
  }

  int cocell() {
    const auto name = map_name(opt_.map);
    const auto& f = named_map(opt_.map, "--map");
    const auto kind = kind_of(opt_.kind.empty() ? "fib" : opt_.kind);
    const auto report = detect_special(f, kind);
    const auto t = build_cocell_tower(f, kind);
    out_ << "cocell tower of " << name << ": " << t.length() << " attachments\n";
    for (std::size_t k = 0; k < t.length(); ++k)
      out_ << "  stage " << k + 1 << ": level " << t.attachments[k].level_name << ", " << M::describe(t.value(k + 1)) << '\n';
    const auto lim = tower_limit(t);
    auto b = builder("cocell");
    const auto fn = b.map(name, f);
    b.special(fn, report);
    b.tower(fn, t, kind);
    if (lim.iso) {
      const auto fw = b.map("limit_iso", lim.iso->forward), bw = b.map("limit_iso.inverse", lim.iso->backward);
      b.iso(fw, bw);
      b.equal({b.map("projection", lim.projection), fw}, {fn});
    }
    emit(b);
    if (auto c = replay_tower(t); !c.ok) return verdict(c, "tower replay");
    if (!lim.iso_check.ok) return verdict(lim.iso_check, "limit iso");
    return verdict(lim.projection_check, "cocell round trip");
  }

  int tower_limit_cmd() {
    const auto& y = doc_.object(opt_.object);
    const auto l = lim_functor(y);
    out_ << "lim " << opt_.object << " = " << M::describe(l.value);
    if (l.depth_qualified)
      out_ << " (verified to depth " << l.depth << (l.stabilized ? ", stabilized at depth " + std::to_string(l.stable_depth) : ", not stabilized")
           << ")";
    out_ << '\n';
    auto b = builder("tower-limit");
    b.object(opt_.object, y);
    b.writer().base("limit", l.value);
    emit(b);
    return l.stabilized ? ok : violation;
  }

  int adjunction() {
    const auto& x = doc_.base_object(opt_.base);
    const auto& y = doc_.object(opt_.object);
    const auto w = adjunction_check(x, y);
    const std::string unit = w.is_dimension ? " dimensions" : " maps";
    out_ << "hom(c" << opt_.base << ", " << opt_.object << "): " << w.pro_side.label() << '\n';
    out_ << "Hom(" << opt_.base << ", lim " << opt_.object << "): " << w.base_count << unit << '\n';
    auto b = builder("adjunction");
    b.writer().base(opt_.base, x);
    b.writer().base("limit", w.limit.value);
    b.hom_count(b.object("c" + opt_.base, ProObject<M>::constant(x)), b.object(opt_.object, y), w.pro_side);
    emit(b);
    return verdict(w.verdict, "adjunction bijection");
  }

  /// Declared special certificates and witness bundles in the document.
  int declared() {
    int status = ok;
    for (const auto& [k, d] : doc_.special) {
      const auto& f = doc_.map(d.map);
      const auto r = detect_special(f, d.kind);
      for (const auto& v : r.levels) {
        auto it = d.levels.find(v.name);
        if (it == d.levels.end()) {
          out_ << "FAIL declared special '" << k << "' on " << d.map << ": no verdict for level " << v.name << '\n';
          status = violation;
        } else if (!(it->second == v.cls)) {
          out_ << "FAIL declared special '" << k << "' on " << d.map << " is falsified at level " << v.name << ": declared "
               << describe_class(it->second) << ", recomputed " << describe_class(v.cls) << '\n';
          status = violation;
        }
      }
      if (!r.ok()) {
        out_ << "FAIL declared special '" << k << "' on " << d.map << ": matching map at level " << r.levels[*r.failing].name
             << " is not " << to_string(r.kind == SpecialKind::fibration ? ClassName::fibration : ClassName::acyclic_fibration)
             << '\n';
        status = violation;
      } else if (status == ok) {
        out_ << "ok   declared special '" << k << "' on " << d.map << '\n';
      }
    }
    for (const auto& [k, wb] : doc_.witnesses) {
      try {
        check_witnesses(doc_.map(wb.map), wb.entries);
        out_ << "ok   witnesses '" << k << "' for " << wb.map << '\n';
      } catch (const Error& e) {
        out_ << "FAIL witnesses '" << k << "' for " << wb.map << ": " << e.what() << (e.witness().empty() ? "" : " @ " + e.witness()) << '\n';
        status = violation;
      }
    }
    return status;
  }

  static std::string describe_index(const IndexPoset& p) {
    std::string s = "{";
    for (std::size_t t = 0; t < p.size(); ++t) s += (t ? "," : "") + p.name(t);
    s += "}";
    for (auto [lo, hi] : p.covers()) s += " " + p.name(lo) + "<" + p.name(hi);
    return s;
  }

  static std::string describe_object(const ProObject<M>& x) {
    std::string s;
    const auto& idx = x.index();
    for (std::size_t t = 0; t < idx.size(); ++t) s += (t ? ", " : "") + idx.name(t) + ": " + M::describe(x.value(t));
    return s;
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  io::Document<M> doc_;
};

template <ModelCategory M>
int run_suites(std::string_view tag, const Options& o, std::uint64_t seed, std::ostream& out) {
  const auto results = axioms::run<M>(o.trials, seed, gen::Params{}, axioms::suites<M>());
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  int status = ok;
  for (const auto& r : results) {
    auto& [pass, total] = tally[r.suite];
    ++total;
    if (r.ok) {
      ++pass;
    } else {
      out << "FAIL " << tag << ' ' << r.suite << " trial " << r.trial << ": " << r.failure << '\n';
      status = violation;
    }
  }
  for (const auto& [suite, pt] : tally) out << tag << ' ' << suite << ": " << pt.first << '/' << pt.second << '\n';
  return status;
}

template <ModelCategory M>
int dispatch(const std::string& cmd, const Options& o, std::ostream& out) {
  Session<M> s(o, out);
  if (cmd == "hom") return s.hom();
  if (cmd == "levelize") return s.levelize_cmd();
  if (cmd == "matching") return s.matching();
  if (cmd == "detect-special") return s.detect();
  if (cmd == "factor") return s.factor();
  if (cmd == "lift") return s.lift();
  if (cmd == "pro-factor-iso") return s.pro_iso();
  if (cmd == "zigzag-we") return s.zigzag();
  if (cmd == "two-of-three") return s.two_of_three_cmd();
  if (cmd == "proper-pullback") return s.proper();
  if (cmd == "cocell") return s.cocell();
  if (cmd == "tower-limit") return s.tower_limit_cmd();
  if (cmd == "adjunction") return s.adjunction();
  if (cmd == "check-axioms") {
    int st = s.declared();
    if (st != ok) return st;  // a falsified declaration is reported before any trial runs
    return run_suites<M>(M::tag, o, seed_of(o), out);
  }
  throw Stop{invalid, "error: unknown subcommand '" + cmd + "'"};
}

inline int error_exit(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::precondition:
    case ErrorKind::depth_exhausted: return violation;
    default: return invalid;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite pro-categories over set and chain-complex instances", "promc"};
  app.require_subcommand(1);
  Options o;

  auto doc = [&](CLI::App* c) { c->add_option("document", o.file, "instance document (JSON)")->required(); };
  auto depth = [&](CLI::App* c) { c->add_option("--depth", o.depth, "omega truncation depth (default 16)"); };
  auto certificate = [&](CLI::App* c) { c->add_option("-o,--certificate", o.certificate, "write a certificate file"); };
  auto common = [&](CLI::App* c) {
    doc(c);
    depth(c);
    certificate(c);
  };

  auto* hom = app.add_subcommand("hom", "count pro-hom classes");
  common(hom);
  hom->add_option("--source", o.source, "source pro-object (default X)");
  hom->add_option("--target", o.target, "target pro-object (default Y)");

  auto* lev = app.add_subcommand("levelize", "level presentation with iso certificates");
  common(lev);
  lev->add_option("--map", o.map);

  auto* mat = app.add_subcommand("matching", "relative matching objects and maps");
  common(mat);
  mat->add_option("--map", o.map);
  mat->add_option("--level", o.level);

  auto* det = app.add_subcommand("detect-special", "special (acyclic) fibration test");
  common(det);
  det->add_option("--map", o.map);
  det->add_option("--kind", o.kind, "fib or acyclic-fib");

  auto* fac = app.add_subcommand("factor", "strict factorization");
  common(fac);
  fac->add_option("--map", o.map);
  fac->add_option("--mode", o.mode, "L1 (cof, special acyclic fib) or L2 (acyclic cof, special fib)");

  auto* lif = app.add_subcommand("lift", "lift in a commutative square");
  common(lif);
  lif->add_option("--i", o.i)->required();
  lif->add_option("--p", o.p)->required();
  lif->add_option("--top", o.top)->required();
  lif->add_option("--bottom", o.bottom)->required();

  auto* pfi = app.add_subcommand("pro-factor-iso", "factor a pro-isomorphism");
  common(pfi);
  pfi->add_option("--map", o.map);
  pfi->add_option("--witnesses", o.witnesses);

  auto* zz = app.add_subcommand("zigzag-we", "levelwise we from a zigzag");
  common(zz);
  zz->add_option("--f", o.f)->required();
  zz->add_option("--pro-iso", o.h, "the pro-isomorphism in the middle")->required();
  zz->add_option("--g", o.g)->required();
  zz->add_option("--witnesses", o.witnesses);

  auto* tt = app.add_subcommand("two-of-three", "cancel a pro-isomorphism in a square");
  common(tt);
  tt->add_option("--side", o.side, "left or right");
  tt->add_option("--top", o.top)->required();
  tt->add_option("--left", o.f)->required();
  tt->add_option("--right", o.g)->required();
  tt->add_option("--bottom", o.bottom)->required();
  tt->add_option("--witnesses", o.witnesses);

  auto* pp = app.add_subcommand("proper-pullback", "pull back a we along a fibration");
  common(pp);
  pp->add_option("--p", o.p)->required();
  pp->add_option("--f", o.f)->required();
  pp->add_option("--g", o.g)->required();
  pp->add_option("--witnesses", o.witnesses);

  auto* coc = app.add_subcommand("cocell", "cocell tower of a special fibration");
  common(coc);
  coc->add_option("--map", o.map);
  coc->add_option("--kind", o.kind, "fib or acyclic-fib");

  auto* tl = app.add_subcommand("tower-limit", "limit of a pro-object");
  common(tl);
  tl->add_option("--object", o.object, "pro-object (default Y)");

  auto* adj = app.add_subcommand("adjunction", "check hom(cA, Y) = Hom(A, lim Y)");
  common(adj);
  adj->add_option("--base", o.base, "base object (default A)");
  adj->add_option("--object", o.object, "pro-object (default Y)");

  auto* ax = app.add_subcommand("check-axioms", "randomized property suites");
  ax->add_option("document", o.file, "document whose declarations are checked first");
  depth(ax);
  ax->add_option("--trials", o.trials, "trials per suite");
  ax->add_option("--seed", o.seed, "seed (default PROMC_SEED or 0)");
  ax->add_option("--instance", o.instance, "set-bij, chain-f2 or all")->check(CLI::IsMember({"set-bij", "chain-f2", "all"}));

  auto* ver = app.add_subcommand("verify", "re-check a certificate file");
  ver->add_option("certificate", o.file, "certificate file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return invalid;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "verify") {
      const auto v = cert::verify(read_json(o.file));
      for (const auto& line : v.lines) out << line << '\n';
      out << (v.ok ? "certificate verified" : "certificate REJECTED: " + v.failure) << '\n';
      return v.ok ? ok : violation;
    }
    if (cmd == "check-axioms" && o.file.empty()) {
      const auto seed = seed_of(o);
      out << "check-axioms: " << o.trials << " trials per suite, seed " << seed << '\n';
      int st = ok;
      if (o.instance != "chain-f2") st = std::max(st, run_suites<SetBij>(SetBij::tag, o, seed, out));
      if (o.instance != "set-bij") st = std::max(st, run_suites<ChainF2>(ChainF2::tag, o, seed, out));
      return st;
    }
    const auto tag = io::instance_tag(read_json(o.file));
    if (tag == io::Codec<SetBij>::tag) return dispatch<SetBij>(cmd, o, out);
    return dispatch<ChainF2>(cmd, o, out);
  } catch (const Stop& s) {
    err << s.message << '\n';
    return s.code;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << (e.witness().empty() ? "" : " @ " + e.witness()) << '\n';
    return error_exit(e);
  } catch (const json::exception& e) {
    err << "error (malformed): " << e.what() << '\n';
    return invalid;
  }
}

}  // namespace promc::cli
