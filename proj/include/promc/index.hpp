#pragma once

// Index categories: finite directed posets and the omega tower.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "promc/error.hpp"

namespace promc {

inline constexpr std::size_t default_depth = 16;

struct IndexValidation;

enum class Regime { finite, omega };

class IndexPoset {
 public:
  IndexPoset() : IndexPoset(one_point()) {}

  static IndexPoset one_point(std::string name = "*") {
    IndexPoset p(Regime::finite);
    p.names_ = {std::move(name)};
    p.leq_ = {{true}};
    return p;
  }

  /// 0 < 1 < ... < n-1, named by their numerals.
  static IndexPoset chain(std::size_t n) {
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> covers;
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back(std::to_string(i));
      if (i) covers.emplace_back(std::to_string(i - 1), std::to_string(i));
    }
    return from_covers(names, covers);
  }

  static IndexPoset omega(std::size_t depth = default_depth) {
    require(depth >= 1, ErrorKind::malformed, "omega truncation depth must be positive");
    IndexPoset p(Regime::omega);
    p.depth_ = depth;
    return p;
  }

  /// Reflexive-transitive closure of the cover pairs (lower, upper), then full validation.
  static IndexPoset from_covers(const std::vector<std::string>& names,
                                const std::vector<std::pair<std::string, std::string>>& covers);

  Regime regime() const { return regime_; }
  bool is_finite() const { return regime_ == Regime::finite; }
  bool is_omega() const { return regime_ == Regime::omega; }
  std::size_t depth() const { return depth_; }

  /// Number of elements; for omega the truncation depth.
  std::size_t size() const { return is_finite() ? names_.size() : depth_; }

  std::string name(std::size_t i) const { return is_finite() ? names_.at(i) : std::to_string(i); }

  std::optional<std::size_t> find(const std::string& n) const {
    if (is_omega()) {
      if (n.empty() || !std::all_of(n.begin(), n.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
      return std::stoul(n);
    }
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == n) return i;
    return std::nullopt;
  }

  std::size_t index_of(const std::string& n) const {
    auto i = find(n);
    if (!i) fail(ErrorKind::malformed, "unknown index element", n);
    return *i;
  }

  bool leq(std::size_t a, std::size_t b) const { return is_finite() ? leq_.at(a).at(b) : a <= b; }
  bool less(std::size_t a, std::size_t b) const { return a != b && leq(a, b); }

  /// Strict predecessors {s : s < t}, ascending by position.
  std::vector<std::size_t> predecessors(std::size_t t) const {
    std::vector<std::size_t> out;
    const std::size_t n = is_finite() ? names_.size() : t;
    for (std::size_t s = 0; s < n; ++s)
      if (less(s, t)) out.push_back(s);
    return out;
  }

  /// Elements s < t with nothing strictly between.
  std::vector<std::size_t> lower_covers(std::size_t t) const {
    if (is_omega()) return t == 0 ? std::vector<std::size_t>{} : std::vector<std::size_t>{t - 1};
    std::vector<std::size_t> out;
    for (auto s : predecessors(t)) {
      bool direct = true;
      for (std::size_t u = 0; u < names_.size() && direct; ++u)
        if (less(s, u) && less(u, t)) direct = false;
      if (direct) out.push_back(s);
    }
    return out;
  }

  /// Cover pairs (lower, upper) in position order.
  std::vector<std::pair<std::size_t, std::size_t>> covers() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t t = 0; t < size(); ++t)
      for (auto s : lower_covers(t)) out.emplace_back(s, t);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t maximum() const {
    if (is_omega()) fail(ErrorKind::unsupported_regime, "the omega tower has no maximum");
    return max_;
  }

  /// The finite chain 0 < ... < d-1 standing in for the first d levels of omega.
  IndexPoset truncated(std::optional<std::size_t> depth = std::nullopt) const {
    if (is_finite()) return *this;
    return chain(depth.value_or(depth_));
  }

  IndexPoset with_depth(std::size_t d) const {
    if (is_finite()) return *this;
    return omega(d);
  }

  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const IndexPoset& a, const IndexPoset& b) {
    if (a.regime_ != b.regime_) return false;
    if (a.is_omega()) return true;
    return a.names_ == b.names_ && a.leq_ == b.leq_;
  }

 private:
  explicit IndexPoset(Regime r) : regime_(r) {}
  friend IndexValidation validate_index(const std::vector<std::string>&,
                                        const std::vector<std::pair<std::string, std::string>>&, bool);

  Regime regime_ = Regime::finite;
  std::size_t depth_ = default_depth;
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> leq_;
  std::size_t max_ = 0;
};

enum class IndexAxiom { non_empty, distinct_names, known_elements, reflexive, antisymmetric, transitive, directed };

inline const char* to_string(IndexAxiom a) {
  switch (a) {
    case IndexAxiom::non_empty: return "non-empty";
    case IndexAxiom::distinct_names: return "distinct-names";
    case IndexAxiom::known_elements: return "known-elements";
    case IndexAxiom::reflexive: return "reflexive";
    case IndexAxiom::antisymmetric: return "antisymmetric";
    case IndexAxiom::transitive: return "transitive";
    case IndexAxiom::directed: return "directed";
  }
  return "?";
}

struct IndexViolation {
  IndexAxiom axiom;
  std::string first;
  std::string second;

  std::string describe() const {
    std::string s = std::string(to_string(axiom)) + " violated";
    if (!first.empty()) s += " at (" + first + (second.empty() ? "" : "," + second) + ")";
    return s;
  }
};

struct IndexValidation {
  std::optional<IndexPoset> poset;
  std::optional<IndexViolation> violation;

  bool ok() const { return poset.has_value(); }
};

/// Checks a raw relation of pairs (a, b) meaning a <= b. With close = true the
/// pairs are closed reflexively and transitively first, so only antisymmetry and
/// directedness can fail. Finite sets are automatically cofinite.
inline IndexValidation validate_index(const std::vector<std::string>& names,
                                      const std::vector<std::pair<std::string, std::string>>& pairs,
                                      bool close) {
  auto bad = [](IndexAxiom a, std::string x = {}, std::string y = {}) {
    return IndexValidation{std::nullopt, IndexViolation{a, std::move(x), std::move(y)}};
  };
  if (names.empty()) return bad(IndexAxiom::non_empty);
  const std::size_t n = names.size();
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i)
    if (!pos.emplace(names[i], i).second) return bad(IndexAxiom::distinct_names, names[i]);
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (const auto& [a, b] : pairs) {
    auto ia = pos.find(a), ib = pos.find(b);
    if (ia == pos.end()) return bad(IndexAxiom::known_elements, a);
    if (ib == pos.end()) return bad(IndexAxiom::known_elements, b);
    leq[ia->second][ib->second] = true;
  }
  if (close) {
    for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (leq[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (leq[k][j]) leq[i][j] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!leq[i][i]) return bad(IndexAxiom::reflexive, names[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq[i][j] && leq[j][i]) return bad(IndexAxiom::antisymmetric, names[i], names[j]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (leq[i][j])
        for (std::size_t k = 0; k < n; ++k)
          if (leq[j][k] && !leq[i][k]) return bad(IndexAxiom::transitive, names[i], names[k]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool bounded = false;
      for (std::size_t u = 0; u < n && !bounded; ++u) bounded = leq[i][u] && leq[j][u];
      if (!bounded) return bad(IndexAxiom::directed, names[i], names[j]);
    }
  IndexPoset p(Regime::finite);
  p.names_ = names;
  p.leq_ = std::move(leq);
  for (std::size_t m = 0; m < n; ++m) {
    bool top = true;
    for (std::size_t s = 0; s < n && top; ++s) top = p.leq_[s][m];
    if (top) p.max_ = m;
  }
  return {std::move(p), std::nullopt};
}

inline IndexPoset IndexPoset::from_covers(const std::vector<std::string>& names,
                                          const std::vector<std::pair<std::string, std::string>>& covers) {
  auto v = validate_index(names, covers, true);
  if (!v.ok()) fail(ErrorKind::validation, "invalid index poset: " + v.violation->describe(),
                    v.violation->first + (v.violation->second.empty() ? "" : "," + v.violation->second));
  return std::move(*v.poset);
}

/// position -> element and element -> position of a linear extension.
struct WellOrdering {
  std::vector<std::size_t> order;
  std::vector<std::size_t> rank;
};

/// Topological order, smaller elements first, ties broken by element name.
inline WellOrdering linear_extension(const IndexPoset& p) {
  if (p.is_omega()) fail(ErrorKind::unsupported_regime, "linear extensions are only computed for finite indices");
  const std::size_t n = p.size();
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t t = 0; t < n; ++t) pending[t] = p.predecessors(t).size();
  auto later = [&](std::size_t a, std::size_t b) { return p.name(a) > p.name(b); };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> ready(later);
  for (std::size_t t = 0; t < n; ++t)
    if (pending[t] == 0) ready.push(t);
  WellOrdering w;
  w.rank.assign(n, 0);
  while (!ready.empty()) {
    const auto s = ready.top();
    ready.pop();
    w.rank[s] = w.order.size();
    w.order.push_back(s);
    for (std::size_t t = 0; t < n; ++t)
      if (p.less(s, t) && --pending[t] == 0) ready.push(t);
  }
  return w;
}

/// A monotone function between index posets. For omega sources the map is a rule.
struct CofinalMap {
  IndexPoset source;
  IndexPoset target;
  std::function<std::size_t(std::size_t)> map;
};

struct CofinalityVerdict {
  bool cofinal = false;
  std::optional<std::size_t> witness;  // a target element nothing maps above
  bool depth_qualified = false;
  std::size_t depth = 0;

  std::string label() const {
    std::string s = cofinal ? "cofinal" : "not cofinal";
    if (depth_qualified) s += " (verified to depth " + std::to_string(depth) + ")";
    return s;
  }
};

inline void check_monotone(const CofinalMap& f) {
  const std::size_t n = f.source.size();
  for (std::size_t a = 0; a < n; ++a) {
    require(f.target.is_omega() || f.map(a) < f.target.size(), ErrorKind::malformed,
            "cofinal map leaves its target", f.source.name(a));
    for (std::size_t b = 0; b < n; ++b)
      if (f.source.leq(a, b) && !f.target.leq(f.map(a), f.map(b)))
        fail(ErrorKind::validation, "map of index posets is not monotone", f.source.name(a) + "," + f.source.name(b));
  }
}

inline CofinalityVerdict is_cofinal(const CofinalMap& f) {
  check_monotone(f);
  CofinalityVerdict v;
  const auto& tgt = f.target;
  const auto& src = f.source;
  if (tgt.is_finite()) {
    // Against a finite target only the maximum needs to be reached.
    v.depth_qualified = src.is_omega();
    v.depth = src.is_omega() ? src.depth() : 0;
    for (std::size_t s = 0; s < tgt.size(); ++s) {
      bool hit = false;
      for (std::size_t t = 0; t < src.size() && !hit; ++t) hit = tgt.leq(s, f.map(t));
      if (!hit) {
        v.witness = s;
        return v;
      }
    }
    v.cofinal = true;
    return v;
  }
  if (src.is_finite()) {
    std::size_t top = 0;
    for (std::size_t t = 0; t < src.size(); ++t) top = std::max(top, f.map(t));
    v.witness = top + 1;
    return v;
  }
  v.depth_qualified = true;
  v.depth = tgt.depth();
  const std::size_t search = tgt.depth() * tgt.depth();
  for (std::size_t s = 0; s < tgt.depth(); ++s) {
    bool hit = false;
    for (std::size_t t = 0; t < search && !hit; ++t) hit = f.map(t) >= s;
    if (!hit) {
      v.witness = s;
      return v;
    }
  }
  v.cofinal = true;
  return v;
}

}  // namespace promc
