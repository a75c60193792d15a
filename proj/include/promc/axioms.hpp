#pragma once

// Randomized property suites shared by `check-axioms` and the acceptance gate.
// Every trial draws from its own generator seeded by (seed, trial), so trials
// can be run in any order and reproduced one at a time.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "promc/cocell.hpp"
#include "promc/generate.hpp"
#include "promc/strict.hpp"

namespace promc::axioms {

struct Outcome {
  std::string suite;
  std::size_t trial = 0;
  bool ok = true;
  std::string failure;
};

inline gen::Rng trial_rng(std::uint64_t seed, std::size_t trial, std::uint64_t salt) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(trial), std::uint32_t(salt)};
  return gen::Rng(seq);
}

inline Check guarded(const std::function<Check()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    return Check::fail_with(std::string(to_string(e.kind())) + ": " + e.what() + (e.witness().empty() ? "" : " @ " + e.witness()));
  } catch (const std::exception& e) {
    return Check::fail_with(e.what());
  }
}

/// Every level map of a map with a special certificate classifies in the base class.
template <ModelCategory M>
Check special_is_levelwise(const ProMap<M>& f, SpecialKind kind) {
  const auto report = detect_special(f, kind);
  if (!report.ok()) return Check::fail_with("no special certificate: matching map fails at " + report.levels[*report.failing].name);
  const ClassName need = kind == SpecialKind::fibration ? ClassName::fibration : ClassName::acyclic_fibration;
  for (std::size_t s = 0; s < f.target().index().size(); ++s)
    if (!in_class(M::classify(f.level_component(s)), need))
      return Check::fail_with("level " + f.target().index().name(s) + " is not " + to_string(need));
  return Check::pass();
}

/// tower_limit(build_cocell_tower(f)) recovers the source of f and f itself.
template <ModelCategory M>
Check cocell_round_trip(const ProMap<M>& f, SpecialKind kind) {
  const auto tower = build_cocell_tower(f, kind);
  if (auto c = replay_tower(tower); !c.ok) return Check::fail_with("tower replay: " + c.failure);
  const auto lim = tower_limit(tower);
  if (!lim.iso) return Check::fail_with("no iso certificate to the source");
  if (!lim.iso_check.ok) return Check::fail_with("iso certificate: " + lim.iso_check.failure);
  if (!lim.projection_check.ok) return Check::fail_with("projection: " + lim.projection_check.failure);
  return Check::pass();
}

/// The corrected collapse pattern X = ({a} -> {x, y}), Y = ({u} -> {v}) between
/// random level isomorphisms, with the witness u -> x carried along.
inline gen::ProIsoCase<SetBij> collapse_case(gen::Rng& rng) {
  const auto chain = IndexPoset::chain(2);
  const FinSet a{{"a"}}, xy{{"x", "y"}}, u{{"u"}}, v{{"v"}};
  const auto x = ProObject<SetBij>::finite(chain, {xy, a}, {{{1, 0}, FinMap{a, xy, {0}}}});
  const auto y = ProObject<SetBij>::finite(chain, {v, u}, {{{1, 0}, FinMap{u, v, {0}}}});
  const auto f = ProMap<SetBij>::level(x, y, {FinMap{xy, v, {0, 0}}, FinMap{a, u, {0}}});
  const auto pre = gen::Gen<SetBij>::iso_onto(rng, x);
  const auto post = gen::Gen<SetBij>::iso_from(rng, y);
  const auto g = compose(post, compose(f, pre));
  auto w = gen::witnesses_from_top(g);
  return {g, w};
}

struct Suite {
  std::string name;
  std::function<Check(gen::Rng&, const gen::Params&)> trial;
};

template <ModelCategory M>
std::vector<Suite> suites(std::size_t cocell_max_index = 4) {
  using gen::Gen;
  std::vector<Suite> out;
  for (auto mode : {StrictMode::L1, StrictMode::L2}) {
    const SpecialKind kind = mode == StrictMode::L1 ? SpecialKind::acyclic_fibration : SpecialKind::fibration;
    out.push_back({std::string("factor-") + to_string(mode), [mode, kind, cocell_max_index](gen::Rng& rng, const gen::Params& prm) {
                     const auto index = gen::random_index(rng, prm.max_index);
                     const auto f = Gen<M>::level_map(rng, index, prm);
                     const auto sf = factor_strict(f, mode);
                     if (auto c = check_strict_factorization(sf); !c.ok) return c;
                     if (auto c = special_is_levelwise(sf.right, kind); !c.ok) return Check::fail_with("special right factor: " + c.failure);
                     if (index.size() <= cocell_max_index)
                       if (auto c = cocell_round_trip(sf.right, kind); !c.ok) return Check::fail_with("cocell: " + c.failure);
                     return Check::pass();
                   }});
  }
  for (auto mode : {StrictMode::L1, StrictMode::L2})
    out.push_back({std::string("lift-") + to_string(mode), [mode](gen::Rng& rng, const gen::Params& prm) {
                     const auto lc = gen::lift_case<M>(rng, prm, mode);
                     const SpecialKind kind = mode == StrictMode::L1 ? SpecialKind::acyclic_fibration : SpecialKind::fibration;
                     if (auto c = special_is_levelwise(lc.square.p, kind); !c.ok) return Check::fail_with("special right map: " + c.failure);
                     const auto l = lift_strict(lc.square);
                     return check_lift(lc.square, l.lift);
                   }});
  out.push_back({"pro-factor-iso", [](gen::Rng& rng, const gen::Params& prm) {
                   gen::ProIsoCase<M> pc = [&] {
                     if constexpr (std::is_same_v<M, SetBij>) {
                       if (gen::coin(rng)) return collapse_case(rng);
                     }
                     return gen::pro_iso_case<M>(rng, prm);
                   }();
                   return check_pro_iso_factorization(pro_factor_iso(pc.f, pc.witnesses));
                 }});
  out.push_back({"zigzag-we", [](gen::Rng& rng, const gen::Params& prm) {
                   const auto z = gen::zigzag_case<M>(rng, prm);
                   return check_levelwise_we(compose_zigzag_we(z.f, z.h, z.g, z.witnesses));
                 }});
  for (auto side : {CancelSide::left, CancelSide::right})
    out.push_back({side == CancelSide::left ? "two-of-three-left" : "two-of-three-right", [side](gen::Rng& rng, const gen::Params& prm) {
                     const auto t = gen::two_of_three_case<M>(rng, prm, side);
                     return check_levelwise_we(two_of_three(t.side, t.top, t.left, t.right, t.bottom, t.witnesses));
                   }});
  out.push_back({"proper-pullback", [](gen::Rng& rng, const gen::Params& prm) {
                   const auto p = gen::proper_case<M>(rng, prm);
                   return check_levelwise_we(proper_pullback(p.p, p.f, p.g, p.witnesses));
                 }});
  return out;
}

/// Runs trials 0..n-1 of every suite; results come back sorted by suite, then trial.
template <ModelCategory M>
std::vector<Outcome> run(std::size_t trials, std::uint64_t seed, const gen::Params& prm, const std::vector<Suite>& which) {
  std::vector<Outcome> out;
  for (std::size_t s = 0; s < which.size(); ++s)
    for (std::size_t k = 0; k < trials; ++k) {
      auto rng = trial_rng(seed, k, s);
      const auto c = guarded([&] { return which[s].trial(rng, prm); });
      out.push_back({which[s].name, k, c.ok, c.failure});
    }
  return out;
}

}  // namespace promc::axioms
