#include <gtest/gtest.h>

#include "support.hpp"

using namespace promc;

namespace {

IndexPoset diamond() { return IndexPoset::from_covers({"0", "a", "b", "2"}, {{"0", "a"}, {"0", "b"}, {"a", "2"}, {"b", "2"}}); }

oracle::Relation closure(oracle::Relation r) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

std::optional<IndexAxiom> first_violation(const oracle::Relation& r) {
  const auto a = oracle::check_axioms(r);
  if (!a.reflexive) return IndexAxiom::reflexive;
  if (!a.antisymmetric) return IndexAxiom::antisymmetric;
  if (!a.transitive) return IndexAxiom::transitive;
  if (!a.directed) return IndexAxiom::directed;
  return std::nullopt;
}

}  // namespace

TEST(ValidateIndex, IncomparablePairHasNoUpperBound) {
  const auto v = validate_index({"a", "b"}, {{"a", "a"}, {"b", "b"}}, false);
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.violation->axiom, IndexAxiom::directed);
  EXPECT_EQ(v.violation->first, "a");
  EXPECT_EQ(v.violation->second, "b");
}

TEST(ValidateIndex, ChainIsValid) {
  const auto v = validate_index({"0", "1", "2"}, {{"0", "1"}, {"1", "2"}}, true);
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v.poset->maximum(), 2u);
  EXPECT_TRUE(v.poset->leq(0, 2));
}

TEST(ValidateIndex, TwoElementsAboveACommonBaseAreNotDirected) {
  const auto v = validate_index({"a", "b", "c"}, {{"c", "a"}, {"c", "b"}}, true);
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.violation->axiom, IndexAxiom::directed);
  EXPECT_EQ(v.violation->first, "a");
  EXPECT_EQ(v.violation->second, "b");
}

TEST(ValidateIndex, StructuralErrors) {
  EXPECT_EQ(validate_index({}, {}, true).violation->axiom, IndexAxiom::non_empty);
  EXPECT_EQ(validate_index({"a", "a"}, {}, true).violation->axiom, IndexAxiom::distinct_names);
  EXPECT_EQ(validate_index({"a"}, {{"a", "z"}}, true).violation->axiom, IndexAxiom::known_elements);
  EXPECT_EQ(validate_index({"a", "b"}, {{"a", "b"}, {"b", "a"}}, true).violation->axiom, IndexAxiom::antisymmetric);
  EXPECT_THROW(IndexPoset::from_covers({"a", "b"}, {}), Error);
}

// Every relation on up to four points: the validator accepts exactly the
// directed partial orders and names the first failing axiom.
TEST(ValidateIndex, ExhaustiveRelationsUpToFourPoints) {
  std::size_t accepted = 0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << (n * n)); ++code) {
      const auto r = oracle::relation_from_code(n, code);
      const auto raw = validate_index(oracle::numerals(n), oracle::pairs_of(r), false);
      const auto want = first_violation(r);
      ASSERT_EQ(raw.ok(), !want.has_value()) << "n=" << n << " code=" << code;
      if (want) EXPECT_EQ(raw.violation->axiom, *want);
      accepted += raw.ok();

      const auto closed = validate_index(oracle::numerals(n), oracle::pairs_of(r), true);
      const auto c = closure(r);
      ASSERT_EQ(closed.ok(), oracle::check_axioms(c).all());
      if (closed.ok())
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(closed.poset->leq(i, j), c[i][j]);
    }
  // Labeled directed posets: 1 + 2 + 9 + 76 (posets with a top on n points are
  // the posets on n - 1 points with a top added, counted with n choices of label).
  EXPECT_EQ(accepted, 1u + 2u + 9u + 76u);
}

TEST(ValidateIndex, DirectedShapesUpToThreePoints) {
  const auto shapes = oracle::directed_posets(3);
  ASSERT_EQ(shapes.size(), 4u);
  for (const auto& p : shapes) {
    const auto m = p.maximum();
    for (std::size_t s = 0; s < p.size(); ++s) EXPECT_TRUE(p.leq(s, m));
  }
}

TEST(IndexPoset, PredecessorsAndCovers) {
  const auto d = diamond();
  EXPECT_EQ(d.maximum(), 3u);
  EXPECT_EQ(d.predecessors(3), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(d.lower_covers(3), (std::vector<std::size_t>{1, 2}));
  const std::vector<std::pair<std::size_t, std::size_t>> covers{{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  EXPECT_EQ(d.covers(), covers);
  const auto w = IndexPoset::omega(5);
  EXPECT_EQ(w.predecessors(3), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(w.lower_covers(3), (std::vector<std::size_t>{2}));
  EXPECT_THROW(w.maximum(), Error);
  EXPECT_THROW(IndexPoset::omega(0), Error);
}

TEST(IndexPoset, CoversRebuildTheOrder) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << (n * n)); ++code) {
      const auto r = oracle::relation_from_code(n, code);
      if (!oracle::check_axioms(r).all()) continue;
      const auto p = *validate_index(oracle::numerals(n), oracle::pairs_of(r), false).poset;
      std::vector<std::pair<std::string, std::string>> cs;
      for (auto [lo, hi] : p.covers()) {
        for (std::size_t u = 0; u < n; ++u) EXPECT_FALSE(p.less(lo, u) && p.less(u, hi));
        cs.emplace_back(p.name(lo), p.name(hi));
      }
      const auto q = IndexPoset::from_covers(oracle::numerals(n), cs);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(q.leq(i, j), bool(r[i][j]));
    }
}

TEST(LinearExtension, Examples) {
  EXPECT_EQ(linear_extension(IndexPoset::chain(2)).rank, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(linear_extension(diamond()).rank, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(linear_extension(IndexPoset::one_point()).rank, (std::vector<std::size_t>{0}));
  // Name order, not position order, breaks ties.
  const auto p = IndexPoset::from_covers({"m", "b", "a"}, {{"b", "m"}, {"a", "m"}});
  EXPECT_EQ(linear_extension(p).order, (std::vector<std::size_t>{2, 1, 0}));
  EXPECT_THROW(linear_extension(IndexPoset::omega()), Error);
}

TEST(LinearExtension, RespectsTheOrderOnAllSmallPosets) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << (n * n)); ++code) {
      const auto r = oracle::relation_from_code(n, code);
      if (!oracle::check_axioms(r).all()) continue;
      const auto p = *validate_index(oracle::numerals(n), oracle::pairs_of(r), false).poset;
      const auto w = linear_extension(p);
      ASSERT_EQ(w.order.size(), n);
      for (std::size_t k = 0; k < n; ++k) EXPECT_EQ(w.rank[w.order[k]], k);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (p.less(a, b)) EXPECT_LT(w.rank[a], w.rank[b]);
      EXPECT_EQ(w.order.back(), p.maximum());
    }
}

TEST(Cofinality, Examples) {
  const auto d = diamond();
  EXPECT_TRUE(is_cofinal({d, d, [](std::size_t s) { return s; }}).cofinal);
  EXPECT_TRUE(is_cofinal({IndexPoset::one_point(), d, [&](std::size_t) { return d.maximum(); }}).cofinal);
  const auto v = is_cofinal({IndexPoset::one_point("0"), IndexPoset::chain(2), [](std::size_t) { return 0; }});
  EXPECT_FALSE(v.cofinal);
  EXPECT_EQ(v.witness, 1u);
}

TEST(Cofinality, OmegaMapsAreDepthQualified) {
  const auto w = IndexPoset::omega(8);
  const auto dbl = is_cofinal({w, w, [](std::size_t n) { return 2 * n; }});
  EXPECT_TRUE(dbl.cofinal);
  EXPECT_TRUE(dbl.depth_qualified);
  EXPECT_EQ(dbl.depth, 8u);
  const auto stuck = is_cofinal({w, w, [](std::size_t n) { return std::min<std::size_t>(n, 3); }});
  EXPECT_FALSE(stuck.cofinal);
  EXPECT_EQ(stuck.witness, 4u);
  EXPECT_FALSE(is_cofinal({IndexPoset::chain(3), w, [](std::size_t n) { return n; }}).cofinal);
}

// All maps between directed posets on at most three points: non-monotone maps
// are rejected, and monotone ones are cofinal iff something lands above every element.
TEST(Cofinality, ExhaustiveSmallMaps) {
  const auto shapes = oracle::directed_posets(3);
  std::size_t monotone = 0;
  for (const auto& src : shapes)
    for (const auto& tgt : shapes)
      for (const auto& img : oracle::all_functions(src.size(), tgt.size())) {
        bool mono = true;
        for (std::size_t a = 0; a < src.size(); ++a)
          for (std::size_t b = 0; b < src.size(); ++b)
            if (src.leq(a, b) && !tgt.leq(img[a], img[b])) mono = false;
        const CofinalMap f{src, tgt, [img](std::size_t t) { return img[t]; }};
        if (!mono) {
          EXPECT_THROW(is_cofinal(f), Error);
          continue;
        }
        ++monotone;
        bool want = true;
        for (std::size_t s = 0; s < tgt.size(); ++s) {
          bool hit = false;
          for (std::size_t t = 0; t < src.size(); ++t) hit = hit || tgt.leq(s, img[t]);
          want = want && hit;
        }
        const auto v = is_cofinal(f);
        EXPECT_EQ(v.cofinal, want);
        if (!want) {
          ASSERT_TRUE(v.witness);
          for (std::size_t t = 0; t < src.size(); ++t) EXPECT_FALSE(tgt.leq(*v.witness, img[t]));
        }
      }
  EXPECT_GT(monotone, 0u);
}
