#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"

using promc::gf2::Matrix;
namespace gf2 = promc::gf2;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, rng() & 1u);
  return m;
}

Matrix vector_of(oracle::Vec v, std::size_t n) {
  Matrix m(n, 1);
  for (std::size_t i = 0; i < n; ++i) m.set(i, 0, (v >> i) & 1u);
  return m;
}

// |{Mv}| = 2^rank
std::size_t brute_rank(const Matrix& m) {
  std::set<oracle::Vec> image;
  for (oracle::Vec v = 0; v < (oracle::Vec(1) << m.cols()); ++v) image.insert(oracle::apply(m, v));
  std::size_t r = 0;
  while ((std::size_t(1) << r) < image.size()) ++r;
  return r;
}

}  // namespace

TEST(Gf2, ProductAndSumFollowEntryFormulas) {
  const auto a = Matrix::from_rows({{1, 1, 0}, {0, 1, 1}}, 3);
  const auto b = Matrix::from_rows({{1, 0}, {1, 1}, {0, 1}}, 2);
  EXPECT_EQ(a * b, Matrix::from_rows({{0, 1}, {1, 0}}, 2));
  EXPECT_EQ(a + a, Matrix(2, 3));
  EXPECT_EQ(a.transpose().transpose(), a);
  EXPECT_THROW(a * a, std::invalid_argument);
  EXPECT_THROW(Matrix::from_rows({{1, 2}}, 2), std::invalid_argument);
}

TEST(Gf2, WideMatricesCrossWordBoundaries) {
  std::mt19937_64 rng(7);
  const auto a = random_matrix(rng, 5, 70), b = random_matrix(rng, 70, 66), c = random_matrix(rng, 66, 3);
  EXPECT_EQ((a * b) * c, a * (b * c));
  EXPECT_EQ((a * b).transpose(), b.transpose() * a.transpose());
  const auto id = Matrix::identity(130);
  EXPECT_EQ(gf2::rank(id), 130u);
  EXPECT_EQ(gf2::inverse(id).value(), id);
}

TEST(Gf2, RankKernelImageAgreeWithEnumeration) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t r = rng() % 6, c = rng() % 7;
    const auto m = random_matrix(rng, r, c);
    const auto rk = gf2::rank(m);
    ASSERT_EQ(rk, brute_rank(m));
    const auto k = gf2::kernel(m);
    ASSERT_EQ(k.rows(), c);
    ASSERT_EQ(k.cols(), c - rk);
    EXPECT_TRUE((m * k).is_zero());
    EXPECT_EQ(gf2::rank(k), k.cols());
    const auto im = gf2::image(m);
    EXPECT_EQ(im.cols(), rk);
    EXPECT_EQ(gf2::rank(gf2::hstack(m, im)), rk);
  }
}

TEST(Gf2, SolveFindsSolutionsExactlyWhenTheyExist) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    const auto a = random_matrix(rng, r, c);
    const auto b = random_matrix(rng, r, 1);
    bool exists = false;
    for (oracle::Vec v = 0; v < (oracle::Vec(1) << c) && !exists; ++v) exists = a * vector_of(v, c) == b;
    const auto x = gf2::solve(a, b);
    ASSERT_EQ(x.has_value(), exists);
    if (x) EXPECT_EQ(a * *x, b);
    const auto bt = random_matrix(rng, 1, c);
    if (const auto y = gf2::solve_left(a, bt)) EXPECT_EQ(*y * a, bt);
  }
}

TEST(Gf2, InverseOfRandomSquareMatrices) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng() % 6;
    const auto m = random_matrix(rng, n, n);
    const auto inv = gf2::inverse(m);
    ASSERT_EQ(inv.has_value(), brute_rank(m) == n);
    if (inv) {
      EXPECT_EQ(m * *inv, Matrix::identity(n));
      EXPECT_EQ(*inv * m, Matrix::identity(n));
    }
  }
}

TEST(Gf2, ComplementCoordinatesCompleteABasis) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const auto sub = gf2::image(random_matrix(rng, n, rng() % 5));
    const auto coords = gf2::complement_coordinates(sub);
    EXPECT_EQ(coords.size() + sub.cols(), n);
    EXPECT_TRUE(std::is_sorted(coords.begin(), coords.end()));
    EXPECT_EQ(gf2::rank(gf2::hstack(sub, gf2::unit_columns(n, coords))), n);
  }
}

TEST(Gf2, BlockConstructions) {
  const auto a = Matrix::from_rows({{1, 0}}, 2), b = Matrix::from_rows({{1}, {1}}, 1);
  const auto d = gf2::direct_sum(a, b);
  EXPECT_EQ(d, Matrix::from_rows({{1, 0, 0}, {0, 0, 1}, {0, 0, 1}}, 3));
  EXPECT_EQ(gf2::vstack(a, a).rows(), 2u);
  EXPECT_EQ(gf2::hstack(b, b).cols(), 2u);
}
