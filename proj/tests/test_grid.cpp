#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace compactkit;
using cktest::line_grid;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected compactkit::Error";
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST(LpNorm, ZeroFunction) {
  const auto f = GridFunction::zeros(Grid({3, 4}, {0.0, 0.0}, 0.5));
  EXPECT_EQ(lp_norm(f, 1.0), 0.0);
  EXPECT_EQ(lp_norm(f, 2.5), 0.0);
}

TEST(LpNorm, UnitIndicatorAnyExponent) {
  const GridFunction f(line_grid(4, 0.25, 0.0), {1, 1, 1, 1});
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) EXPECT_NEAR(lp_norm(f, p), 1.0, 1e-15) << p;
}

TEST(LpNorm, DirectSum) {
  const GridFunction f(line_grid(2, 1.0, 0.0), {1, 2});
  EXPECT_DOUBLE_EQ(lp_norm(f, 2.0), std::sqrt(5.0));
}

TEST(LpNorm, RejectsExponentBelowOne) {
  const GridFunction f(line_grid(2, 1.0, 0.0), {1, 2});
  EXPECT_EQ(code_of([&] { lp_norm(f, 0.5); }), ErrorCode::invalid_exponent);
  EXPECT_EQ(code_of([&] { lp_norm(f, std::nan("")); }), ErrorCode::invalid_exponent);
}

TEST(LpDistance, Examples) {
  const auto g = line_grid(2, 1.0, 0.0);
  const GridFunction a(g, {1, 0}), b(g, {0, 1});
  EXPECT_EQ(lp_distance(a, a, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(lp_distance(a, b, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(lp_distance(a, b, 2.0), std::sqrt(2.0));
}

TEST(LpDistance, GridMismatch) {
  const GridFunction a(line_grid(2, 1.0, 0.0), {1, 0});
  const GridFunction b(line_grid(2, 0.5, 0.0), {1, 0});
  const GridFunction c(line_grid(3, 1.0, 0.0), {1, 0, 0});
  EXPECT_EQ(code_of([&] { lp_distance(a, b, 1.0); }), ErrorCode::grid_mismatch);
  EXPECT_EQ(code_of([&] { lp_distance(a, c, 1.0); }), ErrorCode::grid_mismatch);
}

TEST(Shift, Examples) {
  const auto g = line_grid(3, 1.0, 0.0);
  const GridFunction f(g, {0, 1, 0});
  const auto s0 = shift(f, {0});
  EXPECT_TRUE(std::ranges::equal(s0.values(), f.values()));
  const auto s1 = shift(f, {1});
  EXPECT_EQ((std::vector<double>(s1.values().begin(), s1.values().end())), (std::vector<double>{1, 0, 0}));
  const GridFunction ones(line_grid(2, 1.0, 0.0), {1, 1});
  const auto gone = shift(ones, {5});
  EXPECT_EQ(gone[0], 0.0);
  EXPECT_EQ(gone[1], 0.0);
}

TEST(Rescale, Examples) {
  const GridFunction f(line_grid(1, 1.0, 0.0), {3});
  const auto r = rescale(f, 2);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], 3.0);
  EXPECT_EQ(r[1], 3.0);
  EXPECT_DOUBLE_EQ(lp_norm(f, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(lp_norm(r, 1.0), 6.0);

  const auto same = rescale(f, 1);
  EXPECT_EQ(same.grid(), f.grid());
  EXPECT_EQ(same[0], 3.0);

  std::mt19937_64 rng(7);
  const auto f2 = cktest::random_values(Grid({5, 3}, {-1.0, 0.5}, 0.3), rng);
  EXPECT_NEAR(lp_norm(rescale(f2, 2), 2.0) / lp_norm(f2, 2.0), 2.0, 1e-14);
}

TEST(Rescale, PlacesReplicaAtScaledOrigin) {
  const GridFunction f(Grid({2}, {-1.0}, 0.5), {1, 2});
  const auto r = rescale(f, 3);
  EXPECT_EQ(r.grid().origin()[0], -3.0);
  EXPECT_EQ(r.grid().spacing(), 0.5);
  EXPECT_EQ((std::vector<double>(r.values().begin(), r.values().end())), (std::vector<double>{1, 1, 1, 2, 2, 2}));
}

TEST(GridValidation, Errors) {
  EXPECT_EQ(code_of([] { Grid({}, {}, 1.0); }), ErrorCode::shape_error);
  EXPECT_EQ(code_of([] { Grid({2, 2}, {0.0}, 1.0); }), ErrorCode::shape_error);
  EXPECT_EQ(code_of([] { Grid({2, 0}, {0.0, 0.0}, 1.0); }), ErrorCode::shape_error);
  EXPECT_EQ(code_of([] { Grid({2}, {0.0}, 0.0); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { GridFunction(line_grid(2, 1.0, 0.0), {1.0}); }), ErrorCode::size_mismatch);
  EXPECT_EQ(code_of([] { GridFunction(line_grid(2, 1.0, 0.0), {1.0, std::nan("")}); }), ErrorCode::non_finite_value);
  EXPECT_EQ(code_of([] { GridFunction(line_grid(1, 1.0, 0.0), {INFINITY}); }), ErrorCode::non_finite_value);
}

TEST(FunctionFamily, Validation) {
  EXPECT_EQ(code_of([] { FunctionFamily(std::vector<GridFunction>{}); }), ErrorCode::empty_family);
  const GridFunction a(line_grid(2, 1.0, 0.0), {1, 0});
  const GridFunction b(line_grid(2, 1.0, 1.0), {1, 0});
  EXPECT_EQ(code_of([&] { FunctionFamily({a, b}); }), ErrorCode::grid_mismatch);
  const FunctionFamily F({a, a});
  EXPECT_EQ(F.label(0), "f0");
  EXPECT_EQ(F.label(1), "f1");
}

TEST(GridFunction, AtOutsideBoxIsZero) {
  const GridFunction f(Grid({2, 2}, {0.0, 0.0}, 1.0), {1, 2, 3, 4});
  EXPECT_EQ(f.at({1, 0}), 3.0);
  EXPECT_EQ(f.at({-1, 0}), 0.0);
  EXPECT_EQ(f.at({0, 2}), 0.0);
}

TEST(GridProperties, Homogeneity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> C(-5.0, 5.0);
  for (int t = 0; t < 200; ++t) {
    const auto f = cktest::random_values(Grid({6, 4}, {0.0, 0.0}, 0.2), rng);
    const double c = C(rng);
    for (double p : {1.0, 2.0, 3.3}) {
      const double lhs = lp_norm(scaled(f, c), p), rhs = std::abs(c) * lp_norm(f, p);
      EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, rhs));
    }
  }
}

TEST(GridProperties, TriangleInequality) {
  std::mt19937_64 rng(12);
  const Grid g({9}, {-1.0}, 0.25);
  for (int t = 0; t < 300; ++t) {
    const auto f = cktest::random_values(g, rng), u = cktest::random_values(g, rng), w = cktest::random_values(g, rng);
    for (double p : {1.0, 1.7, 2.0, 4.0})
      EXPECT_LE(lp_distance(f, w, p), lp_distance(f, u, p) + lp_distance(u, w, p) + 1e-12);
  }
}

TEST(GridProperties, ScalingLawExact) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const bool two_d = t % 2 == 1;
    const Grid g = two_d ? Grid({4, 5}, {-0.5, 0.0}, 0.25) : Grid({7}, {-1.0}, 0.125);
    const auto f = cktest::random_values(g, rng);
    const double n = static_cast<double>(g.dim());
    for (std::size_t lam : {1u, 2u, 3u})
      for (double p : {1.0, 2.0, 3.0}) {
        const double want = std::pow(static_cast<double>(lam), n / p) * lp_norm(f, p);
        EXPECT_LE(std::abs(lp_norm(rescale(f, lam), p) - want), 1e-12 * want);
      }
  }
}

TEST(GridProperties, ShiftRoundTripOnInterior) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> K(-3, 3);
  const Grid g({7, 6}, {0.0, 0.0}, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto f = cktest::random_values(g, rng);
    const Index k{K(rng), K(rng)};
    const auto back = shift(shift(f, k), {-k[0], -k[1]});
    for_each_index(g.shape(), [&](const Index& idx, std::size_t off) {
      const Index fwd{idx[0] - k[0], idx[1] - k[1]};
      if (g.contains(fwd)) {
        EXPECT_EQ(back[off], f[off]);
      }
    });
  }
}

TEST(Embed, PadsWithZeros) {
  const GridFunction f(Grid({2}, {0.0}, 0.5), {1, 2});
  const auto e = embed(f, {1}, {2});
  EXPECT_EQ(e.grid().origin()[0], -0.5);
  EXPECT_EQ((std::vector<double>(e.values().begin(), e.values().end())), (std::vector<double>{0, 1, 2, 0, 0}));
  EXPECT_DOUBLE_EQ(lp_norm(e, 2.0), lp_norm(f, 2.0));
}
