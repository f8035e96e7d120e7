#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace compactkit;
using cktest::line_grid;

namespace {

// defect via padding, shifting and subtracting on the enlarged box
double padded_defect(const GridFunction& f, const Index& k, double p) {
  std::vector<std::size_t> pad(f.grid().dim());
  for (std::size_t a = 0; a < pad.size(); ++a) pad[a] = static_cast<std::size_t>(std::abs(k[a]));
  const auto e = embed(f, pad, pad);
  const double d = lp_distance(shift(e, k), e, p);
  return std::pow(d, p);
}

GridFunction unit_indicator_quarter() { return GridFunction(line_grid(4, 0.25, 0.0), {1, 1, 1, 1}); }

}  // namespace

TEST(TailMass, Examples) {
  std::mt19937_64 rng(1);
  const auto f = cktest::random_values(Grid({4, 4}, {-1.0, -1.0}, 0.5), rng);
  EXPECT_EQ(tail_mass(f, f.grid().corner_radius() + 1.0, 2.0), 0.0);
  EXPECT_EQ(tail_mass(GridFunction::zeros(f.grid()), 0.3, 1.0), 0.0);

  const GridFunction g(Grid({4}, {-2.0}, 1.0), {1, 1, 1, 1});
  EXPECT_DOUBLE_EQ(tail_mass(g, 1.0, 1.0), 2.0);
}

TEST(TranslationDefect, Examples) {
  const auto f = unit_indicator_quarter();
  EXPECT_EQ(translation_defect(f, {0}, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(translation_defect(f, {1}, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(translation_defect(f, {1}, 2.0), 0.5);
}

TEST(TranslationDefect, MatchesPaddedShiftOracle) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> K(-4, 4);
  for (int t = 0; t < 60; ++t) {
    const auto f = cktest::random_values(Grid({5, 3}, {0.0, 0.0}, 0.5), rng);
    const Index k{K(rng), K(rng)};
    for (double p : {1.0, 2.0, 2.5}) {
      const double want = padded_defect(f, k, p);
      EXPECT_NEAR(translation_defect(f, k, p), want, 1e-12 * std::max(1.0, want));
    }
  }
}

TEST(TranslationDefect, Subadditive) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> K(-3, 3);
  for (int t = 0; t < 100; ++t) {
    const auto f = cktest::random_values(Grid({6, 5}, {0.0, 0.0}, 0.25), rng);
    const Index k1{K(rng), K(rng)}, k2{K(rng), K(rng)};
    const Index k12{k1[0] + k2[0], k1[1] + k2[1]};
    for (double p : {1.0, 2.0, 3.0}) {
      const double lhs = std::pow(translation_defect(f, k12, p), 1.0 / p);
      const double rhs = std::pow(translation_defect(f, k1, p), 1.0 / p) + std::pow(translation_defect(f, k2, p), 1.0 / p);
      EXPECT_LE(lhs, rhs + 1e-12);
    }
  }
}

TEST(LatticeShifts, HalfSetIsSymmetricRepresentative) {
  const auto half = lattice_shifts(2, 0.5, 1.0, true);
  const auto full = lattice_shifts(2, 0.5, 1.0, false);
  // |k| <= 2: 13 lattice points; minus the origin, halved
  EXPECT_EQ(full.size(), 12u);
  EXPECT_EQ(half.size(), 6u);
  for (const auto& k : full) {
    const Index neg{-k[0], -k[1]};
    const bool in = std::ranges::find(half, k) != half.end(), in_neg = std::ranges::find(half, neg) != half.end();
    EXPECT_NE(in, in_neg);
  }
}

TEST(FamilyModuli, SingletonTailRadiusAlwaysExists) {
  const Grid g({32}, {-2.0}, 0.125);
  const auto f = cktest::sample(g, [](const std::vector<double>& x) { return cktest::smooth_bump(x, {0.0}, 1.0); });
  const FunctionFamily F({f});
  for (double eps : {1.0, 0.1, 1e-3, 1e-8}) {
    const auto rep = family_moduli(F, 2.0, eps);
    ASSERT_TRUE(rep.tail_radius.has_value()) << eps;
  }
}

TEST(FamilyModuli, SingletonTranslationRhoUnderRefinement) {
  // a fixed grid has a fixed defect at |y| = h, so smaller eps needs finer sampling
  for (double eps : {0.5, 0.2, 0.1, 0.05}) {
    bool found = false;
    for (std::size_t cells = 16; cells <= 4096 && !found; cells *= 2) {
      const double h = 4.0 / static_cast<double>(cells);
      const auto f = cktest::sample(line_grid(cells, h, -2.0),
                                    [](const std::vector<double>& x) { return cktest::smooth_bump(x, {0.0}, 1.0); });
      const std::vector<double> rho{h, 2 * h, 4 * h};
      found = family_moduli(FunctionFamily({f}), 1.0, eps, default_r_grid(f.grid()), rho).translation_rho.has_value();
    }
    EXPECT_TRUE(found) << eps;
  }
}

TEST(FamilyModuli, ZeroFamily) {
  const auto z = GridFunction::zeros(Grid({4, 4}, {0.0, 0.0}, 0.5));
  const auto rep = family_moduli(FunctionFamily({z, z}), 2.0, 0.1);
  EXPECT_EQ(rep.norm_bound, 0.0);
  for (const auto& pt : rep.tail_profile) EXPECT_EQ(pt.sup, 0.0);
  for (const auto& pt : rep.translation_profile) EXPECT_EQ(pt.sup, 0.0);
}

TEST(FamilyModuli, DisjointUnitIndicators) {
  const std::size_t N = 5, per = 8;
  const double h = 1.0 / per;
  const Grid g({N * per}, {0.0}, h);
  std::vector<GridFunction> members;
  for (std::size_t j = 0; j < N; ++j) {
    std::vector<double> v(g.size(), 0.0);
    for (std::size_t c = 0; c < per; ++c) v[j * per + c] = 1.0;
    members.emplace_back(g, v);
  }
  const auto rep = family_moduli(FunctionFamily(members), 1.0, 0.5, default_r_grid(g), {h, 2 * h});
  EXPECT_DOUBLE_EQ(rep.norm_bound, 1.0);
  EXPECT_DOUBLE_EQ(rep.translation_profile[0].sup, 2.0 * h);
}

TEST(FamilyModuli, ProfilesAreMonotone) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<GridFunction> members;
    const Grid g({12, 12}, {-1.5, -1.5}, 0.25);
    for (int i = 0; i < 3; ++i) members.push_back(cktest::random_bumps(g, rng, 3, 1.0, 0.2, 0.6));
    const auto rep = family_moduli(FunctionFamily(members), 1.5, 0.1);
    for (std::size_t j = 1; j < rep.tail_profile.size(); ++j)
      EXPECT_LE(rep.tail_profile[j].sup, rep.tail_profile[j - 1].sup);
    for (std::size_t j = 1; j < rep.translation_profile.size(); ++j)
      EXPECT_GE(rep.translation_profile[j].sup, rep.translation_profile[j - 1].sup);
    for (std::size_t i = 0; i < members.size(); ++i) {
      double prev = INFINITY;
      for (double R : default_r_grid(g)) {
        const double tm = tail_mass(members[i], R, 1.5);
        EXPECT_LE(tm, prev);
        prev = tm;
      }
    }
  }
}

TEST(FamilyModuli, ArgmaxNamesAttainingMember) {
  const auto g = line_grid(8, 0.25, -1.0);
  const GridFunction small(g, {0, 0, 0, 0.1, 0.1, 0, 0, 0});
  const GridFunction big(g, {0, 0, 0, 1, 1, 0, 0, 0});
  const auto rep = family_moduli(FunctionFamily({small, big}), 1.0, 0.5, {0.0, 2.0}, {0.25});
  EXPECT_EQ(rep.tail_profile[0].argmax, 1u);
  EXPECT_EQ(rep.translation_profile[0].argmax, 1u);
  EXPECT_EQ(rep.tail_radius, 2.0);
}

TEST(FamilyModuli, Errors) {
  const FunctionFamily F({unit_indicator_quarter()});
  EXPECT_THROW(family_moduli(F, 1.0, 0.0), Error);
  EXPECT_THROW(family_moduli(F, 1.0, 0.1, {}, {0.25}), Error);
  EXPECT_THROW(family_moduli(F, 1.0, 0.1, {1.0}, {0.5, 0.25}), Error);
  EXPECT_THROW(family_moduli(F, 0.9, 0.1), Error);
}

TEST(SequenceCondition, ConstantSequence) {
  const Grid g({64}, {-2.0}, 1.0 / 16);
  const auto f = cktest::sample(g, [](const std::vector<double>& x) { return cktest::smooth_bump(x, {0.0}, 1.0); });
  const auto rho = default_rho_grid(g);
  const double eps = 0.3;
  const auto single = family_moduli(FunctionFamily({f}), 1.0, eps, default_r_grid(g), rho);
  ASSERT_TRUE(single.translation_rho);
  const auto sc = sequence_condition(FunctionFamily({f, f, f, f}), 1.0, eps, rho);
  EXPECT_EQ(sc.head_count, 0u);
  EXPECT_EQ(sc.rho, *single.translation_rho);
}

TEST(SequenceCondition, MollifiedIndicators) {
  // f_n = indicator of [0,1) averaged over a window of width 1/n
  const double h = 1.0 / 128;
  const Grid g({512}, {-1.5}, h);
  std::vector<GridFunction> seq;
  for (int n = 1; n <= 8; ++n) {
    const double w = 1.0 / n;
    seq.push_back(cktest::sample(g, [w](const std::vector<double>& x) {
      const double lo = std::max(x[0] - w / 2, 0.0), hi = std::min(x[0] + w / 2, 1.0);
      return std::max(0.0, hi - lo) / w;
    }));
  }
  const double eps = 0.2;
  const std::vector<double> rho{h, 2 * h, 4 * h, 8 * h, 16 * h};
  const FunctionFamily F(seq);
  const auto sc = sequence_condition(F, 1.0, eps, rho);
  EXPECT_LE(sc.head_count, seq.size());
  const double target = eps;
  for (const auto& f : seq)
    for (const auto& k : lattice_shifts(1, h, sc.rho)) EXPECT_LT(translation_defect(f, k, 1.0), target);
}

TEST(SequenceCondition, LatticeTranslatesMatchSingleton) {
  const double h = 1.0 / 16;
  const Grid g({96}, {-3.0}, h);
  const auto base = cktest::sample(g, [](const std::vector<double>& x) { return cktest::smooth_bump(x, {-1.0}, 0.8); });
  std::vector<GridFunction> seq;
  for (int s = 0; s < 5; ++s) seq.push_back(shift(base, {-4 * s}));
  const auto rho = default_rho_grid(g);
  for (double eps : {0.2, 0.4}) {
    const auto single = family_moduli(FunctionFamily({base}), 2.0, eps, default_r_grid(g), rho);
    ASSERT_TRUE(single.translation_rho);
    const auto sc = sequence_condition(FunctionFamily(seq), 2.0, eps, rho);
    EXPECT_EQ(sc.rho, *single.translation_rho);
  }
}

TEST(SequenceCondition, NotCertifiableWhenAMemberIsRough) {
  std::mt19937_64 rng(5);
  const Grid g({32}, {0.0}, 1.0 / 32);
  const auto rough = cktest::random_values(g, rng, -10.0, 10.0);
  const auto smooth = GridFunction::zeros(g);
  try {
    sequence_condition(FunctionFamily({rough, smooth, smooth}), 1.0, 0.01, default_rho_grid(g));
    FAIL() << "expected not_certifiable";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_certifiable);
    EXPECT_TRUE(e.is_resolution_verdict());
  }
}
