#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "../common/oracles.hpp"
#include "qdinpaint/losses.hpp"

using namespace qdi;

namespace {

const std::vector<std::array<int, 3>> kShapes{{4, 8, 8}, {6, 4, 4}, {8, 2, 2}};

}  // namespace

TEST(Compose, Extremes) {
  std::mt19937_64 g(1);
  const RgbImage out = oracle::random_image(g, 5, 4), gt = oracle::random_image(g, 5, 4);
  EXPECT_EQ(compose(out, gt, BinaryMask(5, 4)), gt);
  EXPECT_EQ(compose(out, gt, BinaryMask(5, 4, BinaryMask::kHole)), out);
  EXPECT_THROW(compose(out, gt, BinaryMask(4, 4)), Error);
}

TEST(Compose, TwoByTwoByHand) {
  const RgbImage out = RgbImage::from_data(2, 2, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 0.0, 0.5});
  const RgbImage gt(2, 2, 0.25);
  BinaryMask m(2, 2);
  m.set(1, 0, BinaryMask::kHole);
  const RgbImage c = compose(out, gt, m);
  EXPECT_EQ(c.at(0, 0, 0), 0.25);
  EXPECT_EQ(c.at(1, 0, 0), 0.4);
  EXPECT_EQ(c.at(1, 0, 2), 0.6);
  EXPECT_EQ(c.at(1, 1, 1), 0.25);
}

TEST(Compose, Idempotent) {
  std::mt19937_64 g(2);
  const RgbImage out = oracle::random_image(g, 9, 9), gt = oracle::random_image(g, 9, 9);
  const BinaryMask m = oracle::random_mask(g, 9, 9, 0.4);
  const RgbImage once = compose(out, gt, m);
  EXPECT_EQ(compose(once, gt, m), once);
}

TEST(MaskedL1, Cases) {
  std::mt19937_64 g(3);
  const RgbImage a = oracle::random_image(g, 6, 6), b = oracle::random_image(g, 6, 6);
  const BinaryMask m = oracle::random_mask(g, 6, 6, 0.5);
  EXPECT_EQ(masked_l1(a, a, m, Region::Hole), 0.0);
  EXPECT_EQ(masked_l1(a, a, m, Region::Valid), 0.0);
  EXPECT_EQ(masked_l1(a, b, BinaryMask(6, 6), Region::Hole), 0.0);

  RgbImage out(2, 2, 0.2);
  const RgbImage gt(2, 2, 0.2);
  out.at(1, 1, 2) = 0.8;
  BinaryMask hole(2, 2);
  hole.set(1, 1, BinaryMask::kHole);
  EXPECT_NEAR(masked_l1(out, gt, hole, Region::Hole), 0.05, 1e-15);
  EXPECT_EQ(masked_l1(out, gt, hole, Region::Valid), 0.0);
}

TEST(MaskedL1, RegionsAddUp) {
  std::mt19937_64 g(4);
  for (int i = 0; i < 50; ++i) {
    const RgbImage a = oracle::random_image(g, 13, 11), b = oracle::random_image(g, 13, 11);
    const BinaryMask m = oracle::random_mask(g, 13, 11, 0.3);
    const double all = masked_l1(a, b, BinaryMask(13, 11), Region::Valid);
    EXPECT_NEAR(masked_l1(a, b, m, Region::Hole) + masked_l1(a, b, m, Region::Valid), all, 1e-12);
  }
}

TEST(Gram, ClosedFormsAndSymmetry) {
  for (double v : gram(FeatureMap(3, 4, 4))) EXPECT_EQ(v, 0.0);
  const auto g1 = gram(FeatureMap(1, 5, 7, 0.6));
  ASSERT_EQ(g1.size(), 1u);
  EXPECT_NEAR(g1[0], 0.36, 1e-15);

  std::mt19937_64 g(5);
  const FeatureMap f = oracle::random_stack(g, {{3, 4, 4}})[0];
  const auto got = gram(f), want = oracle::naive_gram(f);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  for (int i = 0; i < 3; ++i) {
    EXPECT_GE(got[i * 3 + i], 0.0);
    for (int j = 0; j < 3; ++j) EXPECT_EQ(got[i * 3 + j], got[j * 3 + i]);
  }
}

TEST(Perceptual, Cases) {
  std::mt19937_64 g(6);
  const auto a = oracle::random_stack(g, kShapes), b = oracle::random_stack(g, kShapes);
  EXPECT_EQ(perceptual_loss(a, a), 0.0);
  FeatureMap x(2, 3, 3, 1.0), y(2, 3, 3, 1.25);
  EXPECT_EQ(perceptual_loss({x}, {y}), 0.25);
  EXPECT_NEAR(perceptual_loss(a, b), oracle::naive_perceptual(a, b), 1e-12);
  EXPECT_THROW(perceptual_loss(a, {a[0]}), Error);
  const FeatureStack bad{a[0], a[1], FeatureMap(8, 2, 3)};
  EXPECT_THROW(perceptual_loss(a, bad), Error);
}

TEST(Style, Cases) {
  std::mt19937_64 g(7);
  const auto a = oracle::random_stack(g, kShapes), b = oracle::random_stack(g, kShapes);
  EXPECT_EQ(style_loss(a, a), 0.0);
  EXPECT_EQ(style_loss({FeatureMap(2, 2, 2)}, {FeatureMap(2, 2, 2)}), 0.0);
  EXPECT_NEAR(style_loss(a, b), oracle::naive_style(a, b), 1e-12);
  EXPECT_THROW(style_loss(a, {a[0]}), Error);
}

TEST(Dilation, Counts) {
  EXPECT_EQ(dilated_hole_region(BinaryMask(6, 6)).count(), 0u);
  BinaryMask inner(6, 6);
  inner.set(2, 3, BinaryMask::kHole);
  EXPECT_EQ(dilated_hole_region(inner).count(), 9u);
  BinaryMask corner(6, 6);
  corner.set(5, 0, BinaryMask::kHole);
  const RegionMask r = dilated_hole_region(corner);
  EXPECT_EQ(r.count(), 4u);
  EXPECT_TRUE(r.at(4, 1));
  EXPECT_FALSE(r.at(3, 0));
}

TEST(Tv, Cases) {
  const RgbImage flat(5, 5, 0.3);
  BinaryMask m(5, 5);
  m.set(2, 2, BinaryMask::kHole);
  EXPECT_EQ(tv_loss(flat, dilated_hole_region(m)), 0.0);
  std::mt19937_64 g(8);
  EXPECT_EQ(tv_loss(oracle::random_image(g, 5, 5), dilated_hole_region(BinaryMask(5, 5))), 0.0);

  // 3x3, right column 1 and the rest 0, whole image in the region: 12
  // neighbor differences per channel, 3 of them cross the step.
  RgbImage step(3, 3, 0.0);
  for (int y = 0; y < 3; ++y)
    for (int c = 0; c < 3; ++c) step.at(2, y, c) = 1.0;
  BinaryMask center(3, 3);
  center.set(1, 1, BinaryMask::kHole);
  EXPECT_DOUBLE_EQ(tv_loss(step, dilated_hole_region(center)), 0.25);
  EXPECT_THROW(tv_loss(step, dilated_hole_region(BinaryMask(4, 3))), Error);
}

TEST(Total, Weights) {
  EXPECT_EQ(total_loss(LossTerms{}), 0.0);
  EXPECT_NEAR(total_loss(LossTerms{1, 1, 1, 1, 1, 1, 1}), 247.2, 1e-9);
  LossTerms half;
  half.l_hole = 0.5;
  EXPECT_EQ(total_loss(half), 3.0);
  LossTerms bad;
  bad.l_tv = NAN;
  EXPECT_THROW(total_loss(bad), Error);
}

TEST(Terms, MatchNaiveOraclesOnRandomInputs) {
  std::mt19937_64 g(9);
  for (int i = 0; i < 100; ++i) {
    const RgbImage out = oracle::random_image(g, 8, 8), gt = oracle::random_image(g, 8, 8);
    const BinaryMask m = oracle::random_mask(g, 8, 8, 0.35);
    const auto fo = oracle::random_stack(g, kShapes), fc = oracle::random_stack(g, kShapes),
               fg = oracle::random_stack(g, kShapes);
    const LossTerms t = compute_loss_terms(out, gt, m, fo, fc, fg);
    EXPECT_TRUE(oracle::rel_close(t.l_valid, oracle::naive_masked_l1(out, gt, m, false), 1e-9));
    EXPECT_TRUE(oracle::rel_close(t.l_hole, oracle::naive_masked_l1(out, gt, m, true), 1e-9));
    EXPECT_TRUE(oracle::rel_close(t.l_tv, oracle::naive_tv(oracle::naive_compose(out, gt, m), m), 1e-9));
    EXPECT_TRUE(oracle::rel_close(t.l_perc_out, oracle::naive_perceptual(fo, fg), 1e-9));
    EXPECT_TRUE(oracle::rel_close(t.l_perc_comp, oracle::naive_perceptual(fc, fg), 1e-9));
    EXPECT_TRUE(oracle::rel_close(t.l_style_out, oracle::naive_style(fo, fg), 1e-9));
    EXPECT_TRUE(oracle::rel_close(t.l_style_comp, oracle::naive_style(fc, fg), 1e-9));
  }
}

TEST(Terms, ZeroAtTruth) {
  std::mt19937_64 g(10);
  const RgbImage gt = oracle::random_image(g, 8, 8);
  const BinaryMask m = oracle::random_mask(g, 8, 8, 0.3);
  const auto f = oracle::random_stack(g, kShapes);
  const LossTerms t = compute_loss_terms(gt, gt, m, f, f, f);
  EXPECT_EQ(t.l_valid, 0.0);
  EXPECT_EQ(t.l_hole, 0.0);
  EXPECT_EQ(t.l_perc_out, 0.0);
  EXPECT_EQ(t.l_perc_comp, 0.0);
  EXPECT_EQ(t.l_style_out, 0.0);
  EXPECT_EQ(t.l_style_comp, 0.0);
  // TV compares no two images; it vanishes only on a smooth ground truth.
  EXPECT_GE(t.l_tv, 0.0);
  const LossTerms flat = compute_loss_terms(RgbImage(8, 8, 0.5), RgbImage(8, 8, 0.5), m, f, f, f);
  EXPECT_EQ(total_loss(flat), 0.0);
}
