#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "her2/builtin_rules.hpp"
#include "oracles.hpp"

using namespace her2;

TEST_SUITE("builtin_rules") {

TEST_CASE("near-white is every channel above 230") {
  CHECK(rules::IsNearWhite({231, 231, 231}));
  CHECK_FALSE(rules::IsNearWhite({230, 255, 255}));
  CHECK_FALSE(rules::IsNearWhite(fixture::kPink));
}

TEST_CASE("saturation") {
  CHECK(rules::Saturation({0, 0, 0}) == 0.0);
  CHECK(rules::Saturation({200, 100, 50}) == doctest::Approx(0.75));
  CHECK(rules::Saturation({10, 10, 10}) == 0.0);
}

TEST_CASE("purple tissue is tumor, glass and pale tissue are normal") {
  const auto tumor = rules::ClassifyTumor(RgbImage(32, 32, fixture::kPurple));
  CHECK(tumor.label == TumorLabel::kTumor);
  CHECK(tumor.probability(TumorLabel::kTumor) == doctest::Approx(0.99));
  CHECK(rules::ClassifyTumor(RgbImage(32, 32)).label == TumorLabel::kNormal);
  CHECK(rules::ClassifyTumor(RgbImage(32, 32, fixture::kPink)).label == TumorLabel::kNormal);
}

TEST_CASE("dark brown pixel falls in the faint band under the documented thresholds") {
  // (101,67,33): (R-B)/255 = 0.267, inside [0.05, 0.35).
  CHECK(rules::PixelStainLabel({101, 67, 33}) == 2);
  const auto p = rules::ClassifyStain(RgbImage(16, 16, her2::Rgb{101, 67, 33}));
  CHECK(p.label == StainLabel::kFaint);
}

TEST_CASE("stain bands") {
  CHECK(rules::PixelStainLabel(fixture::kBrown) == 4);
  CHECK(rules::PixelStainLabel(fixture::kTan) == 2);
  CHECK(rules::PixelStainLabel(fixture::kBlue) == 0);
  CHECK(rules::PixelStainLabel({120, 110, 100}) == 2);  // 20/255 = 0.078
  CHECK(rules::PixelStainLabel({110, 108, 105}) == 1);  // 5/255 = 0.020
  CHECK(rules::PixelStainLabel({200, 150, 80}) == 3);   // 120/255 = 0.471
  CHECK(rules::PixelStainLabel(kWhite) == 0);
  CHECK(rules::PixelStainLabel({100, 100, 50}) == 0);  // R == G fails the order test
}

TEST_CASE("segmenter agrees with the per-pixel oracle") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 5; ++i) {
    const RgbImage img = oracle::RandomImage(rng, 128, 96);
    const LabelMap labels = rules::Segment(img);
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x) {
        REQUIRE(labels.at(x, y) == oracle::StainLabel(img.at(x, y)));
      }
  }
  // Band edges, exhaustively over R-B with G in between.
  for (int r = 1; r < 256; ++r)
    for (int b = 0; b + 1 < r; ++b) {
      const Rgb c{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(b + 1),
                  static_cast<std::uint8_t>(b)};
      REQUIRE(rules::PixelStainLabel(c) == oracle::StainLabel(c));
    }
}

TEST_CASE("stain class is the histogram argmax, ties high, blank is no-stain") {
  RgbImage img(10, 10);
  CHECK(rules::ClassifyStain(img).label == StainLabel::kNoStain);
  img.FillRect(0, 0, 5, 10, fixture::kTan);    // label 2
  img.FillRect(5, 0, 5, 10, fixture::kBrown);  // label 4
  const auto p = rules::ClassifyStain(img);
  CHECK(p.label == StainLabel::kStrong);
  CHECK(p.probability(StainLabel::kStrong) == doctest::Approx(0.97));
  CHECK(p.probability(StainLabel::kFaint) == doctest::Approx(0.01));
}

}
