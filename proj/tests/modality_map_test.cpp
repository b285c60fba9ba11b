#include "doctest.h"
#include "her2/error.hpp"
#include "her2/modality_map.hpp"
#include "oracles.hpp"

using namespace her2;

TEST_SUITE("modality_map") {

TEST_CASE("rounding is half away from zero") {
  CHECK(RoundHalfAway(2.5) == 3);
  CHECK(RoundHalfAway(-2.5) == -3);
  CHECK(RoundHalfAway(0.49) == 0);
  CHECK(RoundHalfAway(-0.5) == -1);
}

TEST_CASE("identity maps each coordinate to itself") {
  const GridSpec spec{512, 4, 3};
  const auto m = ModalityMapping::Identity(spec);
  for (std::size_t i = 0; i < spec.patch_count(); ++i) {
    CHECK(MapCoord(CoordAt(spec, i), m) == CoordAt(spec, i));
  }
  CHECK(VerifyBijection(m).bijective());
  CHECK(Invert(m).kind() == MappingKind::kIdentity);
}

TEST_CASE("shift leaves the grid and is rejected, not clamped") {
  const GridSpec spec{512, 3, 3};
  const auto m = ModalityMapping::AffineGrid(1, 1, 0, 1, spec, spec);
  CHECK(MapCoord({0, 0}, m) == PatchCoord{0, 1});
  try {
    MapCoord({0, 2}, m);
    FAIL("expected mapping-out-of-range");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMappingOutOfRange);
  }
  CHECK_THROWS_AS(MapCoord({3, 0}, m), Error);
  const auto report = VerifyBijection(m);
  CHECK_FALSE(report.injective);
  CHECK_FALSE(report.surjective);
  CHECK(report.out_of_range.size() == 3);
  CHECK(report.unreached.size() == 3);
  CHECK_THROWS_AS(Invert(m), Error);
}

TEST_CASE("zero scale collapses everything onto one cell") {
  const GridSpec spec{512, 2, 2};
  const auto m = ModalityMapping::AffineGrid(0, 0, 1, 1, spec, spec);
  const auto report = VerifyBijection(m);
  REQUIRE(report.collisions.size() == 1);
  CHECK(report.collisions[0].target == PatchCoord{1, 1});
  CHECK(report.collisions[0].sources.size() == 4);
  CHECK(report.unreached.size() == 3);
  try {
    Invert(m);
    FAIL("expected not-invertible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotInvertible);
  }
}

TEST_CASE("verify_bijection agrees with exhaustive set comparison") {
  const GridSpec spec{64, 6, 6};
  int accepted = 0;
  for (double sr : {0.0, 1.0})
    for (double sc : {0.0, 1.0})
      for (int orow = -2; orow <= 2; ++orow)
        for (int ocol = -2; ocol <= 2; ++ocol) {
          CAPTURE(sr);
          CAPTURE(sc);
          CAPTURE(orow);
          CAPTURE(ocol);
          const auto m = ModalityMapping::AffineGrid(sr, sc, orow, ocol, spec, spec);
          const auto report = VerifyBijection(m);
          const auto truth = oracle::BruteForceBijection(sr, sc, orow, ocol, 6, 6, 6, 6);
          CHECK(report.injective == truth.injective);
          CHECK(report.surjective == truth.surjective);
          if (report.bijective()) {
            ++accepted;
            const auto inv = Invert(m);
            for (std::size_t i = 0; i < spec.patch_count(); ++i) {
              const PatchCoord c = CoordAt(spec, i);
              CHECK(MapCoord(MapCoord(c, m), inv) == c);
              CHECK(MapCoord(MapCoord(c, inv), m) == c);
            }
          } else {
            CHECK_THROWS_AS(Invert(m), Error);
          }
        }
  CHECK(accepted == 1);  // only the unit-scale, zero-offset map
}

TEST_CASE("offset between differently sized grids can be a bijection") {
  const GridSpec he{512, 3, 2};
  const GridSpec ihc{512, 3, 2};
  const auto m = ModalityMapping::AffineGrid(1, 1, 0.4, -0.4, he, ihc);
  CHECK(VerifyBijection(m).bijective());
  const auto inv = Invert(m);
  CHECK(MapCoord({1, 2}, inv) == PatchCoord{1, 2});
}

TEST_CASE("mismatched patch counts are rejected") {
  CHECK_THROWS_AS(ModalityMapping::AffineGrid(1, 1, 0, 0, GridSpec{512, 2, 2},
                                              GridSpec{512, 3, 2}),
                  Error);
}

}
