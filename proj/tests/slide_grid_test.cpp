#include <filesystem>
#include <random>

#include "doctest.h"
#include "her2/error.hpp"
#include "her2/slide_grid.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace her2;

namespace {

SlideImage RandomSlide(std::mt19937_64& rng, int w, int h, Modality m = Modality::kIHC) {
  SlideImage s;
  s.case_id = "case";
  s.modality = m;
  s.raster = oracle::RandomImage(rng, w, h);
  return s;
}

}  // namespace

TEST_SUITE("slide_grid") {

TEST_CASE("grid spec uses ceiling division") {
  CHECK(ComputeGridSpec(700, 700, 512) == GridSpec{512, 2, 2});
  CHECK(ComputeGridSpec(1024, 512, 512) == GridSpec{512, 2, 1});
  CHECK(ComputeGridSpec(1025, 1, 512) == GridSpec{512, 3, 1});
  CHECK(ComputeGridSpec(16, 16, 16).patch_count() == 1);
  CHECK_THROWS_AS(ComputeGridSpec(0, 10, 16), Error);
  CHECK_THROWS_AS(ComputeGridSpec(10, 10, 0), Error);
}

TEST_CASE("700x700 slide at 512 pads the edge tiles with white") {
  std::mt19937_64 rng(1);
  const SlideImage slide = RandomSlide(rng, 700, 700);
  const GridSpec spec = ComputeGridSpec(700, 700, 512);
  const Patch corner = ExtractPatch(slide, spec, {1, 1});
  CHECK(corner.pixels.width() == 512);
  CHECK(corner.pad_right_px == 324);
  CHECK(corner.pad_bottom_px == 324);
  CHECK(corner.content_width() == 188);
  CHECK(corner.pixels.at(187, 187) == slide.raster.at(699, 699));
  CHECK(corner.pixels.at(188, 0) == kWhite);
  CHECK(corner.pixels.at(511, 511) == kWhite);
  const Patch first = ExtractPatch(slide, spec, {0, 0});
  CHECK(first.pad_right_px == 0);
  CHECK(first.pad_bottom_px == 0);
  const Patch right = ExtractPatch(slide, spec, {0, 1});
  CHECK(right.pad_right_px == 324);
  CHECK(right.pad_bottom_px == 0);
}

TEST_CASE("extract then implode reproduces the slide") {
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<int> dim(16, 700);
  for (int i = 0; i < 12; ++i) {
    const int w = dim(rng), h = dim(rng);
    for (int f : {16, 64, 512}) {
      const SlideImage slide = RandomSlide(rng, w, h);
      const GridSpec spec = ComputeGridSpec(w, h, f);
      const PatchGrid grid = ExtractPatches(slide, spec, 3);
      REQUIRE(grid.complete());
      CHECK(grid.size() == static_cast<std::size_t>(((w + f - 1) / f) * ((h + f - 1) / f)));
      const SlideImage back = Implode(grid);
      CHECK(back.raster == slide.raster);
      CHECK(back.case_id == slide.case_id);
      CHECK(back.modality == slide.modality);
    }
  }
}

TEST_CASE("worker count does not change patches") {
  std::mt19937_64 rng(5);
  const SlideImage slide = RandomSlide(rng, 300, 200);
  const GridSpec spec = ComputeGridSpec(300, 200, 64);
  const PatchGrid a = ExtractPatches(slide, spec, 1);
  const PatchGrid b = ExtractPatches(slide, spec, 8);
  for (std::size_t i = 0; i < spec.patch_count(); ++i) {
    CHECK(a.at(CoordAt(spec, i)).pixels == b.at(CoordAt(spec, i)).pixels);
  }
}

TEST_CASE("imploding an incomplete grid names the missing coordinate") {
  std::mt19937_64 rng(9);
  const SlideImage slide = RandomSlide(rng, 64, 64);
  const GridSpec spec = ComputeGridSpec(64, 64, 32);
  std::vector<Patch> patches;
  for (PatchCoord c : {PatchCoord{0, 0}, PatchCoord{0, 1}, PatchCoord{1, 1}}) {
    patches.push_back(ExtractPatch(slide, spec, c));
  }
  const PatchGrid grid(spec, IdentityOf(slide), std::move(patches));
  CHECK_FALSE(grid.complete());
  CHECK(grid.first_missing() == PatchCoord{1, 0});
  try {
    Implode(grid);
    FAIL("expected incomplete-grid");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIncompleteGrid);
    CHECK(std::string(e.what()).find("(1,0)") != std::string::npos);
  }
  CHECK_THROWS_AS(grid.at({1, 0}), Error);
}

TEST_CASE("grid construction rejects duplicates and strays") {
  std::mt19937_64 rng(9);
  const SlideImage slide = RandomSlide(rng, 64, 64);
  const GridSpec spec = ComputeGridSpec(64, 64, 32);
  const Patch p = ExtractPatch(slide, spec, {0, 0});
  CHECK_THROWS_AS(PatchGrid(spec, IdentityOf(slide), {p, p}), Error);
  Patch stray = p;
  stray.coord = {2, 0};
  CHECK_THROWS_AS(PatchGrid(spec, IdentityOf(slide), {stray}), Error);
  CHECK_THROWS_AS(ExtractPatch(slide, spec, {0, 2}), Error);
}

TEST_CASE("patch directory round trip") {
  std::mt19937_64 rng(11);
  SlideImage slide = RandomSlide(rng, 150, 90, Modality::kHE);
  slide.case_id = "C6";
  const GridSpec spec = ComputeGridSpec(150, 90, 64);
  const PatchGrid grid = ExtractPatches(slide, spec);
  const fs::path root = fs::temp_directory_path() / "her2_spill_test";
  fs::remove_all(root);
  const fs::path manifest = WritePatchDirectory(grid, root);
  CHECK(manifest == root / "C6" / "HE" / "manifest.json");
  CHECK(fs::exists(root / "C6" / "HE" / "r1_c2.png"));
  const PatchGrid back = ReadPatchDirectory(manifest);
  CHECK(back.spec() == spec);
  CHECK(back.source().width_px == 150);
  CHECK(back.source().modality == Modality::kHE);
  CHECK(Implode(back).raster == slide.raster);

  fs::remove(root / "C6" / "HE" / "r0_c1.png");
  CHECK_THROWS_AS(ReadPatchDirectory(manifest), Error);
  fs::remove_all(root);
}

TEST_CASE("modality names") {
  CHECK(ModalityName(Modality::kHE) == "HE");
  CHECK(ParseModality("IHC") == Modality::kIHC);
  CHECK_THROWS_AS(ParseModality("MRI"), Error);
  CHECK(PatchFileName({3, 12}) == "r3_c12.png");
  CHECK(ToString(PatchCoord{2, 5}) == "(2,5)");
}

}
