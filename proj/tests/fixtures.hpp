// Synthetic slide pairs shared by the pipeline tests and the acceptance run.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "her2/slide_grid.hpp"

namespace fixture {

inline constexpr her2::Rgb kPurple{150, 60, 170};   // saturated H&E tissue
inline constexpr her2::Rgb kPink{235, 200, 225};    // pale, near-white H&E
inline constexpr her2::Rgb kBrown{200, 100, 20};    // (R-B)/255 = 0.706 -> label 4
inline constexpr her2::Rgb kTan{180, 150, 120};     // (R-B)/255 = 0.235 -> label 2
inline constexpr her2::Rgb kBlue{90, 110, 200};     // hematoxylin only -> label 0

struct SlidePair {
  her2::SlideImage he;
  her2::SlideImage ihc;
};

// 4x4 grid of `tile` px tiles. Tumor H&E at the diagonal-ish cells
// (0,0), (1,2), (2,1), (3,3) paired with strong-stain IHC; a tumor cell at
// (0,3) with faint stain; everything else blank glass.
inline SlidePair PlantedCase(int tile = 64) {
  const int side = 4 * tile;
  SlidePair p;
  p.he.case_id = p.ihc.case_id = "planted";
  p.he.modality = her2::Modality::kHE;
  p.ihc.modality = her2::Modality::kIHC;
  p.he.raster = her2::RgbImage(side, side);
  p.ihc.raster = her2::RgbImage(side, side);
  const std::vector<std::pair<int, int>> strong{{0, 0}, {1, 2}, {2, 1}, {3, 3}};
  for (auto [r, c] : strong) {
    p.he.raster.FillRect(c * tile, r * tile, tile, tile, kPurple);
    p.ihc.raster.FillRect(c * tile, r * tile, tile, tile, kBrown);
  }
  p.he.raster.FillRect(3 * tile, 0, tile, tile, kPurple);
  p.ihc.raster.FillRect(3 * tile, 0, tile, tile, kTan);
  // Half-stained tile: brown IHC but the H&E says normal, so it scores 0.
  p.ihc.raster.FillRect(tile, 3 * tile, tile / 2, tile, kBrown);
  p.he.raster.FillRect(tile, 3 * tile, tile, tile, kPink);
  return p;
}

}  // namespace fixture
