#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "her2/image.hpp"

namespace her2 {

enum class Modality { kHE, kIHC };

std::string_view ModalityName(Modality modality);
Modality ParseModality(std::string_view text);

// A single-modality flat raster with case/region identity.
struct SlideImage {
  std::string case_id;
  std::optional<std::string> region_id;
  Modality modality = Modality::kHE;
  RgbImage raster;
  // Metadata only; tiling is purely pixel based.
  std::optional<double> microns_per_px;

  int width_px() const noexcept { return raster.width(); }
  int height_px() const noexcept { return raster.height(); }
};

struct GridSpec {
  int tile_size_px = 0;
  int cols = 0;
  int rows = 0;

  std::size_t patch_count() const noexcept {
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct PatchCoord {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const PatchCoord&, const PatchCoord&) = default;
};

std::string ToString(PatchCoord coord);

inline bool InBounds(const GridSpec& spec, PatchCoord c) noexcept {
  return c.row >= 0 && c.row < spec.rows && c.col >= 0 && c.col < spec.cols;
}

// Row-major linear index of a coordinate within its grid.
inline std::size_t LinearIndex(const GridSpec& spec, PatchCoord c) noexcept {
  return static_cast<std::size_t>(c.row) * spec.cols + c.col;
}

inline PatchCoord CoordAt(const GridSpec& spec, std::size_t index) noexcept {
  return {static_cast<int>(index / spec.cols), static_cast<int>(index % spec.cols)};
}

struct Patch {
  PatchCoord coord;
  Modality modality = Modality::kHE;
  RgbImage pixels;  // always tile_size_px square
  int pad_right_px = 0;
  int pad_bottom_px = 0;

  int content_width() const noexcept { return pixels.width() - pad_right_px; }
  int content_height() const noexcept { return pixels.height() - pad_bottom_px; }
};

struct SlideIdentity {
  std::string case_id;
  std::optional<std::string> region_id;
  Modality modality = Modality::kHE;
  int width_px = 0;
  int height_px = 0;
  std::optional<double> microns_per_px;
};

SlideIdentity IdentityOf(const SlideImage& slide);

// Immutable patch collection keyed by coordinate. A grid may be built with
// coordinates missing (e.g. from a partially written spill directory); such
// grids report !complete() and fail implosion.
class PatchGrid {
 public:
  PatchGrid(GridSpec spec, SlideIdentity source, std::vector<Patch> patches);

  const GridSpec& spec() const noexcept { return spec_; }
  const SlideIdentity& source() const noexcept { return source_; }

  bool contains(PatchCoord coord) const noexcept;
  bool complete() const noexcept { return present_ == spec_.patch_count(); }
  std::size_t size() const noexcept { return present_; }
  std::optional<PatchCoord> first_missing() const noexcept;

  // Throws kIncompleteGrid naming the coordinate when it is absent.
  const Patch& at(PatchCoord coord) const;

 private:
  GridSpec spec_;
  SlideIdentity source_;
  std::vector<std::optional<Patch>> slots_;
  std::size_t present_ = 0;
};

// Ceiling-division grid: cols = ceil(W/f), rows = ceil(H/f).
GridSpec ComputeGridSpec(int width_px, int height_px, int tile_size_px);

// Cuts the f x f tile at `coord`; tiles overhanging the slide are padded with
// opaque white and the pad extents recorded.
Patch ExtractPatch(const SlideImage& slide, const GridSpec& spec, PatchCoord coord);

PatchGrid ExtractPatches(const SlideImage& slide, const GridSpec& spec, int workers = 1);

// Reassembles a complete grid into the original raster, cropping padding.
SlideImage Implode(const PatchGrid& grid);

// Spill layout: <root>/<case_id>/<modality>/r<row>_c<col>.png plus a
// manifest.json alongside the patches. Returns the manifest path.
std::filesystem::path WritePatchDirectory(const PatchGrid& grid,
                                          const std::filesystem::path& root);
PatchGrid ReadPatchDirectory(const std::filesystem::path& manifest_path);

std::string PatchFileName(PatchCoord coord);

}  // namespace her2
