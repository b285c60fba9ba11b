#include "her2/slide_grid.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include "json.hpp"

#include "her2/error.hpp"
#include "her2/parallel.hpp"

namespace her2 {

using ordered_json = nlohmann::ordered_json;

std::string_view ModalityName(Modality modality) {
  return modality == Modality::kHE ? "HE" : "IHC";
}

Modality ParseModality(std::string_view text) {
  if (text == "HE") return Modality::kHE;
  if (text == "IHC") return Modality::kIHC;
  Fail(ErrorKind::kInvalidArgument, "unknown modality '" + std::string(text) + "'");
}

std::string ToString(PatchCoord coord) {
  return "(" + std::to_string(coord.row) + "," + std::to_string(coord.col) + ")";
}

std::string PatchFileName(PatchCoord coord) {
  return "r" + std::to_string(coord.row) + "_c" + std::to_string(coord.col) + ".png";
}

SlideIdentity IdentityOf(const SlideImage& slide) {
  return {slide.case_id,    slide.region_id,  slide.modality,
          slide.width_px(), slide.height_px(), slide.microns_per_px};
}

PatchGrid::PatchGrid(GridSpec spec, SlideIdentity source, std::vector<Patch> patches)
    : spec_(spec), source_(std::move(source)), slots_(spec.patch_count()) {
  for (Patch& patch : patches) {
    if (!InBounds(spec_, patch.coord)) {
      Fail(ErrorKind::kInvalidArgument,
           "patch coordinate " + ToString(patch.coord) + " outside grid");
    }
    if (patch.pixels.width() != spec_.tile_size_px ||
        patch.pixels.height() != spec_.tile_size_px) {
      Fail(ErrorKind::kInvalidArgument,
           "patch " + ToString(patch.coord) + " is not tile_size_px square");
    }
    auto& slot = slots_[LinearIndex(spec_, patch.coord)];
    if (slot) {
      Fail(ErrorKind::kInvalidArgument,
           "duplicate patch at " + ToString(patch.coord));
    }
    slot = std::move(patch);
    ++present_;
  }
}

bool PatchGrid::contains(PatchCoord coord) const noexcept {
  return InBounds(spec_, coord) && slots_[LinearIndex(spec_, coord)].has_value();
}

std::optional<PatchCoord> PatchGrid::first_missing() const noexcept {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (!slots_[i]) return CoordAt(spec_, i);
  }
  return std::nullopt;
}

const Patch& PatchGrid::at(PatchCoord coord) const {
  if (!contains(coord)) {
    Fail(ErrorKind::kIncompleteGrid, "grid has no patch at " + ToString(coord));
  }
  return *slots_[LinearIndex(spec_, coord)];
}

GridSpec ComputeGridSpec(int width_px, int height_px, int tile_size_px) {
  if (width_px < 1 || height_px < 1 || tile_size_px < 1) {
    Fail(ErrorKind::kInvalidArgument,
         "grid dimensions must be >= 1 (got " + std::to_string(width_px) + "x" +
             std::to_string(height_px) + ", tile " + std::to_string(tile_size_px) +
             ")");
  }
  return {tile_size_px, (width_px + tile_size_px - 1) / tile_size_px,
          (height_px + tile_size_px - 1) / tile_size_px};
}

namespace {

void CheckSpecMatches(const GridSpec& spec, int width_px, int height_px) {
  if (spec.tile_size_px < 1 ||
      ComputeGridSpec(width_px, height_px, spec.tile_size_px) != spec) {
    Fail(ErrorKind::kInvalidArgument,
         "grid spec does not match slide dimensions " + std::to_string(width_px) +
             "x" + std::to_string(height_px));
  }
}

}  // namespace

Patch ExtractPatch(const SlideImage& slide, const GridSpec& spec, PatchCoord coord) {
  if (!InBounds(spec, coord)) {
    Fail(ErrorKind::kInvalidArgument, "coordinate " + ToString(coord) + " outside grid");
  }
  const int f = spec.tile_size_px;
  const int x0 = coord.col * f;
  const int y0 = coord.row * f;
  const int w = std::min(f, slide.width_px() - x0);
  const int h = std::min(f, slide.height_px() - y0);

  Patch patch{coord, slide.modality, RgbImage(f, f, kWhite), f - w, f - h};
  const std::size_t bytes = static_cast<std::size_t>(w) * 3;
  for (int y = 0; y < h; ++y) {
    std::memcpy(patch.pixels.row(y).data(),
                slide.raster.row(y0 + y).data() + static_cast<std::size_t>(x0) * 3,
                bytes);
  }
  return patch;
}

PatchGrid ExtractPatches(const SlideImage& slide, const GridSpec& spec, int workers) {
  CheckSpecMatches(spec, slide.width_px(), slide.height_px());
  std::vector<Patch> patches(spec.patch_count());
  ParallelFor(patches.size(), workers, [&](std::size_t i) {
    patches[i] = ExtractPatch(slide, spec, CoordAt(spec, i));
  });
  return PatchGrid(spec, IdentityOf(slide), std::move(patches));
}

SlideImage Implode(const PatchGrid& grid) {
  const SlideIdentity& src = grid.source();
  CheckSpecMatches(grid.spec(), src.width_px, src.height_px);
  if (auto missing = grid.first_missing()) {
    Fail(ErrorKind::kIncompleteGrid,
         "cannot implode: grid has no patch at " + ToString(*missing));
  }

  const int f = grid.spec().tile_size_px;
  RgbImage raster(src.width_px, src.height_px, kWhite);
  for (int row = 0; row < grid.spec().rows; ++row) {
    for (int col = 0; col < grid.spec().cols; ++col) {
      const Patch& patch = grid.at({row, col});
      const int w = std::min(f, src.width_px - col * f);
      const int h = std::min(f, src.height_px - row * f);
      const std::size_t bytes = static_cast<std::size_t>(w) * 3;
      for (int y = 0; y < h; ++y) {
        std::memcpy(raster.row(row * f + y).data() + static_cast<std::size_t>(col) * f * 3,
                    patch.pixels.row(y).data(), bytes);
      }
    }
  }
  return {src.case_id, src.region_id, src.modality, std::move(raster), src.microns_per_px};
}

std::filesystem::path WritePatchDirectory(const PatchGrid& grid,
                                          const std::filesystem::path& root) {
  const SlideIdentity& src = grid.source();
  const std::filesystem::path dir =
      root / src.case_id / std::string(ModalityName(src.modality));
  std::filesystem::create_directories(dir);

  ordered_json manifest;
  manifest["case_id"] = src.case_id;
  manifest["modality"] = ModalityName(src.modality);
  manifest["width_px"] = src.width_px;
  manifest["height_px"] = src.height_px;
  manifest["tile_size_px"] = grid.spec().tile_size_px;
  manifest["rows"] = grid.spec().rows;
  manifest["cols"] = grid.spec().cols;
  manifest["patches"] = ordered_json::array();
  for (std::size_t i = 0; i < grid.spec().patch_count(); ++i) {
    const PatchCoord coord = CoordAt(grid.spec(), i);
    if (!grid.contains(coord)) continue;
    const Patch& patch = grid.at(coord);
    WriteRgbPng(dir / PatchFileName(coord), patch.pixels);
    manifest["patches"].push_back(ordered_json{
        {"coord", {{"row", coord.row}, {"col", coord.col}}},
        {"file", PatchFileName(coord)},
        {"pad_right_px", patch.pad_right_px},
        {"pad_bottom_px", patch.pad_bottom_px}});
  }

  const auto manifest_path = dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + manifest_path.string());
  out << manifest.dump(2) << '\n';
  return manifest_path;
}

PatchGrid ReadPatchDirectory(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot read manifest " + manifest_path.string());
  ordered_json manifest;
  try {
    manifest = ordered_json::parse(in);
    const GridSpec spec{manifest.at("tile_size_px").get<int>(),
                        manifest.at("cols").get<int>(), manifest.at("rows").get<int>()};
    SlideIdentity source;
    source.case_id = manifest.at("case_id").get<std::string>();
    source.modality = ParseModality(manifest.at("modality").get<std::string>());
    source.width_px = manifest.at("width_px").get<int>();
    source.height_px = manifest.at("height_px").get<int>();
    CheckSpecMatches(spec, source.width_px, source.height_px);

    const auto dir = manifest_path.parent_path();
    std::vector<Patch> patches;
    for (const auto& entry : manifest.at("patches")) {
      Patch patch;
      patch.coord = {entry.at("coord").at("row").get<int>(),
                     entry.at("coord").at("col").get<int>()};
      patch.modality = source.modality;
      patch.pixels = ReadRgbImage(dir / entry.at("file").get<std::string>());
      patch.pad_right_px = entry.at("pad_right_px").get<int>();
      patch.pad_bottom_px = entry.at("pad_bottom_px").get<int>();
      patches.push_back(std::move(patch));
    }
    return PatchGrid(spec, std::move(source), std::move(patches));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kIo, "malformed manifest " + manifest_path.string() + ": " + e.what());
  }
}

}  // namespace her2
