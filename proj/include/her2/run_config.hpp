#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "her2/model_gateway.hpp"
#include "her2/pipeline.hpp"

namespace her2 {

// Mapping parameters as declared in a run config; resolved against the two
// slide grids once the slides are loaded.
struct MappingParams {
  MappingKind kind = MappingKind::kIdentity;
  double scale_row = 1.0;
  double scale_col = 1.0;
  double offset_row = 0.0;
  double offset_col = 0.0;

  ModalityMapping Resolve(const GridSpec& he_spec, const GridSpec& ihc_spec) const;
};

struct RunConfig {
  std::filesystem::path he_slide_path;
  std::filesystem::path ihc_slide_path;
  std::string case_id;  // defaults to the IHC file stem
  int tile_size_px = 512;
  MappingParams mapping;
  ModelBindings bindings;
  ScoringMode scoring_mode = ScoringMode::kFourWay;
  std::filesystem::path output_dir = "out";
  int workers = 1;

  // Throws kInvalidArgument for tile_size_px < 16, workers < 1 or bad
  // bindings, and kIo when a slide path does not exist.
  void Validate() const;
};

// TOML layout:
//   he_slide = "he.png"            # relative paths resolve against the file
//   ihc_slide = "ihc.png"
//   case_id = "C6"
//   tile_size_px = 512
//   scoring_mode = "fourway"       # or "binary"
//   output_dir = "out"
//   workers = 4
//   [mapping]
//   kind = "identity"              # or "affine"
//   scale = 1.0                    # or [row, col]
//   offset = [0, 0]
//   [models.tumor]                 # also models.stain, models.segment
//   backend = "builtin"            # or "sidecar"
//   input_size_px = 244
//   sidecar_command = "her2-sidecar --roles tumor --rule"
RunConfig LoadRunConfig(const std::filesystem::path& path);
RunConfig ParseRunConfig(std::string_view toml_text,
                         const std::filesystem::path& base_dir = {});

}  // namespace her2
