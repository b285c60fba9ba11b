#include "her2/run_config.hpp"

#include <fstream>
#include <sstream>

#include "her2/error.hpp"
#include "toml.hpp"

namespace her2 {

ModalityMapping MappingParams::Resolve(const GridSpec& he_spec,
                                       const GridSpec& ihc_spec) const {
  if (kind == MappingKind::kIdentity) {
    if (he_spec != ihc_spec) {
      Fail(ErrorKind::kNotInvertible,
           "identity mapping requires both slides to tile to the same grid");
    }
    return ModalityMapping::Identity(he_spec);
  }
  if (he_spec.patch_count() != ihc_spec.patch_count()) {
    Fail(ErrorKind::kNotInvertible, "H&E and IHC grids have different patch counts");
  }
  return ModalityMapping::AffineGrid(scale_row, scale_col, offset_row, offset_col,
                                     he_spec, ihc_spec);
}

void RunConfig::Validate() const {
  if (tile_size_px < 16) Fail(ErrorKind::kInvalidArgument, "tile_size_px must be >= 16");
  if (workers < 1) Fail(ErrorKind::kInvalidArgument, "workers must be >= 1");
  bindings.tumor.Validate();
  bindings.stain.Validate();
  bindings.segmenter.Validate();
  for (const auto& path : {he_slide_path, ihc_slide_path}) {
    if (path.empty() || !std::filesystem::exists(path)) {
      Fail(ErrorKind::kIo, "slide not found: " + path.string());
    }
  }
}

namespace {

std::pair<double, double> ReadPair(toml::node_view<toml::node> node,
                                   std::string_view key, std::pair<double, double> fallback) {
  if (!node) return fallback;
  if (auto v = node.value<double>()) return {*v, *v};
  if (const auto* arr = node.as_array(); arr && arr->size() == 2) {
    auto a = (*arr)[0].value<double>();
    auto b = (*arr)[1].value<double>();
    if (a && b) return {*a, *b};
  }
  Fail(ErrorKind::kInvalidArgument,
       "mapping." + std::string(key) + " must be a number or [row, col]");
}

void ReadBinding(const toml::table& root, std::string_view key, ModelBinding& binding) {
  const auto node = root["models"][key];
  if (!node) return;
  if (!node.is_table()) {
    Fail(ErrorKind::kInvalidArgument, "models." + std::string(key) + " must be a table");
  }
  if (auto backend = node["backend"].value<std::string>()) {
    if (*backend == "builtin") binding.backend = Backend::kBuiltinRule;
    else if (*backend == "sidecar") binding.backend = Backend::kSidecar;
    else Fail(ErrorKind::kInvalidArgument, "unknown backend '" + *backend + "'");
  }
  if (auto size = node["input_size_px"].value<int64_t>()) {
    binding.input_size_px = static_cast<int>(*size);
  }
  if (auto cmd = node["sidecar_command"].value<std::string>()) binding.sidecar_command = *cmd;
}

}  // namespace

RunConfig ParseRunConfig(std::string_view toml_text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "config line " << e.source().begin.line << ": " << e.description();
    Fail(ErrorKind::kInvalidArgument, os.str());
  }

  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };

  RunConfig config;
  auto required_path = [&](const char* key) {
    const auto v = root[key].value<std::string>();
    if (!v) Fail(ErrorKind::kInvalidArgument, std::string("config needs a string '") + key + "'");
    return resolve(*v);
  };
  config.he_slide_path = required_path("he_slide");
  config.ihc_slide_path = required_path("ihc_slide");
  config.case_id = root["case_id"].value_or(std::string());
  config.tile_size_px = static_cast<int>(root["tile_size_px"].value_or(int64_t{512}));
  config.workers = static_cast<int>(root["workers"].value_or(int64_t{1}));
  if (auto v = root["output_dir"].value<std::string>()) config.output_dir = resolve(*v);
  if (auto v = root["scoring_mode"].value<std::string>()) {
    config.scoring_mode = ParseScoringMode(*v);
  }

  if (const auto mapping = root["mapping"]) {
    const std::string kind = mapping["kind"].value_or(std::string("identity"));
    if (kind == "identity") {
      config.mapping.kind = MappingKind::kIdentity;
    } else if (kind == "affine" || kind == "affine_grid") {
      config.mapping.kind = MappingKind::kAffineGrid;
    } else {
      Fail(ErrorKind::kInvalidArgument, "unknown mapping kind '" + kind + "'");
    }
    std::tie(config.mapping.scale_row, config.mapping.scale_col) =
        ReadPair(mapping["scale"], "scale", {1.0, 1.0});
    std::tie(config.mapping.offset_row, config.mapping.offset_col) =
        ReadPair(mapping["offset"], "offset", {0.0, 0.0});
  }

  ReadBinding(root, "tumor", config.bindings.tumor);
  ReadBinding(root, "stain", config.bindings.stain);
  ReadBinding(root, "segment", config.bindings.segmenter);
  return config;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseRunConfig(ss.str(), path.parent_path());
}

}  // namespace her2
