#include "her2/modality_map.hpp"

#include <cmath>

#include "her2/error.hpp"

namespace her2 {

ModalityMapping::ModalityMapping(MappingKind kind, double scale_row, double scale_col,
                                 double offset_row, double offset_col, GridSpec he_spec,
                                 GridSpec ihc_spec)
    : kind_(kind),
      scale_row_(scale_row),
      scale_col_(scale_col),
      offset_row_(offset_row),
      offset_col_(offset_col),
      he_spec_(he_spec),
      ihc_spec_(ihc_spec) {
  if (he_spec.rows < 1 || he_spec.cols < 1 || ihc_spec.rows < 1 || ihc_spec.cols < 1) {
    Fail(ErrorKind::kInvalidArgument, "mapping grids must be non-empty");
  }
  if (he_spec.patch_count() != ihc_spec.patch_count()) {
    Fail(ErrorKind::kInvalidArgument,
         "H&E and IHC grids must have equal patch counts for a bijection");
  }
  if (!std::isfinite(scale_row) || !std::isfinite(scale_col) ||
      !std::isfinite(offset_row) || !std::isfinite(offset_col)) {
    Fail(ErrorKind::kInvalidArgument, "mapping parameters must be finite");
  }
}

ModalityMapping ModalityMapping::Identity(const GridSpec& spec) {
  return ModalityMapping(MappingKind::kIdentity, 1, 1, 0, 0, spec, spec);
}

ModalityMapping ModalityMapping::AffineGrid(double scale_row, double scale_col,
                                            double offset_row, double offset_col,
                                            const GridSpec& he_spec,
                                            const GridSpec& ihc_spec) {
  return ModalityMapping(MappingKind::kAffineGrid, scale_row, scale_col, offset_row,
                         offset_col, he_spec, ihc_spec);
}

int RoundHalfAway(double value) { return static_cast<int>(std::round(value)); }

namespace {

PatchCoord Apply(PatchCoord c, const ModalityMapping& m) {
  if (m.kind() == MappingKind::kIdentity) return c;
  return {RoundHalfAway(m.scale_row() * c.row + m.offset_row()),
          RoundHalfAway(m.scale_col() * c.col + m.offset_col())};
}

}  // namespace

PatchCoord MapCoord(PatchCoord coord, const ModalityMapping& mapping) {
  if (!InBounds(mapping.he_spec(), coord)) {
    Fail(ErrorKind::kInvalidArgument,
         "coordinate " + ToString(coord) + " outside the H&E grid");
  }
  const PatchCoord out = Apply(coord, mapping);
  if (!InBounds(mapping.ihc_spec(), out)) {
    Fail(ErrorKind::kMappingOutOfRange,
         "coordinate " + ToString(coord) + " maps to " + ToString(out) +
             ", outside the IHC grid");
  }
  return out;
}

BijectionReport VerifyBijection(const ModalityMapping& mapping) {
  const GridSpec& he = mapping.he_spec();
  const GridSpec& ihc = mapping.ihc_spec();

  BijectionReport report;
  std::vector<std::vector<PatchCoord>> preimages(ihc.patch_count());
  for (std::size_t i = 0; i < he.patch_count(); ++i) {
    const PatchCoord src = CoordAt(he, i);
    const PatchCoord dst = Apply(src, mapping);
    if (!InBounds(ihc, dst)) {
      report.out_of_range.push_back(src);
      continue;
    }
    preimages[LinearIndex(ihc, dst)].push_back(src);
  }
  for (std::size_t j = 0; j < preimages.size(); ++j) {
    if (preimages[j].empty()) {
      report.unreached.push_back(CoordAt(ihc, j));
    } else if (preimages[j].size() > 1) {
      report.collisions.push_back({CoordAt(ihc, j), preimages[j]});
    }
  }
  report.injective = report.collisions.empty() && report.out_of_range.empty();
  report.surjective = report.unreached.empty();
  return report;
}

ModalityMapping Invert(const ModalityMapping& mapping) {
  if (!VerifyBijection(mapping).bijective()) {
    Fail(ErrorKind::kNotInvertible, "mapping is not a bijection between the grids");
  }
  if (mapping.kind() == MappingKind::kIdentity) return mapping;

  // A zero scale can only be bijective along an axis of length one, where the
  // inverse is the constant 0.
  auto inverse_axis = [](double scale, double offset) -> std::pair<double, double> {
    if (scale == 0.0) return {0.0, 0.0};
    return {1.0 / scale, -offset / scale};
  };
  const auto [sr, orow] = inverse_axis(mapping.scale_row(), mapping.offset_row());
  const auto [sc, ocol] = inverse_axis(mapping.scale_col(), mapping.offset_col());
  ModalityMapping inverse = ModalityMapping::AffineGrid(sr, sc, orow, ocol,
                                                        mapping.ihc_spec(),
                                                        mapping.he_spec());

  for (std::size_t i = 0; i < mapping.he_spec().patch_count(); ++i) {
    const PatchCoord c = CoordAt(mapping.he_spec(), i);
    const PatchCoord back = Apply(Apply(c, mapping), inverse);
    if (back != c) {
      Fail(ErrorKind::kNotInvertible,
           "affine inverse does not reproduce " + ToString(c) +
               " under grid rounding");
    }
  }
  return inverse;
}

}  // namespace her2
