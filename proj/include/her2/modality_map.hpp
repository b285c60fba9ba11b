#pragma once

#include <vector>

#include "her2/slide_grid.hpp"

namespace her2 {

enum class MappingKind { kIdentity, kAffineGrid };

// Pairs each H&E grid coordinate with an IHC grid coordinate. Registration
// between the two sections is a run input; this type only carries the
// coordinate transform and the two grids it connects.
class ModalityMapping {
 public:
  static ModalityMapping Identity(const GridSpec& spec);
  static ModalityMapping AffineGrid(double scale_row, double scale_col,
                                    double offset_row, double offset_col,
                                    const GridSpec& he_spec, const GridSpec& ihc_spec);

  MappingKind kind() const noexcept { return kind_; }
  double scale_row() const noexcept { return scale_row_; }
  double scale_col() const noexcept { return scale_col_; }
  double offset_row() const noexcept { return offset_row_; }
  double offset_col() const noexcept { return offset_col_; }
  const GridSpec& he_spec() const noexcept { return he_spec_; }
  const GridSpec& ihc_spec() const noexcept { return ihc_spec_; }

 private:
  ModalityMapping(MappingKind kind, double scale_row, double scale_col,
                  double offset_row, double offset_col, GridSpec he_spec,
                  GridSpec ihc_spec);

  MappingKind kind_;
  double scale_row_;
  double scale_col_;
  double offset_row_;
  double offset_col_;
  GridSpec he_spec_;
  GridSpec ihc_spec_;
};

// Round half away from zero.
int RoundHalfAway(double value);

// Throws kInvalidArgument for a coordinate outside he_spec and
// kMappingOutOfRange when the image leaves the IHC grid.
PatchCoord MapCoord(PatchCoord coord, const ModalityMapping& mapping);

struct Collision {
  PatchCoord target;
  std::vector<PatchCoord> sources;  // sorted, size >= 2
};

struct BijectionReport {
  bool injective = false;
  bool surjective = false;
  std::vector<Collision> collisions;
  std::vector<PatchCoord> unreached;
  // H&E coordinates whose image falls outside the IHC grid. A mapping with
  // any such coordinate is not a function onto the grid and is not injective.
  std::vector<PatchCoord> out_of_range;

  bool bijective() const noexcept { return injective && surjective; }
};

BijectionReport VerifyBijection(const ModalityMapping& mapping);

// Throws kNotInvertible unless VerifyBijection accepts the mapping and the
// algebraic inverse reproduces every coordinate.
ModalityMapping Invert(const ModalityMapping& mapping);

}  // namespace her2
