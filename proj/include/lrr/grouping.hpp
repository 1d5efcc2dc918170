#pragma once

#include <vector>

#include <Eigen/Core>

#include "lrr/image.hpp"

namespace lrr {

struct PixelPos {
  int row = 0;
  int col = 0;
};

inline bool operator==(PixelPos a, PixelPos b)
{
  return a.row == b.row && a.col == b.col;
}

struct GroupingConfig {
  int patch_side = 8;      // patches are patch_side x patch_side
  int exemplar_stride = 4;
  int window_side = 40;    // search window centered on the exemplar
  int group_size = 60;     // patches per group
};

void validate(const GroupingConfig& cfg, int image_rows, int image_cols);

// One group of similar patches, each vectorized column-major into a column.
// Column 0 is always the exemplar itself.
struct PatchGroup {
  Eigen::MatrixXd data;               // (patch_side^2) x group_size
  PixelPos exemplar;
  std::vector<PixelPos> members;      // top-left corners, one per column
};

// Exemplar top-left corners: every exemplar_stride along both axes, with the
// last valid position appended on each axis so the image border is covered.
std::vector<PixelPos> exemplar_grid(int image_rows, int image_cols,
                                    const GroupingConfig& cfg);

// Block matching: for each exemplar, the group_size patches in the search
// window with smallest squared Euclidean distance to it.  Ties break toward
// raster order (top-to-bottom, left-to-right); if the window holds fewer
// candidates than group_size the nearest ones are repeated cyclically.
std::vector<PatchGroup> extract_groups(const Image& image,
                                       const GroupingConfig& cfg);

// Re-read pixel data at previously matched positions (used when the matching
// is reused across iterations while the underlying estimate changes).
void refresh_group_data(const Image& image, std::vector<PatchGroup>& groups);

// Per-pixel average of all patch contributions.  Throws std::logic_error if
// some pixel is covered by no patch.
Image aggregate_groups(const std::vector<PatchGroup>& groups, int image_rows,
                       int image_cols);

}  // namespace lrr
