#include "lrr/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace lrr {

namespace {

// Stride positions along one axis plus the last valid position, so patches
// reach the far border even when the stride does not divide evenly.
std::vector<int> axis_positions(int extent, int patch, int stride)
{
  std::vector<int> pos;
  const int last = extent - patch;
  for (int p = 0; p <= last; p += stride) pos.push_back(p);
  if (pos.back() != last) pos.push_back(last);
  return pos;
}

int patch_side_of(const Eigen::MatrixXd& data)
{
  const int side = static_cast<int>(std::lround(std::sqrt(
      static_cast<double>(data.rows()))));
  if (side * side != data.rows())
    throw std::invalid_argument("patch data rows are not a perfect square");
  return side;
}

}  // namespace

void validate(const GroupingConfig& cfg, int image_rows, int image_cols)
{
  if (cfg.patch_side < 1 || cfg.exemplar_stride < 1 || cfg.group_size < 1)
    throw std::invalid_argument("grouping: sizes must be positive");
  if (cfg.window_side < cfg.patch_side)
    throw std::invalid_argument("grouping: window smaller than patch");
  if (cfg.window_side > std::min(image_rows, image_cols))
    throw std::invalid_argument("grouping: window larger than image");
}

std::vector<PixelPos> exemplar_grid(int image_rows, int image_cols,
                                    const GroupingConfig& cfg)
{
  validate(cfg, image_rows, image_cols);
  const std::vector<int> rows =
      axis_positions(image_rows, cfg.patch_side, cfg.exemplar_stride);
  const std::vector<int> cols =
      axis_positions(image_cols, cfg.patch_side, cfg.exemplar_stride);
  std::vector<PixelPos> grid;
  grid.reserve(rows.size() * cols.size());
  for (int r : rows)
    for (int c : cols) grid.push_back({r, c});
  return grid;
}

std::vector<PatchGroup> extract_groups(const Image& image,
                                       const GroupingConfig& cfg)
{
  const int rows = static_cast<int>(image.rows());
  const int cols = static_cast<int>(image.cols());
  validate(cfg, rows, cols);
  if (!image.allFinite())
    throw std::invalid_argument("extract_groups: non-finite image");

  const int p = cfg.patch_side;
  const int m = p * p;
  const int npr = rows - p + 1;
  const int npc = cols - p + 1;

  // Vectorize every patch position once; block matching then works on
  // columns of this table instead of re-reading image windows.
  Eigen::MatrixXd patches(m, static_cast<Eigen::Index>(npr) * npc);
  for (int r = 0; r < npr; ++r)
    for (int c = 0; c < npc; ++c)
      patches.col(static_cast<Eigen::Index>(r) * npc + c) =
          image.block(r, c, p, p).reshaped();

  const std::vector<PixelPos> grid = exemplar_grid(rows, cols, cfg);
  const int half = (cfg.window_side - p) / 2;
  std::vector<PatchGroup> groups(grid.size());

#pragma omp parallel for schedule(dynamic)
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const PixelPos ex = grid[g];
    const Eigen::Index ex_idx = static_cast<Eigen::Index>(ex.row) * npc + ex.col;
    const int r0 = std::max(0, ex.row - half);
    const int r1 = std::min(npr - 1, ex.row + half);
    const int c0 = std::max(0, ex.col - half);
    const int c1 = std::min(npc - 1, ex.col + half);

    // (distance, raster index); the index makes ties deterministic.
    std::vector<std::pair<double, Eigen::Index>> cand;
    cand.reserve(static_cast<std::size_t>(r1 - r0 + 1) * (c1 - c0 + 1));
    for (int r = r0; r <= r1; ++r)
      for (int c = c0; c <= c1; ++c) {
        const Eigen::Index idx = static_cast<Eigen::Index>(r) * npc + c;
        if (idx == ex_idx) continue;
        cand.emplace_back((patches.col(idx) - patches.col(ex_idx)).squaredNorm(),
                          idx);
      }
    const std::size_t want = static_cast<std::size_t>(cfg.group_size) - 1;
    const std::size_t take = std::min(want, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + take, cand.end());

    PatchGroup& grp = groups[g];
    grp.exemplar = ex;
    grp.members.push_back(ex);
    for (std::size_t i = 0; i < take; ++i) {
      const Eigen::Index idx = cand[i].second;
      grp.members.push_back({static_cast<int>(idx / npc),
                             static_cast<int>(idx % npc)});
    }
    for (std::size_t i = 0; grp.members.size() <
                            static_cast<std::size_t>(cfg.group_size); ++i)
      grp.members.push_back(grp.members[i]);

    grp.data.resize(m, cfg.group_size);
    for (int j = 0; j < cfg.group_size; ++j) {
      const PixelPos pos = grp.members[j];
      grp.data.col(j) =
          patches.col(static_cast<Eigen::Index>(pos.row) * npc + pos.col);
    }
  }
  return groups;
}

void refresh_group_data(const Image& image, std::vector<PatchGroup>& groups)
{
  for (PatchGroup& grp : groups) {
    const int p = patch_side_of(grp.data);
    for (std::size_t j = 0; j < grp.members.size(); ++j) {
      const PixelPos pos = grp.members[j];
      if (pos.row < 0 || pos.col < 0 || pos.row + p > image.rows() ||
          pos.col + p > image.cols())
        throw std::invalid_argument("refresh_group_data: position out of range");
      grp.data.col(static_cast<Eigen::Index>(j)) =
          image.block(pos.row, pos.col, p, p).reshaped();
    }
  }
}

Image aggregate_groups(const std::vector<PatchGroup>& groups, int image_rows,
                       int image_cols)
{
  if (groups.empty()) throw std::invalid_argument("aggregate_groups: no groups");
  Image sum = Image::Zero(image_rows, image_cols);
  Image cover = Image::Zero(image_rows, image_cols);
  for (const PatchGroup& grp : groups) {
    const int p = patch_side_of(grp.data);
    for (std::size_t j = 0; j < grp.members.size(); ++j) {
      const PixelPos pos = grp.members[j];
      if (pos.row < 0 || pos.col < 0 || pos.row + p > image_rows ||
          pos.col + p > image_cols)
        throw std::invalid_argument("aggregate_groups: position out of range");
      sum.block(pos.row, pos.col, p, p) +=
          grp.data.col(static_cast<Eigen::Index>(j)).reshaped(p, p);
      cover.block(pos.row, pos.col, p, p).array() += 1.0;
    }
  }
  if ((cover.array() == 0.0).any())
    throw std::logic_error("aggregate_groups: uncovered pixels");
  return sum.array() / cover.array();
}

}  // namespace lrr
