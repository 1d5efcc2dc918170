#pragma once

#include <cstdint>
#include <utility>
#include <variant>

#include <Eigen/Core>

#include "lrr/image.hpp"

namespace lrr {

// Circular (periodic) convolution with a normalized kernel.
struct BlurOperator {
  Eigen::MatrixXd kernel;  // entries sum to 1
};

// Pixel-wise sampling; known(r,c) is 1.0 where the pixel is observed and
// 0.0 where it is missing.
struct MaskOperator {
  Eigen::ArrayXXd known;
};

// Block-based compressive sampling: the image is split into block_side^2
// tiles and every tile is projected by the same random Gaussian matrix.
// Measurements are stacked block by block in raster order.  grid_rows /
// grid_cols pin the block layout for adjoint(); when left at 0 a square
// layout is inferred from the measurement length.
struct BlockCsOperator {
  int block_side = 32;
  int rows_per_block = 0;
  Eigen::MatrixXd projection;  // rows_per_block x block_side^2
  std::uint64_t seed = 0;
  Eigen::Index grid_rows = 0;
  Eigen::Index grid_cols = 0;
};

using DegradationOperator =
    std::variant<BlurOperator, MaskOperator, BlockCsOperator>;

struct Observation {
  Eigen::MatrixXd data;   // image-shaped for blur/mask, column for block CS
  double noise_std = 0.0;
};

BlurOperator make_uniform_blur(int side);
BlurOperator make_gaussian_blur(int side, double sigma);
// Straight-line motion of the given length (pixels) at the given angle
// (degrees counter-clockwise from horizontal), rasterized with bilinear
// weights and normalized.
BlurOperator make_motion_blur(double length, double angle_deg);
BlurOperator make_blur_from_kernel(Eigen::MatrixXd kernel);
MaskOperator make_random_mask(int rows, int cols, double missing_fraction,
                              std::uint64_t seed);
BlockCsOperator make_block_cs(double measurement_ratio, std::uint64_t seed,
                              int block_side = 32);

// Shape of apply()'s result for an image of the given size.
std::pair<Eigen::Index, Eigen::Index> observation_shape(
    const DegradationOperator& op, Eigen::Index image_rows,
    Eigen::Index image_cols);

Eigen::MatrixXd apply(const DegradationOperator& op, const Image& x);

// Exact adjoint of apply (verified against <Hx, y> = <x, H^T y>).
Image adjoint(const DegradationOperator& op, const Eigen::MatrixXd& r);

// argmin_u 1/2 ||y - H u||^2 + rho/2 ||u - (dalpha + c)||^2, available in
// closed form when H^T H diagonalizes: per pixel for masks, per frequency
// for circular blurs.  Unsupported for block CS (use u_step_gradient).
Image u_step_closed_form(const DegradationOperator& op,
                         const Eigen::MatrixXd& y, const Image& dalpha,
                         const Image& c, double rho);

// One steepest-descent step on the same objective with exact line search;
// returns u unchanged at a stationary point.
Image u_step_gradient(const DegradationOperator& op, const Eigen::MatrixXd& y,
                      const Image& dalpha, const Image& c, double rho,
                      const Image& u);

// 1/2 ||y - H u||^2 + rho/2 ||u - (dalpha + c)||^2, for monotonicity checks.
double data_term_objective(const DegradationOperator& op,
                           const Eigen::MatrixXd& y, const Image& dalpha,
                           const Image& c, double rho, const Image& u);

}  // namespace lrr
