#pragma once

#include <string>

#include <Eigen/Core>

#include "lrr/image.hpp"

namespace lrr {

// Binary (P5) PGM with maxval 255.  Malformed files raise std::runtime_error
// naming the path and the problem.
Image read_pgm(const std::string& path);

// Values are clamped to [0, 255] and rounded to the nearest integer.
void write_pgm(const Image& img, const std::string& path);

// Text file: "rows cols" followed by rows*cols values in row-major order.
Eigen::MatrixXd read_kernel_file(const std::string& path);

// PGM where 0 marks a missing pixel; anything else is observed.
// Returns a 0/1 grid (1 = known).
Eigen::ArrayXXd read_mask_pgm(const std::string& path);

}  // namespace lrr
