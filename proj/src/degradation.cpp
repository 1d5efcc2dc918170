#include "lrr/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "fft2.hpp"

namespace lrr {

namespace {

constexpr double kPi = 3.14159265358979323846;

// out(r,c) = sum_{u,v} kernel(u,v) * img(r - dir*(u-cr), c - dir*(v-cc))
// with periodic indexing; dir = +1 is the convolution itself, dir = -1 the
// adjoint (correlation).
Image circular_convolve(const Image& img, const Eigen::MatrixXd& kernel,
                        int dir)
{
  const int rows = static_cast<int>(img.rows());
  const int cols = static_cast<int>(img.cols());
  const int kr = static_cast<int>(kernel.rows());
  const int kc = static_cast<int>(kernel.cols());
  const int cr = kr / 2;
  const int cc = kc / 2;
  Image out = Image::Zero(rows, cols);
  for (int u = 0; u < kr; ++u)
    for (int v = 0; v < kc; ++v) {
      const double k = kernel(u, v);
      if (k == 0.0) continue;
      const int dr = ((-dir * (u - cr)) % rows + rows) % rows;
      const int dc = ((-dir * (v - cc)) % cols + cols) % cols;
      for (int c = 0; c < cols; ++c) {
        const int sc = (c + dc) % cols;
        for (int r = 0; r < rows; ++r)
          out(r, c) += k * img((r + dr) % rows, sc);
      }
    }
  return out;
}

void check_image_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                       const char* who)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(who) + ": shape mismatch");
}

void check_blocks(const BlockCsOperator& op, Eigen::Index rows,
                  Eigen::Index cols)
{
  if (rows % op.block_side != 0 || cols % op.block_side != 0)
    throw std::invalid_argument(
        "block CS: image dimensions must be multiples of the block side");
}

}  // namespace

BlurOperator make_uniform_blur(int side)
{
  if (side < 1) throw std::invalid_argument("make_uniform_blur: bad side");
  return {Eigen::MatrixXd::Constant(side, side,
                                    1.0 / (static_cast<double>(side) * side))};
}

BlurOperator make_gaussian_blur(int side, double sigma)
{
  if (side < 1 || sigma <= 0.0)
    throw std::invalid_argument("make_gaussian_blur: bad parameters");
  Eigen::MatrixXd k(side, side);
  const double center = (side - 1) / 2.0;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const double dr = r - center;
      const double dc = c - center;
      k(r, c) = std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
    }
  k /= k.sum();
  return {std::move(k)};
}

BlurOperator make_motion_blur(double length, double angle_deg)
{
  if (length < 1.0) throw std::invalid_argument("make_motion_blur: bad length");
  const double theta = angle_deg * kPi / 180.0;
  const double dr = -std::sin(theta);  // rows grow downward
  const double dc = std::cos(theta);
  const double half = (length - 1.0) / 2.0;
  const int ext_r = static_cast<int>(std::ceil(half * std::abs(dr)));
  const int ext_c = static_cast<int>(std::ceil(half * std::abs(dc)));
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2 * ext_r + 1, 2 * ext_c + 1);
  const int samples = std::max(2, static_cast<int>(std::ceil(length * 32)));
  for (int i = 0; i < samples; ++i) {
    const double t = -half + (2.0 * half) * i / (samples - 1);
    const double pr = ext_r + t * dr;
    const double pc = ext_c + t * dc;
    const int r0 = static_cast<int>(std::floor(pr));
    const int c0 = static_cast<int>(std::floor(pc));
    const double fr = pr - r0;
    const double fc = pc - c0;
    k(r0, c0) += (1 - fr) * (1 - fc);
    if (c0 + 1 < k.cols()) k(r0, c0 + 1) += (1 - fr) * fc;
    if (r0 + 1 < k.rows()) k(r0 + 1, c0) += fr * (1 - fc);
    if (r0 + 1 < k.rows() && c0 + 1 < k.cols()) k(r0 + 1, c0 + 1) += fr * fc;
  }
  k /= k.sum();
  return {std::move(k)};
}

BlurOperator make_blur_from_kernel(Eigen::MatrixXd kernel)
{
  if (kernel.size() == 0 || !kernel.allFinite())
    throw std::invalid_argument("make_blur_from_kernel: bad kernel");
  const double s = kernel.sum();
  if (s <= 1e-12)
    throw std::invalid_argument("make_blur_from_kernel: kernel sum not positive");
  kernel /= s;
  return {std::move(kernel)};
}

MaskOperator make_random_mask(int rows, int cols, double missing_fraction,
                              std::uint64_t seed)
{
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("make_random_mask: bad shape");
  if (missing_fraction < 0.0 || missing_fraction > 1.0)
    throw std::invalid_argument("make_random_mask: fraction outside [0, 1]");
  const std::size_t total = static_cast<std::size_t>(rows) * cols;
  const std::size_t missing = static_cast<std::size_t>(
      std::llround(missing_fraction * static_cast<double>(total)));
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first `missing` slots become the missing set.
  for (std::size_t i = 0; i < missing; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  MaskOperator op{Eigen::ArrayXXd::Ones(rows, cols)};
  for (std::size_t i = 0; i < missing; ++i)
    op.known(static_cast<Eigen::Index>(idx[i] % rows),
             static_cast<Eigen::Index>(idx[i] / rows)) = 0.0;
  return op;
}

BlockCsOperator make_block_cs(double measurement_ratio, std::uint64_t seed,
                              int block_side)
{
  if (block_side < 1) throw std::invalid_argument("make_block_cs: bad block");
  if (measurement_ratio <= 0.0 || measurement_ratio > 1.0)
    throw std::invalid_argument("make_block_cs: ratio outside (0, 1]");
  const int dim = block_side * block_side;
  const int rows =
      std::max<int>(1, static_cast<int>(std::llround(measurement_ratio * dim)));
  BlockCsOperator op;
  op.block_side = block_side;
  op.rows_per_block = rows;
  op.seed = seed;
  op.projection.resize(rows, dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < dim; ++c) op.projection(r, c) = gauss(rng) / block_side;
  return op;
}

std::pair<Eigen::Index, Eigen::Index> observation_shape(
    const DegradationOperator& op, Eigen::Index image_rows,
    Eigen::Index image_cols)
{
  if (const auto* cs = std::get_if<BlockCsOperator>(&op)) {
    check_blocks(*cs, image_rows, image_cols);
    const Eigen::Index blocks =
        (image_rows / cs->block_side) * (image_cols / cs->block_side);
    return {blocks * cs->rows_per_block, 1};
  }
  return {image_rows, image_cols};
}

Eigen::MatrixXd apply(const DegradationOperator& op, const Image& x)
{
  if (x.size() == 0) throw std::invalid_argument("apply: empty image");
  if (const auto* blur = std::get_if<BlurOperator>(&op)) {
    if (blur->kernel.rows() > x.rows() || blur->kernel.cols() > x.cols())
      throw std::invalid_argument("apply: kernel larger than image");
    return circular_convolve(x, blur->kernel, +1);
  }
  if (const auto* mask = std::get_if<MaskOperator>(&op)) {
    check_image_shape(mask->known.matrix(), x, "apply");
    return x.array() * mask->known;
  }
  const auto& cs = std::get<BlockCsOperator>(op);
  check_blocks(cs, x.rows(), x.cols());
  const int b = cs.block_side;
  const Eigen::Index brs = x.rows() / b;
  const Eigen::Index bcs = x.cols() / b;
  if (cs.grid_rows > 0 && (brs != cs.grid_rows || bcs != cs.grid_cols))
    throw std::invalid_argument("apply: image does not match pinned block grid");
  Eigen::MatrixXd y(brs * bcs * cs.rows_per_block, 1);
  Eigen::Index at = 0;
  for (Eigen::Index br = 0; br < brs; ++br)
    for (Eigen::Index bc = 0; bc < bcs; ++bc) {
      y.block(at, 0, cs.rows_per_block, 1) =
          cs.projection * x.block(br * b, bc * b, b, b).reshaped();
      at += cs.rows_per_block;
    }
  return y;
}

Image adjoint(const DegradationOperator& op, const Eigen::MatrixXd& r)
{
  if (const auto* blur = std::get_if<BlurOperator>(&op))
    return circular_convolve(r, blur->kernel, -1);
  if (const auto* mask = std::get_if<MaskOperator>(&op)) {
    check_image_shape(mask->known.matrix(), r, "adjoint");
    return r.array() * mask->known;
  }
  const auto& cs = std::get<BlockCsOperator>(op);
  if (r.cols() != 1 || r.rows() % cs.rows_per_block != 0)
    throw std::invalid_argument("adjoint: bad measurement shape");
  const Eigen::Index blocks = r.rows() / cs.rows_per_block;
  Eigen::Index brs = cs.grid_rows;
  Eigen::Index bcs = cs.grid_cols;
  if (brs <= 0 || bcs <= 0) {
    // No layout pinned; fall back to a square block grid.
    brs = static_cast<Eigen::Index>(
        std::llround(std::sqrt(static_cast<double>(blocks))));
    bcs = brs;
  }
  if (brs * bcs != blocks)
    throw std::invalid_argument("adjoint: block layout does not match data");
  const int b = cs.block_side;
  Image x(brs * b, bcs * b);
  Eigen::Index at = 0;
  for (Eigen::Index br = 0; br < brs; ++br)
    for (Eigen::Index bc = 0; bc < bcs; ++bc) {
      x.block(br * b, bc * b, b, b) =
          (cs.projection.transpose() * r.block(at, 0, cs.rows_per_block, 1))
              .reshaped(b, b);
      at += cs.rows_per_block;
    }
  return x;
}

Image u_step_closed_form(const DegradationOperator& op,
                         const Eigen::MatrixXd& y, const Image& dalpha,
                         const Image& c, double rho)
{
  if (rho <= 0.0)
    throw std::invalid_argument("u_step_closed_form: rho must be positive");
  check_image_shape(dalpha, c, "u_step_closed_form");
  const auto shape = observation_shape(op, dalpha.rows(), dalpha.cols());
  if (y.rows() != shape.first || y.cols() != shape.second)
    throw std::invalid_argument("u_step_closed_form: observation shape");
  const Image target = dalpha + c;

  if (const auto* mask = std::get_if<MaskOperator>(&op)) {
    check_image_shape(mask->known.matrix(), dalpha, "u_step_closed_form");
    return ((mask->known * y.array() + rho * target.array()) /
            (mask->known + rho))
        .matrix();
  }
  if (const auto* blur = std::get_if<BlurOperator>(&op)) {
    using detail::ComplexGrid;
    const ComplexGrid h = detail::kernel_transfer(
        blur->kernel, static_cast<int>(dalpha.rows()),
        static_cast<int>(dalpha.cols()));
    const ComplexGrid yf = detail::fft2(y);
    const ComplexGrid tf = detail::fft2(target);
    const Eigen::ArrayXXd denom = h.array().abs2() + rho;
    const ComplexGrid num =
        (h.conjugate().array() * yf.array() + rho * tf.array()).matrix();
    return detail::ifft2_real((num.array() / denom).matrix());
  }
  throw std::invalid_argument(
      "u_step_closed_form: unsupported for block CS (use u_step_gradient)");
}

Image u_step_gradient(const DegradationOperator& op, const Eigen::MatrixXd& y,
                      const Image& dalpha, const Image& c, double rho,
                      const Image& u)
{
  if (rho < 0.0)
    throw std::invalid_argument("u_step_gradient: negative rho");
  check_image_shape(dalpha, c, "u_step_gradient");
  check_image_shape(dalpha, u, "u_step_gradient");
  const Image grad =
      adjoint(op, apply(op, u) - y) + rho * (u - dalpha - c);
  const double g2 = grad.squaredNorm();
  if (g2 == 0.0) return u;
  const double hg2 = apply(op, grad).squaredNorm();
  const double eta = g2 / (hg2 + rho * g2);
  return u - eta * grad;
}

double data_term_objective(const DegradationOperator& op,
                           const Eigen::MatrixXd& y, const Image& dalpha,
                           const Image& c, double rho, const Image& u)
{
  return 0.5 * (y - apply(op, u)).squaredNorm() +
         0.5 * rho * (u - dalpha - c).squaredNorm();
}

}  // namespace lrr
