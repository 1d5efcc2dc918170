#include "fft2.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace lrr::detail {

namespace {

// FFTW plan creation is not thread-safe (execution is).
std::mutex& planner_mutex()
{
  static std::mutex m;
  return m;
}

ComplexGrid transform(const ComplexGrid& in, int sign)
{
  const int rows = static_cast<int>(in.rows());
  const int cols = static_cast<int>(in.cols());
  // FFTW wants row-major; copy through a row-major staging buffer.
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      buf[static_cast<std::size_t>(r) * cols + c] = in(r, c);

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(rows, cols,
                            reinterpret_cast<fftw_complex*>(buf.data()),
                            reinterpret_cast<fftw_complex*>(buf.data()),
                            sign, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fft2: fftw plan creation failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  ComplexGrid out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      out(r, c) = buf[static_cast<std::size_t>(r) * cols + c];
  return out;
}

}  // namespace

ComplexGrid fft2(const Eigen::MatrixXd& x)
{
  return transform(x.cast<std::complex<double>>(), FFTW_FORWARD);
}

Eigen::MatrixXd ifft2_real(const ComplexGrid& f)
{
  const ComplexGrid out = transform(f, FFTW_BACKWARD);
  return out.real() / static_cast<double>(f.size());
}

ComplexGrid kernel_transfer(const Eigen::MatrixXd& kernel, int rows, int cols)
{
  if (kernel.rows() > rows || kernel.cols() > cols)
    throw std::invalid_argument("kernel_transfer: kernel larger than grid");
  const int cr = static_cast<int>(kernel.rows()) / 2;
  const int cc = static_cast<int>(kernel.cols()) / 2;
  Eigen::MatrixXd embedded = Eigen::MatrixXd::Zero(rows, cols);
  for (int r = 0; r < kernel.rows(); ++r)
    for (int c = 0; c < kernel.cols(); ++c) {
      const int rr = ((r - cr) % rows + rows) % rows;
      const int cc2 = ((c - cc) % cols + cols) % cols;
      embedded(rr, cc2) += kernel(r, c);
    }
  return fft2(embedded);
}

}  // namespace lrr::detail
