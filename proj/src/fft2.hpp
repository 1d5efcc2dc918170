#pragma once

#include <complex>

#include <Eigen/Core>

namespace lrr::detail {

using ComplexGrid = Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                                  Eigen::Dynamic>;

ComplexGrid fft2(const Eigen::MatrixXd& x);

// Inverse transform scaled by 1/(rows*cols); imaginary residue is dropped,
// callers only ever transform spectra of real data.
Eigen::MatrixXd ifft2_real(const ComplexGrid& f);

// Transfer function of a circular convolution: the kernel embedded at the
// origin of a rows x cols grid with wrap-around, centered at
// (kernel_rows/2, kernel_cols/2), then transformed.
ComplexGrid kernel_transfer(const Eigen::MatrixXd& kernel, int rows, int cols);

}  // namespace lrr::detail
