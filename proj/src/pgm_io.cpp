#include "lrr/pgm_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace lrr {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why)
{
  throw std::runtime_error(path + ": " + why);
}

// Reads one whitespace/comment-delimited header token.
std::string next_token(std::istream& in)
{
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {}
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

long parse_positive(const std::string& tok, const std::string& path,
                    const char* what)
{
  if (tok.empty()) fail(path, std::string("truncated header (") + what + ")");
  long value = 0;
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      fail(path, std::string("bad ") + what + " '" + tok + "'");
    value = value * 10 + (c - '0');
    if (value > 1'000'000'000L) fail(path, std::string(what) + " out of range");
  }
  if (value <= 0) fail(path, std::string(what) + " must be positive");
  return value;
}

}  // namespace

Image read_pgm(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  if (next_token(in) != "P5") fail(path, "not a binary PGM (expected P5)");
  const long width = parse_positive(next_token(in), path, "width");
  const long height = parse_positive(next_token(in), path, "height");
  const long maxval = parse_positive(next_token(in), path, "maxval");
  if (maxval > 255) fail(path, "unsupported maxval (must be <= 255)");
  // next_token consumed the single whitespace after maxval already.
  std::vector<std::uint8_t> raster(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(raster.data()),
          static_cast<std::streamsize>(raster.size()));
  if (in.gcount() != static_cast<std::streamsize>(raster.size()))
    fail(path, "truncated pixel data");
  Image img(height, width);
  for (long r = 0; r < height; ++r)
    for (long c = 0; c < width; ++c)
      img(r, c) = raster[static_cast<std::size_t>(r) * width + c];
  return img;
}

void write_pgm(const Image& img, const std::string& path)
{
  if (img.size() == 0) fail(path, "refusing to write empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
  std::vector<std::uint8_t> raster(static_cast<std::size_t>(img.size()));
  for (Eigen::Index r = 0; r < img.rows(); ++r)
    for (Eigen::Index c = 0; c < img.cols(); ++c) {
      const double v = std::min(255.0, std::max(0.0, std::round(img(r, c))));
      raster[static_cast<std::size_t>(r) * img.cols() + c] =
          static_cast<std::uint8_t>(v);
    }
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
  if (!out) fail(path, "write failed");
}

Eigen::MatrixXd read_kernel_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  long rows = 0;
  long cols = 0;
  if (!(in >> rows >> cols)) fail(path, "expected 'rows cols' header");
  if (rows <= 0 || cols <= 0 || rows > 4096 || cols > 4096)
    fail(path, "bad kernel shape");
  Eigen::MatrixXd k(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) {
      double v = 0.0;
      if (!(in >> v)) fail(path, "truncated kernel values");
      if (!std::isfinite(v)) fail(path, "non-finite kernel value");
      k(r, c) = v;
    }
  return k;
}

Eigen::ArrayXXd read_mask_pgm(const std::string& path)
{
  const Image img = read_pgm(path);
  return (img.array() != 0.0).cast<double>();
}

}  // namespace lrr
