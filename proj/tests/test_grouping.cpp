#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "lrr/grouping.hpp"

namespace {

lrr::Image random_image(int rows, int cols, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  lrr::Image img(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) img(r, c) = u(rng);
  return img;
}

}  // namespace

TEST_CASE("exemplar grid covers the image border")
{
  lrr::GroupingConfig cfg{8, 4, 8, 1};
  const auto grid16 = lrr::exemplar_grid(16, 16, cfg);
  REQUIRE(grid16.size() == 9);  // rows and cols both {0, 4, 8}
  CHECK(grid16.front() == lrr::PixelPos{0, 0});
  CHECK(grid16.back() == lrr::PixelPos{8, 8});

  const auto grid17 = lrr::exemplar_grid(17, 17, cfg);
  REQUIRE(grid17.size() == 16);  // {0, 4, 8, 9} on both axes
  CHECK(grid17.back() == lrr::PixelPos{9, 9});

  CHECK_THROWS_AS(lrr::exemplar_grid(6, 16, cfg), std::invalid_argument);
}

TEST_CASE("grouping configuration validation")
{
  CHECK_THROWS_AS(lrr::validate({0, 4, 8, 1}, 32, 32), std::invalid_argument);
  CHECK_THROWS_AS(lrr::validate({8, 0, 8, 1}, 32, 32), std::invalid_argument);
  CHECK_THROWS_AS(lrr::validate({8, 4, 8, 0}, 32, 32), std::invalid_argument);
  CHECK_THROWS_AS(lrr::validate({8, 4, 6, 1}, 32, 32), std::invalid_argument);
  CHECK_THROWS_AS(lrr::validate({8, 4, 40, 1}, 32, 32), std::invalid_argument);
  CHECK_NOTHROW(lrr::validate({8, 4, 32, 1}, 32, 32));
}

TEST_CASE("block matching tie-break is raster order")
{
  // Constant image: every candidate ties at distance zero.
  const lrr::Image img = lrr::Image::Constant(12, 12, 7.0);
  lrr::GroupingConfig cfg{4, 4, 8, 4};
  const auto groups = lrr::extract_groups(img, cfg);
  REQUIRE(groups.size() == 9);
  const lrr::PatchGroup& center = groups[4];
  REQUIRE(center.exemplar == lrr::PixelPos{4, 4});
  REQUIRE(center.members.size() == 4);
  CHECK(center.members[0] == lrr::PixelPos{4, 4});
  CHECK(center.members[1] == lrr::PixelPos{2, 2});
  CHECK(center.members[2] == lrr::PixelPos{2, 3});
  CHECK(center.members[3] == lrr::PixelPos{2, 4});
}

TEST_CASE("block matching orders by squared distance")
{
  // Ramp image: squared patch distance is 16 (dr + dc)^2, so patches along
  // the anti-diagonal dr + dc = 0 are identical to the exemplar and win with
  // distance zero; raster tie-break orders them (2,6) before (3,5).
  lrr::Image img(12, 12);
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c) img(r, c) = static_cast<double>(r + c);
  lrr::GroupingConfig cfg{4, 4, 8, 3};
  const auto groups = lrr::extract_groups(img, cfg);
  const lrr::PatchGroup& center = groups[4];
  REQUIRE(center.exemplar == lrr::PixelPos{4, 4});
  CHECK(center.members[1] == lrr::PixelPos{2, 6});
  CHECK(center.members[2] == lrr::PixelPos{3, 5});
}

TEST_CASE("small windows duplicate members cyclically")
{
  const lrr::Image img = lrr::Image::Constant(8, 8, 1.0);
  lrr::GroupingConfig cfg{4, 4, 4, 3};  // window == patch: no candidates
  const auto groups = lrr::extract_groups(img, cfg);
  for (const auto& g : groups) {
    REQUIRE(g.members.size() == 3);
    CHECK(g.members[0] == g.exemplar);
    CHECK(g.members[1] == g.exemplar);
    CHECK(g.members[2] == g.exemplar);
    CHECK((g.data.col(0) - g.data.col(2)).norm() == 0.0);
  }
}

TEST_CASE("matching agrees with brute-force enumeration")
{
  const lrr::Image img = random_image(32, 32, 99);
  lrr::GroupingConfig cfg{6, 5, 14, 20};
  const auto groups = lrr::extract_groups(img, cfg);

  const int p = cfg.patch_side;
  const int half = (cfg.window_side - p) / 2;
  const int last = 32 - p;
  for (const auto& g : groups) {
    // All window candidates, straight off the image.
    struct Cand {
      double dist;
      int r, c;
    };
    std::vector<Cand> cand;
    for (int r = std::max(0, g.exemplar.row - half);
         r <= std::min(last, g.exemplar.row + half); ++r)
      for (int c = std::max(0, g.exemplar.col - half);
           c <= std::min(last, g.exemplar.col + half); ++c) {
        if (r == g.exemplar.row && c == g.exemplar.col) continue;
        const double d =
            (img.block(r, c, p, p) -
             img.block(g.exemplar.row, g.exemplar.col, p, p)).squaredNorm();
        cand.push_back({d, r, c});
      }
    std::stable_sort(cand.begin(), cand.end(), [&](const Cand& a, const Cand& b) {
      if (a.dist != b.dist) return a.dist < b.dist;
      if (a.r != b.r) return a.r < b.r;
      return a.c < b.c;
    });
    REQUIRE(g.members.size() == 20);
    for (int j = 1; j < 20; ++j) {
      CHECK(g.members[j].row == cand[j - 1].r);
      CHECK(g.members[j].col == cand[j - 1].c);
    }
  }
}

TEST_CASE("extraction and aggregation round-trip")
{
  const lrr::Image img = random_image(30, 26, 5);
  lrr::GroupingConfig cfg{5, 3, 11, 8};
  const auto groups = lrr::extract_groups(img, cfg);
  const lrr::Image back = lrr::aggregate_groups(groups, 30, 26);
  CHECK((back - img).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("refresh re-reads pixels at matched positions")
{
  const lrr::Image a = random_image(24, 24, 6);
  const lrr::Image b = random_image(24, 24, 7);
  lrr::GroupingConfig cfg{4, 4, 12, 6};
  auto groups = lrr::extract_groups(a, cfg);
  lrr::refresh_group_data(b, groups);
  for (const auto& g : groups)
    for (std::size_t j = 0; j < g.members.size(); ++j) {
      const auto pos = g.members[j];
      CHECK((g.data.col(static_cast<Eigen::Index>(j)) -
             b.block(pos.row, pos.col, 4, 4).reshaped()).norm() == 0.0);
    }
}

TEST_CASE("aggregation demands full coverage")
{
  lrr::PatchGroup g;
  g.exemplar = {0, 0};
  g.members = {{0, 0}};
  g.data = Eigen::MatrixXd::Ones(16, 1);
  CHECK_THROWS_AS(lrr::aggregate_groups({g}, 8, 8), std::logic_error);
}

TEST_CASE("matching is deterministic")
{
  const lrr::Image img = random_image(40, 40, 11);
  lrr::GroupingConfig cfg{8, 4, 16, 12};
  const auto a = lrr::extract_groups(img, cfg);
  const auto b = lrr::extract_groups(img, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].members == b[i].members);
    CHECK(a[i].data == b[i].data);
  }
}
