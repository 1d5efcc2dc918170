#include <doctest.h>

#include <cmath>
#include <random>

#include "lrr/metrics.hpp"
#include "lrr/shrinkage.hpp"
#include "lrr/solver.hpp"

namespace {

lrr::Image synthetic_image(int rows, int cols)
{
  lrr::Image img(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      img(r, c) = 128.0 + 55.0 * std::sin(r / 3.0) * std::cos(c / 5.0) +
                  40.0 * std::sin((r + 2.0 * c) / 7.0);
  return img;
}

}  // namespace

TEST_CASE("group regularization schedule")
{
  // Flat spectrum: variance 0, so the stabilizer alone divides.
  Eigen::VectorXd flat(2);
  flat << 2.0, 2.0;
  CHECK(lrr::lambda_for_group(flat, 2.0, 0.1) ==
        doctest::Approx(113.13708498984761).epsilon(1e-13));

  Eigen::VectorXd spread(2);
  spread << 3.0, 1.0;  // population variance 1
  CHECK(lrr::lambda_for_group(spread, 1.0, 0.1) ==
        doctest::Approx(2.5712973861329).epsilon(1e-13));

  CHECK(lrr::lambda_for_group(spread, 0.0, 0.1) == 0.0);
  CHECK_THROWS_AS(lrr::lambda_for_group(spread, -1.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(lrr::lambda_for_group(spread, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(lrr::lambda_for_group(Eigen::VectorXd(), 1.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("weight schedule")
{
  Eigen::VectorXd gamma(3);
  gamma << 10.0, 1.0, 0.0;
  const Eigen::VectorXd w = lrr::weights_for_group(gamma, 0.35);
  CHECK(w[0] == doctest::Approx(0.09661835748792271).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(0.7407407407407407).epsilon(1e-14));
  CHECK(w[2] == doctest::Approx(2.857142857142857).epsilon(1e-14));

  Eigen::VectorXd bad(2);
  bad << 1.0, -0.5;
  CHECK_THROWS_AS(lrr::weights_for_group(bad, 0.35), std::invalid_argument);
  CHECK_THROWS_AS(lrr::weights_for_group(gamma, 0.0), std::invalid_argument);
}

TEST_CASE("solver configuration validation")
{
  lrr::SolverConfig cfg;
  CHECK_NOTHROW(lrr::validate(cfg));
  lrr::SolverConfig bad = cfg;
  bad.rho = 0.0;
  CHECK_THROWS_AS(lrr::validate(bad), std::invalid_argument);
  bad = cfg;
  bad.delta = -1.0;
  CHECK_THROWS_AS(lrr::validate(bad), std::invalid_argument);
  bad = cfg;
  bad.max_iters = 0;
  CHECK_THROWS_AS(lrr::validate(bad), std::invalid_argument);
  bad = cfg;
  bad.rematch_every = 0;
  CHECK_THROWS_AS(lrr::validate(bad), std::invalid_argument);
}

TEST_CASE("coefficient update matches per-group closed forms")
{
  const lrr::Image l = synthetic_image(16, 16) / 255.0;
  lrr::SolverConfig cfg;
  cfg.grouping = {4, 4, 8, 4};
  cfg.rho = 0.1;
  cfg.varrho = 0.35;
  cfg.epsilon = 0.35;

  lrr::SolverState st;
  st.delta_current = 0.05;
  lrr::alpha_step(l, cfg, st, true);
  REQUIRE(st.groups.size() == st.alpha.size());
  REQUIRE(st.groups.size() == st.dicts.size());

  const double samples = 16.0 * 4.0 * static_cast<double>(st.groups.size());
  const double tau_scale = samples / (cfg.rho * 256.0);
  for (std::size_t i = 0; i < st.groups.size(); ++i) {
    const Eigen::VectorXd mu = lrr::compute_svd(st.groups[i].data)
                                   .singular_values;
    CHECK((mu - st.dicts[i].mu).norm() == 0.0);
    const double lam = lrr::lambda_for_group(mu, st.delta_current, cfg.varrho);
    const Eigen::VectorXd thresh =
        lam * tau_scale * lrr::weights_for_group(mu, cfg.epsilon);
    const Eigen::VectorXd expect = lrr::weighted_soft_threshold(mu, thresh);
    CHECK((st.alpha[i] - expect).norm() < 1e-12);

    // Decoding the shrunk coefficients equals shrinking the group directly.
    const Eigen::MatrixXd via_coeff = lrr::decode(st.dicts[i], st.alpha[i]);
    const Eigen::MatrixXd via_pixels =
        lrr::svd_shrink_wnnm(st.groups[i].data, thresh);
    CHECK((via_coeff - via_pixels).norm() < 1e-8);
  }

  SUBCASE("flat-weight mode thresholds every direction equally")
  {
    lrr::SolverConfig flat = cfg;
    flat.mode = lrr::ShrinkMode::nnm;
    lrr::SolverState st2;
    st2.delta_current = 0.05;
    lrr::alpha_step(l, flat, st2, true);
    for (std::size_t i = 0; i < st2.groups.size(); ++i) {
      const Eigen::VectorXd mu = st2.dicts[i].mu;
      const double lam =
          lrr::lambda_for_group(mu, st2.delta_current, flat.varrho);
      const Eigen::VectorXd expect =
          (mu.array() - lam * tau_scale).max(0.0).matrix();
      CHECK((st2.alpha[i] - expect).norm() < 1e-12);
    }
  }

  SUBCASE("zero image yields zero coefficients")
  {
    lrr::SolverState st3;
    st3.delta_current = 0.05;
    lrr::alpha_step(lrr::Image::Zero(16, 16), cfg, st3, true);
    for (const auto& a : st3.alpha) CHECK(a.norm() == 0.0);
  }
}

TEST_CASE("fully observed, noise-free problem is a fixed point")
{
  lrr::Image truth = synthetic_image(24, 24);
  truth = truth.cwiseMax(5.0).cwiseMin(250.0);
  const lrr::DegradationOperator op =
      lrr::MaskOperator{Eigen::ArrayXXd::Ones(24, 24)};
  lrr::Observation y{lrr::apply(op, truth), 0.0};

  lrr::SolverConfig cfg;
  cfg.delta = 0.0;
  cfg.rho = 0.1;
  cfg.grouping = {4, 2, 8, 8};
  cfg.max_iters = 40;

  const lrr::SolveResult res = lrr::admm_solve(y, op, cfg, truth);
  CHECK((res.restored - truth).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK(res.trace.size() == 40);
  CHECK(res.trace.front().iter == 1);
  CHECK(res.trace.back().iter == 40);
  CHECK(res.trace.back().psnr_db == 100.0);
}

TEST_CASE("solver runs are deterministic")
{
  const lrr::Image truth = synthetic_image(32, 32);
  const lrr::DegradationOperator op = lrr::make_random_mask(32, 32, 0.3, 5);
  lrr::Observation y{lrr::apply(op, truth), 0.0};

  lrr::SolverConfig cfg;
  cfg.delta = 10.0;
  cfg.rho = 0.1;
  cfg.varrho = 0.35;
  cfg.grouping = {4, 3, 10, 8};
  cfg.max_iters = 8;

  const lrr::SolveResult a = lrr::admm_solve(y, op, cfg, truth);
  const lrr::SolveResult b = lrr::admm_solve(y, op, cfg, truth);
  CHECK(a.restored == b.restored);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].psnr_db == b.trace[i].psnr_db);
    CHECK(a.trace[i].residual == b.trace[i].residual);
  }
}

TEST_CASE("trace has no psnr without ground truth")
{
  const lrr::Image truth = synthetic_image(16, 16);
  const lrr::DegradationOperator op =
      lrr::MaskOperator{Eigen::ArrayXXd::Ones(16, 16)};
  lrr::Observation y{lrr::apply(op, truth), 0.0};
  lrr::SolverConfig cfg;
  cfg.grouping = {4, 4, 8, 4};
  cfg.max_iters = 3;
  const lrr::SolveResult res = lrr::admm_solve(y, op, cfg);
  for (const auto& p : res.trace) CHECK(std::isnan(p.psnr_db));
}

TEST_CASE("multiplier residual trends downward")
{
  const lrr::Image truth = synthetic_image(48, 48);
  const lrr::DegradationOperator op = lrr::make_uniform_blur(5);
  lrr::Observation y{lrr::apply(op, truth), 0.0};

  lrr::SolverConfig cfg;
  cfg.delta = 2.0;
  cfg.rho = 0.05;
  cfg.grouping = {6, 3, 12, 12};
  cfg.max_iters = 30;

  const lrr::SolveResult res = lrr::admm_solve(y, op, cfg, truth);
  const auto& tr = res.trace;
  for (std::size_t i = 0; i + 10 < tr.size(); ++i)
    CHECK(tr[i + 10].residual <=
          tr[i].residual + 1e-9 * std::max(1.0, tr[0].residual));
}

TEST_CASE("shrinkage-baseline solver")
{
  SUBCASE("identity operator with zero noise returns the observation")
  {
    lrr::Image truth = synthetic_image(24, 24).cwiseMax(5.0).cwiseMin(250.0);
    const lrr::DegradationOperator op =
        lrr::MaskOperator{Eigen::ArrayXXd::Ones(24, 24)};
    lrr::Observation y{lrr::apply(op, truth), 0.0};
    lrr::SolverConfig cfg;
    cfg.delta = 0.0;
    cfg.grouping = {4, 2, 8, 8};
    cfg.max_iters = 5;
    const lrr::SolveResult res = lrr::ist_solve(y, op, cfg, truth);
    CHECK((res.restored - truth).lpNorm<Eigen::Infinity>() < 1e-8);
  }

  SUBCASE("is deterministic and traces every iteration")
  {
    const lrr::Image truth = synthetic_image(32, 32);
    const lrr::DegradationOperator op = lrr::make_block_cs(0.4, 9);
    lrr::Observation y{lrr::apply(op, truth), 0.0};
    lrr::SolverConfig cfg;
    cfg.delta = 15.0;
    cfg.rho = 0.1;
    cfg.varrho = 0.35;
    cfg.grouping = {4, 3, 10, 8};
    cfg.max_iters = 6;
    const lrr::SolveResult a = lrr::ist_solve(y, op, cfg, truth);
    const lrr::SolveResult b = lrr::ist_solve(y, op, cfg, truth);
    CHECK(a.restored == b.restored);
    CHECK(a.trace.size() == 6);
  }
}
