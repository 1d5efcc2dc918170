#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lrr/degradation.hpp"
#include "lrr/dictionary.hpp"
#include "lrr/grouping.hpp"
#include "lrr/image.hpp"

namespace lrr {

enum class ShrinkMode { wnnm, nnm };

struct SolverConfig {
  ShrinkMode mode = ShrinkMode::wnnm;
  double rho = 0.0225;        // coupling weight of the quadratic split
  double epsilon = 0.35;      // stabilizer in the singular-value weights
  double varrho = 0.1;        // stabilizer in the regularization schedule
  double delta = 0.0;         // noise level, 8-bit intensity scale
  GroupingConfig grouping;
  int max_iters = 200;
  int rematch_every = 1;      // block-matching refresh period (iterations)
  int gradient_steps = 1;     // descent steps per outer iteration (block CS)
  bool cs_reestimate_delta = true;  // anneal delta from the CS residual
  std::uint64_t seed = 0;
};

void validate(const SolverConfig& cfg);

struct SolverState {
  std::vector<PatchGroup> groups;
  std::vector<AdaptiveDictionary> dicts;
  std::vector<Eigen::VectorXd> alpha;
  double delta_current = 0.0;  // working noise level, unit intensity scale
};

struct TracePoint {
  int iter = 0;
  double psnr_db = 0.0;   // NaN when no ground truth was supplied
  double residual = 0.0;  // solver-specific convergence diagnostic
};

struct SolveResult {
  Image restored;  // clamped to [0, 255]
  std::vector<TracePoint> trace;
};

// 2 sqrt(2) delta^2 / (theta + varrho), where theta is the population
// variance of the group's singular values; larger-spread (more structured)
// groups get regularized less.
double lambda_for_group(const Eigen::VectorXd& gamma, double delta,
                        double varrho);

// w_i = 1 / (gamma_i + epsilon): non-decreasing when gamma is non-increasing,
// so larger singular values are shrunk less.
Eigen::VectorXd weights_for_group(const Eigen::VectorXd& gamma,
                                  double epsilon);

// Group-wise coefficient update on the split image l: (re)match patch groups,
// rebuild each group's dictionary, and soft-threshold its singular values
// with the mode's weights.  Results land in state.dicts / state.alpha.
void alpha_step(const Image& l, const SolverConfig& cfg, SolverState& state,
                bool rematch);

// Alternating scheme: quadratic data step in u, group shrinkage in alpha,
// running multiplier c.  Blur and mask use the exact u update; block CS uses
// line-searched gradient steps.
SolveResult admm_solve(const Observation& y, const DegradationOperator& op,
                       const SolverConfig& cfg,
                       const std::optional<Image>& ground_truth = {});

// Iterative shrinkage baseline: plain gradient step on the data term
// followed by the same group shrinkage (quadratic weight 1/eta).
SolveResult ist_solve(const Observation& y, const DegradationOperator& op,
                      const SolverConfig& cfg,
                      const std::optional<Image>& ground_truth = {});

}  // namespace lrr
