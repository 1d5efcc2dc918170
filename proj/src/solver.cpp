#include "lrr/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lrr/metrics.hpp"
#include "lrr/shrinkage.hpp"

namespace lrr {

namespace {

// The weight and regularization schedules are calibrated for unit-range
// intensities; observations arrive on the 8-bit scale, so the solvers work
// on data / 255 internally and scale back on output.
constexpr double kIntensityScale = 255.0;

struct Problem {
  Eigen::MatrixXd y;       // normalized observation
  Eigen::Index rows = 0;   // image shape
  Eigen::Index cols = 0;
  bool is_cs = false;
};

Problem set_up(const Observation& y, const DegradationOperator& op)
{
  if (y.data.size() == 0) throw std::invalid_argument("solve: empty observation");
  if (!y.data.allFinite())
    throw std::invalid_argument("solve: non-finite observation");
  if (y.noise_std < 0.0)
    throw std::invalid_argument("solve: negative noise level");
  Problem p;
  p.is_cs = std::holds_alternative<BlockCsOperator>(op);
  p.y = y.data / kIntensityScale;
  if (p.is_cs) {
    // Image shape comes from the adjoint (pinned grid or square layout).
    const Image back = lrr::adjoint(op, p.y);
    p.rows = back.rows();
    p.cols = back.cols();
  } else {
    p.rows = y.data.rows();
    p.cols = y.data.cols();
  }
  const auto shape = observation_shape(op, p.rows, p.cols);
  if (y.data.rows() != shape.first || y.data.cols() != shape.second)
    throw std::invalid_argument("solve: observation shape mismatch");
  return p;
}

double trace_psnr(const std::optional<Image>& truth, const Image& unit_scale)
{
  if (!truth) return std::numeric_limits<double>::quiet_NaN();
  return psnr(*truth, clamp_intensity(unit_scale * kIntensityScale));
}

Image reconstruct(const SolverState& st, Eigen::Index rows, Eigen::Index cols)
{
  std::vector<PatchGroup> decoded = st.groups;
  for (std::size_t i = 0; i < decoded.size(); ++i)
    decoded[i].data = decode(st.dicts[i], st.alpha[i]);
  return aggregate_groups(decoded, static_cast<int>(rows),
                          static_cast<int>(cols));
}

void anneal_delta(const Problem& p, const DegradationOperator& op,
                  const Image& u, double delta0, SolverState& st)
{
  const double r2 =
      (p.y - lrr::apply(op, u)).squaredNorm() / static_cast<double>(p.y.size());
  st.delta_current = std::sqrt(std::max(delta0 * delta0 - r2, 0.0));
}

// Largest eigenvalue of H^T H.  Exact bound for blur (kernel sums to 1) and
// masks; estimated by power iteration on one block for block CS.
double operator_sq_norm(const DegradationOperator& op)
{
  const auto* cs = std::get_if<BlockCsOperator>(&op);
  if (!cs) return 1.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(cs->projection.cols());
  v.normalize();
  double lambda = 1.0;
  for (int i = 0; i < 100; ++i) {
    v = cs->projection.transpose() * (cs->projection * v);
    lambda = v.norm();
    if (lambda == 0.0) return 1.0;
    v /= lambda;
  }
  return lambda;
}

}  // namespace

void validate(const SolverConfig& cfg)
{
  if (cfg.rho <= 0.0) throw std::invalid_argument("solver: rho must be positive");
  if (cfg.epsilon <= 0.0)
    throw std::invalid_argument("solver: epsilon must be positive");
  if (cfg.varrho <= 0.0)
    throw std::invalid_argument("solver: varrho must be positive");
  if (cfg.delta < 0.0)
    throw std::invalid_argument("solver: delta must be non-negative");
  if (cfg.max_iters < 1)
    throw std::invalid_argument("solver: max_iters must be positive");
  if (cfg.rematch_every < 1)
    throw std::invalid_argument("solver: rematch_every must be positive");
  if (cfg.gradient_steps < 1)
    throw std::invalid_argument("solver: gradient_steps must be positive");
}

double lambda_for_group(const Eigen::VectorXd& gamma, double delta,
                        double varrho)
{
  if (gamma.size() == 0)
    throw std::invalid_argument("lambda_for_group: empty spectrum");
  if (delta < 0.0 || varrho <= 0.0)
    throw std::invalid_argument("lambda_for_group: bad parameters");
  const double mean = gamma.mean();
  const double theta = gamma.squaredNorm() / static_cast<double>(gamma.size()) -
                       mean * mean;
  return 2.0 * std::sqrt(2.0) * delta * delta / (std::max(theta, 0.0) + varrho);
}

Eigen::VectorXd weights_for_group(const Eigen::VectorXd& gamma, double epsilon)
{
  if (epsilon <= 0.0)
    throw std::invalid_argument("weights_for_group: epsilon must be positive");
  if ((gamma.array() < 0.0).any())
    throw std::invalid_argument("weights_for_group: negative singular value");
  return (gamma.array() + epsilon).inverse().matrix();
}

void alpha_step(const Image& l, const SolverConfig& cfg, SolverState& state,
                bool rematch)
{
  validate(cfg);
  if (rematch || state.groups.empty())
    state.groups = extract_groups(l, cfg.grouping);
  else
    refresh_group_data(l, state.groups);

  const std::size_t n = state.groups.size();
  state.dicts.resize(n);
  state.alpha.resize(n);

  const double m = static_cast<double>(cfg.grouping.patch_side) *
                   cfg.grouping.patch_side;
  const double samples = m * cfg.grouping.group_size * static_cast<double>(n);
  const double tau_scale = samples / (cfg.rho * static_cast<double>(l.size()));

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    AdaptiveDictionary dict = build_dictionary(state.groups[i].data);
    const double lam =
        lambda_for_group(dict.mu, state.delta_current, cfg.varrho);
    const double tau = lam * tau_scale;
    const Eigen::VectorXd thresh =
        cfg.mode == ShrinkMode::wnnm
            ? (tau * weights_for_group(dict.mu, cfg.epsilon)).eval()
            : Eigen::VectorXd::Constant(dict.mu.size(), tau).eval();
    state.alpha[i] = weighted_soft_threshold(dict.mu, thresh);
    state.dicts[i] = std::move(dict);
  }
}

SolveResult admm_solve(const Observation& y, const DegradationOperator& op,
                       const SolverConfig& cfg,
                       const std::optional<Image>& ground_truth)
{
  validate(cfg);
  const Problem p = set_up(y, op);
  const double delta0 = cfg.delta / kIntensityScale;

  Image u = lrr::adjoint(op, p.y);
  if (const auto* cs = std::get_if<BlockCsOperator>(&op)) {
    // Unbiased backprojection: E[P^T P] = (rows_per_block / block_side^2) I.
    const double gain = static_cast<double>(cs->rows_per_block) /
                        (static_cast<double>(cs->block_side) * cs->block_side);
    if (gain > 0.0) u /= gain;
  }
  Image c = Image::Zero(p.rows, p.cols);
  Image dalpha = Image::Zero(p.rows, p.cols);
  SolverState st;
  st.delta_current = delta0;

  SolveResult out;
  out.trace.reserve(cfg.max_iters);
  for (int t = 1; t <= cfg.max_iters; ++t) {
    if (p.is_cs) {
      for (int s = 0; s < cfg.gradient_steps; ++s)
        u = u_step_gradient(op, p.y, dalpha, c, cfg.rho, u);
      if (cfg.cs_reestimate_delta) anneal_delta(p, op, u, delta0, st);
    } else {
      u = u_step_closed_form(op, p.y, dalpha, c, cfg.rho);
    }

    const bool rematch = st.groups.empty() || (t - 1) % cfg.rematch_every == 0;
    alpha_step(u - c, cfg, st, rematch);
    dalpha = reconstruct(st, p.rows, p.cols);
    c -= u - dalpha;

    out.trace.push_back({t, trace_psnr(ground_truth, dalpha),
                         (u - dalpha).norm() * kIntensityScale});
  }
  out.restored = clamp_intensity(dalpha * kIntensityScale);
  return out;
}

SolveResult ist_solve(const Observation& y, const DegradationOperator& op,
                      const SolverConfig& cfg,
                      const std::optional<Image>& ground_truth)
{
  validate(cfg);
  const Problem p = set_up(y, op);
  const double delta0 = cfg.delta / kIntensityScale;
  const double eta = 1.0 / operator_sq_norm(op);

  // The shrinkage stage sees the gradient step's proximal weight.
  SolverConfig stage = cfg;
  stage.rho = 1.0 / eta;

  Image x = Image::Zero(p.rows, p.cols);
  SolverState st;
  st.delta_current = delta0;

  SolveResult out;
  out.trace.reserve(cfg.max_iters);
  for (int t = 1; t <= cfg.max_iters; ++t) {
    const Image grad_step = x - eta * lrr::adjoint(op, lrr::apply(op, x) - p.y);
    if (p.is_cs && cfg.cs_reestimate_delta)
      anneal_delta(p, op, grad_step, delta0, st);

    const bool rematch = st.groups.empty() || (t - 1) % cfg.rematch_every == 0;
    alpha_step(grad_step, stage, st, rematch);
    const Image next = reconstruct(st, p.rows, p.cols);

    out.trace.push_back({t, trace_psnr(ground_truth, next),
                         (next - x).norm() * kIntensityScale});
    x = next;
  }
  out.restored = clamp_intensity(x * kIntensityScale);
  return out;
}

}  // namespace lrr
