// Command-line front end: degrade-and-restore experiments plus the
// self-verification suite.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lrr/experiment.hpp"
#include "lrr/oracles.hpp"

namespace {

struct TaskArgs {
  std::string input;
  std::string output;
  std::string mode = "wnnm";
  double rho = 0.0;
  double epsilon = 0.0;
  double varrho = 0.0;
  double sigma = 0.0;
  int patch = 0;
  int stride = 0;
  int window = 0;
  int group_size = 0;
  int iters = 0;
  std::uint64_t seed = 1;
  int threads = -1;
  std::string kernel = "uniform9";
  std::string kernel_file;
  std::string mask_file;
  double missing = 0.5;
  double ratio = 0.3;
  std::string truth;
  bool compare = false;
};

void add_common_options(CLI::App* cmd, TaskArgs& args)
{
  cmd->add_option("input", args.input, "input image (binary PGM)")->required();
  cmd->add_option("output", args.output, "restored image path")->required();
  cmd->add_option("--mode", args.mode, "shrinkage mode")
      ->check(CLI::IsMember({"wnnm", "nnm"}))
      ->capture_default_str();
  cmd->add_option("--rho", args.rho, "quadratic coupling weight");
  cmd->add_option("--epsilon", args.epsilon, "weight stabilizer");
  cmd->add_option("--varrho", args.varrho, "regularization stabilizer");
  cmd->add_option("--sigma", args.sigma, "observation noise level");
  cmd->add_option("--patch", args.patch, "patch side");
  cmd->add_option("--stride", args.stride, "exemplar stride");
  cmd->add_option("--window", args.window, "matching window side");
  cmd->add_option("--k", args.group_size, "patches per group");
  cmd->add_option("--iters", args.iters, "solver iterations");
  cmd->add_option("--seed", args.seed, "seed for masks/projections/noise")
      ->capture_default_str();
  cmd->add_option("--threads", args.threads,
                  "worker threads (0 = all cores; default from LRR_THREADS)");
  cmd->add_flag("--compare", args.compare,
                "also run the other shrinkage mode for comparison");
}

// strip a trailing .pgm so out.pgm yields out.csv / out.report.txt siblings
std::string output_stem(const std::string& path)
{
  if (path.size() > 4 && path.substr(path.size() - 4) == ".pgm")
    return path.substr(0, path.size() - 4);
  return path;
}

void configure_threads(int flag_value)
{
  int n = flag_value;
  if (n < 0) {
    if (const char* env = std::getenv("LRR_THREADS")) n = std::atoi(env);
  }
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

lrr::ExperimentSpec build_spec(lrr::Task task, const CLI::App* cmd,
                               const TaskArgs& args)
{
  lrr::ExperimentSpec spec =
      lrr::make_default_spec(task, args.kernel, args.ratio, args.missing);
  spec.input_path = args.input;
  spec.output_stem = output_stem(args.output);
  spec.kernel_file = args.kernel_file;
  spec.mask_file = args.mask_file;
  spec.truth_path = args.truth;
  spec.seed = args.seed;
  spec.compare_modes = args.compare;
  spec.solver.mode =
      args.mode == "nnm" ? lrr::ShrinkMode::nnm : lrr::ShrinkMode::wnnm;
  if (cmd->count("--sigma")) lrr::apply_noise_sigma(spec, args.sigma);
  if (cmd->count("--rho")) spec.solver.rho = args.rho;
  if (cmd->count("--epsilon")) spec.solver.epsilon = args.epsilon;
  if (cmd->count("--varrho")) spec.solver.varrho = args.varrho;
  if (cmd->count("--patch")) spec.solver.grouping.patch_side = args.patch;
  if (cmd->count("--stride")) spec.solver.grouping.exemplar_stride = args.stride;
  if (cmd->count("--window")) spec.solver.grouping.window_side = args.window;
  if (cmd->count("--k")) spec.solver.grouping.group_size = args.group_size;
  if (cmd->count("--iters")) spec.solver.max_iters = args.iters;
  return spec;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"group-sparse low-rank image restoration"};
  app.require_subcommand(1);

  TaskArgs deblur_args;
  CLI::App* deblur = app.add_subcommand("deblur", "remove blur from an image");
  add_common_options(deblur, deblur_args);
  deblur->add_option("--kernel", deblur_args.kernel,
                     "blur kernel: uniform9|gaussian25|motion20")
      ->capture_default_str();
  deblur->add_option("--kernel-file", deblur_args.kernel_file,
                     "kernel from text file ('rows cols' then values)");
  deblur->add_option("--truth", deblur_args.truth,
                     "treat input as the blurred observation and trace PSNR "
                     "against this reference");

  TaskArgs inpaint_args;
  CLI::App* inpaint =
      app.add_subcommand("inpaint", "fill in missing pixels");
  add_common_options(inpaint, inpaint_args);
  inpaint->add_option("--missing", inpaint_args.missing,
                      "fraction of pixels removed by the seeded mask")
      ->capture_default_str();
  inpaint->add_option("--mask-file", inpaint_args.mask_file,
                      "mask PGM (0 = missing, nonzero = observed)");
  inpaint->add_option("--truth", inpaint_args.truth,
                      "treat input as the damaged observation and trace PSNR "
                      "against this reference");

  TaskArgs cs_args;
  CLI::App* cs = app.add_subcommand(
      "cs", "recover from block-compressed measurements of the input");
  add_common_options(cs, cs_args);
  cs->add_option("--ratio", cs_args.ratio, "measurement ratio in (0, 1]")
      ->capture_default_str();

  CLI::App* verify =
      app.add_subcommand("verify", "run the numerical self-checks");
  int verify_threads = -1;
  verify->add_option("--threads", verify_threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(verify)) {
      configure_threads(verify_threads);
      const lrr::OracleReport report = lrr::run_oracle_suite();
      std::cout << lrr::format(report);
      return report.all_passed() ? 0 : 2;
    }

    lrr::Task task = lrr::Task::deblur;
    const CLI::App* cmd = deblur;
    const TaskArgs* args = &deblur_args;
    if (app.got_subcommand(inpaint)) {
      task = lrr::Task::inpaint;
      cmd = inpaint;
      args = &inpaint_args;
    } else if (app.got_subcommand(cs)) {
      task = lrr::Task::cs;
      cmd = cs;
      args = &cs_args;
    }
    configure_threads(args->threads);
    const lrr::ExperimentSpec spec = build_spec(task, cmd, *args);
    const lrr::RunReport report = lrr::run_experiment(spec);
    std::cout << lrr::format_report_text(report);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
