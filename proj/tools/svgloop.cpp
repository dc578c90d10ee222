#include <CLI11.hpp>

#include <iostream>

#include "svgloop/cli.hpp"
#include "svgloop/error.hpp"

using namespace svgloop;
using namespace svgloop::cli;

int main(int argc, char** argv) {
  CLI::App app{"svgloop: SVG path decomposition, step-wise trajectory building and render-and-verify sessions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (${VAR} is replaced from the environment)");

  // Flags override the config file; they are applied after loading it.
  std::optional<double> tolerance, epsilon, tau_sim;
  std::optional<int> k_max, parallelism, max_steps;
  bool strict = false, no_verify = false, verbose = false;
  app.add_option("--tolerance", tolerance, "topology flattening tolerance (user units)");
  app.add_option("--epsilon", epsilon, "visual-difference threshold");
  app.add_option("--tau-sim", tau_sim, "repetition similarity threshold");
  app.add_option("--k-max", k_max, "max consecutive rejections per step");
  app.add_option("-j,--parallelism", parallelism, "worker threads (0 = all cores)");
  app.add_option("--max-steps", max_steps, "step budget for run");
  app.add_flag("--strict", strict, "strict parsing (unsupported features are errors)");
  app.add_flag("--no-verify", no_verify, "skip render-equivalence verification");
  app.add_flag("-v,--verbose", verbose, "dump canvas snapshots");

  std::string in_dir, out_dir;
  auto* decompose = app.add_subcommand("decompose", "split paths into visually atomic elements");
  decompose->add_option("input", in_dir, "directory of .svg files")->required();
  decompose->add_option("output", out_dir, "output directory")->required();

  std::string prompts_file;
  bool image_prompts = false;
  auto* build = app.add_subcommand("build-dataset", "dedup, build trajectories, write JSONL shards and PNGs");
  build->add_option("input", in_dir, "directory of decomposed .svg files")->required();
  build->add_option("output", out_dir, "dataset directory")->required();
  build->add_option("--prompts", prompts_file, "JSON object mapping file stem to prompt text");
  build->add_flag("--image-prompts", image_prompts, "use the full render as the prompt image");

  std::string prompt;
  auto* run = app.add_subcommand("run", "run a render-and-verify drawing session");
  run->add_option("prompt", prompt, "prompt text, or an .svg/.png path with --image-prompt")->required();
  run->add_option("-o,--output", out_dir, "artifact directory")->required();
  bool run_image = false;
  run->add_flag("--image-prompt", run_image, "treat the prompt as a target image");

  std::string a, b, records_dir;
  auto* verify = app.add_subcommand("verify", "compare two .svg/.png files, or replay a dataset");
  verify->add_option("a", a, "first .svg or .png");
  verify->add_option("b", b, "second .svg or .png");
  verify->add_option("--records", records_dir, "dataset directory to replay");

  auto* stats = app.add_subcommand("stats", "corpus statistics before and after decomposition");
  stats->add_option("input", in_dir, "directory of .svg files")->required();

  CLI11_PARSE(app, argc, argv);

  PipelineConfig cfg;
  CommandResult result;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (tolerance) cfg.tolerance = *tolerance;
    if (epsilon) cfg.rav.epsilon = *epsilon;
    if (tau_sim) cfg.rav.tau_sim = *tau_sim;
    if (k_max) cfg.rav.k_max = *k_max;
    if (parallelism) cfg.parallelism = *parallelism;
    if (max_steps) cfg.max_steps = *max_steps;
    if (strict) cfg.parse_mode = ParseMode::Strict;
    if (no_verify) cfg.verify = false;
    if (verbose) cfg.verbose = true;
    cfg.validate();

    if (*decompose) {
      result = cmd_decompose(in_dir, out_dir, cfg);
    } else if (*build) {
      std::optional<std::filesystem::path> pf;
      if (!prompts_file.empty()) pf = prompts_file;
      result = cmd_build_dataset(in_dir, out_dir, pf, image_prompts ? PromptKind::Image : PromptKind::Text, cfg);
    } else if (*run) {
      result = cmd_run(prompt, run_image ? PromptKind::Image : PromptKind::Text, out_dir, cfg);
    } else if (*verify) {
      if (!records_dir.empty()) {
        result = cmd_verify_records(records_dir);
      } else if (!a.empty() && !b.empty()) {
        result = cmd_verify(a, b);
      } else {
        std::cerr << "verify needs two files or --records DIR\n";
        return kExitConfig;
      }
    } else if (*stats) {
      result = cmd_stats(in_dir, cfg);
    }
  } catch (const Error& e) {
    std::cout << nlohmann::json{{"error", e.what()}, {"kind", to_string(e.kind())}}.dump() << '\n';
    return e.kind() == ErrorKind::Config || e.kind() == ErrorKind::InvalidArgument ? kExitConfig : kExitFailure;
  }
  std::cout << result.report.dump(2) << '\n';
  return result.exit_code;
}
