#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "svgloop/rav.hpp"
#include "svgloop/svg.hpp"
#include "svgloop/trajectory.hpp"

namespace svgloop::cli {

// Process exit codes, one per outcome class.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitForcedEnd = 3,
  kExitStepBudget = 4,
};

enum class GeneratorKind { Scripted, Looping, Remote };

struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::Scripted;
  std::vector<std::string> script;  // scripted: fragments in order
  std::string fragment;             // looping: the repeated fragment
  RemoteChatConfig remote;
};

struct PipelineConfig {
  double tolerance = 0.1;
  bool verify = true;
  double max_equivalence_diff = 1e-3;
  ParseMode parse_mode = ParseMode::Lenient;
  int parallelism = 0;  // 0: hardware concurrency
  RavConfig rav;
  SamplingParams sampling;
  int max_steps = 32;
  GeneratorConfig generator;
  std::string shard_prefix = "shard";
  bool decompose_before_build = false;
  bool verbose = false;

  void validate() const;
  int workers() const;
};

// Replaces ${NAME} with the environment variable's value; throws
// Error(Config) for unset variables.
std::string interpolate_env(std::string_view text);

// Overlays keys from a JSON object onto `cfg`.
void apply_json(PipelineConfig& cfg, const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json report;
};

CommandResult cmd_decompose(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                            const PipelineConfig& cfg);

CommandResult cmd_build_dataset(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                                const std::optional<std::filesystem::path>& prompts_file, PromptKind kind,
                                const PipelineConfig& cfg);

// `prompt` is text for text prompts, or an .svg/.png path for image prompts.
// `generator` overrides the configured one when given.
CommandResult cmd_run(const std::string& prompt, PromptKind kind, const std::filesystem::path& out_dir,
                      const PipelineConfig& cfg, FragmentGenerator* generator = nullptr);

// Metrics between two .svg or .png files (SVGs are rendered first).
CommandResult cmd_verify(const std::filesystem::path& a, const std::filesystem::path& b);

// Replays every record of a dataset directory.
CommandResult cmd_verify_records(const std::filesystem::path& dataset_dir);

CommandResult cmd_stats(const std::filesystem::path& in_dir, const PipelineConfig& cfg);

std::vector<std::filesystem::path> list_svg_files(const std::filesystem::path& dir);

}  // namespace svgloop::cli
