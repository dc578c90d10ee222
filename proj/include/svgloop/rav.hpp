#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "svgloop/raster.hpp"
#include "svgloop/svg.hpp"
#include "svgloop/trajectory.hpp"

namespace svgloop {

struct RavConfig {
  double epsilon = 0.001;  // minimum pixel_diff for a step to count as visible
  double tau_sim = 0.98;   // similarity above which a step repeats its predecessor
  int k_max = 5;           // consecutive rejections before a forced end
  double temp_step = 0.1;
  double temp_cap = 1.2;
  double top_p_step = 0.02;

  // Throws Error(InvalidArgument) when a field is out of range.
  void validate() const;
  nlohmann::json to_json() const;
};

struct SamplingParams {
  double temperature = 0.7;
  double top_p = 0.9;
  std::optional<std::uint64_t> seed;

  bool operator==(const SamplingParams&) const = default;
};

// Resampling parameters for the `retry`-th attempt after a rejection (retry >= 1).
SamplingParams escalate_sampling(const SamplingParams& base, int retry, const RavConfig& cfg);

// Ratcliff/Obershelp ratio: 2 * matched characters / total length, where the
// matches come from recursively taking the longest common substring. Two empty
// strings have similarity 1.
double similarity(std::string_view a, std::string_view b);

bool is_end_signal(std::string_view fragment);

enum class Verdict { Accept, RejectNoVisualChange, RejectRepetition, RejectMalformed, ForcedEnd, NaturalEnd };

std::string_view to_string(Verdict v);

struct SessionState {
  Prompt prompt;
  std::optional<Raster> prompt_image;
  std::vector<std::string> accepted;  // C_1 .. C_{t-1}, as generated
  std::vector<Raster> canvases;       // I_1 .. I_{t-1}
  SvgDocument document;               // accepted elements on the default canvas frame
  Raster canvas{kCanvasSize, kCanvasSize};
  int retries = 0;

  const Raster& latest_canvas() const { return canvas; }
};

struct VerifyOutcome {
  Verdict verdict = Verdict::Accept;
  std::optional<Raster> canvas;  // the hypothetical canvas, kept on Accept
  std::vector<PathElement> elements;
  std::optional<double> delta;
  std::optional<double> similarity;
  std::string detail;
};

// Checks, in order: end signal, repetition against the previous accepted
// fragment, strict parse, then the visual-difference test on the hypothetical canvas.
VerifyOutcome verify_step(const SessionState& state, std::string_view candidate, const RavConfig& cfg);

// What a generator sees when asked for the next fragment.
struct GenerationContext {
  const Prompt& prompt;
  const std::optional<Raster>& prompt_image;
  std::span<const std::string> accepted;
  std::span<const Raster> canvases;
  int step = 1;
  int attempt = 0;
};

class FragmentGenerator {
 public:
  virtual ~FragmentGenerator() = default;
  // Raw fragment text; `<END>` signals completion. Transport problems throw
  // Error(GeneratorUnavailable).
  virtual std::string next_fragment(const GenerationContext& context, const SamplingParams& params) = 0;
};

// Replays a fixed list, then keeps answering `<END>`.
class ScriptedGenerator : public FragmentGenerator {
 public:
  explicit ScriptedGenerator(std::vector<std::string> script) : script_(std::move(script)) {}
  std::string next_fragment(const GenerationContext& context, const SamplingParams& params) override;

 private:
  std::vector<std::string> script_;
  std::size_t next_ = 0;
};

// Emits the same fragment forever.
class LoopingGenerator : public FragmentGenerator {
 public:
  explicit LoopingGenerator(std::string fragment) : fragment_(std::move(fragment)) {}
  std::string next_fragment(const GenerationContext&, const SamplingParams&) override { return fragment_; }

 private:
  std::string fragment_;
};

enum class ChatTask { TextToSvg, ImageToSvg };

std::string_view system_prompt(ChatTask task);

struct RemoteChatConfig {
  std::string base_url;  // e.g. https://host/v1
  std::string model;
  std::string api_key_env = "RAV_API_KEY";
  ChatTask task = ChatTask::TextToSvg;
  int timeout_seconds = 120;
  int transport_attempts = 3;
};

// Chat-completions request body for the given context.
nlohmann::json build_chat_request(const GenerationContext& context, const SamplingParams& params,
                                  const std::string& model, ChatTask task);

// Body of the first ```svg fenced block, or the trimmed reply when none exists.
std::string extract_svg_block(std::string_view reply);

// OpenAI-compatible chat-completions client. The constructor reads the API key
// and throws Error(Config) if it is missing.
class RemoteChatGenerator : public FragmentGenerator {
 public:
  explicit RemoteChatGenerator(RemoteChatConfig config);
  std::string next_fragment(const GenerationContext& context, const SamplingParams& params) override;

 private:
  RemoteChatConfig config_;
  std::string api_key_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

enum class Termination { Natural, Forced, StepBudget };

std::string_view to_string(Termination t);

struct SessionResult {
  SvgDocument document;
  std::vector<std::string> fragments;
  std::vector<Raster> canvases;  // I_1 .. I_N
  std::vector<nlohmann::json> transcript;
  std::vector<Verdict> verdicts;
  Termination termination = Termination::Natural;
  std::size_t generator_calls = 0;

  Raster final_canvas() const { return canvases.empty() ? Raster(kCanvasSize, kCanvasSize) : canvases.back(); }
  std::string transcript_jsonl() const;
};

SessionResult run_session(FragmentGenerator& generator, const Prompt& prompt, const RavConfig& cfg, int max_steps,
                          const SamplingParams& base = {}, std::optional<Raster> prompt_image = std::nullopt);

}  // namespace svgloop
