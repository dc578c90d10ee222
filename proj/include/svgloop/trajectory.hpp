#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "svgloop/raster.hpp"
#include "svgloop/svg.hpp"

namespace svgloop {

inline constexpr std::string_view kEndToken = "<END>";

enum class PromptKind { Text, Image };

struct Prompt {
  PromptKind kind = PromptKind::Text;
  std::string value;  // description text, or image file name for image prompts
};

// Segment roles of the interleaved sequence; the loss mask is 1 exactly for
// model output (code fragments and the end marker).
enum class SegmentRole { Prompt, Code, Image, End };

int loss_mask(SegmentRole role);
std::string_view to_string(SegmentRole role);

struct TrajectoryStep {
  int index = 0;  // 1-based
  std::string code;
  Raster canvas;  // cumulative render after this step
  std::vector<SegmentRole> roles{SegmentRole::Code, SegmentRole::Image};
};

struct Trajectory {
  std::string id;
  Prompt prompt;
  std::optional<Raster> prompt_image;  // image prompts only
  SvgDocument frame;                   // root geometry, no elements
  std::vector<TrajectoryStep> steps;
  std::string end_token{kEndToken};

  // Flattened roles: prompt, then code/image per step, then the end marker.
  std::vector<SegmentRole> segment_roles() const;
};

// One step per element in paint order. For image prompts the prompt image is
// the render of the full document. Throws Error(EmptyDocument) with no elements.
Trajectory build_trajectory(const SvgDocument& doc, PromptKind kind, std::string prompt_text, std::string id);

struct Sample {
  std::string id;
  std::string svg;
};

struct DedupReport {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;  // duplicates
  std::size_t failed = 0;   // could not be parsed for canonicalization

  nlohmann::json to_json() const;
};

// Streaming deduplication on canonical serialization; first occurrence wins.
class Deduplicator {
 public:
  // The sample if it is the first of its canonical form, otherwise nullopt.
  std::optional<Sample> offer(Sample sample);
  const DedupReport& report() const { return report_; }

 private:
  std::unordered_set<std::string> seen_;
  DedupReport report_;
};

std::vector<Sample> dedup_corpus(std::vector<Sample> samples, DedupReport* report = nullptr);

struct RecordLocator {
  std::filesystem::path shard;
  std::vector<std::filesystem::path> images;
};

nlohmann::json record_json(const Trajectory& traj);

// Writes canvases as {id}_{t}.png (and {id}_prompt.png), then appends one
// JSON line to `out_dir / shard_name`.
RecordLocator emit_records(const Trajectory& traj, const std::filesystem::path& out_dir,
                           const std::string& shard_name = "records.jsonl");

struct ReplayResult {
  bool ok = true;
  std::size_t steps_checked = 0;
  std::string detail;
};

// Re-renders every code prefix of a stored record from scratch and compares it
// with the stored PNG, and checks the mask layout.
ReplayResult replay_record(const nlohmann::json& record, const std::filesystem::path& dir);

}  // namespace svgloop
