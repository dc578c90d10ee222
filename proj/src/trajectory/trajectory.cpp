#include "svgloop/trajectory.hpp"

#include <fstream>

#include "svgloop/error.hpp"

namespace svgloop {

int loss_mask(SegmentRole role) { return role == SegmentRole::Code || role == SegmentRole::End ? 1 : 0; }

std::string_view to_string(SegmentRole role) {
  switch (role) {
    case SegmentRole::Prompt: return "prompt";
    case SegmentRole::Code: return "code";
    case SegmentRole::Image: return "image";
    case SegmentRole::End: return "end";
  }
  return "?";
}

std::vector<SegmentRole> Trajectory::segment_roles() const {
  std::vector<SegmentRole> roles{SegmentRole::Prompt};
  for (const TrajectoryStep& s : steps) roles.insert(roles.end(), s.roles.begin(), s.roles.end());
  roles.push_back(SegmentRole::End);
  return roles;
}

Trajectory build_trajectory(const SvgDocument& doc, PromptKind kind, std::string prompt_text, std::string id) {
  if (doc.elements.empty()) throw Error(ErrorKind::EmptyDocument, "trajectory needs at least one element");
  Trajectory traj;
  traj.id = std::move(id);
  traj.frame = with_elements(doc, {});
  traj.frame.prompt_metadata.reset();
  traj.prompt.kind = kind;
  if (kind == PromptKind::Image) {
    traj.prompt_image = render(doc);
    traj.prompt.value = traj.id + "_prompt.png";
  } else {
    traj.prompt.value = std::move(prompt_text);
  }

  Raster canvas(kCanvasSize, kCanvasSize);
  for (std::size_t i = 0; i < doc.elements.size(); ++i) {
    paint_elements(canvas, doc, std::span(&doc.elements[i], 1));
    TrajectoryStep step;
    step.index = static_cast<int>(i) + 1;
    step.code = serialize_element(doc.elements[i]);
    step.canvas = canvas;
    traj.steps.push_back(std::move(step));
  }
  return traj;
}

nlohmann::json DedupReport::to_json() const {
  return {{"input", input}, {"kept", kept}, {"dropped_duplicates", dropped}, {"failed", failed}};
}

std::optional<Sample> Deduplicator::offer(Sample sample) {
  ++report_.input;
  std::string canonical;
  try {
    canonical = serialize_document(parse_document(sample.svg).document);
  } catch (const Error&) {
    ++report_.failed;
    return std::nullopt;
  }
  if (!seen_.insert(std::move(canonical)).second) {
    ++report_.dropped;
    return std::nullopt;
  }
  ++report_.kept;
  return sample;
}

std::vector<Sample> dedup_corpus(std::vector<Sample> samples, DedupReport* report) {
  Deduplicator dedup;
  std::vector<Sample> out;
  for (Sample& s : samples) {
    if (auto kept = dedup.offer(std::move(s))) out.push_back(std::move(*kept));
  }
  if (report) *report = dedup.report();
  return out;
}

namespace {

std::string image_name(const std::string& id, int step) { return id + "_" + std::to_string(step) + ".png"; }

nlohmann::json role_json(SegmentRole role) { return {{"role", to_string(role)}, {"mask", loss_mask(role)}}; }

}  // namespace

nlohmann::json record_json(const Trajectory& traj) {
  const ViewBox& vb = traj.frame.view_box;
  nlohmann::json rec;
  rec["id"] = traj.id;
  rec["prompt"] = {{"kind", traj.prompt.kind == PromptKind::Text ? "text" : "image"}, {"value", traj.prompt.value}};
  rec["canvas"] = {kCanvasSize, kCanvasSize};
  rec["view_box"] = {vb.x, vb.y, vb.width, vb.height};
  nlohmann::json steps = nlohmann::json::array();
  nlohmann::json segments = nlohmann::json::array({role_json(SegmentRole::Prompt)});
  for (const TrajectoryStep& s : traj.steps) {
    nlohmann::json roles = nlohmann::json::array();
    for (SegmentRole r : s.roles) {
      roles.push_back(role_json(r));
      nlohmann::json seg = role_json(r);
      seg["step"] = s.index;
      segments.push_back(std::move(seg));
    }
    steps.push_back({{"index", s.index}, {"code", s.code}, {"image_file", image_name(traj.id, s.index)}, {"roles", roles}});
  }
  segments.push_back(role_json(SegmentRole::End));
  rec["steps"] = std::move(steps);
  rec["end_token"] = traj.end_token;
  rec["segments"] = std::move(segments);
  return rec;
}

RecordLocator emit_records(const Trajectory& traj, const std::filesystem::path& out_dir, const std::string& shard_name) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + out_dir.string() + ": " + ec.message());
  RecordLocator loc;
  if (traj.prompt_image) {
    loc.images.push_back(out_dir / traj.prompt.value);
    write_png(loc.images.back(), *traj.prompt_image);
  }
  for (const TrajectoryStep& s : traj.steps) {
    loc.images.push_back(out_dir / image_name(traj.id, s.index));
    write_png(loc.images.back(), s.canvas);
  }
  loc.shard = out_dir / shard_name;
  std::ofstream out(loc.shard, std::ios::app);
  out << record_json(traj).dump() << '\n';
  if (!out) throw Error(ErrorKind::IoFailure, "cannot append to " + loc.shard.string());
  return loc;
}

ReplayResult replay_record(const nlohmann::json& record, const std::filesystem::path& dir) {
  ReplayResult result;
  auto fail = [&](std::string why) {
    result.ok = false;
    result.detail = std::move(why);
    return result;
  };
  try {
    SvgDocument frame;
    const auto& vb = record.at("view_box");
    frame.view_box = {vb.at(0).get<double>(), vb.at(1).get<double>(), vb.at(2).get<double>(), vb.at(3).get<double>()};
    int width = record.at("canvas").at(0).get<int>();
    int height = record.at("canvas").at(1).get<int>();

    const auto& steps = record.at("steps");
    if (steps.empty()) return fail("record has no steps");
    ParseOptions opts{ParseMode::Strict, false};
    for (std::size_t t = 0; t < steps.size(); ++t) {
      const auto& step = steps[t];
      if (step.at("index").get<std::size_t>() != t + 1) return fail("non-contiguous step index");
      auto parsed = parse_fragment(step.at("code").get<std::string>(), opts, frame.view_box);
      for (PathElement& el : parsed.document.elements) frame.elements.push_back(std::move(el));
      Raster expected = render(frame, width, height);
      Raster stored = read_png(dir / step.at("image_file").get<std::string>());
      if (!(expected == stored)) return fail("canvas mismatch at step " + std::to_string(t + 1));
      ++result.steps_checked;
    }

    // Masks: prompt 0, then (code 1, image 0) per step, then end 1.
    const auto& segments = record.at("segments");
    if (segments.size() != 2 + 2 * steps.size()) return fail("segment count mismatch");
    for (std::size_t i = 0; i < segments.size(); ++i) {
      std::string role = segments[i].at("role").get<std::string>();
      int mask = segments[i].at("mask").get<int>();
      std::string want_role = i == 0 ? "prompt" : i + 1 == segments.size() ? "end" : (i % 2 == 1 ? "code" : "image");
      int want_mask = (want_role == "code" || want_role == "end") ? 1 : 0;
      if (role != want_role || mask != want_mask) return fail("bad segment " + std::to_string(i));
    }
    if (record.at("end_token").get<std::string>() != kEndToken) return fail("bad end token");
  } catch (const nlohmann::json::exception& e) {
    return fail(std::string("malformed record: ") + e.what());
  } catch (const Error& e) {
    return fail(e.what());
  }
  return result;
}

}  // namespace svgloop
