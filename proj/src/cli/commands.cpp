#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "svgloop/cli.hpp"
#include "svgloop/decompose.hpp"
#include "svgloop/error.hpp"

namespace svgloop::cli {
namespace fs = std::filesystem;

namespace {

std::mutex g_log_mutex;

void log_line(const nlohmann::json& j) {
  std::lock_guard lock(g_log_mutex);
  std::cerr << j.dump() << '\n';
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
}

// Dynamic scheduling: workers pull the next index from a shared counter.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  int count = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (count == 1) {
    worker();
    return;
  }
  std::vector<std::thread> threads;
  for (int w = 0; w < count; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

ParseOptions parse_options(const PipelineConfig& cfg) { return {cfg.parse_mode, true}; }

}  // namespace

std::vector<fs::path> list_svg_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::IoFailure, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".svg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

CommandResult cmd_decompose(const fs::path& in_dir, const fs::path& out_dir, const PipelineConfig& cfg) {
  cfg.validate();
  std::vector<fs::path> files = list_svg_files(in_dir);
  ensure_dir(out_dir);

  std::vector<nlohmann::json> rows(files.size());
  parallel_for(files.size(), cfg.workers(), [&](std::size_t i) {
    nlohmann::json row = {{"file", files[i].filename().string()}};
    try {
      ParseResult parsed = parse_document(read_text(files[i]), parse_options(cfg));
      DecompositionReport rep = decompose_with_report(parsed.document, cfg.verify, cfg.tolerance);
      row["elements_before"] = rep.elements_before;
      row["elements_after"] = rep.elements_after;
      if (!parsed.warnings.empty()) row["warnings"] = parsed.warnings;
      if (rep.pixel_diff) {
        row["delta"] = *rep.pixel_diff;
        if (*rep.pixel_diff > cfg.max_equivalence_diff) {
          row["status"] = "failed";
          row["error"] = "rendering equivalence violated";
        }
      }
      if (!row.contains("status")) {
        write_text(out_dir / files[i].filename(), serialize_document(rep.document));
        row["status"] = "ok";
      }
    } catch (const Error& e) {
      bool skipped = e.kind() == ErrorKind::EmptyDocument && cfg.parse_mode == ParseMode::Lenient;
      row["status"] = skipped ? "skipped" : "failed";
      row["error"] = e.what();
    }
    log_line(row);
    rows[i] = std::move(row);
  });

  std::size_t ok = 0, failed = 0, skipped = 0, before = 0, after = 0;
  for (const auto& row : rows) {
    std::string status = row.at("status");
    if (status == "ok") {
      ++ok;
      before += row.at("elements_before").get<std::size_t>();
      after += row.at("elements_after").get<std::size_t>();
    } else if (status == "skipped") {
      ++skipped;
    } else {
      ++failed;
    }
  }
  CommandResult result;
  result.report = {{"command", "decompose"},
                   {"files", rows},
                   {"totals",
                    {{"processed", files.size()},
                     {"succeeded", ok},
                     {"failed", failed},
                     {"skipped", skipped},
                     {"elements_before", before},
                     {"elements_after", after}}}};
  result.exit_code = failed > 0 ? kExitFailure : kExitOk;
  return result;
}

CommandResult cmd_build_dataset(const fs::path& in_dir, const fs::path& out_dir,
                                const std::optional<fs::path>& prompts_file, PromptKind kind,
                                const PipelineConfig& cfg) {
  cfg.validate();
  std::vector<fs::path> files = list_svg_files(in_dir);
  ensure_dir(out_dir);

  nlohmann::json prompts = nlohmann::json::object();
  if (prompts_file) {
    try {
      prompts = nlohmann::json::parse(read_text(*prompts_file));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Config, "prompts file is not a JSON object: " + std::string(e.what()));
    }
  }

  Deduplicator dedup;
  std::vector<Sample> kept;
  for (const fs::path& f : files) {
    if (auto s = dedup.offer({f.stem().string(), read_text(f)})) kept.push_back(std::move(*s));
  }

  // Static striping keeps shard contents independent of thread timing.
  const int workers = std::max(1, std::min<int>(cfg.workers(), static_cast<int>(std::max<std::size_t>(1, kept.size()))));
  std::vector<std::string> shard_names;
  for (int w = 0; w < workers; ++w) {
    shard_names.push_back(cfg.shard_prefix + "-" + std::to_string(w) + ".jsonl");
    write_text(out_dir / shard_names.back(), "");
  }
  std::vector<std::vector<nlohmann::json>> failures(workers);
  std::vector<std::size_t> records(workers, 0);
  auto work = [&](int w) {
    for (std::size_t i = static_cast<std::size_t>(w); i < kept.size(); i += workers) {
      const Sample& s = kept[i];
      try {
        SvgDocument doc = parse_document(s.svg, parse_options(cfg)).document;
        if (cfg.decompose_before_build) doc = decompose_document(doc, cfg.tolerance);
        std::string text;
        if (kind == PromptKind::Text) {
          if (prompts.contains(s.id)) text = prompts.at(s.id).get<std::string>();
          else if (doc.prompt_metadata) text = *doc.prompt_metadata;
          else throw Error(ErrorKind::InvalidArgument, "no prompt text for " + s.id);
        }
        Trajectory traj = build_trajectory(doc, kind, text, s.id);
        emit_records(traj, out_dir, shard_names[w]);
        ++records[w];
        log_line({{"id", s.id}, {"status", "ok"}, {"steps", traj.steps.size()}});
      } catch (const std::exception& e) {
        failures[w].push_back({{"id", s.id}, {"error", e.what()}});
        log_line({{"id", s.id}, {"status", "failed"}, {"error", e.what()}});
      }
    }
  };
  std::vector<std::thread> threads;
  for (int w = 1; w < workers; ++w) threads.emplace_back(work, w);
  work(0);
  for (auto& t : threads) t.join();

  nlohmann::json failed = nlohmann::json::array();
  for (auto& f : failures)
    for (auto& j : f) failed.push_back(std::move(j));
  std::size_t total_records = 0;
  for (std::size_t r : records) total_records += r;

  nlohmann::json manifest = {{"prompt_kind", kind == PromptKind::Text ? "text" : "image"},
                             {"shards", shard_names},
                             {"records", total_records},
                             {"dedup", dedup.report().to_json()},
                             {"failed", failed}};
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  CommandResult result;
  result.report = manifest;
  result.exit_code = failed.empty() ? kExitOk : kExitFailure;
  return result;
}

namespace {

std::unique_ptr<FragmentGenerator> make_generator(const PipelineConfig& cfg, PromptKind kind) {
  switch (cfg.generator.kind) {
    case GeneratorKind::Scripted:
      return std::make_unique<ScriptedGenerator>(cfg.generator.script);
    case GeneratorKind::Looping:
      if (cfg.generator.fragment.empty()) throw Error(ErrorKind::Config, "looping generator needs a fragment");
      return std::make_unique<LoopingGenerator>(cfg.generator.fragment);
    case GeneratorKind::Remote: {
      RemoteChatConfig remote = cfg.generator.remote;
      remote.task = kind == PromptKind::Text ? ChatTask::TextToSvg : ChatTask::ImageToSvg;
      return std::make_unique<RemoteChatGenerator>(remote);
    }
  }
  throw Error(ErrorKind::Config, "unknown generator kind");
}

Raster load_image(const fs::path& path) {
  if (path.extension() == ".png") return read_png(path);
  return render(parse_document(read_text(path)).document);
}

}  // namespace

CommandResult cmd_run(const std::string& prompt, PromptKind kind, const fs::path& out_dir, const PipelineConfig& cfg,
                      FragmentGenerator* generator) {
  cfg.validate();
  std::unique_ptr<FragmentGenerator> owned;
  if (generator == nullptr) {
    owned = make_generator(cfg, kind);
    generator = owned.get();
  }
  Prompt p{kind, prompt};
  std::optional<Raster> prompt_image;
  if (kind == PromptKind::Image) prompt_image = load_image(prompt);

  SessionResult session = run_session(*generator, p, cfg.rav, cfg.max_steps, cfg.sampling, prompt_image);

  ensure_dir(out_dir);
  write_text(out_dir / "final.svg", serialize_document(session.document));
  write_png(out_dir / "final.png", session.final_canvas());
  write_text(out_dir / "transcript.jsonl", session.transcript_jsonl());
  if (cfg.verbose) {
    for (std::size_t i = 0; i < session.canvases.size(); ++i)
      write_png(out_dir / ("canvas_" + std::to_string(i + 1) + ".png"), session.canvases[i]);
  }
  for (const auto& event : session.transcript) log_line(event);

  CommandResult result;
  result.report = {{"command", "run"},
                   {"termination", to_string(session.termination)},
                   {"steps", session.fragments.size()},
                   {"generator_calls", session.generator_calls},
                   {"transcript_events", session.transcript.size()}};
  switch (session.termination) {
    case Termination::Natural: result.exit_code = kExitOk; break;
    case Termination::Forced: result.exit_code = kExitForcedEnd; break;
    case Termination::StepBudget: result.exit_code = kExitStepBudget; break;
  }
  return result;
}

CommandResult cmd_verify(const fs::path& a, const fs::path& b) {
  Raster ra = load_image(a);
  Raster rb = load_image(b);
  CommandResult result;
  result.report = {{"command", "verify"},
                   {"a", a.string()},
                   {"b", b.string()},
                   {"delta", pixel_diff(ra, rb)},
                   {"mse", mse(ra, rb)}};
  try {
    result.report["ssim"] = ssim(ra, rb);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::TooSmall) throw;
    result.report["ssim"] = nullptr;
  }
  return result;
}

CommandResult cmd_verify_records(const fs::path& dataset_dir) {
  std::vector<fs::path> shards;
  for (const auto& entry : fs::directory_iterator(dataset_dir))
    if (entry.path().extension() == ".jsonl") shards.push_back(entry.path());
  std::sort(shards.begin(), shards.end());

  std::size_t checked = 0, passed = 0;
  nlohmann::json failures = nlohmann::json::array();
  for (const fs::path& shard : shards) {
    std::istringstream lines(read_text(shard));
    std::string line;
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      ++checked;
      nlohmann::json rec;
      try {
        rec = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        failures.push_back({{"shard", shard.filename().string()}, {"error", e.what()}});
        continue;
      }
      ReplayResult r = replay_record(rec, dataset_dir);
      if (r.ok) ++passed;
      else failures.push_back({{"id", rec.value("id", "")}, {"error", r.detail}});
    }
  }
  CommandResult result;
  result.report = {{"command", "verify-records"}, {"records", checked}, {"passed", passed}, {"failures", failures}};
  result.exit_code = failures.empty() ? kExitOk : kExitFailure;
  return result;
}

CommandResult cmd_stats(const fs::path& in_dir, const PipelineConfig& cfg) {
  cfg.validate();
  std::vector<fs::path> files = list_svg_files(in_dir);
  struct Row {
    bool ok = false;
    std::size_t elements = 0, subpaths = 0, decomposed = 0;
  };
  std::vector<Row> rows(files.size());
  parallel_for(files.size(), cfg.workers(), [&](std::size_t i) {
    try {
      SvgDocument doc = parse_document(read_text(files[i]), parse_options(cfg)).document;
      Row r;
      r.ok = true;
      r.elements = doc.elements.size();
      for (const auto& el : doc.elements) r.subpaths += el.subpaths.size();
      r.decomposed = decompose_document(doc, cfg.tolerance).elements.size();
      rows[i] = r;
    } catch (const Error&) {
    }
  });
  std::size_t parsed = 0, elements = 0, subpaths = 0, decomposed = 0;
  for (const Row& r : rows) {
    if (!r.ok) continue;
    ++parsed;
    elements += r.elements;
    subpaths += r.subpaths;
    decomposed += r.decomposed;
  }
  auto avg = [&](std::size_t total) { return parsed ? static_cast<double>(total) / parsed : 0.0; };
  CommandResult result;
  result.report = {{"command", "stats"},
                   {"files", files.size()},
                   {"parsed", parsed},
                   {"failed", files.size() - parsed},
                   {"avg_elements", avg(elements)},
                   {"avg_subpaths", avg(subpaths)},
                   {"avg_elements_after_decomposition", avg(decomposed)}};
  return result;
}

}  // namespace svgloop::cli
