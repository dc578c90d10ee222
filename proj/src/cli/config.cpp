#include <cstdlib>
#include <fstream>
#include <thread>

#include "svgloop/cli.hpp"
#include "svgloop/error.hpp"

namespace svgloop::cli {

void PipelineConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::Config, what); };
  if (!(tolerance > 0.0)) bad("tolerance must be > 0");
  if (!(max_equivalence_diff >= 0.0 && max_equivalence_diff <= 1.0)) bad("max_equivalence_diff must be in [0,1]");
  if (parallelism < 0) bad("parallelism must be >= 0");
  if (max_steps < 1) bad("max_steps must be >= 1");
  if (!(sampling.temperature >= 0.0)) bad("temperature must be >= 0");
  if (!(sampling.top_p > 0.0 && sampling.top_p <= 1.0)) bad("top_p must be in (0,1]");
  try {
    rav.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
}

int PipelineConfig::workers() const {
  if (parallelism > 0) return parallelism;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string interpolate_env(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto start = text.find("${", pos);
    if (start == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    auto end = text.find('}', start);
    if (end == std::string_view::npos) throw Error(ErrorKind::Config, "unterminated ${ in config");
    out.append(text.substr(pos, start - pos));
    std::string name(text.substr(start + 2, end - start - 2));
    const char* value = std::getenv(name.c_str());
    if (value == nullptr) throw Error(ErrorKind::Config, "environment variable " + name + " is not set");
    out.append(value);
    pos = end + 1;
  }
  return out;
}

namespace {

nlohmann::json interpolate_tree(const nlohmann::json& j) {
  if (j.is_string()) return interpolate_env(j.get<std::string>());
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = interpolate_tree(it.value());
    return out;
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(interpolate_tree(v));
    return out;
  }
  return j;
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

void apply_json(PipelineConfig& cfg, const nlohmann::json& raw) {
  nlohmann::json j = interpolate_tree(raw);
  try {
    read(j, "tolerance", cfg.tolerance);
    read(j, "verify", cfg.verify);
    read(j, "max_equivalence_diff", cfg.max_equivalence_diff);
    read(j, "parallelism", cfg.parallelism);
    read(j, "max_steps", cfg.max_steps);
    read(j, "shard_prefix", cfg.shard_prefix);
    read(j, "decompose_before_build", cfg.decompose_before_build);
    read(j, "verbose", cfg.verbose);
    if (j.contains("parse_mode")) {
      std::string mode = j.at("parse_mode").get<std::string>();
      if (mode == "strict") cfg.parse_mode = ParseMode::Strict;
      else if (mode == "lenient") cfg.parse_mode = ParseMode::Lenient;
      else throw Error(ErrorKind::Config, "parse_mode must be strict or lenient");
    }
    if (j.contains("rav")) {
      const auto& r = j.at("rav");
      read(r, "epsilon", cfg.rav.epsilon);
      read(r, "tau_sim", cfg.rav.tau_sim);
      read(r, "k_max", cfg.rav.k_max);
      read(r, "temp_step", cfg.rav.temp_step);
      read(r, "temp_cap", cfg.rav.temp_cap);
      read(r, "top_p_step", cfg.rav.top_p_step);
    }
    if (j.contains("sampling")) {
      const auto& s = j.at("sampling");
      read(s, "temperature", cfg.sampling.temperature);
      read(s, "top_p", cfg.sampling.top_p);
      if (s.contains("seed")) cfg.sampling.seed = s.at("seed").get<std::uint64_t>();
    }
    if (j.contains("generator")) {
      const auto& g = j.at("generator");
      std::string kind = g.value("kind", "scripted");
      if (kind == "scripted") cfg.generator.kind = GeneratorKind::Scripted;
      else if (kind == "looping") cfg.generator.kind = GeneratorKind::Looping;
      else if (kind == "remote") cfg.generator.kind = GeneratorKind::Remote;
      else throw Error(ErrorKind::Config, "generator.kind must be scripted, looping or remote");
      read(g, "script", cfg.generator.script);
      read(g, "fragment", cfg.generator.fragment);
      read(g, "base_url", cfg.generator.remote.base_url);
      read(g, "model", cfg.generator.remote.model);
      read(g, "api_key_env", cfg.generator.remote.api_key_env);
      read(g, "timeout_seconds", cfg.generator.remote.timeout_seconds);
      read(g, "transport_attempts", cfg.generator.remote.transport_attempts);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, e.what());
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  PipelineConfig cfg;
  apply_json(cfg, j);
  return cfg;
}

}  // namespace svgloop::cli
