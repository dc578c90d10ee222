#include <httplib.h>

#include <cctype>
#include <cstdlib>
#include <regex>

#include "svgloop/error.hpp"
#include "svgloop/rav.hpp"

namespace svgloop {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

nlohmann::json image_part(const Raster& raster) {
  std::vector<std::uint8_t> png = encode_png(raster);
  std::string bytes(png.begin(), png.end());
  return {{"type", "image_url"},
          {"image_url", {{"url", "data:image/png;base64," + httplib::detail::base64_encode(bytes)}}}};
}

std::string reply_text(const nlohmann::json& content) {
  if (content.is_string()) return content.get<std::string>();
  std::string text;
  if (content.is_array()) {
    for (const auto& part : content)
      if (part.value("type", "") == "text") text += part.value("text", "");
  }
  return text;
}

}  // namespace

std::string ScriptedGenerator::next_fragment(const GenerationContext&, const SamplingParams&) {
  if (next_ >= script_.size()) return std::string(kEndToken);
  return script_[next_++];
}

nlohmann::json build_chat_request(const GenerationContext& context, const SamplingParams& params,
                                  const std::string& model, ChatTask task) {
  nlohmann::json messages = nlohmann::json::array();
  messages.push_back({{"role", "system"}, {"content", std::string(system_prompt(task))}});
  if (task == ChatTask::ImageToSvg) {
    if (!context.prompt_image) throw Error(ErrorKind::InvalidArgument, "image task without a prompt image");
    messages.push_back({{"role", "user"}, {"content", nlohmann::json::array({image_part(*context.prompt_image)})}});
  } else {
    messages.push_back({{"role", "user"}, {"content", context.prompt.value}});
  }
  for (std::size_t i = 0; i < context.accepted.size(); ++i) {
    messages.push_back({{"role", "assistant"}, {"content", "```svg\n" + context.accepted[i] + "\n```"}});
    messages.push_back({{"role", "user"}, {"content", nlohmann::json::array({image_part(context.canvases[i])})}});
  }
  nlohmann::json body = {{"model", model},
                         {"messages", std::move(messages)},
                         {"temperature", params.temperature},
                         {"top_p", params.top_p}};
  if (params.seed) body["seed"] = *params.seed;
  return body;
}

std::string extract_svg_block(std::string_view reply) {
  constexpr std::string_view kOpen = "```svg";
  auto open = reply.find(kOpen);
  if (open == std::string_view::npos) return std::string(trim(reply));
  std::string_view rest = reply.substr(open + kOpen.size());
  auto close = rest.find("```");
  return std::string(trim(rest.substr(0, close)));
}

RemoteChatGenerator::RemoteChatGenerator(RemoteChatConfig config) : config_(std::move(config)) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0')
    throw Error(ErrorKind::Config, "environment variable " + config_.api_key_env + " is not set");
  api_key_ = key;
  if (config_.model.empty()) throw Error(ErrorKind::Config, "remote generator needs a model name");
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.base_url, m, url))
    throw Error(ErrorKind::Config, "bad base_url '" + config_.base_url + "'");
  scheme_host_port_ = m[1].str();
  path_prefix_ = m[2].str();
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string RemoteChatGenerator::next_fragment(const GenerationContext& context, const SamplingParams& params) {
  std::string body = build_chat_request(context, params, config_.model, config_.task).dump();
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_bearer_token_auth(api_key_);
  std::string last_error;
  for (int attempt = 0; attempt < std::max(1, config_.transport_attempts); ++attempt) {
    auto res = client.Post(path_prefix_ + "/chat/completions", body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw Error(ErrorKind::GeneratorUnavailable, "HTTP " + std::to_string(res->status) + ": " + res->body);
    try {
      auto reply = nlohmann::json::parse(res->body);
      return extract_svg_block(reply_text(reply.at("choices").at(0).at("message").at("content")));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::GeneratorUnavailable, std::string("unreadable reply: ") + e.what());
    }
  }
  throw Error(ErrorKind::GeneratorUnavailable, "no response after retries: " + last_error);
}

}  // namespace svgloop
