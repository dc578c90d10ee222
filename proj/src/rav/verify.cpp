#include <algorithm>
#include <cctype>

#include "svgloop/error.hpp"
#include "svgloop/rav.hpp"

namespace svgloop {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

void RavConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) bad("epsilon must be in [0,1]");
  if (!(tau_sim >= 0.0 && tau_sim <= 1.0)) bad("tau_sim must be in [0,1]");
  if (k_max < 1) bad("k_max must be >= 1");
  if (!(temp_step >= 0.0)) bad("temp_step must be >= 0");
  if (!(temp_cap >= 0.0)) bad("temp_cap must be >= 0");
  if (!(top_p_step >= 0.0)) bad("top_p_step must be >= 0");
}

nlohmann::json RavConfig::to_json() const {
  return {{"epsilon", epsilon}, {"tau_sim", tau_sim},   {"k_max", k_max},
          {"temp_step", temp_step}, {"temp_cap", temp_cap}, {"top_p_step", top_p_step}};
}

SamplingParams escalate_sampling(const SamplingParams& base, int retry, const RavConfig& cfg) {
  if (retry < 1) throw Error(ErrorKind::InvalidArgument, "escalation starts at retry 1");
  SamplingParams p = base;
  p.temperature = std::min(cfg.temp_cap, base.temperature + retry * cfg.temp_step);
  p.top_p = std::min(1.0, base.top_p + retry * cfg.top_p_step);
  return p;
}

bool is_end_signal(std::string_view fragment) { return trim(fragment) == kEndToken; }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept: return "accept";
    case Verdict::RejectNoVisualChange: return "reject_no_visual_change";
    case Verdict::RejectRepetition: return "reject_repetition";
    case Verdict::RejectMalformed: return "reject_malformed";
    case Verdict::ForcedEnd: return "forced_end";
    case Verdict::NaturalEnd: return "natural_end";
  }
  return "?";
}

VerifyOutcome verify_step(const SessionState& state, std::string_view candidate, const RavConfig& cfg) {
  VerifyOutcome out;
  if (is_end_signal(candidate)) {
    out.verdict = Verdict::NaturalEnd;
    return out;
  }
  std::string_view text = trim(candidate);
  if (!state.accepted.empty()) {
    out.similarity = similarity(text, trim(state.accepted.back()));
    if (*out.similarity > cfg.tau_sim) {
      out.verdict = Verdict::RejectRepetition;
      return out;
    }
  }
  try {
    ParseOptions opts{ParseMode::Strict, true};
    out.elements = parse_fragment(text, opts, state.document.view_box).document.elements;
    Raster hypothetical = state.canvas;
    paint_elements(hypothetical, state.document, out.elements);
    out.delta = pixel_diff(state.canvas, hypothetical);
    out.canvas = std::move(hypothetical);
  } catch (const Error& e) {
    out.verdict = Verdict::RejectMalformed;
    out.detail = e.what();
    out.elements.clear();
    return out;
  }
  if (*out.delta < cfg.epsilon) {
    out.verdict = Verdict::RejectNoVisualChange;
    out.canvas.reset();
    return out;
  }
  out.verdict = Verdict::Accept;
  return out;
}

}  // namespace svgloop
