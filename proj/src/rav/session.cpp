#include "svgloop/error.hpp"
#include "svgloop/rav.hpp"

namespace svgloop {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Natural: return "natural";
    case Termination::Forced: return "forced";
    case Termination::StepBudget: return "step_budget";
  }
  return "?";
}

std::string SessionResult::transcript_jsonl() const {
  std::string out;
  for (const nlohmann::json& e : transcript) out += e.dump() + "\n";
  return out;
}

SessionResult run_session(FragmentGenerator& generator, const Prompt& prompt, const RavConfig& cfg, int max_steps,
                          const SamplingParams& base, std::optional<Raster> prompt_image) {
  cfg.validate();
  if (max_steps < 1) throw Error(ErrorKind::InvalidArgument, "max_steps must be >= 1");

  SessionState state;
  state.prompt = prompt;
  state.prompt_image = std::move(prompt_image);
  SessionResult result;

  nlohmann::json header = {{"event", "config"}, {"max_steps", max_steps},
                           {"base_temperature", base.temperature}, {"base_top_p", base.top_p}};
  header.update(cfg.to_json());
  result.transcript.push_back(std::move(header));

  auto finish = [&](Termination t) {
    result.termination = t;
    result.document = state.document;
    result.fragments = state.accepted;
    result.canvases = state.canvases;
    result.transcript.push_back(
        {{"event", "end"}, {"termination", to_string(t)}, {"steps_accepted", state.accepted.size()}});
    return result;
  };

  for (int step = 1; step <= max_steps; ++step) {
    state.retries = 0;
    while (true) {
      // Temperature restarts from the base value at every new step.
      SamplingParams params = state.retries == 0 ? base : escalate_sampling(base, state.retries, cfg);
      GenerationContext ctx{state.prompt, state.prompt_image, state.accepted, state.canvases, step, state.retries};
      std::string candidate = generator.next_fragment(ctx, params);
      ++result.generator_calls;

      VerifyOutcome v = verify_step(state, candidate, cfg);
      result.verdicts.push_back(v.verdict);
      nlohmann::json event = {{"event", "candidate"},    {"step", step},
                              {"attempt", state.retries}, {"temperature", params.temperature},
                              {"top_p", params.top_p},    {"fragment", candidate},
                              {"verdict", to_string(v.verdict)}};
      if (v.delta) event["delta"] = *v.delta;
      if (v.similarity) event["similarity"] = *v.similarity;
      if (!v.detail.empty()) event["detail"] = v.detail;

      if (v.verdict == Verdict::NaturalEnd) {
        result.transcript.push_back(std::move(event));
        return finish(Termination::Natural);
      }
      if (v.verdict == Verdict::Accept) {
        event["canvas"] = "canvas_" + std::to_string(step) + ".png";
        result.transcript.push_back(std::move(event));
        state.accepted.push_back(std::string(candidate));
        for (PathElement& el : v.elements) {
          el.source_index = static_cast<int>(state.document.elements.size());
          state.document.elements.push_back(std::move(el));
        }
        state.canvas = std::move(*v.canvas);
        state.canvases.push_back(state.canvas);
        break;
      }
      result.transcript.push_back(std::move(event));
      if (++state.retries >= cfg.k_max) {
        result.verdicts.push_back(Verdict::ForcedEnd);
        return finish(Termination::Forced);
      }
    }
  }
  return finish(Termination::StepBudget);
}

}  // namespace svgloop
