#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bora/core/card.hpp"
#include "bora/core/dataset.hpp"
#include "bora/core/rng.hpp"
#include "bora/llm/chat_client.hpp"
#include "bora/llm/comment.hpp"
#include "bora/llm/prompts.hpp"

namespace bora::llm {

struct SelfConsistencyConfig {
    int n_generations = 3;
    double generation_temperature = 0.7;
    double consolidation_temperature = 0.2;
    int max_tokens = 2048;
};

// Draws n generations from the same prompt, then one consolidation call that
// merges them into a single Comment. n = 1 skips consolidation. Token usage
// covers every call made (also written to usage_out when a later parse
// fails). Throws TransportError; a ParseFailure on the final output is
// returned to the caller.
std::variant<Comment, ParseFailure> self_consistent_comment(
    ChatClient& client, const std::vector<ChatMessage>& messages,
    const SelfConsistencyConfig& config = {}, ChatUsage* usage_out = nullptr);

enum class InterventionMode { Init, A2Suggest, A3Select };

enum class FallbackReason { None, ValidationFailed, TransportFailed };

struct InterventionResult {
    bool fell_back = false;  // a2/a3 only: caller should run a vanilla step instead
    FallbackReason reason = FallbackReason::None;
    std::vector<core::Point> points;
    std::optional<Comment> comment;
    int attempts = 0;
    int random_fill = 0;  // init mode: points drawn randomly to complete the set
    ChatUsage usage;
};

struct InterventionContext {
    const core::ExperimentCard* card = nullptr;
    const core::Dataset* dataset = nullptr;
    const std::vector<Comment>* comments = nullptr;
    std::vector<core::Point> bo_candidates;  // a3 only
    std::size_t n_points = 0;                // requested point count
    PromptOptions prompt_options;
    SelfConsistencyConfig consistency;
    int max_attempts = 3;
};

// The full retry/validate/fallback protocol around one LLM intervention.
// Init mode accumulates valid points across attempts and completes the set
// with uniform random draws; a2/a3 return a fallback marker telling the
// engine to execute a vanilla BO step instead.
InterventionResult intervene(ChatClient& client, InterventionMode mode,
                             const InterventionContext& context, core::Rng& rng);

// LLM-only variant of a suggest step: invalid or missing points are replaced
// with random ones so the optimizer always receives a full batch.
InterventionResult intervene_replace_invalid(ChatClient& client,
                                             const InterventionContext& context, core::Rng& rng);

struct ReportResult {
    std::string text;
    bool available = false;
    ChatUsage usage;
};

// Conclusion + summary calls after the budget is exhausted; failures mark
// the report unavailable without failing the run.
ReportResult generate_report(ChatClient& client, const core::ExperimentCard& card,
                             const core::Dataset& dataset, const std::vector<Comment>& comments,
                             const PromptOptions& options = {},
                             const SelfConsistencyConfig& consistency = {});

}  // namespace bora::llm
