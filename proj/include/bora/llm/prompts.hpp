#pragma once

#include <string>
#include <vector>

#include "bora/core/card.hpp"
#include "bora/core/dataset.hpp"
#include "bora/llm/chat_client.hpp"
#include "bora/llm/comment.hpp"

namespace bora::llm {

struct PromptOptions {
    std::size_t context_window_tokens = 128000;
    double budget_fraction = 0.8;  // switch to the correlation-matrix summary past this
    std::uint64_t placeholder_seed = 17;

    std::size_t budget_tokens() const {
        return static_cast<std::size_t>(budget_fraction *
                                        static_cast<double>(context_window_tokens));
    }
};

// crude but deterministic: one token per four characters
std::size_t estimate_tokens(const std::vector<ChatMessage>& messages);

// The exact response-schema block every point-producing prompt embeds once.
std::string comment_schema_block();

std::string render_card(const core::ExperimentCard& card);
// sample table, or the correlation-matrix summary when the rendered
// messages would blow the token budget
std::string render_samples(const core::Dataset& dataset);
std::string render_correlation_summary(const core::Dataset& dataset);
std::string render_comment_history(const std::vector<Comment>& comments);

// System + user messages assigning the research-assistant role and asking
// for an overview of the experiment.
std::vector<ChatMessage> build_role_prompt(const core::ExperimentCard& card);

// Few-shot initialization prompt requesting n_hypotheses hypotheses, with
// randomly sampled in-space placeholder values.
std::vector<ChatMessage> build_init_prompt(const core::ExperimentCard& card,
                                           std::size_t n_hypotheses,
                                           const PromptOptions& options = {});

// Comment-and-suggest: all gathered data plus prior comments, asking for
// n_points new points.
std::vector<ChatMessage> build_a2_prompt(const core::ExperimentCard& card,
                                         const core::Dataset& dataset,
                                         const std::vector<Comment>& comments,
                                         std::size_t n_points, const PromptOptions& options = {});

// Comment-and-select: additionally lists the BO candidates and constrains
// the choice to that list.
std::vector<ChatMessage> build_a3_prompt(const core::ExperimentCard& card,
                                         const core::Dataset& dataset,
                                         const std::vector<Comment>& comments,
                                         const std::vector<core::Point>& bo_candidates,
                                         std::size_t n_select, const PromptOptions& options = {});

std::vector<ChatMessage> build_conclusion_prompt(const core::ExperimentCard& card,
                                                 const core::Dataset& dataset,
                                                 const std::vector<Comment>& comments,
                                                 const PromptOptions& options = {});

std::vector<ChatMessage> build_summary_prompt(const core::ExperimentCard& card,
                                              const core::Dataset& dataset,
                                              const std::vector<Comment>& comments,
                                              const PromptOptions& options = {});

// Reprompt suffix appended after a failed validation attempt.
std::string render_validation_errors(const std::vector<ValidationError>& errors);

}  // namespace bora::llm
