#include "bora/llm/intervention.hpp"

#include <unordered_set>

namespace bora::llm {

std::variant<Comment, ParseFailure> self_consistent_comment(ChatClient& client,
                                                            const std::vector<ChatMessage>& messages,
                                                            const SelfConsistencyConfig& config,
                                                            ChatUsage* usage_out) {
    ChatUsage usage;
    auto finish = [&](std::variant<Comment, ParseFailure> v) {
        if (usage_out) *usage_out += usage;
        if (auto* c = std::get_if<Comment>(&v)) c->token_usage = usage;
        return v;
    };

    if (config.n_generations <= 1) {
        ChatResponse resp = client.send(messages, config.generation_temperature, config.max_tokens);
        usage += resp.usage;
        return finish(parse_comment(resp.content));
    }

    std::vector<std::string> outputs;
    outputs.reserve(static_cast<std::size_t>(config.n_generations));
    for (int i = 0; i < config.n_generations; ++i) {
        ChatResponse resp = client.send(messages, config.generation_temperature, config.max_tokens);
        usage += resp.usage;
        outputs.push_back(std::move(resp.content));
    }

    std::string merge =
        "You produced " + std::to_string(outputs.size()) +
        " independent responses to the same request, quoted below. Reflect on and critique each "
        "one, check them for consistency, resolve any disagreement by cross-referencing against "
        "the optimization data you were given, and synthesize a single comprehensive, unified "
        "response in the same JSON schema.\n";
    for (std::size_t i = 0; i < outputs.size(); ++i)
        merge += "\n--- Response " + std::to_string(i + 1) + " ---\n" + outputs[i] + "\n";

    std::vector<ChatMessage> consolidation = messages;
    consolidation.push_back({"user", std::move(merge)});
    ChatResponse resp =
        client.send(consolidation, config.consolidation_temperature, config.max_tokens);
    usage += resp.usage;
    return finish(parse_comment(resp.content));
}

namespace {

struct Partition {
    std::vector<core::Point> valid;
    std::vector<ValidationError> errors;
};

// Per-point feasibility split used by init mode and the LLM-only optimizer:
// individually valid, fresh points are kept even when siblings fail.
Partition partition_valid_points(const Comment& comment, const core::SearchSpace& space,
                                 const core::Dataset& dataset,
                                 std::unordered_set<std::string>& claimed_keys) {
    Partition out;
    for (const auto& h : comment.hypotheses) {
        for (const auto& p : h.points) {
            Comment single;
            single.hypotheses.push_back(Hypothesis{h.name, h.rationale, h.confidence_label,
                                                   h.confidence, {p}});
            auto errors = validate_comment(single, space, dataset, CommentMode::Suggest, 1);
            if (!errors.empty()) {
                out.errors.insert(out.errors.end(), errors.begin(), errors.end());
                continue;
            }
            std::string key = core::canonical_key(space, p);
            if (!claimed_keys.insert(std::move(key)).second) {
                out.errors.push_back({ValidationErrorKind::DuplicatePoint,
                                      "hypothesis '" + h.name + "': point repeats another point"});
                continue;
            }
            out.valid.push_back(p);
        }
    }
    return out;
}

core::Point draw_fresh(const core::SearchSpace& space, core::Rng& rng,
                       const core::Dataset& dataset,
                       std::unordered_set<std::string>& claimed_keys) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        core::Point p = core::sample_uniform(space, rng, 1, &dataset).front();
        std::string key = core::canonical_key(space, p);
        if (claimed_keys.insert(std::move(key)).second) return p;
    }
    throw core::SamplerExhausted("random fill: no fresh point found");
}

std::vector<ChatMessage> base_messages(InterventionMode mode, const InterventionContext& ctx,
                                       std::size_t n_points) {
    switch (mode) {
        case InterventionMode::Init:
            return build_init_prompt(*ctx.card, n_points, ctx.prompt_options);
        case InterventionMode::A2Suggest:
            return build_a2_prompt(*ctx.card, *ctx.dataset, *ctx.comments, n_points,
                                   ctx.prompt_options);
        case InterventionMode::A3Select:
            return build_a3_prompt(*ctx.card, *ctx.dataset, *ctx.comments, ctx.bo_candidates,
                                   n_points, ctx.prompt_options);
    }
    throw std::logic_error("unknown intervention mode");
}

void check_context(const InterventionContext& ctx, InterventionMode mode) {
    if (ctx.card == nullptr || ctx.dataset == nullptr || ctx.comments == nullptr)
        throw std::invalid_argument("intervene: context is incomplete");
    if (ctx.n_points == 0) throw std::invalid_argument("intervene: n_points must be >= 1");
    if (mode == InterventionMode::A3Select && ctx.bo_candidates.empty())
        throw std::invalid_argument("intervene: a3 needs BO candidates");
}

}  // namespace

InterventionResult intervene(ChatClient& client, InterventionMode mode,
                             const InterventionContext& context, core::Rng& rng) {
    check_context(context, mode);
    const core::SearchSpace& space = context.card->space;
    InterventionResult result;

    std::unordered_set<std::string> claimed_keys;
    std::vector<core::Point> accepted;  // init mode only
    std::vector<ChatMessage> messages;
    std::string feedback;  // machine-readable error text carried into the re-prompt
    bool transport_failed = false;

    for (int attempt = 0; attempt < context.max_attempts; ++attempt) {
        if (attempt == 0 || mode == InterventionMode::Init) {
            const std::size_t want = mode == InterventionMode::Init
                                         ? context.n_points - accepted.size()
                                         : context.n_points;
            messages = base_messages(mode, context, want);
        }
        if (!feedback.empty()) {
            messages.push_back({"user", feedback});
            feedback.clear();
        }

        ++result.attempts;
        std::variant<Comment, ParseFailure> outcome;
        try {
            outcome = self_consistent_comment(client, messages, context.consistency, &result.usage);
        } catch (const TransportError&) {
            transport_failed = true;
            break;
        }

        if (auto* failure = std::get_if<ParseFailure>(&outcome)) {
            feedback = render_validation_errors(
                {{ValidationErrorKind::MalformedStructure, failure->detail}});
            continue;
        }
        Comment comment = std::move(std::get<Comment>(outcome));

        if (mode == InterventionMode::Init) {
            auto part = partition_valid_points(comment, space, *context.dataset, claimed_keys);
            accepted.insert(accepted.end(), part.valid.begin(), part.valid.end());
            result.comment = std::move(comment);
            if (accepted.size() >= context.n_points) {
                accepted.resize(context.n_points);
                break;
            }
            feedback = render_validation_errors(part.errors);
            continue;
        }

        const CommentMode cmode =
            mode == InterventionMode::A3Select ? CommentMode::Select : CommentMode::Suggest;
        const auto* candidates =
            mode == InterventionMode::A3Select ? &context.bo_candidates : nullptr;
        auto errors = validate_comment(comment, space, *context.dataset, cmode, context.n_points,
                                       candidates);
        if (errors.empty()) {
            result.points = comment.all_points();
            result.comment = std::move(comment);
            return result;
        }
        result.comment = std::move(comment);
        feedback = render_validation_errors(errors);
    }

    if (mode == InterventionMode::Init) {
        while (accepted.size() < context.n_points) {
            accepted.push_back(draw_fresh(space, rng, *context.dataset, claimed_keys));
            ++result.random_fill;
        }
        result.points = std::move(accepted);
        return result;
    }

    result.fell_back = true;
    result.reason =
        transport_failed ? FallbackReason::TransportFailed : FallbackReason::ValidationFailed;
    return result;
}

InterventionResult intervene_replace_invalid(ChatClient& client,
                                             const InterventionContext& context, core::Rng& rng) {
    check_context(context, InterventionMode::A2Suggest);
    const core::SearchSpace& space = context.card->space;
    InterventionResult result = intervene(client, InterventionMode::A2Suggest, context, rng);
    if (!result.fell_back) return result;

    // keep whatever individually valid points the last comment offered and
    // complete the batch randomly
    result.fell_back = false;
    std::unordered_set<std::string> claimed_keys;
    std::vector<core::Point> points;
    if (result.comment) {
        auto part = partition_valid_points(*result.comment, space, *context.dataset, claimed_keys);
        points = std::move(part.valid);
        if (points.size() > context.n_points) points.resize(context.n_points);
    }
    while (points.size() < context.n_points) {
        points.push_back(draw_fresh(space, rng, *context.dataset, claimed_keys));
        ++result.random_fill;
    }
    result.points = std::move(points);
    return result;
}

ReportResult generate_report(ChatClient& client, const core::ExperimentCard& card,
                             const core::Dataset& dataset, const std::vector<Comment>& comments,
                             const PromptOptions& options,
                             const SelfConsistencyConfig& consistency) {
    ReportResult report;
    try {
        auto conclusion_messages = build_conclusion_prompt(card, dataset, comments, options);
        ChatResponse conclusion = client.send(conclusion_messages,
                                              consistency.generation_temperature,
                                              consistency.max_tokens);
        report.usage += conclusion.usage;
        auto summary_messages = build_summary_prompt(card, dataset, comments, options);
        ChatResponse summary = client.send(summary_messages, consistency.generation_temperature,
                                           consistency.max_tokens);
        report.usage += summary.usage;
        if (conclusion.content.empty() && summary.content.empty()) return report;
        report.text = "## Hypothesis evolution\n\n" + conclusion.content +
                      "\n\n## Optimization summary\n\n" + summary.content + "\n";
        report.available = true;
    } catch (const TransportError&) {
        report.text.clear();
        report.available = false;
    }
    return report;
}

}  // namespace bora::llm
