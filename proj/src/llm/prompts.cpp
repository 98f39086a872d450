#include "bora/llm/prompts.hpp"

#include <cstdio>

#include "bora/core/stats.hpp"

namespace bora::llm {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string system_role_text(const core::ExperimentCard& card) {
    return "You are a research assistant specialized in Bayesian optimization and a live "
           "commentator for the experiment \"" +
           card.title +
           "\". You follow the optimization as it progresses, comment on what the data shows, "
           "and propose hypotheses that could maximize the target. Always answer with a single "
           "JSON object when a response schema is given.";
}

}  // namespace

std::size_t estimate_tokens(const std::vector<ChatMessage>& messages) {
    std::size_t chars = 0;
    for (const auto& m : messages) chars += m.role.size() + m.content.size();
    return (chars + 3) / 4;
}

std::string comment_schema_block() {
    return "{\n"
           "  \"comment\": \"<your insights on the optimization progress>\",\n"
           "  \"hypotheses\": [\n"
           "    {\n"
           "      \"name\": \"<short meaningful name>\",\n"
           "      \"rationale\": \"<why this hypothesis could maximize the target>\",\n"
           "      \"confidence\": \"<low|medium|high>\",\n"
           "      \"points\": [[<one value per variable, in the order listed above>]]\n"
           "    }\n"
           "  ]\n"
           "}";
}

std::string render_card(const core::ExperimentCard& card) {
    std::string out;
    out += "Experiment: " + card.title + "\n";
    out += "Description: " + card.description + "\n";
    out += "Target to maximize: " + card.target_name;
    if (!card.target_description.empty()) out += " - " + card.target_description;
    out += "\nVariables (in order):\n";
    for (const auto& v : card.space.variables()) {
        out += "  - " + v.name + ": range [" + fmt(v.lower) + ", " + fmt(v.upper) + "]";
        if (v.kind == core::VarKind::Discrete) out += ", step " + fmt(v.step);
        if (!v.unit.empty()) out += ", unit " + v.unit;
        if (!v.description.empty()) out += ". " + v.description;
        out += "\n";
    }
    if (!card.space.constraints().empty() || !card.constraints_text.empty()) {
        out += "Constraints:\n";
        for (const auto& c : card.space.constraints()) {
            out += "  - The sum of";
            for (std::size_t i = 0; i < c.variable_names.size(); ++i)
                out += (i ? ", " : " ") + c.variable_names[i];
            out += " must not exceed " + fmt(c.bound) + "\n";
        }
        if (!card.constraints_text.empty()) out += "  - " + card.constraints_text + "\n";
    }
    if (!card.context.empty()) out += "Additional context: " + card.context + "\n";
    return out;
}

std::string render_samples(const core::Dataset& dataset) {
    std::string out = "Evaluated samples (";
    out += std::to_string(dataset.size());
    out += " so far), one per line as <index>: x = [...], y = <value>:\n";
    int i = 0;
    for (const auto& s : dataset.samples()) {
        out += std::to_string(i++) + ": x = [";
        for (std::size_t k = 0; k < s.point.size(); ++k)
            out += (k ? ", " : "") + fmt(s.point[k]);
        out += "], y = " + fmt(s.value) + "\n";
    }
    return out;
}

std::string render_correlation_summary(const core::Dataset& dataset) {
    const auto& vars = dataset.space().variables();
    Eigen::MatrixXd corr = core::correlation_matrix(dataset);
    std::string out =
        "The raw samples exceed the context budget, so here is a compressed summary: the "
        "Pearson correlation matrix of the " +
        std::to_string(dataset.size()) + " gathered inputs (variable order as listed above), plus "
        "the best value found so far y_max = " +
        fmt(dataset.y_max()) + ".\n";
    for (Eigen::Index i = 0; i < corr.rows(); ++i) {
        out += vars[static_cast<std::size_t>(i)].name + ": [";
        for (Eigen::Index j = 0; j < corr.cols(); ++j) out += (j ? ", " : "") + fmt(corr(i, j));
        out += "]\n";
    }
    return out;
}

std::string render_comment_history(const std::vector<Comment>& comments) {
    if (comments.empty()) return "No previous comments.\n";
    std::string out = "Your previous comments, oldest first:\n";
    int i = 1;
    for (const auto& c : comments) {
        out += "Comment " + std::to_string(i++) + ": " + c.insights + "\n";
        for (const auto& h : c.hypotheses)
            out += "  Hypothesis \"" + h.name + "\" (confidence " + h.confidence_label +
                   "): " + h.rationale + "\n";
    }
    return out;
}

std::vector<ChatMessage> build_role_prompt(const core::ExperimentCard& card) {
    card.validate();
    std::vector<ChatMessage> messages;
    messages.push_back({"system", system_role_text(card)});
    messages.push_back(
        {"user", render_card(card) +
                     "\nGive an overview of this experiment in your own words and explain how "
                     "you will contribute to the optimization: commenting on progress, forming "
                     "hypotheses, and suggesting or selecting points when asked."});
    return messages;
}

std::vector<ChatMessage> build_init_prompt(const core::ExperimentCard& card,
                                           std::size_t n_hypotheses,
                                           const PromptOptions& options) {
    if (n_hypotheses < 1) throw std::invalid_argument("build_init_prompt: n_hypotheses >= 1");
    card.validate();

    core::Rng rng(options.placeholder_seed);
    const core::Point placeholder = core::sample_uniform(card.space, rng, 1).front();
    std::string example = "[";
    for (std::size_t k = 0; k < placeholder.size(); ++k)
        example += (k ? ", " : "") + fmt(placeholder[k]);
    example += "]";

    std::string user = render_card(card);
    user += "\nThe optimization has not started yet. Using your domain knowledge of this "
            "problem, propose exactly " +
            std::to_string(n_hypotheses) +
            " diverse hypotheses for maximizing the target, each with exactly one input point "
            "to test it.\n";
    user += "Respond with a single JSON object following this schema:\n";
    user += comment_schema_block();
    user += "\nFor example, a point for this experiment looks like " + example +
            " (values in the variable order above, inside the bounds, honoring every "
            "constraint).\nDo not repeat a point across hypotheses.";

    std::vector<ChatMessage> messages;
    messages.push_back({"system", system_role_text(card)});
    messages.push_back({"user", std::move(user)});
    return messages;
}

namespace {

std::vector<ChatMessage> build_progress_prompt(const core::ExperimentCard& card,
                                               const core::Dataset& dataset,
                                               const std::vector<Comment>& comments,
                                               const std::string& task,
                                               const PromptOptions& options) {
    auto assemble = [&](bool compressed) {
        std::string user = render_card(card);
        user += "\n";
        user += compressed ? render_correlation_summary(dataset) : render_samples(dataset);
        user += "\n";
        user += render_comment_history(comments);
        user += "\n";
        user += task;
        std::vector<ChatMessage> messages;
        messages.push_back({"system", system_role_text(card)});
        messages.push_back({"user", std::move(user)});
        return messages;
    };
    auto messages = assemble(false);
    if (estimate_tokens(messages) > options.budget_tokens() && dataset.size() >= 2)
        messages = assemble(true);
    return messages;
}

}  // namespace

std::vector<ChatMessage> build_a2_prompt(const core::ExperimentCard& card,
                                         const core::Dataset& dataset,
                                         const std::vector<Comment>& comments,
                                         std::size_t n_points, const PromptOptions& options) {
    if (dataset.empty()) throw std::invalid_argument("build_a2_prompt: dataset is empty");
    std::string task =
        "Comment on the optimization progress in light of the data above, update any previous "
        "hypotheses, and suggest exactly " +
        std::to_string(n_points) +
        " new points to evaluate next (one point per hypothesis). Points must be inside the "
        "bounds, satisfy every constraint, and must not repeat any evaluated point.\n"
        "Respond with a single JSON object following this schema:\n" +
        comment_schema_block();
    return build_progress_prompt(card, dataset, comments, task, options);
}

std::vector<ChatMessage> build_a3_prompt(const core::ExperimentCard& card,
                                         const core::Dataset& dataset,
                                         const std::vector<Comment>& comments,
                                         const std::vector<core::Point>& bo_candidates,
                                         std::size_t n_select, const PromptOptions& options) {
    if (dataset.empty()) throw std::invalid_argument("build_a3_prompt: dataset is empty");
    if (bo_candidates.empty()) throw std::invalid_argument("build_a3_prompt: no candidates");
    std::string task = "The optimizer proposes these " + std::to_string(bo_candidates.size()) +
                       " candidate points:\n";
    int i = 1;
    for (const auto& c : bo_candidates) {
        task += "Candidate " + std::to_string(i++) + ": [";
        for (std::size_t k = 0; k < c.size(); ++k) task += (k ? ", " : "") + fmt(c[k]);
        task += "]\n";
    }
    task += "Comment on the optimization progress in light of the data above, then select "
            "exactly " +
            std::to_string(n_select) +
            " of these candidates - and only from this list, copied verbatim - that best align "
            "with your hypotheses for maximizing the target.\n"
            "Respond with a single JSON object following this schema:\n" +
            comment_schema_block();
    return build_progress_prompt(card, dataset, comments, task, options);
}

std::vector<ChatMessage> build_conclusion_prompt(const core::ExperimentCard& card,
                                                 const core::Dataset& dataset,
                                                 const std::vector<Comment>& comments,
                                                 const PromptOptions& options) {
    std::string task =
        "The optimization budget is exhausted. Explain briefly, as a markdown table, how your "
        "hypotheses evolved over the experiment: for each hypothesis give its name, how it "
        "changed as data arrived, and whether the results supported it. If you never "
        "intervened, say so.";
    return build_progress_prompt(card, dataset, comments, task, options);
}

std::vector<ChatMessage> build_summary_prompt(const core::ExperimentCard& card,
                                              const core::Dataset& dataset,
                                              const std::vector<Comment>& comments,
                                              const PromptOptions& options) {
    std::string task =
        "Write the final report for the user in markdown. Give an overview of the "
        "optimization, highlight the key results and findings (including the best value found "
        "and where), and recommend future experiments based on the findings.";
    return build_progress_prompt(card, dataset, comments, task, options);
}

std::string render_validation_errors(const std::vector<ValidationError>& errors) {
    std::string out =
        "Your previous response failed validation. Fix every issue below and answer again with "
        "a single JSON object in the same schema:\n";
    for (const auto& e : errors) out += "  - [" + to_string(e.kind) + "] " + e.detail + "\n";
    return out;
}

}  // namespace bora::llm
