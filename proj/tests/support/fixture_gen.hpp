// Generates replay fixture directories for scripted engine runs. Responses
// are position-independent: any suggest-mode consumption sees fresh in-space
// points (globally unique across the script), so a FIFO replay stays valid
// no matter which steps the policy turns into interventions.
#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "bora/core/card.hpp"
#include "bora/core/rng.hpp"
#include "bora/core/space.hpp"
#include "bora/llm/chat_client.hpp"
#include "comment_corpus.hpp"

namespace testsupport {

struct ScriptOptions {
    std::size_t n_init = 5;
    std::size_t n_llm = 3;
    std::size_t n_comment_responses = 60;  // suggest-mode responses after init
    std::uint64_t seed = 1234;
    // when set, proposed points contract toward this target as the script
    // advances (a deliberately helpful assistant); the radius decays per
    // response so even a handful of consumed interventions gets close
    std::optional<bora::core::Point> focus_target;
    double focus_initial_radius = 0.05;  // fraction of each variable's range
    double focus_decay = 0.97;           // radius multiplier per response
};

// The response sequence: 1 role-overview text, 1 init comment with n_init
// points, n_comment_responses suggest comments with n_llm points each, then
// 2 plain report texts.
inline std::vector<std::string> make_script_texts(const bora::core::SearchSpace& space,
                                                  const ScriptOptions& options) {
    bora::core::Rng rng(options.seed);
    const auto& vars = space.variables();
    const std::size_t d = space.dimension();
    std::vector<std::string> texts;

    std::size_t draw_counter = 0;
    auto next_point = [&](double radius_fraction) {
        bora::core::Point p(d);
        for (std::size_t k = 0; k < d; ++k) {
            const auto& v = vars[k];
            if (options.focus_target) {
                const double span = (v.upper - v.lower) * radius_fraction;
                const double center = (*options.focus_target)[k];
                // deterministic offset pattern keeps points globally unique
                const double jitter = rng.uniform(-span, span) +
                                      1e-7 * static_cast<double>(++draw_counter);
                p[k] = std::clamp(center + jitter, v.lower, v.upper);
            } else {
                p[k] = rng.uniform(v.lower, v.upper);
            }
        }
        return snap_to_grid(space, p);
    };

    texts.push_back(
        "This experiment explores the given variables to maximize the target. I will "
        "comment on progress and propose hypotheses when asked.");

    std::vector<bora::core::Point> init_points;
    for (std::size_t i = 0; i < options.n_init; ++i)
        init_points.push_back(next_point(options.focus_initial_radius * 4.0));
    texts.push_back(comment_json(init_points));

    double radius = options.focus_initial_radius;
    for (std::size_t r = 0; r < options.n_comment_responses; ++r) {
        std::vector<bora::core::Point> points;
        for (std::size_t j = 0; j < options.n_llm; ++j) points.push_back(next_point(radius));
        texts.push_back(comment_json(points));
        radius *= options.focus_decay;
    }

    texts.push_back("| hypothesis | evolution |\n| focus region | narrowed steadily |");
    texts.push_back(
        "The optimization concluded within budget; the best samples clustered in the "
        "focus region. Future work: densify sampling there.");
    return texts;
}

// Writes the script as a replay fixture directory. Returns the fixture count.
inline int write_run_script(const std::string& dir, const bora::core::SearchSpace& space,
                            const ScriptOptions& options) {
    std::vector<bora::llm::ChatMessage> no_messages;
    int index = 0;
    for (const auto& text : make_script_texts(space, options)) {
        bora::llm::ChatResponse response{text, {120, 40}};
        bora::llm::write_fixture(dir, index++, no_messages, 0.7, 2048, response);
    }
    bora::llm::write_fixture_manifest(dir, index, true);
    return index;
}

}  // namespace testsupport
