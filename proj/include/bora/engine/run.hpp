#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bora/bench/objective.hpp"
#include "bora/core/dataset.hpp"
#include "bora/llm/intervention.hpp"
#include "bora/policy/policy.hpp"

namespace bora::engine {

struct LlmConfig {
    std::string client_kind = "replay";  // replay | live | record | none
    std::string fixtures_dir;
    llm::HttpClientConfig http;
    int n_llm = 3;  // points per a2 intervention
    int n_bo = 5;   // candidates offered to a3
    int n_lbo = 2;  // candidates a3 must select
    llm::PromptOptions prompt;
    llm::SelfConsistencyConfig consistency;
    int max_attempts = 3;
};

struct RunConfig {
    std::string objective = "branin";
    int i_max = 105;  // samples after initialization
    int n_init = 5;
    std::uint64_t seed = 0;
    policy::PolicyConfig policy;
    LlmConfig llm;
    surrogate::FitOptions fit;

    void validate() const;
};

struct PolicySnapshot {
    double sigma_mean = 0.0;
    double sigma_upper = 0.0;
    double sigma_lower = 0.0;
    int m = 0;
    double trust = 0.0;
    bool plateau = false;
    std::string action;  // action the policy chose for this step
};

struct StepRecord {
    int step = 0;                // 0 is the initialization step
    std::string action;          // init | a1 | a2 | a3 | random, as executed
                                 // (an a2/a3 fallback executes and logs as a1)
    bool fallback = false;       // a2/a3 failed and ran as a vanilla step
    std::string fallback_reason; // validation | transport
    int random_fill = 0;         // points drawn randomly (init / llm-only)
    std::vector<core::Point> points;
    std::vector<double> values;
    double y_prev_max = 0.0;  // y_max before this step; reward input for interventions
    double y_max = 0.0;       // y_max after this step
    PolicySnapshot policy;
    std::string comment_text;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

struct RunLog {
    std::string objective_name;
    std::string method;
    RunConfig config;  // snapshot taken at run start
    std::string overview_text;
    std::vector<StepRecord> steps;
    std::vector<core::Sample> samples;  // evaluation order
    std::string report;
    bool report_available = false;
    bool aborted = false;
    std::string abort_reason;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;

    // wall-clock timing lives outside the canonical serialization so replayed
    // runs stay byte-identical
    std::vector<double> step_wall_seconds;
    double total_wall_seconds = 0.0;

    std::size_t total_samples() const { return samples.size(); }
};

// The full hybrid loop: LLM warm start, per-step action selection between
// vanilla BO and the two LLM interventions, trust/plateau bookkeeping, and
// the closing report.
RunLog run_bora(const RunConfig& config, const bench::Objective& objective,
                llm::ChatClient& client);

// Baselines.
RunLog run_random(const RunConfig& config, const bench::Objective& objective);
RunLog run_vanilla_bo(const RunConfig& config, const bench::Objective& objective);
RunLog run_llm_only(const RunConfig& config, const bench::Objective& objective,
                    llm::ChatClient& client);

}  // namespace bora::engine
