#include "bora/engine/run.hpp"

#include <chrono>
#include <stdexcept>
#include <unordered_set>

#include "bora/surrogate/acquisition.hpp"

namespace bora::engine {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct AbortRun : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// rng stream ids; every consumer gets its own deterministic stream
enum Stream : std::uint64_t {
    kMonitorStream = 1,
    kInitStream = 2,
    kStepStreamBase = 1000,
    kFitStreamBase = 500000,
};

double evaluate_or_abort(const bench::Objective& objective, const core::Point& p) {
    try {
        return objective.evaluate(p);
    } catch (const std::exception& e) {
        throw AbortRun(std::string("objective evaluation failed: ") + e.what());
    }
}

// Acquisition proposals filtered against evaluated points; random fresh
// draws fill any shortfall (sources report which happened).
struct FreshProposals {
    std::vector<core::Point> points;
    std::vector<core::SampleSource> sources;
};

FreshProposals propose_fresh(const surrogate::GpModel& model, const core::Dataset& dataset,
                             std::size_t n, core::Rng& rng, core::SampleSource source) {
    FreshProposals out;
    auto candidates =
        surrogate::propose_candidates(model, dataset.space(), n + 4, rng, &dataset);
    std::unordered_set<std::string> claimed;
    for (auto& c : candidates) {
        if (out.points.size() == n) break;
        if (dataset.contains_point(c)) continue;
        std::string key = core::canonical_key(dataset.space(), c);
        if (!claimed.insert(std::move(key)).second) continue;
        out.points.push_back(std::move(c));
        out.sources.push_back(source);
    }
    int guard = 0;
    while (out.points.size() < n && guard++ < 10000) {
        core::Point p = core::sample_uniform(dataset.space(), rng, 1, &dataset).front();
        std::string key = core::canonical_key(dataset.space(), p);
        if (!claimed.insert(std::move(key)).second) continue;
        out.points.push_back(std::move(p));
        out.sources.push_back(core::SampleSource::FallbackRandom);
    }
    if (out.points.size() < n)
        throw AbortRun("could not generate fresh proposals");
    return out;
}

void append_evaluated(RunLog& log, core::Dataset& dataset, StepRecord& record,
                      const bench::Objective& objective, const std::vector<core::Point>& points,
                      const std::vector<core::SampleSource>& sources, int step) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double y = evaluate_or_abort(objective, points[i]);
        core::Sample sample{points[i], y, sources[i], step,
                            static_cast<int>(dataset.size())};
        if (!dataset.append(sample))
            throw AbortRun("duplicate point reached evaluation");  // guarded upstream
        log.samples.push_back(std::move(sample));
        record.points.push_back(points[i]);
        record.values.push_back(y);
    }
}

PolicySnapshot snapshot(const policy::PolicyState& state, bool plateau,
                        const std::string& chosen) {
    PolicySnapshot snap;
    snap.sigma_mean = state.sigma_mean;
    snap.sigma_upper = state.sigma_upper;
    snap.sigma_lower = state.sigma_lower;
    snap.m = state.m;
    snap.trust = state.trust_current;
    snap.plateau = plateau;
    snap.action = chosen;
    return snap;
}

surrogate::FitOptions fit_options_for_step(const RunConfig& config, int step) {
    surrogate::FitOptions opts = config.fit;
    opts.seed = core::mix_seed(config.seed, kFitStreamBase + static_cast<std::uint64_t>(step));
    return opts;
}

RunLog make_log(const RunConfig& config, const bench::Objective& objective,
                const std::string& method) {
    RunLog log;
    log.objective_name = objective.name();
    log.method = method;
    log.config = config;
    return log;
}

void accumulate_usage(RunLog& log, const llm::ChatUsage& usage) {
    log.prompt_tokens += usage.prompt_tokens;
    log.completion_tokens += usage.completion_tokens;
}

}  // namespace

void RunConfig::validate() const {
    if (n_init < 1) throw std::invalid_argument("config: n_init must be >= 1");
    if (i_max < n_init) throw std::invalid_argument("config: i_max must be >= n_init");
    if (llm.n_lbo > llm.n_bo) throw std::invalid_argument("config: n_lbo must be <= n_bo");
    if (llm.n_llm < 1 || llm.n_bo < 1 || llm.n_lbo < 1)
        throw std::invalid_argument("config: n_llm, n_bo, n_lbo must be >= 1");
}

RunLog run_bora(const RunConfig& config, const bench::Objective& objective,
                llm::ChatClient& client) {
    config.validate();
    const auto t_run = Clock::now();
    RunLog log = make_log(config, objective, "bora");

    const core::ExperimentCard& card = objective.card();
    const core::SearchSpace& space = objective.space();
    const std::size_t d = space.dimension();
    const policy::PolicyConfig pcfg = config.policy.resolved(d);

    core::Dataset dataset(space);
    std::vector<llm::Comment> comments;

    try {
        // role prompt: overview text for the user, not validated
        try {
            auto role_messages = llm::build_role_prompt(card);
            auto overview = client.send(role_messages,
                                        config.llm.consistency.generation_temperature,
                                        config.llm.consistency.max_tokens);
            log.overview_text = overview.content;
            accumulate_usage(log, overview.usage);
        } catch (const llm::TransportError&) {
            log.overview_text.clear();
        }

        // LLM warm start with random fill fallback
        {
            const auto t_step = Clock::now();
            core::Rng init_rng(core::mix_seed(config.seed, kInitStream));
            llm::InterventionContext ctx;
            ctx.card = &card;
            ctx.dataset = &dataset;
            ctx.comments = &comments;
            ctx.n_points = static_cast<std::size_t>(config.n_init);
            ctx.prompt_options = config.llm.prompt;
            ctx.prompt_options.placeholder_seed = core::mix_seed(config.seed, 0x91aceULL);
            ctx.consistency = config.llm.consistency;
            ctx.max_attempts = config.llm.max_attempts;
            auto init = llm::intervene(client, llm::InterventionMode::Init, ctx, init_rng);
            accumulate_usage(log, init.usage);

            StepRecord record;
            record.step = 0;
            record.action = "init";
            record.random_fill = init.random_fill;
            record.y_prev_max = 0.0;
            if (init.comment) {
                record.comment_text = init.comment->insights;
                comments.push_back(std::move(*init.comment));
            }
            record.prompt_tokens = init.usage.prompt_tokens;
            record.completion_tokens = init.usage.completion_tokens;

            std::vector<core::SampleSource> sources(init.points.size(), core::SampleSource::Init);
            for (std::size_t i = init.points.size() - static_cast<std::size_t>(init.random_fill);
                 i < init.points.size(); ++i)
                sources[i] = core::SampleSource::FallbackRandom;
            append_evaluated(log, dataset, record, objective, init.points, sources, 0);
            record.y_max = dataset.y_max();
            log.steps.push_back(std::move(record));
            log.step_wall_seconds.push_back(seconds_since(t_step));
        }

        // fixed monitoring points, then the initial surrogate + policy state
        core::Rng monitor_rng(core::mix_seed(config.seed, kMonitorStream));
        const auto monitor = surrogate::MonitorSet::make(space, monitor_rng, pcfg.q);
        surrogate::GpModel model = surrogate::GpModel::fit(dataset, fit_options_for_step(config, 0));
        policy::PolicyState state = policy::PolicyState::initial(pcfg, d);
        state.ymax_history.push_back(dataset.y_max());
        policy::update_uncertainty(state, pcfg, model, monitor);

        int i = config.n_init;
        int step = 1;
        const int budget = config.n_init + config.i_max;
        while (i < budget) {
            const auto t_step = Clock::now();
            const std::size_t remaining = static_cast<std::size_t>(budget - i);
            core::Rng step_rng(core::mix_seed(config.seed, kStepStreamBase + step));

            const bool plateau = policy::plateau_detected(state.ymax_history, state.m, pcfg.gamma);
            const policy::Action action = policy::select_action(state, plateau);
            const double y_prev_max = dataset.y_max();

            StepRecord record;
            record.step = step;
            record.y_prev_max = y_prev_max;

            llm::InterventionContext ctx;
            ctx.card = &card;
            ctx.dataset = &dataset;
            ctx.comments = &comments;
            ctx.prompt_options = config.llm.prompt;
            ctx.consistency = config.llm.consistency;
            ctx.max_attempts = config.llm.max_attempts;

            bool llm_step = false;
            std::vector<core::Point> points;
            std::vector<core::SampleSource> sources;

            if (action == policy::Action::A2LlmSuggest || action == policy::Action::A3LlmSelect) {
                const bool suggest = action == policy::Action::A2LlmSuggest;
                ctx.n_points = std::min<std::size_t>(
                    suggest ? static_cast<std::size_t>(config.llm.n_llm)
                            : static_cast<std::size_t>(config.llm.n_lbo),
                    remaining);
                if (!suggest)
                    ctx.bo_candidates = surrogate::propose_candidates(
                        model, space, static_cast<std::size_t>(config.llm.n_bo), step_rng,
                        &dataset);
                auto res = llm::intervene(
                    client, suggest ? llm::InterventionMode::A2Suggest
                                    : llm::InterventionMode::A3Select,
                    ctx, step_rng);
                accumulate_usage(log, res.usage);
                record.prompt_tokens = res.usage.prompt_tokens;
                record.completion_tokens = res.usage.completion_tokens;
                if (res.comment) record.comment_text = res.comment->insights;
                if (res.fell_back) {
                    record.fallback = true;
                    record.fallback_reason = res.reason == llm::FallbackReason::TransportFailed
                                                 ? "transport"
                                                 : "validation";
                } else {
                    llm_step = true;
                    points = std::move(res.points);
                    sources.assign(points.size(), suggest ? core::SampleSource::A2
                                                          : core::SampleSource::A3);
                    comments.push_back(std::move(*res.comment));
                }
            }

            if (!llm_step) {
                // vanilla BO step, either chosen by the policy or as fallback
                auto fresh = propose_fresh(model, dataset, 1, step_rng, core::SampleSource::A1);
                points = std::move(fresh.points);
                sources = std::move(fresh.sources);
            }
            record.action = llm_step ? policy::to_string(action) : "a1";

            append_evaluated(log, dataset, record, objective, points, sources, step);
            state.ymax_history.push_back(dataset.y_max());
            record.y_max = dataset.y_max();

            if (llm_step)
                policy::record_intervention(state, pcfg, record.values, y_prev_max);

            model = surrogate::GpModel::fit(dataset, fit_options_for_step(config, step));
            policy::update_uncertainty(state, pcfg, model, monitor);

            record.policy = snapshot(state, plateau, policy::to_string(action));
            log.steps.push_back(std::move(record));
            log.step_wall_seconds.push_back(seconds_since(t_step));
            i += static_cast<int>(points.size());
            ++step;
        }

        auto report = llm::generate_report(client, card, dataset, comments, config.llm.prompt,
                                           config.llm.consistency);
        accumulate_usage(log, report.usage);
        log.report = report.text;
        log.report_available = report.available;
    } catch (const AbortRun& e) {
        log.aborted = true;
        log.abort_reason = e.what();
    }
    log.total_wall_seconds = seconds_since(t_run);
    return log;
}

RunLog run_random(const RunConfig& config, const bench::Objective& objective) {
    config.validate();
    const auto t_run = Clock::now();
    RunLog log = make_log(config, objective, "random");
    core::Dataset dataset(objective.space());
    core::Rng rng(core::mix_seed(config.seed, kInitStream));

    try {
        const int budget = config.n_init + config.i_max;
        for (int step = 0; dataset.size() < static_cast<std::size_t>(budget); ++step) {
            const auto t_step = Clock::now();
            const std::size_t want =
                step == 0 ? static_cast<std::size_t>(config.n_init) : std::size_t{1};
            auto points = core::sample_uniform(objective.space(), rng, want, &dataset);
            StepRecord record;
            record.step = step;
            record.action = step == 0 ? "init" : "random";
            record.y_prev_max = dataset.empty() ? 0.0 : dataset.y_max();
            std::vector<core::SampleSource> sources(
                points.size(),
                step == 0 ? core::SampleSource::Init : core::SampleSource::FallbackRandom);
            append_evaluated(log, dataset, record, objective, points, sources, step);
            record.y_max = dataset.y_max();
            log.steps.push_back(std::move(record));
            log.step_wall_seconds.push_back(seconds_since(t_step));
        }
    } catch (const AbortRun& e) {
        log.aborted = true;
        log.abort_reason = e.what();
    }
    log.total_wall_seconds = seconds_since(t_run);
    return log;
}

RunLog run_vanilla_bo(const RunConfig& config, const bench::Objective& objective) {
    config.validate();
    const auto t_run = Clock::now();
    RunLog log = make_log(config, objective, "vanilla-bo");
    core::Dataset dataset(objective.space());
    core::Rng init_rng(core::mix_seed(config.seed, kInitStream));

    try {
        {
            const auto t_step = Clock::now();
            auto points = core::sample_uniform(objective.space(), init_rng,
                                               static_cast<std::size_t>(config.n_init), &dataset);
            StepRecord record;
            record.step = 0;
            record.action = "init";
            std::vector<core::SampleSource> sources(points.size(), core::SampleSource::Init);
            append_evaluated(log, dataset, record, objective, points, sources, 0);
            record.y_max = dataset.y_max();
            log.steps.push_back(std::move(record));
            log.step_wall_seconds.push_back(seconds_since(t_step));
        }

        const int budget = config.n_init + config.i_max;
        int step = 1;
        while (dataset.size() < static_cast<std::size_t>(budget)) {
            const auto t_step = Clock::now();
            core::Rng step_rng(core::mix_seed(config.seed, kStepStreamBase + step));
            auto model = surrogate::GpModel::fit(dataset, fit_options_for_step(config, step - 1));
            auto fresh = propose_fresh(model, dataset, 1, step_rng, core::SampleSource::A1);
            StepRecord record;
            record.step = step;
            record.action = "a1";
            record.y_prev_max = dataset.y_max();
            append_evaluated(log, dataset, record, objective, fresh.points, fresh.sources, step);
            record.y_max = dataset.y_max();
            log.steps.push_back(std::move(record));
            log.step_wall_seconds.push_back(seconds_since(t_step));
            ++step;
        }
    } catch (const AbortRun& e) {
        log.aborted = true;
        log.abort_reason = e.what();
    }
    log.total_wall_seconds = seconds_since(t_run);
    return log;
}

RunLog run_llm_only(const RunConfig& config, const bench::Objective& objective,
                    llm::ChatClient& client) {
    config.validate();
    const auto t_run = Clock::now();
    RunLog log = make_log(config, objective, "llm-only");

    const core::ExperimentCard& card = objective.card();
    core::Dataset dataset(objective.space());
    std::vector<llm::Comment> comments;

    try {
        try {
            auto role_messages = llm::build_role_prompt(card);
            auto overview = client.send(role_messages,
                                        config.llm.consistency.generation_temperature,
                                        config.llm.consistency.max_tokens);
            log.overview_text = overview.content;
            accumulate_usage(log, overview.usage);
        } catch (const llm::TransportError&) {
            log.overview_text.clear();
        }

        llm::InterventionContext ctx_base;
        ctx_base.card = &card;
        ctx_base.dataset = &dataset;
        ctx_base.comments = &comments;
        ctx_base.prompt_options = config.llm.prompt;
        ctx_base.consistency = config.llm.consistency;
        ctx_base.max_attempts = config.llm.max_attempts;

        {
            const auto t_step = Clock::now();
            core::Rng init_rng(core::mix_seed(config.seed, kInitStream));
            llm::InterventionContext ctx = ctx_base;
            ctx.n_points = static_cast<std::size_t>(config.n_init);
            ctx.prompt_options.placeholder_seed = core::mix_seed(config.seed, 0x91aceULL);
            auto init = llm::intervene(client, llm::InterventionMode::Init, ctx, init_rng);
            accumulate_usage(log, init.usage);
            StepRecord record;
            record.step = 0;
            record.action = "init";
            record.random_fill = init.random_fill;
            if (init.comment) {
                record.comment_text = init.comment->insights;
                comments.push_back(std::move(*init.comment));
            }
            record.prompt_tokens = init.usage.prompt_tokens;
            record.completion_tokens = init.usage.completion_tokens;
            std::vector<core::SampleSource> sources(init.points.size(), core::SampleSource::Init);
            for (std::size_t i = init.points.size() - static_cast<std::size_t>(init.random_fill);
                 i < init.points.size(); ++i)
                sources[i] = core::SampleSource::FallbackRandom;
            append_evaluated(log, dataset, record, objective, init.points, sources, 0);
            record.y_max = dataset.y_max();
            log.steps.push_back(std::move(record));
            log.step_wall_seconds.push_back(seconds_since(t_step));
        }

        const int budget = config.n_init + config.i_max;
        int step = 1;
        while (dataset.size() < static_cast<std::size_t>(budget)) {
            const auto t_step = Clock::now();
            core::Rng step_rng(core::mix_seed(config.seed, kStepStreamBase + step));
            const std::size_t remaining = budget - dataset.size();
            llm::InterventionContext ctx = ctx_base;
            ctx.n_points = std::min<std::size_t>(static_cast<std::size_t>(config.llm.n_llm),
                                                 remaining);
            auto res = llm::intervene_replace_invalid(client, ctx, step_rng);
            accumulate_usage(log, res.usage);

            StepRecord record;
            record.step = step;
            record.action = "a2";
            record.random_fill = res.random_fill;
            record.y_prev_max = dataset.y_max();
            record.prompt_tokens = res.usage.prompt_tokens;
            record.completion_tokens = res.usage.completion_tokens;
            if (res.comment) {
                record.comment_text = res.comment->insights;
                comments.push_back(std::move(*res.comment));
            }
            std::vector<core::SampleSource> sources(res.points.size(), core::SampleSource::A2);
            for (std::size_t i = res.points.size() - static_cast<std::size_t>(res.random_fill);
                 i < res.points.size(); ++i)
                sources[i] = core::SampleSource::FallbackRandom;
            append_evaluated(log, dataset, record, objective, res.points, sources, step);
            record.y_max = dataset.y_max();
            log.steps.push_back(std::move(record));
            log.step_wall_seconds.push_back(seconds_since(t_step));
            ++step;
        }

        auto report = llm::generate_report(client, card, dataset, comments, config.llm.prompt,
                                           config.llm.consistency);
        accumulate_usage(log, report.usage);
        log.report = report.text;
        log.report_available = report.available;
    } catch (const AbortRun& e) {
        log.aborted = true;
        log.abort_reason = e.what();
    }
    log.total_wall_seconds = seconds_since(t_run);
    return log;
}

}  // namespace bora::engine
