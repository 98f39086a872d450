#include "bora/cli/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "bora/bench/objective.hpp"
#include "bora/engine/log_io.hpp"
#include "bora/engine/metrics.hpp"
#include "bora/engine/run.hpp"

namespace bora::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitEnvironment = 2;
constexpr int kExitAbort = 3;

struct CliConfig {
    engine::RunConfig run;
    std::string method = "bora";
    int trials = 1;
    int jobs = 1;
    std::string out_dir = "out";
};

void apply_config_file(CliConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    json j = json::parse(in);
    auto& run = cfg.run;
    run.objective = j.value("objective", run.objective);
    run.i_max = j.value("i_max", run.i_max);
    run.n_init = j.value("n_init", run.n_init);
    run.seed = j.value("seed", run.seed);
    cfg.method = j.value("method", cfg.method);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.jobs = j.value("jobs", cfg.jobs);
    cfg.out_dir = j.value("out", cfg.out_dir);
    if (j.contains("policy")) {
        const auto& p = j["policy"];
        run.policy.gamma = p.value("gamma", run.policy.gamma);
        run.policy.upper_fraction = p.value("upper_fraction", run.policy.upper_fraction);
        run.policy.lower_fraction = p.value("lower_fraction", run.policy.lower_fraction);
        run.policy.delta_max = p.value("delta_max", run.policy.delta_max);
        run.policy.trust_init = p.value("trust_init", run.policy.trust_init);
        run.policy.m_init = p.value("m_init", run.policy.m_init);
        run.policy.m_max = p.value("m_max", run.policy.m_max);
        run.policy.q = p.value("q", run.policy.q);
    }
    if (j.contains("llm")) {
        const auto& l = j["llm"];
        run.llm.client_kind = l.value("client", run.llm.client_kind);
        run.llm.fixtures_dir = l.value("fixtures", run.llm.fixtures_dir);
        run.llm.n_llm = l.value("n_llm", run.llm.n_llm);
        run.llm.n_bo = l.value("n_bo", run.llm.n_bo);
        run.llm.n_lbo = l.value("n_lbo", run.llm.n_lbo);
        run.llm.http.model = l.value("model", run.llm.http.model);
        run.llm.http.base_url = l.value("base_url", run.llm.http.base_url);
        run.llm.prompt.context_window_tokens =
            l.value("context_window_tokens", run.llm.prompt.context_window_tokens);
        run.llm.consistency.n_generations =
            l.value("self_consistency", run.llm.consistency.n_generations);
        run.llm.max_attempts = l.value("max_attempts", run.llm.max_attempts);
    }
    if (j.contains("fit")) {
        const auto& f = j["fit"];
        run.fit.restarts = f.value("restarts", run.fit.restarts);
        run.fit.max_iters = f.value("max_iters", run.fit.max_iters);
    }
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

bool needs_llm(const std::string& method) { return method == "bora" || method == "llm-only"; }

std::unique_ptr<llm::ChatClient> make_client(const CliConfig& cfg, int trial,
                                             const std::string& record_dir) {
    const auto& lc = cfg.run.llm;
    if (lc.client_kind == "replay") {
        // per-trial fixture subdirectories win over a shared directory
        const fs::path per_trial = fs::path(lc.fixtures_dir) / ("trial" + std::to_string(trial));
        const std::string dir =
            fs::is_directory(per_trial) ? per_trial.string() : lc.fixtures_dir;
        return std::make_unique<llm::ReplayChatClient>(dir);
    }
    llm::HttpClientConfig http = lc.http;
    http.base_url = env_or("BORA_BASE_URL", http.base_url);
    http.api_key = env_or("BORA_API_KEY", http.api_key);
    auto live = std::make_unique<llm::HttpChatClient>(http);
    if (!record_dir.empty()) {
        const std::string dir =
            (fs::path(record_dir) / ("trial" + std::to_string(trial))).string();
        return std::make_unique<llm::RecordingChatClient>(std::move(live), dir);
    }
    return live;
}

engine::RunLog execute_trial(const CliConfig& cfg, const bench::Objective& objective, int trial,
                             const std::string& record_dir) {
    engine::RunConfig run = cfg.run;
    run.seed = cfg.run.seed + static_cast<std::uint64_t>(trial);
    if (cfg.method == "random") return engine::run_random(run, objective);
    if (cfg.method == "vanilla-bo") return engine::run_vanilla_bo(run, objective);
    auto client = make_client(cfg, trial, record_dir);
    engine::RunLog log = cfg.method == "llm-only" ? engine::run_llm_only(run, objective, *client)
                                                  : engine::run_bora(run, objective, *client);
    if (auto* recorder = dynamic_cast<llm::RecordingChatClient*>(client.get());
        recorder != nullptr && !log.aborted)
        recorder->finalize();
    return log;
}

int run_command(CliConfig cfg, const std::string& record_dir, bool force) {
    try {
        cfg.run.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (cfg.trials < 1 || cfg.jobs < 1) {
        std::cerr << "config error: trials and jobs must be >= 1\n";
        return kExitConfig;
    }

    if (needs_llm(cfg.method)) {
        if (cfg.run.llm.client_kind == "replay") {
            if (!fs::is_directory(cfg.run.llm.fixtures_dir)) {
                std::cerr << "environment error: replay fixtures directory not found: "
                          << cfg.run.llm.fixtures_dir << '\n';
                return kExitEnvironment;
            }
        } else if (env_or("BORA_API_KEY", cfg.run.llm.http.api_key).empty()) {
            std::cerr << "environment error: live client requires BORA_API_KEY\n";
            return kExitEnvironment;
        }
    }
    if (!record_dir.empty() && fs::exists(record_dir) && !fs::is_empty(record_dir) && !force) {
        std::cerr << "refusing to record into non-empty directory " << record_dir
                  << " (use --force)\n";
        return kExitConfig;
    }

    std::unique_ptr<bench::Objective> objective;
    try {
        objective = bench::make_objective(cfg.run.objective);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    const fs::path dir = fs::path(cfg.out_dir) / (cfg.method + "_" + cfg.run.objective);
    fs::create_directories(dir);

    std::vector<engine::RunLog> logs(static_cast<std::size_t>(cfg.trials));
    std::mutex io_mutex;
    std::atomic<int> next{0};
    const int jobs = std::min(cfg.jobs, cfg.trials);
    if (jobs > 1)
        omp_set_num_threads(
            std::max(1, static_cast<int>(std::thread::hardware_concurrency()) / jobs));

    auto worker = [&] {
        for (int t = next.fetch_add(1); t < cfg.trials; t = next.fetch_add(1)) {
            engine::RunLog log = execute_trial(cfg, *objective, t, record_dir);
            {
                std::lock_guard<std::mutex> lock(io_mutex);
                const std::string base = (dir / ("runlog_trial" + std::to_string(t))).string();
                engine::write_runlog(base + ".jsonl", log);
                engine::write_text_atomic(
                    (dir / ("dataset_trial" + std::to_string(t) + ".jsonl")).string(),
                    engine::dataset_to_jsonl(log, t));
                if (log.report_available)
                    engine::write_text_atomic(
                        (dir / ("report_trial" + std::to_string(t) + ".md")).string(), log.report);
                std::cout << cfg.method << " " << cfg.run.objective << " trial " << t << ": "
                          << (log.aborted ? "ABORTED" : "done") << ", samples "
                          << log.total_samples() << ", y_max "
                          << (log.samples.empty() ? 0.0 : engine::max_so_far_curve(log).back())
                          << '\n';
            }
            logs[static_cast<std::size_t>(t)] = std::move(log);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // aggregate CSV: trial x sample x best-so-far
    std::ostringstream csv;
    csv << "trial,sample,y,y_max\n";
    for (int t = 0; t < cfg.trials; ++t) {
        const auto curve = engine::max_so_far_curve(logs[static_cast<std::size_t>(t)]);
        const auto& samples = logs[static_cast<std::size_t>(t)].samples;
        for (std::size_t i = 0; i < curve.size(); ++i)
            csv << t << ',' << i << ',' << samples[i].value << ',' << curve[i] << '\n';
    }
    engine::write_text_atomic((dir / "aggregate.csv").string(), csv.str());

    for (const auto& log : logs)
        if (log.aborted) {
            std::cerr << "at least one trial aborted: " << log.abort_reason << '\n';
            return kExitAbort;
        }
    return kExitOk;
}

struct MethodRuns {
    std::string method;
    std::string objective;
    std::vector<engine::RunLog> logs;
};

int compare_command(const std::vector<std::string>& dirs, double stderr_multiplier,
                    int n_comparisons, const std::string& out_dir) {
    if (dirs.size() < 2) {
        std::cerr << "compare needs at least 2 result directories\n";
        return kExitConfig;
    }
    std::map<std::pair<std::string, std::string>, MethodRuns> groups;
    for (const auto& dir : dirs) {
        if (!fs::is_directory(dir)) {
            std::cerr << "not a directory: " << dir << '\n';
            return kExitConfig;
        }
        for (const auto& entry : fs::recursive_directory_iterator(dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("runlog_", 0) != 0 || entry.path().extension() != ".jsonl") continue;
            engine::RunLog log = engine::read_runlog(entry.path().string());
            auto key = std::make_pair(log.method, log.objective_name);
            auto& group = groups[key];
            group.method = log.method;
            group.objective = log.objective_name;
            group.logs.push_back(std::move(log));
        }
    }
    if (groups.size() < 2) {
        std::cerr << "compare needs at least 2 method/objective groups with run logs\n";
        return kExitConfig;
    }

    // budget consistency per objective
    std::map<std::string, std::size_t> budget;
    for (const auto& [key, group] : groups)
        for (const auto& log : group.logs) {
            auto [it, inserted] = budget.try_emplace(key.second, log.total_samples());
            if (!inserted && it->second != log.total_samples()) {
                std::cerr << "mismatched budgets for objective " << key.second << ": "
                          << it->second << " vs " << log.total_samples() << '\n';
                return kExitConfig;
            }
        }

    fs::create_directories(out_dir);
    std::ostringstream table;
    table << "method,objective,trials,final_ymax_mean,final_ymax_stderr,mean_cum_regret\n";

    // per-(objective, method) aggregate metrics, plus plot-ready CSVs
    std::map<std::string, std::map<std::string, double>> mean_regret_by_objective;
    std::ostringstream bars;
    bars << "objective,method,mean_cum_regret,stderr\n";
    for (const auto& [key, group] : groups) {
        std::vector<std::vector<double>> curves;
        std::vector<double> final_regrets;
        std::optional<double> f_star;
        try {
            f_star = bench::make_objective(key.second)->best_known();
        } catch (...) {
            f_star = std::nullopt;
        }
        for (const auto& log : group.logs) {
            curves.push_back(engine::max_so_far_curve(log));
            if (f_star) final_regrets.push_back(engine::cumulative_regret(log, *f_star).back());
        }
        const auto stats = engine::aggregate_curves(curves, stderr_multiplier);

        std::ostringstream curve_csv;
        curve_csv << "sample,mean,stderr,lo,hi\n";
        for (std::size_t i = 0; i < stats.mean.size(); ++i)
            curve_csv << i << ',' << stats.mean[i] << ',' << stats.stderr_of_mean[i] << ','
                      << stats.lo[i] << ',' << stats.hi[i] << '\n';
        engine::write_text_atomic(
            (fs::path(out_dir) / ("curve_" + key.second + "_" + key.first + ".csv")).string(),
            curve_csv.str());

        double regret_mean = 0.0, regret_se = 0.0;
        if (!final_regrets.empty()) {
            for (double r : final_regrets) regret_mean += r;
            regret_mean /= static_cast<double>(final_regrets.size());
            double var = 0.0;
            for (double r : final_regrets) var += (r - regret_mean) * (r - regret_mean);
            if (final_regrets.size() > 1)
                regret_se = std::sqrt(var / (static_cast<double>(final_regrets.size()) - 1.0) /
                                      static_cast<double>(final_regrets.size()));
            mean_regret_by_objective[key.second][key.first] = regret_mean;
            bars << key.second << ',' << key.first << ',' << regret_mean << ',' << regret_se
                 << '\n';
        }

        std::vector<double> finals;
        for (const auto& c : curves) finals.push_back(c.back());
        double fmean = 0.0;
        for (double f : finals) fmean += f;
        fmean /= static_cast<double>(finals.size());
        double fvar = 0.0;
        for (double f : finals) fvar += (f - fmean) * (f - fmean);
        const double fse = finals.size() > 1
                               ? std::sqrt(fvar / (static_cast<double>(finals.size()) - 1.0) /
                                           static_cast<double>(finals.size()))
                               : 0.0;
        table << key.first << ',' << key.second << ',' << group.logs.size() << ',' << fmean << ','
              << fse << ',';
        if (final_regrets.empty())
            table << "unavailable";  // objective has no known optimum
        else
            table << regret_mean;
        table << '\n';
    }
    engine::write_text_atomic((fs::path(out_dir) / "comparison.csv").string(), table.str());
    engine::write_text_atomic((fs::path(out_dir) / "regret_bars.csv").string(), bars.str());
    std::cout << table.str();

    // sign test over objectives when exactly two methods are present
    std::vector<std::string> methods;
    for (const auto& [key, _] : groups)
        if (std::find(methods.begin(), methods.end(), key.first) == methods.end())
            methods.push_back(key.first);
    if (methods.size() == 2) {
        std::vector<double> a, b;
        for (const auto& [objective, per_method] : mean_regret_by_objective) {
            auto ia = per_method.find(methods[0]);
            auto ib = per_method.find(methods[1]);
            if (ia != per_method.end() && ib != per_method.end()) {
                a.push_back(ia->second);
                b.push_back(ib->second);
            }
        }
        if (!a.empty()) {
            const auto result = engine::sign_test(a, b, n_comparisons);
            if (result.defined)
                std::cout << "sign test (" << methods[0] << " vs " << methods[1] << ", " << a.size()
                          << " tasks): wins " << result.wins_a << "/" << result.wins_a +
                          result.wins_b << ", raw p = " << result.p_raw
                          << ", Bonferroni-adjusted p = " << result.p_adjusted << '\n';
            else
                std::cout << "sign test undefined: all tasks tied\n";
        }
    }
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"BORA: LLM-assisted Bayesian optimization harness"};
    app.require_subcommand(1);

    CliConfig cfg;
    std::string config_path;
    bool force = false;

    auto add_run_options = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--method", cfg.method, "bora | vanilla-bo | random | llm-only");
        cmd->add_option("--objective", cfg.run.objective, "objective name");
        cmd->add_option("--trials", cfg.trials, "number of repeated trials");
        cmd->add_option("--seed", cfg.run.seed, "base seed; trial t uses seed+t");
        cmd->add_option("--budget", cfg.run.i_max, "samples after initialization (i_max)");
        cmd->add_option("--n-init", cfg.run.n_init, "initial samples");
        cmd->add_option("--client", cfg.run.llm.client_kind, "replay | live");
        cmd->add_option("--fixtures", cfg.run.llm.fixtures_dir, "replay fixture directory");
        cmd->add_option("--out", cfg.out_dir, "output directory");
        cmd->add_option("--jobs", cfg.jobs, "parallel trials");
        cmd->add_option("--q", cfg.run.policy.q, "uncertainty monitoring points");
        cmd->add_option("--n-llm", cfg.run.llm.n_llm, "points per a2 intervention");
    };

    auto* run_cmd = app.add_subcommand("run", "run one method on one objective");
    add_run_options(run_cmd);

    auto* record_cmd =
        app.add_subcommand("record", "run with the live client, recording replay fixtures");
    add_run_options(record_cmd);
    std::string record_dir = "fixtures";
    record_cmd->add_option("--record-dir", record_dir, "fixture output directory");
    record_cmd->add_flag("--force", force, "overwrite a non-empty fixture directory");

    auto* compare_cmd = app.add_subcommand("compare", "compare method result directories");
    std::vector<std::string> compare_dirs;
    double stderr_multiplier = 0.25;
    int n_comparisons = 1;
    std::string compare_out = "compare";
    compare_cmd->add_option("dirs", compare_dirs, "result directories")->expected(-1);
    compare_cmd->add_option("--stderr-multiplier", stderr_multiplier,
                            "band width in standard errors");
    compare_cmd->add_option("--comparisons", n_comparisons, "Bonferroni correction factor");
    compare_cmd->add_option("--out", compare_out, "comparison output directory");

    auto* list_cmd = app.add_subcommand("list-objectives", "list registered objectives");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (!config_path.empty()) apply_config_file(cfg, config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (list_cmd->parsed()) {
            for (const auto& name : bench::objective_names()) std::cout << name << '\n';
            return kExitOk;
        }
        if (run_cmd->parsed()) return run_command(cfg, "", false);
        if (record_cmd->parsed()) {
            cfg.run.llm.client_kind = "live";
            return run_command(cfg, record_dir, force);
        }
        if (compare_cmd->parsed())
            return compare_command(compare_dirs, stderr_multiplier, n_comparisons, compare_out);
    } catch (const llm::TransportError& e) {
        std::cerr << "environment error: " << e.what() << '\n';
        return kExitEnvironment;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAbort;
    }
    return kExitConfig;
}

}  // namespace bora::cli
