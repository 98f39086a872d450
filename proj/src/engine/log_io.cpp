#include "bora/engine/log_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bora::engine {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void write_text_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

ordered_json point_to_json(const core::Point& p) {
    ordered_json j = ordered_json::array();
    for (double v : p) j.push_back(v);
    return j;
}

ordered_json step_to_json(const StepRecord& s) {
    ordered_json j;
    j["type"] = "step";
    j["step"] = s.step;
    j["action"] = s.action;
    j["fallback"] = s.fallback;
    if (s.fallback) j["fallback_reason"] = s.fallback_reason;
    if (s.random_fill > 0) j["random_fill"] = s.random_fill;
    j["points"] = ordered_json::array();
    for (const auto& p : s.points) j["points"].push_back(point_to_json(p));
    j["values"] = s.values;
    j["y_prev_max"] = s.y_prev_max;
    j["y_max"] = s.y_max;
    j["policy"] = {{"sigma_mean", s.policy.sigma_mean}, {"sigma_upper", s.policy.sigma_upper},
                   {"sigma_lower", s.policy.sigma_lower}, {"m", s.policy.m},
                   {"T", s.policy.trust},                 {"plateau", s.policy.plateau},
                   {"action", s.policy.action}};
    j["comment"] = s.comment_text;
    j["tokens"] = {{"prompt", s.prompt_tokens}, {"completion", s.completion_tokens}};
    return j;
}

StepRecord step_from_json(const ordered_json& j) {
    StepRecord s;
    s.step = j.at("step").get<int>();
    s.action = j.at("action").get<std::string>();
    s.fallback = j.value("fallback", false);
    s.fallback_reason = j.value("fallback_reason", std::string{});
    s.random_fill = j.value("random_fill", 0);
    for (const auto& jp : j.at("points")) s.points.push_back(jp.get<core::Point>());
    s.values = j.at("values").get<std::vector<double>>();
    s.y_prev_max = j.at("y_prev_max").get<double>();
    s.y_max = j.at("y_max").get<double>();
    const auto& pol = j.at("policy");
    s.policy.sigma_mean = pol.at("sigma_mean").get<double>();
    s.policy.sigma_upper = pol.at("sigma_upper").get<double>();
    s.policy.sigma_lower = pol.at("sigma_lower").get<double>();
    s.policy.m = pol.at("m").get<int>();
    s.policy.trust = pol.at("T").get<double>();
    s.policy.plateau = pol.at("plateau").get<bool>();
    s.policy.action = pol.at("action").get<std::string>();
    s.comment_text = j.value("comment", std::string{});
    s.prompt_tokens = j.at("tokens").at("prompt").get<std::int64_t>();
    s.completion_tokens = j.at("tokens").at("completion").get<std::int64_t>();
    return s;
}

}  // namespace

namespace {

ordered_json config_to_json(const RunConfig& c) {
    ordered_json j;
    j["objective"] = c.objective;
    j["i_max"] = c.i_max;
    j["n_init"] = c.n_init;
    j["seed"] = c.seed;
    j["policy"] = {{"gamma", c.policy.gamma},
                   {"upper_fraction", c.policy.upper_fraction},
                   {"lower_fraction", c.policy.lower_fraction},
                   {"delta_max", c.policy.delta_max},
                   {"trust_init", c.policy.trust_init},
                   {"trust_window", c.policy.trust_window},
                   {"m_init", c.policy.m_init},
                   {"m_min", c.policy.m_min},
                   {"m_max", c.policy.m_max},
                   {"q", c.policy.q}};
    // the client kind (live/replay) is transport, not experiment; leaving it
    // out keeps recorded and replayed logs byte-identical
    j["llm"] = {{"n_llm", c.llm.n_llm},
                {"n_bo", c.llm.n_bo},
                {"n_lbo", c.llm.n_lbo},
                {"self_consistency", c.llm.consistency.n_generations},
                {"max_attempts", c.llm.max_attempts}};
    j["fit"] = {{"restarts", c.fit.restarts}, {"max_iters", c.fit.max_iters}};
    return j;
}

RunConfig config_from_json(const ordered_json& j) {
    RunConfig c;
    c.objective = j.value("objective", c.objective);
    c.i_max = j.value("i_max", c.i_max);
    c.n_init = j.value("n_init", c.n_init);
    c.seed = j.value("seed", c.seed);
    if (j.contains("policy")) {
        const auto& p = j["policy"];
        c.policy.gamma = p.value("gamma", c.policy.gamma);
        c.policy.upper_fraction = p.value("upper_fraction", c.policy.upper_fraction);
        c.policy.lower_fraction = p.value("lower_fraction", c.policy.lower_fraction);
        c.policy.delta_max = p.value("delta_max", c.policy.delta_max);
        c.policy.trust_init = p.value("trust_init", c.policy.trust_init);
        c.policy.trust_window = p.value("trust_window", c.policy.trust_window);
        c.policy.m_init = p.value("m_init", c.policy.m_init);
        c.policy.m_min = p.value("m_min", c.policy.m_min);
        c.policy.m_max = p.value("m_max", c.policy.m_max);
        c.policy.q = p.value("q", c.policy.q);
    }
    if (j.contains("llm")) {
        const auto& l = j["llm"];
        c.llm.n_llm = l.value("n_llm", c.llm.n_llm);
        c.llm.n_bo = l.value("n_bo", c.llm.n_bo);
        c.llm.n_lbo = l.value("n_lbo", c.llm.n_lbo);
        c.llm.consistency.n_generations =
            l.value("self_consistency", c.llm.consistency.n_generations);
        c.llm.max_attempts = l.value("max_attempts", c.llm.max_attempts);
    }
    if (j.contains("fit")) {
        c.fit.restarts = j["fit"].value("restarts", c.fit.restarts);
        c.fit.max_iters = j["fit"].value("max_iters", c.fit.max_iters);
    }
    return c;
}

}  // namespace

std::string runlog_to_jsonl(const RunLog& log) {
    std::ostringstream out;
    ordered_json header;
    header["type"] = "header";
    header["objective"] = log.objective_name;
    header["method"] = log.method;
    header["config"] = config_to_json(log.config);
    header["overview"] = log.overview_text;
    out << header.dump() << '\n';

    for (const auto& s : log.steps) out << step_to_json(s).dump() << '\n';

    for (std::size_t i = 0; i < log.samples.size(); ++i) {
        const auto& s = log.samples[i];
        ordered_json j;
        j["type"] = "sample";
        j["sample"] = s.sample_index;
        j["step"] = s.step_index;
        j["source"] = core::to_string(s.source);
        j["x"] = point_to_json(s.point);
        j["y"] = s.value;
        out << j.dump() << '\n';
    }

    ordered_json footer;
    footer["type"] = "final";
    footer["total_samples"] = log.samples.size();
    footer["aborted"] = log.aborted;
    if (log.aborted) footer["abort_reason"] = log.abort_reason;
    footer["report_available"] = log.report_available;
    footer["report"] = log.report;
    footer["tokens"] = {{"prompt", log.prompt_tokens}, {"completion", log.completion_tokens}};
    out << footer.dump() << '\n';
    return out.str();
}

RunLog runlog_from_jsonl(const std::string& text) {
    RunLog log;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line);
        const std::string type = j.at("type").get<std::string>();
        if (type == "header") {
            log.objective_name = j.at("objective").get<std::string>();
            log.method = j.at("method").get<std::string>();
            log.config = config_from_json(j.at("config"));
            log.overview_text = j.value("overview", std::string{});
        } else if (type == "step") {
            log.steps.push_back(step_from_json(j));
        } else if (type == "sample") {
            core::Sample s;
            s.sample_index = j.at("sample").get<int>();
            s.step_index = j.at("step").get<int>();
            s.source = core::sample_source_from_string(j.at("source").get<std::string>());
            s.point = j.at("x").get<core::Point>();
            s.value = j.at("y").get<double>();
            log.samples.push_back(std::move(s));
        } else if (type == "final") {
            log.aborted = j.value("aborted", false);
            log.abort_reason = j.value("abort_reason", std::string{});
            log.report_available = j.value("report_available", false);
            log.report = j.value("report", std::string{});
            log.prompt_tokens = j.at("tokens").at("prompt").get<std::int64_t>();
            log.completion_tokens = j.at("tokens").at("completion").get<std::int64_t>();
        }
    }
    return log;
}

void write_runlog(const std::string& path, const RunLog& log) {
    write_text_atomic(path, runlog_to_jsonl(log));
    ordered_json timing;
    timing["total_wall_seconds"] = log.total_wall_seconds;
    timing["step_wall_seconds"] = log.step_wall_seconds;
    write_text_atomic(path + ".timing.json", timing.dump(2) + "\n");
}

RunLog read_runlog(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open run log " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return runlog_from_jsonl(ss.str());
}

std::string dataset_to_jsonl(const RunLog& log, int trial) {
    std::ostringstream out;
    for (const auto& s : log.samples) {
        ordered_json j;
        j["trial"] = trial;
        j["step"] = s.step_index;
        j["sample"] = s.sample_index;
        j["source"] = core::to_string(s.source);
        j["x"] = point_to_json(s.point);
        j["y"] = s.value;
        out << j.dump() << '\n';
    }
    return out.str();
}

}  // namespace bora::engine
