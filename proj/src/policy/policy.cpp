#include "bora/policy/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bora::policy {

std::string to_string(Action a) {
    switch (a) {
        case Action::A1VanillaBo: return "a1";
        case Action::A2LlmSuggest: return "a2";
        case Action::A3LlmSelect: return "a3";
    }
    return "unknown";
}

int m_init_for(std::size_t d) {
    if (d < 1) throw std::invalid_argument("m_init_for: d must be >= 1");
    return static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(d))));
}

PolicyConfig PolicyConfig::resolved(std::size_t d) const {
    PolicyConfig out = *this;
    if (out.m_init < 0) out.m_init = m_init_for(d);
    if (out.m_max < 0) out.m_max = 3 * out.m_init;
    if (!(out.lower_fraction > 0.0 && out.lower_fraction < out.upper_fraction &&
          out.upper_fraction <= 1.0))
        throw std::invalid_argument("policy: need 0 < lower_fraction < upper_fraction <= 1");
    if (!(out.gamma > 0.0)) throw std::invalid_argument("policy: gamma must be > 0");
    if (!(out.m_min <= out.m_init && out.m_init <= out.m_max))
        throw std::invalid_argument("policy: need m_min <= m_init <= m_max");
    return out;
}

PolicyState PolicyState::initial(const PolicyConfig& config, std::size_t d) {
    const PolicyConfig cfg = config.resolved(d);
    PolicyState state;
    state.m = cfg.m_init;
    state.trust_history = {cfg.trust_init};
    state.trust_current = cfg.trust_init;
    state.trust_previous = cfg.trust_init;
    return state;
}

void update_uncertainty(PolicyState& state, const PolicyConfig& config,
                        std::span<const double> monitor_stds) {
    if (monitor_stds.empty()) throw std::invalid_argument("update_uncertainty: no monitor stds");
    double sum = 0.0;
    double pointwise_max = 0.0;
    for (double s : monitor_stds) {
        sum += s;
        pointwise_max = std::max(pointwise_max, s);
    }
    state.sigma_mean = sum / static_cast<double>(monitor_stds.size());
    state.sigma_max_running = std::max(state.sigma_max_running, pointwise_max);
    state.sigma_upper = config.upper_fraction * state.sigma_max_running;
    state.sigma_lower = config.lower_fraction * state.sigma_max_running;
}

void update_uncertainty(PolicyState& state, const PolicyConfig& config,
                        const surrogate::GpModel& model, const surrogate::MonitorSet& monitor) {
    std::vector<double> means, stds;
    model.posterior_batch(monitor.points, means, stds);
    update_uncertainty(state, config, stds);
}

bool plateau_detected(const std::vector<double>& ymax_history, int m, double gamma) {
    if (m < 0) throw std::invalid_argument("plateau_detected: m must be >= 0");
    if (m == 0) return true;
    if (ymax_history.size() < static_cast<std::size_t>(m) + 1) return false;
    const std::size_t t = ymax_history.size() - 1;
    for (std::size_t j = t - static_cast<std::size_t>(m) + 1; j <= t; ++j) {
        const double prev = ymax_history[j - 1];
        const double sign = prev > 0.0 ? 1.0 : (prev < 0.0 ? -1.0 : 0.0);
        const double threshold = prev * (1.0 + sign * gamma);
        if (!(ymax_history[j] < threshold)) return false;
    }
    return true;
}

Action select_action(const PolicyState& state, bool plateau) {
    if (state.sigma_mean < state.sigma_lower || !plateau) return Action::A1VanillaBo;
    if (state.sigma_mean > state.sigma_upper) return Action::A2LlmSuggest;
    return Action::A3LlmSelect;
}

double intervention_score(double r, double y_prev_max, double epsilon) {
    if (r > 0.0) return 1.0;
    return 1.0 / (1.0 + std::exp(-r / (std::abs(y_prev_max) + epsilon)));
}

void record_intervention(PolicyState& state, const PolicyConfig& config,
                         std::span<const double> suggested_values, double y_prev_max) {
    if (suggested_values.empty())
        throw std::invalid_argument("record_intervention: no suggested values");
    const double r = *std::max_element(suggested_values.begin(), suggested_values.end()) -
                     y_prev_max;
    state.trust_history.push_back(intervention_score(r, y_prev_max, config.epsilon));

    const std::size_t window =
        std::min(state.trust_history.size(), static_cast<std::size_t>(config.trust_window));
    double sum = 0.0;  // forward accumulation over the window, oldest first
    for (std::size_t i = state.trust_history.size() - window; i < state.trust_history.size(); ++i)
        sum += state.trust_history[i];
    state.trust_previous = state.trust_current;
    state.trust_current = sum / static_cast<double>(window);

    const int adjustment = static_cast<int>(
        std::floor((state.trust_current - state.trust_previous) * config.delta_max));
    state.m = std::clamp(state.m - adjustment, config.m_min, config.m_max);
}

}  // namespace bora::policy
