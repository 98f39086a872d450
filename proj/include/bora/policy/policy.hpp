#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bora/surrogate/acquisition.hpp"
#include "bora/surrogate/gp.hpp"

namespace bora::policy {

enum class Action { A1VanillaBo, A2LlmSuggest, A3LlmSelect };

std::string to_string(Action a);

struct PolicyConfig {
    double gamma = 0.05;          // minimum relative improvement that breaks a plateau
    double upper_fraction = 0.5;  // sigma_upper = upper_fraction * running max
    double lower_fraction = 0.3;
    int delta_max = 15;           // largest |m| adjustment per intervention
    double trust_init = 0.9;
    int trust_window = 3;
    int m_init = -1;  // negative = derive from dimensionality as ceil(2*sqrt(d))
    int m_min = 0;
    int m_max = -1;  // negative = derive as 3 * m_init
    double epsilon = 1e-6;
    std::size_t q = 5000;  // monitoring points

    // resolves m_init/m_max defaults for a d-dimensional space
    PolicyConfig resolved(std::size_t d) const;
};

// plateau window initial width
int m_init_for(std::size_t d);

// Mutable policy state owned by a single run; every field is part of the
// per-step log record.
struct PolicyState {
    double sigma_mean = 0.0;
    double sigma_max_running = 0.0;
    double sigma_upper = 0.0;
    double sigma_lower = 0.0;
    int m = 0;
    std::vector<double> trust_history;  // intervention scores, seeded with trust_init
    double trust_current = 0.0;
    double trust_previous = 0.0;
    std::vector<double> ymax_history;  // one entry per completed step

    static PolicyState initial(const PolicyConfig& config, std::size_t d);
};

// Eqs. for the uncertainty thresholds: mean/max posterior std over the fixed
// monitor set; the running max never decreases and the upper/lower bounds are
// fixed fractions of it.
void update_uncertainty(PolicyState& state, const PolicyConfig& config,
                        const surrogate::GpModel& model, const surrogate::MonitorSet& monitor);
// span variant used by tests and by callers that already hold the stds
void update_uncertainty(PolicyState& state, const PolicyConfig& config,
                        std::span<const double> monitor_stds);

// True when the last m steps all failed to improve y_max by the relative
// margin gamma (sign-aware); vacuously true for m = 0. Needs m+1 history
// entries before it can fire.
bool plateau_detected(const std::vector<double>& ymax_history, int m, double gamma);

// a1 when uncertainty is low or no plateau; a2 when above the upper
// threshold; a3 otherwise.
Action select_action(const PolicyState& state, bool plateau);

// Utility of an intervention given reward r = best suggested value minus the
// previous y_max: 1 for strict improvement, otherwise a sigmoid of the
// relative shortfall.
double intervention_score(double r, double y_prev_max, double epsilon);

// Applies one intervention outcome: appends the score, rolls the trust
// window, and moves the plateau width m against the trust delta.
void record_intervention(PolicyState& state, const PolicyConfig& config,
                         std::span<const double> suggested_values, double y_prev_max);

}  // namespace bora::policy
