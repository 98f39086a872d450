#include "bora/bench/synthetic.hpp"

#include <cmath>
#include <stdexcept>

namespace bora::bench {

namespace {

void check_dim(const core::Point& p, std::size_t d, const char* name) {
    if (p.size() != d)
        throw std::invalid_argument(std::string(name) + ": expected dimension " +
                                    std::to_string(d));
}

core::ExperimentCard anonymous_card(const std::string& title, core::SearchSpace space) {
    core::ExperimentCard card;
    card.title = title;
    card.description =
        "A mathematical function of " + std::to_string(space.dimension()) +
        " continuous variables. Its analytic form is withheld; only the variable bounds below "
        "are known.";
    card.target_name = "f(x)";
    card.target_description = "the function value, to be maximized";
    card.space = std::move(space);
    return card;
}

std::vector<core::Variable> box_variables(std::size_t d, double lo, double hi) {
    std::vector<core::Variable> vars;
    vars.reserve(d);
    for (std::size_t i = 0; i < d; ++i)
        vars.push_back({"x" + std::to_string(i), core::VarKind::Continuous, lo, hi});
    return vars;
}

}  // namespace

double branin(const core::Point& p) {
    check_dim(p, 2, "branin");
    constexpr double a = 1.0;
    const double b = 5.1 / (4.0 * M_PI * M_PI);
    const double c = 5.0 / M_PI;
    constexpr double r = 6.0;
    constexpr double s = 10.0;
    const double t = 1.0 / (8.0 * M_PI);
    const double x0 = p[0], x1 = p[1];
    const double term = x1 - b * x0 * x0 + c * x0 - r;
    return -(a * term * term + s * (1.0 - t) * std::cos(x0) + s);
}

double levy(const core::Point& p) {
    if (p.empty()) throw std::invalid_argument("levy: empty point");
    const std::size_t d = p.size();
    std::vector<double> w(d);
    for (std::size_t i = 0; i < d; ++i) w[i] = 1.0 + (p[i] - 1.0) / 4.0;
    const double s0 = std::sin(M_PI * w[0]);
    double sum = s0 * s0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        const double si = std::sin(M_PI * w[i] + 1.0);
        sum += (w[i] - 1.0) * (w[i] - 1.0) * (1.0 + 10.0 * si * si);
    }
    const double sd = std::sin(2.0 * M_PI * w[d - 1]);
    sum += (w[d - 1] - 1.0) * (w[d - 1] - 1.0) * (1.0 + sd * sd);
    return -sum;
}

double ackley(const core::Point& p) {
    if (p.empty()) throw std::invalid_argument("ackley: empty point");
    constexpr double a = 20.0, b = 0.2;
    const double c = 2.0 * M_PI;
    const double d = static_cast<double>(p.size());
    double sq = 0.0, cs = 0.0;
    for (double x : p) {
        sq += x * x;
        cs += std::cos(c * x);
    }
    return -(-a * std::exp(-b * std::sqrt(sq / d)) - std::exp(cs / d) + a + M_E);
}

core::SearchSpace branin_space() {
    return core::SearchSpace({{"x0", core::VarKind::Continuous, -5.0, 10.0},
                              {"x1", core::VarKind::Continuous, 0.0, 15.0}});
}

core::SearchSpace levy_space(std::size_t d) {
    return core::SearchSpace(box_variables(d, -10.0, 10.0));
}

core::SearchSpace ackley_space(std::size_t d) {
    return core::SearchSpace(box_variables(d, -30.0, 20.0));
}

std::unique_ptr<Objective> make_branin() {
    return std::make_unique<FunctionObjective>(
        "branin", anonymous_card("Mathematical function (2D)", branin_space()), branin,
        kBraninBest);
}

std::unique_ptr<Objective> make_levy(std::size_t d) {
    return std::make_unique<FunctionObjective>(
        "levy" + std::to_string(d),
        anonymous_card("Mathematical function (" + std::to_string(d) + "D)", levy_space(d)), levy,
        0.0);
}

std::unique_ptr<Objective> make_ackley(std::size_t d) {
    return std::make_unique<FunctionObjective>(
        "ackley" + std::to_string(d),
        anonymous_card("Mathematical function (" + std::to_string(d) + "D)", ackley_space(d)),
        ackley, 0.0);
}

}  // namespace bora::bench
