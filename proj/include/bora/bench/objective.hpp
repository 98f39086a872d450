#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bora/core/card.hpp"
#include "bora/core/space.hpp"

namespace bora::bench {

// A benchmark problem: deterministic evaluate() under a maximization
// convention, plus the card handed to the LLM.
class Objective {
public:
    virtual ~Objective() = default;
    virtual const core::SearchSpace& space() const = 0;
    virtual const core::ExperimentCard& card() const = 0;
    virtual double evaluate(const core::Point& p) const = 0;
    virtual std::optional<double> best_known() const { return std::nullopt; }
    virtual std::string name() const = 0;
};

using ObjectiveFactory = std::function<std::unique_ptr<Objective>()>;

// Name-keyed registry backing the CLI's objective selection.
void register_objective(const std::string& name, ObjectiveFactory factory);
std::unique_ptr<Objective> make_objective(const std::string& name);
std::vector<std::string> objective_names();

// Convenience base for function objectives.
class FunctionObjective : public Objective {
public:
    FunctionObjective(std::string name, core::ExperimentCard card,
                      std::function<double(const core::Point&)> fn,
                      std::optional<double> best = std::nullopt)
        : name_(std::move(name)), card_(std::move(card)), fn_(std::move(fn)), best_(best) {}

    const core::SearchSpace& space() const override { return card_.space; }
    const core::ExperimentCard& card() const override { return card_; }
    double evaluate(const core::Point& p) const override { return fn_(p); }
    std::optional<double> best_known() const override { return best_; }
    std::string name() const override { return name_; }

private:
    std::string name_;
    core::ExperimentCard card_;
    std::function<double(const core::Point&)> fn_;
    std::optional<double> best_;
};

}  // namespace bora::bench
