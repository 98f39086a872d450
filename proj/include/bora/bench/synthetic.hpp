#pragma once

#include <memory>

#include "bora/bench/objective.hpp"

namespace bora::bench {

// Negated standard test functions (maximization): the best value is
// -0.397887 for Branin and 0 for Levy/Ackley.
double branin(const core::Point& p);
double levy(const core::Point& p);
double ackley(const core::Point& p);

core::SearchSpace branin_space();
core::SearchSpace levy_space(std::size_t d = 10);
core::SearchSpace ackley_space(std::size_t d = 15);

// Cards are anonymized to "a mathematical function": bounds and
// dimensionality only, nothing the LLM could recognize by name.
std::unique_ptr<Objective> make_branin();
std::unique_ptr<Objective> make_levy(std::size_t d = 10);
std::unique_ptr<Objective> make_ackley(std::size_t d = 15);

constexpr double kBraninBest = -0.39788735772973816;

}  // namespace bora::bench
