#pragma once

#include <memory>

#include "bora/bench/objective.hpp"

namespace bora::bench {

// The 10-component photocatalysis mixture space: nine liquids in [0, 5] mL
// with a 0.25 mL dispensing step and a joint 5 mL volume cap, plus the solid
// P10-MIX1 in [1, 5] g with a 0.2 g step.
core::SearchSpace hydrogen_space();

using HydrogenOracle = std::function<double(const core::Point&)>;

// Stand-in oracle for the (unpublished) experimental dataset: two smooth
// Gaussian ridges peaked at interior feasible mixtures plus a small rugged
// cosine term centered on the primary ridge, so the global maximum sits
// exactly at kSyntheticPeakComposition with value kSyntheticPeakValue.
double synthetic_hydrogen_oracle(const core::Point& p);

extern const core::Point kSyntheticPeakComposition;
extern const double kSyntheticPeakValue;

// Nearest-neighbour lookup oracle over a JSON Lines evaluation table of
// {"x": [...], "y": ...} rows (exact canonical match first, then nearest by
// Euclidean distance).
HydrogenOracle table_oracle_from_jsonl(const std::string& path);

// Objective over the mixture space; evaluating an infeasible point throws.
std::unique_ptr<Objective> make_hydrogen(HydrogenOracle oracle = synthetic_hydrogen_oracle,
                                         std::optional<double> best_known = kSyntheticPeakValue);

}  // namespace bora::bench
