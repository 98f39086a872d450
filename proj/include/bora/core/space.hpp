#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bora/core/rng.hpp"

namespace bora::core {

using Point = std::vector<double>;

enum class VarKind { Continuous, Discrete };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = 1.0;
    double step = 0.0;  // discrete only
    std::string unit;
    std::string description;

    // number of grid values for a discrete variable (lower + k*step, k in [0, grid_size))
    std::size_t grid_size() const;
    void validate() const;
};

struct SumConstraint {
    std::vector<std::string> variable_names;
    double bound = 0.0;  // inclusive upper bound on the sum
};

// Ordered collection of typed variables plus sum constraints; the domain
// every sampler, surrogate and validator works against.
class SearchSpace {
public:
    SearchSpace() = default;
    SearchSpace(std::vector<Variable> variables, std::vector<SumConstraint> constraints = {});

    std::size_t dimension() const { return variables_.size(); }
    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<SumConstraint>& constraints() const { return constraints_; }

    // variable indices per constraint, resolved once at construction
    const std::vector<std::vector<std::size_t>>& constraint_indices() const {
        return constraint_indices_;
    }

    std::optional<std::size_t> index_of(const std::string& name) const;

private:
    std::vector<Variable> variables_;
    std::vector<SumConstraint> constraints_;
    std::vector<std::vector<std::size_t>> constraint_indices_;
};

constexpr double kGridTolerance = 1e-9;

// True iff p is inside all bounds, on every discrete grid (within
// kGridTolerance) and satisfies every sum constraint. Throws on
// dimension mismatch.
bool contains(const SearchSpace& space, const Point& p);

// Rounds each discrete coordinate to its nearest grid value; exact halfway
// points round toward the lower grid value. Continuous coordinates pass
// through unchanged.
Point snap_to_grid(const SearchSpace& space, const Point& p);

// Canonical identity of a point for dedupe purposes: grid index for
// discrete coordinates, 12 significant digits for continuous ones.
std::string canonical_key(const SearchSpace& space, const Point& p);

class Dataset;  // dataset.hpp

struct SamplerExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform draws over the space. Constrained subsets whose raw sum S exceeds
// the bound B are rescaled by B/S before snapping; draws that still violate
// a constraint after snapping (or collide with `dedupe` / earlier points in
// the batch) are redrawn. Throws SamplerExhausted after 10,000 * n attempts.
std::vector<Point> sample_uniform(const SearchSpace& space, Rng& rng, std::size_t n,
                                  const Dataset* dedupe = nullptr);

}  // namespace bora::core
