#include "bora/core/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "bora/core/dataset.hpp"

namespace bora::core {

std::size_t Variable::grid_size() const {
    if (kind != VarKind::Discrete) return 0;
    return static_cast<std::size_t>(std::llround((upper - lower) / step)) + 1;
}

void Variable::validate() const {
    if (name.empty()) throw std::invalid_argument("variable has no name");
    if (!(lower < upper)) throw std::invalid_argument("variable '" + name + "': lower must be < upper");
    if (kind == VarKind::Discrete) {
        if (!(step > 0.0)) throw std::invalid_argument("variable '" + name + "': discrete step must be > 0");
        const double span = (upper - lower) / step;
        if (std::abs(span - std::round(span)) > kGridTolerance)
            throw std::invalid_argument("variable '" + name +
                                        "': (upper - lower) must be an integer multiple of step");
    }
}

SearchSpace::SearchSpace(std::vector<Variable> variables, std::vector<SumConstraint> constraints)
    : variables_(std::move(variables)), constraints_(std::move(constraints)) {
    if (variables_.empty()) throw std::invalid_argument("search space needs at least one variable");
    std::unordered_set<std::string> seen;
    for (const auto& v : variables_) {
        v.validate();
        if (!seen.insert(v.name).second)
            throw std::invalid_argument("duplicate variable name '" + v.name + "'");
    }
    constraint_indices_.reserve(constraints_.size());
    for (const auto& c : constraints_) {
        if (!(c.bound > 0.0)) throw std::invalid_argument("sum constraint bound must be > 0");
        std::vector<std::size_t> idx;
        idx.reserve(c.variable_names.size());
        for (const auto& name : c.variable_names) {
            auto i = index_of(name);
            if (!i) throw std::invalid_argument("sum constraint names unknown variable '" + name + "'");
            idx.push_back(*i);
        }
        constraint_indices_.push_back(std::move(idx));
    }
}

std::optional<std::size_t> SearchSpace::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i].name == name) return i;
    return std::nullopt;
}

namespace {

void check_dimension(const SearchSpace& space, const Point& p) {
    if (p.size() != space.dimension())
        throw std::invalid_argument("point has dimension " + std::to_string(p.size()) +
                                    ", space has " + std::to_string(space.dimension()));
}

// snaps one coordinate; halfway cases round toward the lower grid value
double snap_coord(const Variable& v, double x) {
    const double k = (x - v.lower) / v.step;
    double lo = std::floor(k);
    double frac = k - lo;
    double snapped = frac > 0.5 ? lo + 1.0 : lo;
    snapped = std::clamp(snapped, 0.0, std::round((v.upper - v.lower) / v.step));
    return v.lower + snapped * v.step;
}

}  // namespace

bool contains(const SearchSpace& space, const Point& p) {
    check_dimension(space, p);
    const auto& vars = space.variables();
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const auto& v = vars[i];
        const double x = p[i];
        if (!std::isfinite(x)) return false;
        if (x < v.lower - kGridTolerance || x > v.upper + kGridTolerance) return false;
        if (v.kind == VarKind::Discrete) {
            const double k = std::round((x - v.lower) / v.step);
            if (std::abs(x - (v.lower + k * v.step)) > kGridTolerance) return false;
        }
    }
    const auto& cons = space.constraints();
    for (std::size_t c = 0; c < cons.size(); ++c) {
        double sum = 0.0;
        for (std::size_t i : space.constraint_indices()[c]) sum += p[i];
        if (sum > cons[c].bound + kGridTolerance) return false;
    }
    return true;
}

Point snap_to_grid(const SearchSpace& space, const Point& p) {
    check_dimension(space, p);
    Point out = p;
    const auto& vars = space.variables();
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i].kind == VarKind::Discrete) out[i] = snap_coord(vars[i], p[i]);
    return out;
}

std::string canonical_key(const SearchSpace& space, const Point& p) {
    check_dimension(space, p);
    std::string key;
    key.reserve(p.size() * 16);
    char buf[40];
    const auto& vars = space.variables();
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].kind == VarKind::Discrete) {
            const long long k = std::llround((p[i] - vars[i].lower) / vars[i].step);
            std::snprintf(buf, sizeof(buf), "g%lld", k);
        } else {
            std::snprintf(buf, sizeof(buf), "c%.12g", p[i]);
        }
        key += buf;
        key += '|';
    }
    return key;
}

std::vector<Point> sample_uniform(const SearchSpace& space, Rng& rng, std::size_t n,
                                  const Dataset* dedupe) {
    if (n == 0) throw std::invalid_argument("sample_uniform: n must be >= 1");
    const auto& vars = space.variables();
    const std::size_t d = space.dimension();
    std::vector<Point> out;
    out.reserve(n);
    std::unordered_set<std::string> batch_keys;

    const std::size_t max_attempts = 10000 * n;
    std::size_t attempts = 0;
    while (out.size() < n) {
        if (attempts++ >= max_attempts)
            throw SamplerExhausted("sample_uniform: could not find " + std::to_string(n) +
                                   " fresh feasible points in " + std::to_string(max_attempts) +
                                   " attempts");
        Point p(d);
        for (std::size_t i = 0; i < d; ++i) p[i] = rng.uniform(vars[i].lower, vars[i].upper);

        // simplex-style rescale of each constrained subset whose raw sum overshoots
        for (std::size_t c = 0; c < space.constraints().size(); ++c) {
            const double bound = space.constraints()[c].bound;
            double sum = 0.0;
            for (std::size_t i : space.constraint_indices()[c]) sum += p[i];
            if (sum > bound && sum > 0.0) {
                const double scale = bound / sum;
                for (std::size_t i : space.constraint_indices()[c]) p[i] *= scale;
            }
        }
        p = snap_to_grid(space, p);
        if (!contains(space, p)) continue;  // snapping can push a sum back over the bound

        std::string key = canonical_key(space, p);
        if (batch_keys.count(key)) continue;
        if (dedupe && dedupe->contains_point(p)) continue;
        batch_keys.insert(std::move(key));
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace bora::core
