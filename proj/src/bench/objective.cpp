#include "bora/bench/objective.hpp"

#include <map>
#include <stdexcept>

#include "bora/bench/hydrogen.hpp"
#include "bora/bench/petanque.hpp"
#include "bora/bench/synthetic.hpp"

namespace bora::bench {

namespace {

std::map<std::string, ObjectiveFactory>& registry() {
    static std::map<std::string, ObjectiveFactory> map = {
        {"branin", [] { return make_branin(); }},
        {"levy10", [] { return make_levy(10); }},
        {"ackley15", [] { return make_ackley(15); }},
        {"petanque", [] { return make_petanque(); }},
        {"hydrogen", [] { return make_hydrogen(); }},
    };
    return map;
}

}  // namespace

void register_objective(const std::string& name, ObjectiveFactory factory) {
    registry()[name] = std::move(factory);
}

std::unique_ptr<Objective> make_objective(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end())
        throw std::invalid_argument("unknown objective '" + name + "'; see list-objectives");
    return it->second();
}

std::vector<std::string> objective_names() {
    std::vector<std::string> names;
    for (const auto& [name, _] : registry()) names.push_back(name);
    return names;
}

}  // namespace bora::bench
