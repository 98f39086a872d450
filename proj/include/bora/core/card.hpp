#pragma once

#include <stdexcept>
#include <string>

#include "bora/core/space.hpp"

namespace bora::core {

struct CardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structured experiment description the user hands to the optimizer; it is
// the LLM's only source of domain context.
struct ExperimentCard {
    std::string title;
    std::string description;
    std::string target_name;
    std::string target_description;
    std::string constraints_text;
    std::string context;
    SearchSpace space;

    void validate() const;

    std::string to_json() const;
    static ExperimentCard from_json(const std::string& text);
    static ExperimentCard load(const std::string& path);
    void save(const std::string& path) const;
};

}  // namespace bora::core
