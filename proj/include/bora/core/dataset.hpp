#pragma once

#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "bora/core/space.hpp"

namespace bora::core {

enum class SampleSource { Init, A1, A2, A3, FallbackRandom };

std::string to_string(SampleSource source);
SampleSource sample_source_from_string(const std::string& s);

struct Sample {
    Point point;
    double value = 0.0;
    SampleSource source = SampleSource::Init;
    int step_index = 0;
    int sample_index = 0;
};

struct EmptyDataset : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ordered evaluated samples with canonical-key dedupe. Single writer;
// concurrent readers are fine between appends.
class Dataset {
public:
    explicit Dataset(SearchSpace space) : space_(std::move(space)) {}

    // False (and no mutation) when the point's canonical key is already present.
    bool append(Sample sample);

    bool contains_point(const Point& p) const;

    double y_max() const;

    const std::vector<Sample>& samples() const { return samples_; }
    const SearchSpace& space() const { return space_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }

private:
    SearchSpace space_;
    std::vector<Sample> samples_;
    std::unordered_set<std::string> keys_;
};

}  // namespace bora::core
