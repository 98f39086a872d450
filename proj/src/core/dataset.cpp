#include "bora/core/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace bora::core {

std::string to_string(SampleSource source) {
    switch (source) {
        case SampleSource::Init: return "init";
        case SampleSource::A1: return "a1";
        case SampleSource::A2: return "a2";
        case SampleSource::A3: return "a3";
        case SampleSource::FallbackRandom: return "fallback_random";
    }
    return "unknown";
}

SampleSource sample_source_from_string(const std::string& s) {
    if (s == "init") return SampleSource::Init;
    if (s == "a1") return SampleSource::A1;
    if (s == "a2") return SampleSource::A2;
    if (s == "a3") return SampleSource::A3;
    if (s == "fallback_random") return SampleSource::FallbackRandom;
    throw std::invalid_argument("unknown sample source '" + s + "'");
}

bool Dataset::append(Sample sample) {
    if (!std::isfinite(sample.value))
        throw std::invalid_argument("sample value must be finite");
    if (sample.step_index < 0 || sample.sample_index < 0)
        throw std::invalid_argument("sample indices must be nonnegative");
    std::string key = canonical_key(space_, sample.point);
    if (keys_.count(key)) return false;
    keys_.insert(std::move(key));
    samples_.push_back(std::move(sample));
    return true;
}

bool Dataset::contains_point(const Point& p) const {
    return keys_.count(canonical_key(space_, p)) > 0;
}

double Dataset::y_max() const {
    if (samples_.empty()) throw EmptyDataset("y_max on empty dataset");
    double best = samples_.front().value;
    for (const auto& s : samples_) best = std::max(best, s.value);
    return best;
}

}  // namespace bora::core
