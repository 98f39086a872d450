#include "bora/llm/comment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include <json.hpp>

namespace bora::llm {

using nlohmann::json;

std::vector<core::Point> Comment::all_points() const {
    std::vector<core::Point> out;
    for (const auto& h : hypotheses) out.insert(out.end(), h.points.begin(), h.points.end());
    return out;
}

std::string to_string(ValidationErrorKind kind) {
    switch (kind) {
        case ValidationErrorKind::MalformedStructure: return "malformed_structure";
        case ValidationErrorKind::OutOfBounds: return "out_of_bounds";
        case ValidationErrorKind::ConstraintViolated: return "constraint_violated";
        case ValidationErrorKind::DuplicatePoint: return "duplicate_point";
        case ValidationErrorKind::WrongPointCount: return "wrong_point_count";
        case ValidationErrorKind::NotFromCandidateSet: return "not_from_candidate_set";
    }
    return "unknown";
}

double normalize_confidence(const std::string& label) {
    std::string lower;
    lower.reserve(label.size());
    for (char c : label) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "low") return 0.3;
    if (lower == "medium") return 0.6;
    if (lower == "high") return 0.9;
    try {
        return std::clamp(std::stod(lower), 0.0, 1.0);
    } catch (...) {
        return 0.0;
    }
}

namespace {

// LLMs love code fences; tolerate them by extracting the outermost object.
std::string extract_json_object(const std::string& text) {
    const auto first = text.find('{');
    const auto last = text.rfind('}');
    if (first == std::string::npos || last == std::string::npos || last < first) return text;
    return text.substr(first, last - first + 1);
}

}  // namespace

std::variant<Comment, ParseFailure> parse_comment(const std::string& text) {
    json j;
    try {
        j = json::parse(extract_json_object(text));
    } catch (const json::exception& e) {
        return ParseFailure{std::string("invalid JSON: ") + e.what()};
    }
    if (!j.is_object()) return ParseFailure{"top-level value is not an object"};
    if (!j.contains("comment") || !j["comment"].is_string())
        return ParseFailure{"missing required string field 'comment'"};
    if (!j.contains("hypotheses") || !j["hypotheses"].is_array())
        return ParseFailure{"missing required array field 'hypotheses'"};

    Comment comment;
    comment.raw_text = text;
    comment.insights = j["comment"].get<std::string>();

    int index = 0;
    for (const auto& jh : j["hypotheses"]) {
        if (!jh.is_object())
            return ParseFailure{"hypothesis " + std::to_string(index) + " is not an object"};
        Hypothesis h;
        if (!jh.contains("name") || !jh["name"].is_string())
            return ParseFailure{"hypothesis " + std::to_string(index) + " missing 'name'"};
        h.name = jh["name"].get<std::string>();
        if (!jh.contains("rationale") || !jh["rationale"].is_string())
            return ParseFailure{"hypothesis '" + h.name + "' missing 'rationale'"};
        h.rationale = jh["rationale"].get<std::string>();
        if (!jh.contains("confidence"))
            return ParseFailure{"hypothesis '" + h.name + "' missing 'confidence'"};
        if (jh["confidence"].is_number()) {
            h.confidence = std::clamp(jh["confidence"].get<double>(), 0.0, 1.0);
            h.confidence_label = jh["confidence"].dump();
        } else if (jh["confidence"].is_string()) {
            h.confidence_label = jh["confidence"].get<std::string>();
            h.confidence = normalize_confidence(h.confidence_label);
        } else {
            return ParseFailure{"hypothesis '" + h.name + "' confidence must be string or number"};
        }
        if (!jh.contains("points") || !jh["points"].is_array())
            return ParseFailure{"hypothesis '" + h.name + "' missing 'points'"};
        for (const auto& jp : jh["points"]) {
            if (!jp.is_array())
                return ParseFailure{"hypothesis '" + h.name + "' has a non-array point"};
            core::Point p;
            for (const auto& v : jp) {
                if (!v.is_number())
                    return ParseFailure{"hypothesis '" + h.name + "' has a non-numeric coordinate"};
                p.push_back(v.get<double>());
            }
            h.points.push_back(std::move(p));
        }
        comment.hypotheses.push_back(std::move(h));
        ++index;
    }
    return comment;
}

namespace {

std::string describe_point(const core::Point& p) {
    std::string s = "[";
    char buf[32];
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6g", p[i]);
        if (i) s += ", ";
        s += buf;
    }
    return s + "]";
}

}  // namespace

std::vector<ValidationError> validate_comment(const Comment& comment,
                                              const core::SearchSpace& space,
                                              const core::Dataset& dataset, CommentMode mode,
                                              std::size_t expected_points,
                                              const std::vector<core::Point>* candidate_set) {
    std::vector<ValidationError> errors;
    const std::size_t d = space.dimension();

    std::unordered_set<std::string> candidate_keys;
    if (mode == CommentMode::Select) {
        if (candidate_set == nullptr)
            throw std::invalid_argument("validate_comment: select mode needs a candidate set");
        for (const auto& c : *candidate_set) candidate_keys.insert(core::canonical_key(space, c));
    }

    std::size_t total_points = 0;
    std::unordered_set<std::string> seen_in_comment;
    for (const auto& h : comment.hypotheses) {
        for (const auto& p : h.points) {
            ++total_points;
            if (p.size() != d) {
                errors.push_back({ValidationErrorKind::MalformedStructure,
                                  "hypothesis '" + h.name + "': point " + describe_point(p) +
                                      " has dimension " + std::to_string(p.size()) +
                                      ", expected " + std::to_string(d)});
                continue;
            }

            // classify bound/grid violations separately from sum-constraint ones
            bool bad_bounds = false;
            const auto& vars = space.variables();
            for (std::size_t i = 0; i < d && !bad_bounds; ++i) {
                const double x = p[i];
                if (!std::isfinite(x) || x < vars[i].lower - core::kGridTolerance ||
                    x > vars[i].upper + core::kGridTolerance)
                    bad_bounds = true;
                else if (vars[i].kind == core::VarKind::Discrete) {
                    const double k = std::round((x - vars[i].lower) / vars[i].step);
                    if (std::abs(x - (vars[i].lower + k * vars[i].step)) > core::kGridTolerance)
                        bad_bounds = true;
                }
            }
            if (bad_bounds) {
                errors.push_back({ValidationErrorKind::OutOfBounds,
                                  "hypothesis '" + h.name + "': point " + describe_point(p) +
                                      " is outside the bounds or off the grid"});
                continue;
            }
            bool bad_constraint = false;
            for (std::size_t c = 0; c < space.constraints().size(); ++c) {
                double sum = 0.0;
                for (std::size_t i : space.constraint_indices()[c]) sum += p[i];
                if (sum > space.constraints()[c].bound + core::kGridTolerance) bad_constraint = true;
            }
            if (bad_constraint) {
                errors.push_back({ValidationErrorKind::ConstraintViolated,
                                  "hypothesis '" + h.name + "': point " + describe_point(p) +
                                      " violates a sum constraint"});
                continue;
            }

            const std::string key = core::canonical_key(space, p);
            if (dataset.contains_point(p) || !seen_in_comment.insert(key).second) {
                errors.push_back({ValidationErrorKind::DuplicatePoint,
                                  "hypothesis '" + h.name + "': point " + describe_point(p) +
                                      " duplicates an already-sampled point"});
                continue;
            }
            if (mode == CommentMode::Select && !candidate_keys.count(key)) {
                errors.push_back({ValidationErrorKind::NotFromCandidateSet,
                                  "hypothesis '" + h.name + "': point " + describe_point(p) +
                                      " is not one of the proposed candidates"});
            }
        }
    }
    if (total_points != expected_points)
        errors.push_back({ValidationErrorKind::WrongPointCount,
                          "comment contains " + std::to_string(total_points) + " points, expected " +
                              std::to_string(expected_points)});
    return errors;
}

}  // namespace bora::llm
