#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bora/core/dataset.hpp"
#include "bora/core/space.hpp"
#include "bora/llm/chat_client.hpp"

namespace bora::llm {

struct Hypothesis {
    std::string name;
    std::string rationale;
    std::string confidence_label;  // as returned on the wire
    double confidence = 0.0;       // normalized to [0, 1]
    std::vector<core::Point> points;
};

// Structured LLM output: progress insights plus a list of hypotheses.
// Wire key for insights is "comment".
struct Comment {
    std::string insights;
    std::vector<Hypothesis> hypotheses;
    std::string raw_text;
    ChatUsage token_usage;

    std::vector<core::Point> all_points() const;
};

enum class ValidationErrorKind {
    MalformedStructure,
    OutOfBounds,
    ConstraintViolated,
    DuplicatePoint,
    WrongPointCount,
    NotFromCandidateSet,
};

std::string to_string(ValidationErrorKind kind);

struct ValidationError {
    ValidationErrorKind kind;
    std::string detail;  // names the offending hypothesis / point
};

struct ParseFailure {
    std::string detail;
};

// Strict parse of the Comment wire schema
//   {"comment": string, "hypotheses": [{"name","rationale","confidence","points":[[...]]}]}
// Unknown fields are ignored; missing required fields fail. Code fences and
// leading chatter around the JSON object are tolerated.
std::variant<Comment, ParseFailure> parse_comment(const std::string& text);

enum class CommentMode { Suggest, Select };

// Full feasibility verification: bounds, grid alignment, sum constraints,
// duplicates against the dataset and within the comment, expected point
// count, and candidate-set membership in select mode. All violations are
// accumulated, not just the first.
std::vector<ValidationError> validate_comment(
    const Comment& comment, const core::SearchSpace& space, const core::Dataset& dataset,
    CommentMode mode, std::size_t expected_points,
    const std::vector<core::Point>* candidate_set = nullptr);

// low/medium/high -> 0.3/0.6/0.9; numeric values clamp to [0, 1]
double normalize_confidence(const std::string& label);

}  // namespace bora::llm
