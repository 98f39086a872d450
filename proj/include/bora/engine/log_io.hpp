#pragma once

#include <string>

#include "bora/engine/run.hpp"

namespace bora::engine {

// Atomic file write: temp file in the same directory, then rename, so a
// killed run never leaves a truncated file that parses as complete.
void write_text_atomic(const std::string& path, const std::string& content);

// Canonical JSON Lines serialization: one header line, one line per step,
// one final line. Deterministic for deterministic runs.
std::string runlog_to_jsonl(const RunLog& log);
RunLog runlog_from_jsonl(const std::string& text);

// write_runlog also drops wall-clock timing into <path>.timing.json
void write_runlog(const std::string& path, const RunLog& log);
RunLog read_runlog(const std::string& path);

// Dataset export: {"trial", "step", "sample", "source", "x", "y"} per line.
std::string dataset_to_jsonl(const RunLog& log, int trial);

}  // namespace bora::engine
