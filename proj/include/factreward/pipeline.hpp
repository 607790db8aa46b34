#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "factreward/artifacts.hpp"
#include "factreward/config.hpp"

namespace factreward {

/// Runs fn(0..count-1) on at most `workers` threads.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

// In-memory stages ----------------------------------------------------------

/// Annotates every input in order. Extraction failures are recorded in the
/// record's `error` instead of aborting the batch.
std::vector<AnnotationRecord> annotate_all(const std::vector<InputRecord>& inputs,
                                           const Annotator& annotator, std::size_t workers);

struct RewardStats {
    std::size_t records = 0;
    std::size_t skipped_errors = 0;      // annotation records carrying an error
    std::size_t statements = 0;
    std::size_t unresolved_statements = 0;
    std::size_t missing_sentences = 0;

    double unresolved_rate() const {
        return statements == 0 ? 0.0
                               : static_cast<double>(unresolved_statements) /
                                     static_cast<double>(statements);
    }
};

struct RewardStage {
    std::vector<RewardRecord> records;
    RewardStats stats;
};

/// Resolves spans, builds events and, where offsets exist for a record id,
/// projects them onto tokens. An uncovered event offset is rethrown as
/// UncoveredOffset naming the record id.
RewardStage compute_rewards(const std::vector<AnnotationRecord>& annotations,
                            const RewardConfig& cfg, double min_ratio,
                            const std::map<std::string, TokenOffsets>* offsets = nullptr);

struct EvalStage {
    std::vector<ojson> ids;
    std::vector<ResponseMetrics> per_response;
    DatasetMetrics aggregate;
    std::size_t skipped_errors = 0;
};

/// Throws EmptyBatch when no scorable record exists.
EvalStage evaluate(const std::vector<AnnotationRecord>& annotations);

// File stages ---------------------------------------------------------------

struct AnnotateSummary {
    std::size_t records = 0;
    std::size_t failed = 0;
};

/// Reads cfg.input, writes the annotation artifact to `output`.
AnnotateSummary run_annotate(const PipelineConfig& cfg, Judge& judge,
                             const std::filesystem::path& output);

/// Reads annotations from `input`, writes the reward artifact to `output`.
RewardStats run_reward(const PipelineConfig& cfg, const std::filesystem::path& input,
                       const std::filesystem::path& output);

/// Writes metrics.jsonl, aggregate.json and report.txt into `output_dir`.
EvalStage run_eval(const std::filesystem::path& input, const std::filesystem::path& output_dir);

}  // namespace factreward
