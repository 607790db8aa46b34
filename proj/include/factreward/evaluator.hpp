#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "factreward/judge.hpp"

namespace factreward {

struct ResponseMetrics {
    std::size_t correct_count = 0;
    std::size_t incorrect_count = 0;
    bool responded = false;
    std::optional<double> factscore;

    bool operator==(const ResponseMetrics&) const = default;
};

struct DatasetMetrics {
    std::size_t total = 0;
    std::size_t responded = 0;
    double avg_correct = 0.0;    // #Cor., over responded responses
    double avg_incorrect = 0.0;  // #Inc., over responded responses
    double response_ratio = 0.0; // %Res.
    double score = 0.0;          // mean factscore over responded responses
    bool refusals_only = false;  // no response had a factscore; score reported as 0
    // Same counts averaged over every response, refusals included.
    double avg_correct_all = 0.0;
    double avg_incorrect_all = 0.0;
};

/// Correct and HedgedCorrect count as correct; Vague, HedgedWrong and Wrong as
/// incorrect. Unlabelled statements count as incorrect.
ResponseMetrics score_response(const ResponseAnnotation& annotation);
ResponseMetrics score_response(const std::vector<SentenceAnnotation>& sentences);

/// Throws EmptyBatch on an empty list.
DatasetMetrics aggregate(const std::vector<ResponseMetrics>& metrics);

/// Plain-text table with the columns #Cor. #Inc. %Res. Score.
std::string format_table(const std::string& label, const DatasetMetrics& metrics);

}  // namespace factreward
