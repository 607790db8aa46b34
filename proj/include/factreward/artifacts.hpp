#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factreward/evaluator.hpp"
#include "factreward/judge.hpp"
#include "factreward/reward.hpp"

namespace factreward {

using ojson = nlohmann::ordered_json;

/// One line of the pipeline input: {id, prompt, response}.
struct InputRecord {
    ojson id;
    std::string prompt;
    std::string response;
};

/// One line of the annotation artifact. Records whose extraction failed carry
/// `error` and no sentences.
struct AnnotationRecord {
    ojson id;
    ResponseAnnotation annotation;
    std::optional<std::string> error;
};

/// One line of the reward artifact: {id, response, events, token_rewards?, config_name}.
struct RewardRecord {
    ojson id;
    std::string response;
    std::vector<RewardEvent> events;
    std::optional<std::vector<double>> token_rewards;
    std::string config_name;
};

/// Rounds to 9 significant digits so serialized artifacts are byte-stable.
double round_sig9(double value);

ojson to_json(const AnnotationRecord& record);
AnnotationRecord annotation_from_json(const ojson& j);

ojson to_json(const RewardRecord& record);
RewardRecord reward_from_json(const ojson& j);

ojson to_json(const ojson& id, const ResponseMetrics& metrics);
ojson to_json(const DatasetMetrics& metrics);

/// Reads non-blank lines of a JSONL file. Throws DataError on unreadable
/// files or malformed lines (message carries file:line).
std::vector<ojson> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<ojson>& rows);

std::vector<InputRecord> read_inputs(const std::filesystem::path& path);
std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path);
std::vector<RewardRecord> read_rewards(const std::filesystem::path& path);

/// Token offsets file: JSONL {id, offsets: [[start, end], ...]}, keyed by the
/// serialized id.
std::map<std::string, TokenOffsets> read_token_offsets(const std::filesystem::path& path);

std::string id_key(const ojson& id);

}  // namespace factreward
