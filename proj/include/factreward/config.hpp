#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "factreward/document_store.hpp"
#include "factreward/judge.hpp"
#include "factreward/reward.hpp"
#include "factreward/span_align.hpp"

namespace factreward {

/// Parses the TOML subset used by pipeline configs into a JSON tree: tables,
/// dotted table headers, bare and quoted keys, basic strings, literal strings,
/// integers, floats, booleans, arrays and inline tables, '#' comments.
/// Throws InvalidConfig with a line number on anything else.
nlohmann::json parse_toml(std::string_view source);

struct PipelineConfig {
    JudgeEndpoint judge;
    std::ptrdiff_t max_in_flight = 8;
    int retry_backoff_ms = 250;
    std::optional<std::filesystem::path> mock_fixture;

    RewardConfig reward = qwen_preset();

    std::size_t context_count = kDefaultContextCount;
    Bm25Params bm25;

    double min_ratio = kDefaultMinRatio;
    double max_unresolved_rate = 0.2;

    std::optional<std::filesystem::path> input;
    std::optional<std::filesystem::path> output;
    std::optional<std::filesystem::path> corpus;
    std::optional<std::filesystem::path> token_offsets;

    std::size_t workers = 4;

    // Trainer-side settings carried through untouched.
    nlohmann::json trainer = nlohmann::json::object();

    /// Range checks on every numeric field; throws InvalidConfig.
    void validate() const;
};

/// Loads a TOML config. Relative paths resolve against the file's directory.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig config_from_toml(std::string_view source,
                                const std::filesystem::path& base_dir = {});

}  // namespace factreward
