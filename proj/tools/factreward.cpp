// factreward: annotate responses with a judge, convert the feedback into
// token-level rewards, and score factuality.

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "factreward/error.hpp"
#include "factreward/pipeline.hpp"

namespace fs = std::filesystem;
using namespace factreward;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kUpstream = 2, kQuality = 3 };

struct Flags {
    std::optional<fs::path> config;
    std::optional<fs::path> input;
    std::optional<fs::path> output;
    std::optional<fs::path> corpus;
    std::optional<std::string> preset;
    std::optional<fs::path> mock_judge;
    std::optional<fs::path> token_offsets;
    std::optional<std::size_t> workers;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "TOML config file");
    cmd->add_option("--input", f.input, "input file");
    cmd->add_option("--output", f.output, "output file or directory");
    cmd->add_option("--preset", f.preset, "reward preset")
        ->check(CLI::IsMember({"qwen", "llama"}));
    cmd->add_option("--workers", f.workers, "concurrent responses")->check(CLI::PositiveNumber);
}

void add_judge(CLI::App* cmd, Flags& f) {
    cmd->add_option("--corpus", f.corpus, "reference documents, JSONL {id, title, text}");
    cmd->add_option("--mock-judge", f.mock_judge, "scripted judge fixture (prompt hash -> reply)");
}

void add_offsets(CLI::App* cmd, Flags& f) {
    cmd->add_option("--token-offsets", f.token_offsets,
                    "token offsets, JSONL {id, offsets: [[start, end], ...]}");
}

PipelineConfig build_config(const Flags& f) {
    PipelineConfig cfg = f.config ? load_config(*f.config) : PipelineConfig{};
    if (f.input) cfg.input = *f.input;
    if (f.output) cfg.output = *f.output;
    if (f.corpus) cfg.corpus = *f.corpus;
    if (f.preset) cfg.reward = preset(*f.preset);
    if (f.mock_judge) cfg.mock_fixture = *f.mock_judge;
    if (f.token_offsets) cfg.token_offsets = *f.token_offsets;
    if (f.workers) cfg.workers = *f.workers;
    if (cfg.mock_fixture) cfg.retry_backoff_ms = 0;
    cfg.validate();
    return cfg;
}

void require_file(const std::optional<fs::path>& p, const char* what) {
    if (!p) {
        throw InvalidConfig(std::string("missing ") + what + " path");
    }
    if (!fs::exists(*p)) {
        throw InvalidConfig(std::string(what) + " '" + p->string() + "' does not exist");
    }
}

const fs::path& require_output(const PipelineConfig& cfg) {
    if (!cfg.output) {
        throw InvalidConfig("missing output path");
    }
    return *cfg.output;
}

std::unique_ptr<Judge> make_judge(const PipelineConfig& cfg) {
    if (cfg.mock_fixture) {
        require_file(cfg.mock_fixture, "mock judge fixture");
        return std::make_unique<MockJudge>(MockJudge::load(*cfg.mock_fixture));
    }
    return std::make_unique<HttpJudge>(cfg.judge, HttpJudge::api_key_from_env());
}

int annotate_stage(const PipelineConfig& cfg, const fs::path& output) {
    require_file(cfg.input, "input");
    require_file(cfg.corpus, "corpus");
    auto judge = make_judge(cfg);
    const auto summary = run_annotate(cfg, *judge, output);
    spdlog::info("annotated {} record(s) into {}", summary.records, output.string());
    if (summary.failed > 0) {
        spdlog::error("{} record(s) failed extraction; see their 'error' field", summary.failed);
        return kUpstream;
    }
    return kOk;
}

int reward_stage(const PipelineConfig& cfg, const fs::path& input, const fs::path& output) {
    if (cfg.token_offsets) {
        require_file(cfg.token_offsets, "token offsets");
    }
    const auto stats = run_reward(cfg, input, output);
    spdlog::info("wrote {} reward record(s) to {} (config '{}')", stats.records, output.string(),
                 cfg.reward.name);
    if (stats.skipped_errors > 0) {
        spdlog::warn("skipped {} annotation record(s) carrying extraction errors",
                     stats.skipped_errors);
    }
    if (stats.unresolved_rate() > cfg.max_unresolved_rate) {
        spdlog::error("{} of {} statement(s) could not be anchored ({:.1f}% > {:.1f}%)",
                      stats.unresolved_statements, stats.statements,
                      100.0 * stats.unresolved_rate(), 100.0 * cfg.max_unresolved_rate);
        return kQuality;
    }
    return kOk;
}

int eval_stage(const fs::path& input, const fs::path& output_dir) {
    const auto stage = run_eval(input, output_dir);
    if (stage.skipped_errors > 0) {
        spdlog::warn("skipped {} annotation record(s) carrying extraction errors",
                     stage.skipped_errors);
    }
    const auto& m = stage.aggregate;
    spdlog::info("#Cor. {:.2f}  #Inc. {:.2f}  %Res. {:.2f}  Score {:.3f}{}", m.avg_correct,
                 m.avg_incorrect, m.response_ratio, m.score,
                 m.refusals_only ? "  (refusals only)" : "");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("factreward"));
    spdlog::set_pattern("%^%l%$: %v");

    CLI::App app{"Fine-grained factuality feedback and token-level rewards"};
    app.require_subcommand(1);

    Flags flags;
    auto* annotate = app.add_subcommand("annotate", "run the judge over prompt/response pairs");
    add_common(annotate, flags);
    add_judge(annotate, flags);

    auto* reward = app.add_subcommand("reward", "convert annotations into reward events");
    add_common(reward, flags);
    add_offsets(reward, flags);

    auto* eval = app.add_subcommand("eval", "compute factuality metrics from annotations");
    add_common(eval, flags);

    auto* pipeline = app.add_subcommand("pipeline", "annotate, reward and eval in sequence");
    add_common(pipeline, flags);
    add_judge(pipeline, flags);
    add_offsets(pipeline, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        const auto cfg = build_config(flags);
        if (annotate->parsed()) {
            return annotate_stage(cfg, require_output(cfg));
        }
        if (reward->parsed()) {
            require_file(cfg.input, "input");
            return reward_stage(cfg, *cfg.input, require_output(cfg));
        }
        if (eval->parsed()) {
            require_file(cfg.input, "input");
            return eval_stage(*cfg.input, require_output(cfg));
        }

        const fs::path out_dir = require_output(cfg);
        fs::create_directories(out_dir);
        const auto annotations = out_dir / "annotations.jsonl";
        const int annotate_rc = annotate_stage(cfg, annotations);
        const int reward_rc = reward_stage(cfg, annotations, out_dir / "rewards.jsonl");
        int eval_rc = kOk;
        try {
            eval_rc = eval_stage(annotations, out_dir);
        } catch (const EmptyBatch& e) {
            // Every record failed extraction; the annotate exit code says why.
            if (annotate_rc == kOk) {
                throw;
            }
            spdlog::error("{}", e.what());
        }
        for (int rc : {annotate_rc, reward_rc, eval_rc}) {
            if (rc != kOk) {
                return rc;
            }
        }
        return kOk;
    } catch (const JudgeUnavailable& e) {
        spdlog::error("{}", e.what());
        return kUpstream;
    } catch (const UncoveredOffset& e) {
        spdlog::error("{}", e.what());
        return kQuality;
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kUsage;
    }
}
