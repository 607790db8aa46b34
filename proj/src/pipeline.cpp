#include "factreward/pipeline.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "factreward/error.hpp"
#include "factreward/span_align.hpp"

namespace factreward {

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!first_error) {
                            first_error = std::current_exception();
                        }
                        next = count;
                    }
                }
            });
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

std::vector<AnnotationRecord> annotate_all(const std::vector<InputRecord>& inputs,
                                           const Annotator& annotator, std::size_t workers) {
    std::vector<AnnotationRecord> out(inputs.size());
    parallel_for(inputs.size(), workers, [&](std::size_t i) {
        const auto& in = inputs[i];
        auto& rec = out[i];
        rec.id = in.id;
        try {
            rec.annotation = annotator.annotate(in.prompt, in.response);
        } catch (const JudgeUnavailable& e) {
            rec.annotation = ResponseAnnotation{in.prompt, in.response, {}, {}};
            rec.error = e.what();
        }
    });
    return out;
}

RewardStage compute_rewards(const std::vector<AnnotationRecord>& annotations,
                            const RewardConfig& cfg, double min_ratio,
                            const std::map<std::string, TokenOffsets>* offsets) {
    cfg.validate();
    RewardStage stage;
    for (const auto& rec : annotations) {
        if (rec.error) {
            ++stage.stats.skipped_errors;
            continue;
        }
        const auto& a = rec.annotation;
        const auto resolved = resolve_spans(a.response, a.sentences, min_ratio);
        for (const auto& s : resolved) {
            for (const auto& st : s.statements) {
                ++stage.stats.statements;
                if (!st.span) {
                    ++stage.stats.unresolved_statements;
                }
            }
        }
        auto built = build_reward_events(a.response, resolved, cfg);
        stage.stats.missing_sentences += built.missing_sentence_spans.size();

        RewardRecord out{rec.id, a.response, std::move(built.events), std::nullopt, cfg.name};
        if (offsets != nullptr) {
            if (const auto it = offsets->find(id_key(rec.id)); it != offsets->end()) {
                try {
                    out.token_rewards = to_token_rewards(out.events, it->second).values;
                } catch (const UncoveredOffset& e) {
                    throw UncoveredOffset(e.offset(), "record " + id_key(rec.id) + ": " + e.what());
                }
            }
        }
        stage.records.push_back(std::move(out));
        ++stage.stats.records;
    }
    return stage;
}

EvalStage evaluate(const std::vector<AnnotationRecord>& annotations) {
    EvalStage stage;
    for (const auto& rec : annotations) {
        if (rec.error) {
            ++stage.skipped_errors;
            continue;
        }
        stage.ids.push_back(rec.id);
        stage.per_response.push_back(score_response(rec.annotation));
    }
    stage.aggregate = aggregate(stage.per_response);
    return stage;
}

AnnotateSummary run_annotate(const PipelineConfig& cfg, Judge& judge,
                             const std::filesystem::path& output) {
    if (!cfg.input) throw InvalidConfig("annotate needs an input path");
    if (!cfg.corpus) throw InvalidConfig("annotate needs a corpus path");

    const auto inputs = read_inputs(*cfg.input);
    const auto store = DocumentStore::load_jsonl(*cfg.corpus, cfg.bm25);
    if (store.empty() && !inputs.empty()) {
        throw EmptyStore("corpus '" + cfg.corpus->string() + "' holds no documents");
    }
    const Annotator annotator(judge, store,
                              AnnotatorOptions{.max_retries = cfg.judge.max_retries,
                                               .context_count = cfg.context_count,
                                               .max_in_flight = cfg.max_in_flight,
                                               .parallel_statements = true,
                                               .retry_backoff_ms = cfg.retry_backoff_ms});
    const auto records = annotate_all(inputs, annotator, cfg.workers);

    AnnotateSummary summary{records.size(), 0};
    std::vector<ojson> rows;
    rows.reserve(records.size());
    for (const auto& r : records) {
        summary.failed += r.error ? 1 : 0;
        rows.push_back(to_json(r));
    }
    write_jsonl(output, rows);
    return summary;
}

RewardStats run_reward(const PipelineConfig& cfg, const std::filesystem::path& input,
                       const std::filesystem::path& output) {
    const auto annotations = read_annotations(input);
    std::map<std::string, TokenOffsets> offsets;
    if (cfg.token_offsets) {
        offsets = read_token_offsets(*cfg.token_offsets);
    }
    auto stage = compute_rewards(annotations, cfg.reward, cfg.min_ratio,
                                 cfg.token_offsets ? &offsets : nullptr);
    std::vector<ojson> rows;
    rows.reserve(stage.records.size());
    for (const auto& r : stage.records) {
        rows.push_back(to_json(r));
    }
    write_jsonl(output, rows);
    return stage.stats;
}

EvalStage run_eval(const std::filesystem::path& input, const std::filesystem::path& output_dir) {
    const auto annotations = read_annotations(input);
    auto stage = evaluate(annotations);

    std::filesystem::create_directories(output_dir);
    std::vector<ojson> rows;
    rows.reserve(stage.per_response.size());
    for (std::size_t i = 0; i < stage.per_response.size(); ++i) {
        rows.push_back(to_json(stage.ids[i], stage.per_response[i]));
    }
    write_jsonl(output_dir / "metrics.jsonl", rows);

    const auto write_text = [](const std::filesystem::path& p, const std::string& body) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!(out << body)) {
            throw DataError("cannot write '" + p.string() + "'");
        }
    };
    write_text(output_dir / "aggregate.json", to_json(stage.aggregate).dump(2) + "\n");
    write_text(output_dir / "report.txt", format_table(input.stem().string(), stage.aggregate));
    return stage;
}

}  // namespace factreward
