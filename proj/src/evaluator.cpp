#include "factreward/evaluator.hpp"

#include <cstdio>

#include "factreward/error.hpp"

namespace factreward {

ResponseMetrics score_response(const std::vector<SentenceAnnotation>& sentences) {
    ResponseMetrics m;
    for (const auto& sentence : sentences) {
        for (const auto& st : sentence.statements) {
            const bool correct = st.verification && (*st.verification == VerificationLabel::Correct ||
                                                     *st.verification == VerificationLabel::HedgedCorrect);
            ++(correct ? m.correct_count : m.incorrect_count);
        }
    }
    const std::size_t total = m.correct_count + m.incorrect_count;
    m.responded = total >= 1;
    if (m.responded) {
        m.factscore = static_cast<double>(m.correct_count) / static_cast<double>(total);
    }
    return m;
}

ResponseMetrics score_response(const ResponseAnnotation& annotation) {
    return score_response(annotation.sentences);
}

DatasetMetrics aggregate(const std::vector<ResponseMetrics>& metrics) {
    if (metrics.empty()) {
        throw EmptyBatch("cannot aggregate an empty batch");
    }
    DatasetMetrics d;
    d.total = metrics.size();
    double correct = 0.0, incorrect = 0.0, responded_correct = 0.0, responded_incorrect = 0.0;
    double score_sum = 0.0;
    std::size_t scored = 0;
    for (const auto& m : metrics) {
        correct += static_cast<double>(m.correct_count);
        incorrect += static_cast<double>(m.incorrect_count);
        if (m.responded) {
            ++d.responded;
            responded_correct += static_cast<double>(m.correct_count);
            responded_incorrect += static_cast<double>(m.incorrect_count);
        }
        if (m.factscore) {
            score_sum += *m.factscore;
            ++scored;
        }
    }
    const auto total = static_cast<double>(d.total);
    d.response_ratio = static_cast<double>(d.responded) / total;
    d.avg_correct_all = correct / total;
    d.avg_incorrect_all = incorrect / total;
    if (d.responded > 0) {
        d.avg_correct = responded_correct / static_cast<double>(d.responded);
        d.avg_incorrect = responded_incorrect / static_cast<double>(d.responded);
    }
    if (scored > 0) {
        d.score = score_sum / static_cast<double>(scored);
    } else {
        d.refusals_only = true;
    }
    return d;
}

std::string format_table(const std::string& label, const DatasetMetrics& m) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%-24s %8s %8s %8s %8s\n", "Dataset", "#Cor.", "#Inc.",
                  "%Res.", "Score");
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-24s %8.2f %8.2f %8.2f %8.3f\n", label.c_str(),
                  m.avg_correct, m.avg_incorrect, m.response_ratio, m.score);
    out += buf;
    return out;
}

}  // namespace factreward
