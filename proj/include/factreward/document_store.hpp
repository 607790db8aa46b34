#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace factreward {

struct Document {
    std::string id;
    std::string title;
    std::string text;
};

struct RetrievedPassage {
    std::string id;
    std::string title;
    std::string text;
    double score;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

inline constexpr std::size_t kDefaultContextCount = 3;

/// Lowercased terms split on whitespace and ASCII punctuation.
std::vector<std::string> tokenize_terms(std::string_view text);

/// Immutable reference corpus with an in-memory BM25 index; one passage per
/// document. Safe to query from several threads once constructed.
class DocumentStore {
  public:
    /// Throws DataError on empty or duplicate identifiers.
    explicit DocumentStore(std::vector<Document> docs, Bm25Params params = {});

    /// Line-delimited JSON records {id, title, text}.
    static DocumentStore load_jsonl(const std::filesystem::path& path, Bm25Params params = {});

    std::size_t size() const noexcept { return docs_.size(); }
    bool empty() const noexcept { return docs_.empty(); }
    const std::vector<Document>& documents() const noexcept { return docs_; }

    double score(std::string_view query, std::size_t doc) const;

    /// Top `count` passages by BM25 score, ties broken by document id. Every
    /// document is a candidate, so fewer than `count` results only happen when
    /// the corpus is smaller. Throws EmptyStore on an empty corpus.
    std::vector<RetrievedPassage> retrieve(std::string_view query,
                                           std::size_t count = kDefaultContextCount) const;

  private:
    struct Posting {
        std::uint32_t doc;
        std::uint32_t freq;
    };

    double idf(std::size_t df) const;

    std::vector<Document> docs_;
    Bm25Params params_;
    std::vector<std::size_t> doc_length_;
    double avg_length_ = 0.0;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
};

}  // namespace factreward
