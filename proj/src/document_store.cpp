#include "factreward/document_store.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "factreward/error.hpp"

namespace factreward {

std::vector<std::string> tokenize_terms(std::string_view text) {
    std::vector<std::string> terms;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        // Non-ASCII bytes stay inside terms.
        if (c < 0x80 && (std::isspace(c) || std::ispunct(c))) {
            if (!cur.empty()) {
                terms.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            cur.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    if (!cur.empty()) {
        terms.push_back(std::move(cur));
    }
    return terms;
}

DocumentStore::DocumentStore(std::vector<Document> docs, Bm25Params params)
    : docs_(std::move(docs)), params_(params) {
    std::set<std::string_view> seen;
    for (const auto& d : docs_) {
        if (d.id.empty()) {
            throw DataError("document with empty id");
        }
        if (!seen.insert(d.id).second) {
            throw DataError("duplicate document id '" + d.id + "'");
        }
    }

    doc_length_.reserve(docs_.size());
    for (std::uint32_t i = 0; i < docs_.size(); ++i) {
        const auto& d = docs_[i];
        auto terms = tokenize_terms(d.title);
        auto body = tokenize_terms(d.text);
        terms.insert(terms.end(), body.begin(), body.end());
        doc_length_.push_back(terms.size());

        std::map<std::string, std::uint32_t> freq;
        for (auto& t : terms) {
            ++freq[t];
        }
        for (auto& [term, f] : freq) {
            postings_[term].push_back({i, f});
        }
    }
    if (!docs_.empty()) {
        avg_length_ = static_cast<double>(
                          std::accumulate(doc_length_.begin(), doc_length_.end(), std::size_t{0})) /
                      static_cast<double>(docs_.size());
    }
}

DocumentStore DocumentStore::load_jsonl(const std::filesystem::path& path, Bm25Params params) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open corpus '" + path.string() + "'");
    }
    std::vector<Document> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            const auto& id = j.at("id");
            docs.push_back(Document{id.is_string() ? id.get<std::string>() : id.dump(),
                                    j.value("title", std::string{}),
                                    j.at("text").get<std::string>()});
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return DocumentStore(std::move(docs), params);
}

double DocumentStore::idf(std::size_t df) const {
    // Non-negative variant; the classic form is zero or negative on tiny corpora.
    const auto n = static_cast<double>(docs_.size());
    const auto d = static_cast<double>(df);
    return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double DocumentStore::score(std::string_view query, std::size_t doc) const {
    const auto terms = tokenize_terms(query);
    const std::set<std::string> unique(terms.begin(), terms.end());
    double total = 0.0;
    const double norm =
        avg_length_ > 0.0 ? static_cast<double>(doc_length_[doc]) / avg_length_ : 0.0;
    for (const auto& t : unique) {
        const auto it = postings_.find(t);
        if (it == postings_.end()) {
            continue;
        }
        const auto& plist = it->second;
        const auto hit = std::find_if(plist.begin(), plist.end(),
                                      [doc](const Posting& p) { return p.doc == doc; });
        if (hit == plist.end()) {
            continue;
        }
        const double f = hit->freq;
        total += idf(plist.size()) * f * (params_.k1 + 1.0) /
                 (f + params_.k1 * (1.0 - params_.b + params_.b * norm));
    }
    return total;
}

std::vector<RetrievedPassage> DocumentStore::retrieve(std::string_view query,
                                                      std::size_t count) const {
    if (docs_.empty()) {
        throw EmptyStore("retrieval against an empty document store");
    }
    const auto terms = tokenize_terms(query);
    const std::set<std::string> unique(terms.begin(), terms.end());

    std::vector<double> scores(docs_.size(), 0.0);
    for (const auto& t : unique) {
        const auto it = postings_.find(t);
        if (it == postings_.end()) {
            continue;
        }
        const double w = idf(it->second.size());
        for (const auto& p : it->second) {
            const double f = p.freq;
            const double norm = static_cast<double>(doc_length_[p.doc]) / avg_length_;
            scores[p.doc] += w * f * (params_.k1 + 1.0) /
                             (f + params_.k1 * (1.0 - params_.b + params_.b * norm));
        }
    }

    std::vector<std::size_t> order(docs_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return docs_[a].id < docs_[b].id;
    });
    order.resize(std::min(count, order.size()));

    std::vector<RetrievedPassage> out;
    out.reserve(order.size());
    for (auto i : order) {
        out.push_back({docs_[i].id, docs_[i].title, docs_[i].text, scores[i]});
    }
    return out;
}

}  // namespace factreward
