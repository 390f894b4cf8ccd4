#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "chronicle/text.hpp"

namespace chronicle {

// Immutable TF-IDF statistics over a document collection.
// idf(t) = ln(num_docs / doc_freq(t)); terms never indexed weigh 0.
class TfIdfIndex {
public:
    static TfIdfIndex build(const std::vector<TokenList>& documents);

    double idf(const std::string& term) const;
    int doc_freq(const std::string& term) const;
    int num_docs() const { return num_docs_; }
    std::size_t vocabulary_size() const { return vocab_.size(); }

    // term -> tf(t, tokens) * idf(t) for the indexed terms of `tokens`.
    std::unordered_map<std::string, double> weights(const TokenList& tokens) const;
    std::unordered_map<std::string, double> weights(const TermCounts& counts) const;

private:
    std::unordered_map<std::string, int> vocab_;
    std::vector<int> doc_freq_;
    std::vector<double> idf_;
    int num_docs_ = 0;
};

// Cosine of the TF-IDF vectors of two token lists; 0 when either
// vector is all-zero.
double tfidf_cosine(const TokenList& a, const TokenList& b, const TfIdfIndex& index);
double tfidf_cosine(const TermCounts& a, const TermCounts& b, const TfIdfIndex& index);

// Cosine over raw term-frequency vectors; 0 if either side is empty.
double tf_similarity(const TermCounts& a, const TermCounts& b);
double tf_similarity(const TokenList& a, const TokenList& b);

}  // namespace chronicle
