#include "chronicle/tfidf.hpp"

#include <cmath>
#include <stdexcept>

namespace chronicle {

TfIdfIndex TfIdfIndex::build(const std::vector<TokenList>& documents) {
    if (documents.empty()) throw std::invalid_argument("build_tfidf: zero documents");
    TfIdfIndex index;
    index.num_docs_ = static_cast<int>(documents.size());
    for (const auto& doc : documents) {
        for (const auto& [term, count] : term_counts(doc)) {
            (void)count;
            auto [it, inserted] = index.vocab_.try_emplace(term, static_cast<int>(index.doc_freq_.size()));
            if (inserted) index.doc_freq_.push_back(0);
            ++index.doc_freq_[it->second];
        }
    }
    index.idf_.resize(index.doc_freq_.size());
    for (std::size_t i = 0; i < index.doc_freq_.size(); ++i)
        index.idf_[i] = std::log(static_cast<double>(index.num_docs_) / index.doc_freq_[i]);
    return index;
}

double TfIdfIndex::idf(const std::string& term) const {
    auto it = vocab_.find(term);
    return it == vocab_.end() ? 0.0 : idf_[it->second];
}

int TfIdfIndex::doc_freq(const std::string& term) const {
    auto it = vocab_.find(term);
    return it == vocab_.end() ? 0 : doc_freq_[it->second];
}

std::unordered_map<std::string, double> TfIdfIndex::weights(const TokenList& tokens) const {
    return weights(term_counts(tokens));
}

std::unordered_map<std::string, double> TfIdfIndex::weights(const TermCounts& counts) const {
    std::unordered_map<std::string, double> w;
    for (const auto& [term, count] : counts) {
        double f = idf(term);
        if (f > 0.0) w[term] = count * f;
    }
    return w;
}

namespace {

double cosine_of_weights(const std::unordered_map<std::string, double>& wa,
                         const std::unordered_map<std::string, double>& wb) {
    if (wa.empty() || wb.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [term, va] : wa) {
        na += va * va;
        auto it = wb.find(term);
        if (it != wb.end()) dot += va * it->second;
    }
    for (const auto& [term, vb] : wb) nb += vb * vb;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

double tfidf_cosine(const TokenList& a, const TokenList& b, const TfIdfIndex& index) {
    return cosine_of_weights(index.weights(a), index.weights(b));
}

double tfidf_cosine(const TermCounts& a, const TermCounts& b, const TfIdfIndex& index) {
    return cosine_of_weights(index.weights(a), index.weights(b));
}

double tf_similarity(const TermCounts& a, const TermCounts& b) {
    if (a.empty() || b.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [term, ca] : a) {
        na += static_cast<double>(ca) * ca;
        auto it = b.find(term);
        if (it != b.end()) dot += static_cast<double>(ca) * it->second;
    }
    for (const auto& [term, cb] : b) nb += static_cast<double>(cb) * cb;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double tf_similarity(const TokenList& a, const TokenList& b) {
    return tf_similarity(term_counts(a), term_counts(b));
}

}  // namespace chronicle
