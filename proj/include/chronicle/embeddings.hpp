#pragma once

#include <Eigen/Dense>
#include <string>
#include <unordered_map>

#include "chronicle/timeline.hpp"

namespace chronicle {

// Pretrained word vectors in the common text layout: one token followed
// by whitespace-separated decimals per line.
class EmbeddingTable {
public:
    static EmbeddingTable load(const std::string& path);

    const Eigen::VectorXd* vector(const std::string& token) const;
    int dimension() const { return dimension_; }
    std::size_t size() const { return vectors_.size(); }

    // Cosine of mean token vectors, clamped to [0, 1]; phrases with no
    // in-vocabulary token score 0. The table must outlive the provider.
    PhraseSimilarity phrase_similarity() const;

private:
    std::unordered_map<std::string, Eigen::VectorXd> vectors_;
    int dimension_ = 0;
};

}  // namespace chronicle
