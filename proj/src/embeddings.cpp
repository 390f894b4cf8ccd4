#include "chronicle/embeddings.hpp"

#include <fstream>
#include <sstream>

#include "chronicle/errors.hpp"

namespace chronicle {

EmbeddingTable EmbeddingTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embedding file: " + path);
    EmbeddingTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string token;
        fields >> token;
        std::vector<double> values;
        double v = 0.0;
        while (fields >> v) values.push_back(v);
        if (token.empty() || values.empty())
            throw DataError(path + ":" + std::to_string(lineno) + ": malformed embedding line");
        if (table.dimension_ == 0) table.dimension_ = static_cast<int>(values.size());
        if (static_cast<int>(values.size()) != table.dimension_)
            throw DataError(path + ":" + std::to_string(lineno) + ": dimension mismatch");
        table.vectors_[token] =
            Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    }
    if (table.vectors_.empty()) throw DataError(path + ": no embeddings");
    return table;
}

const Eigen::VectorXd* EmbeddingTable::vector(const std::string& token) const {
    auto it = vectors_.find(token);
    return it == vectors_.end() ? nullptr : &it->second;
}

PhraseSimilarity EmbeddingTable::phrase_similarity() const {
    return [this](const std::string& a, const std::string& b) {
        auto mean_vector = [this](const std::string& phrase, Eigen::VectorXd& out) {
            out = Eigen::VectorXd::Zero(dimension_);
            int known = 0;
            for (const auto& tok : tokenize(phrase)) {
                if (const Eigen::VectorXd* v = vector(tok)) {
                    out += *v;
                    ++known;
                }
            }
            if (known > 0) out /= static_cast<double>(known);
            return known > 0;
        };
        Eigen::VectorXd va, vb;
        if (!mean_vector(a, va) || !mean_vector(b, vb)) return 0.0;
        const double na = va.norm(), nb = vb.norm();
        if (na == 0.0 || nb == 0.0) return 0.0;
        return std::clamp(va.dot(vb) / (na * nb), 0.0, 1.0);
    };
}

}  // namespace chronicle
