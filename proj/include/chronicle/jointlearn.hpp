#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "chronicle/corpus.hpp"
#include "chronicle/features.hpp"

namespace chronicle {

struct Hyperparams {
    double lambda_s = 1.0;   // position-difference constraint weight
    double lambda_c = 1.0;   // pairwise preference constraint weight
    double lambda_sc = 1.0;  // bipartite coupling weight
    double beta_s = 1.0;     // sentence ridge penalty, must be > 0
    double beta_c = 1.0;     // comment ridge penalty, must be > 0
};

// Per-feature z-score statistics frozen at training time.
struct Standardization {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;  // zero-variance features keep stddev 1

    Eigen::VectorXd apply(const Eigen::VectorXd& raw) const;
};

struct TrainingSet {
    Eigen::MatrixXd Xs;       // N x k standardized sentence features
    Eigen::VectorXd Ys;       // ROUGE-2 recall vs abstract
    Eigen::MatrixXd Xs_diff;  // rows x_{s,0} - x_{s,j}, j != 0, same article
    Eigen::VectorXd Ys_diff;  // y_{s,0} - y_{s,j}
    Eigen::MatrixXd Xc;       // M x l standardized comment features
    Eigen::VectorXd Yc;       // 1.0 for editor's picks, else 0.0
    Eigen::MatrixXd Xc_diff;  // rows x_pick - x_nonpick, same article
    Eigen::VectorXd Yc_diff;  // all ones
    Eigen::MatrixXd Q;        // N x M degree-normalized bipartite matrix
    Standardization sentence_stats;
    Standardization comment_stats;
};

enum class ScoreKind { sentence, comment };

struct ScorerWeights {
    Eigen::VectorXd ws;
    Eigen::VectorXd wc;
    std::string sentence_schema;
    std::string comment_schema;
    Standardization sentence_stats;
    Standardization comment_stats;
};

// ROUGE-2 recall of each sentence against its article's abstract, in
// sentence-id order per article. Throws DataError naming any article
// without an abstract.
std::vector<double> gold_sentence_scores(const EventDataset& dataset, const Article& article);

// 1.0 iff editor's pick; throws DataError if the flag is absent.
std::vector<double> gold_comment_scores(const std::vector<const Comment*>& comments);

// Q = D^(-1/2) R D'^(-1/2) with D, D' the row/column sum diagonals.
// Zero-degree rows/columns stay zero; negative entries are rejected.
Eigen::MatrixXd normalize_bipartite(const Eigen::MatrixXd& R);

// At most this many pick/non-pick difference rows are kept per article,
// sampled with a fixed seed.
inline constexpr int kMaxPairRowsPerArticle = 50;

TrainingSet assemble_training(const EventDataset& dataset, const LexiconSet& lexicons,
                              const WordSet& event_words = builtin_event_words());

// Joint objective: the two regularized regressions plus the coupling
// quadratic form w' X' L X w with L = [lsc*I, -lsc*Q; -lsc*Q', lsc*I].
double joint_objective(const TrainingSet& ts, const Hyperparams& hp,
                       const Eigen::VectorXd& ws, const Eigen::VectorXd& wc);
Eigen::VectorXd joint_gradient(const TrainingSet& ts, const Hyperparams& hp,
                               const Eigen::VectorXd& ws, const Eigen::VectorXd& wc);

// Closed-form minimizer of the joint objective, solved with an LDLT
// factorization (diagonal jitter retry on numerical failure), never an
// explicit inverse.
ScorerWeights solve_joint(const TrainingSet& ts, const Hyperparams& hp);

// Standardizes with the stored statistics, then dot-products.
double score(const ScorerWeights& weights, const Eigen::VectorXd& raw_features, ScoreKind kind);
double score(const ScorerWeights& weights, const FeatureVector& features, ScoreKind kind);

// Versioned text format; 17-significant-digit decimals round-trip doubles
// exactly.
void save_weights(const ScorerWeights& weights, const std::string& path);
ScorerWeights load_weights(const std::string& path);

}  // namespace chronicle
