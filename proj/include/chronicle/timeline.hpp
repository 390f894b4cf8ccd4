#pragma once

#include <Eigen/Dense>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "chronicle/corpus.hpp"
#include "chronicle/jointlearn.hpp"
#include "chronicle/matching.hpp"
#include "chronicle/threading.hpp"

namespace chronicle {

enum class ConnKind { lexical, semantic_embedding };

struct ObjectiveParams {
    double theta_cov = 1.0;   // coverage weight
    double alpha = 0.1;       // coverage saturation fraction
    double theta_cont = 1.0;  // continuity weight
    double delta = 1.0;       // connectivity weight
    double epsilon = 0.01;    // alternating-loop stop threshold
    int word_budget = 100;    // whitespace tokens per daily article summary
    int comment_count = 5;    // |C| = min(comment_count, |V_c|)
    double redundancy_threshold = 0.8;
    ConnKind conn_kind = ConnKind::lexical;

    // Throws std::invalid_argument when any range constraint is broken.
    void validate() const;
};

// One day's optimization inputs. Candidates are sorted by id; every
// matrix is index-aligned with the id vectors.
struct DayInstance {
    std::vector<std::string> sentence_ids;
    std::vector<int> sentence_word_counts;   // whitespace tokens of raw text
    Eigen::VectorXd sentence_importance;     // |Vs|
    Eigen::MatrixXd sentence_similarity;     // |Vs| x |Vs|, TF-IDF cosine
    Eigen::MatrixXd thread_cohesion;         // threads x |Vs|
    std::vector<std::string> comment_ids;
    Eigen::VectorXd comment_importance;      // |Vc|
    Eigen::MatrixXd connectivity;            // |Vs| x |Vc|
};

struct MatchedPair {
    std::string sentence_id;
    std::string comment_id;
    double weight = 0.0;
};

struct DaySummary {
    Date day;
    std::vector<std::string> article_summary;   // sentence ids, id order
    std::vector<std::string> comment_summary;   // comment ids, id order
    std::vector<double> objective_trace;        // Z per iteration, non-decreasing
    std::vector<MatchedPair> matching;
    double matching_weight = 0.0;
};

struct HistoryState {
    ThreadStore threads;
    std::set<std::string> covered_content_words;
};

// Drops candidates whose unique content words are already covered above
// the threshold; a sentence with no content words has coverage 0.
std::vector<const Sentence*> filter_redundant(const std::vector<const Sentence*>& candidates,
                                              const HistoryState& history, double threshold);

// Importance + theta_cov * saturated coverage + theta_cont * continuity.
double article_quality(const std::vector<int>& selected, const DayInstance& day,
                       const ObjectiveParams& params);

double comment_quality(const std::vector<int>& selected, const DayInstance& day);

// Z(S, C) = S_qual + C_qual + delta * best-matching connectivity.
double day_objective(const std::vector<int>& article_sel, const std::vector<int>& comment_sel,
                     const DayInstance& day, const ObjectiveParams& params);

double conn_lexical(const Sentence& s, const Comment& c, const TfIdfIndex& index);

// Pluggable similarity over entity phrases; the shipped provider is
// mean-word-vector cosine clamped to [0, 1] (see embeddings.hpp).
using PhraseSimilarity = std::function<double(const std::string&, const std::string&)>;

// sum over s-triples of the best same-relation c-triple argument
// similarity product; triples with no relation match contribute 0.
double conn_semantic(const std::vector<RelationTriple>& sentence_triples,
                     const std::vector<RelationTriple>& comment_triples,
                     const PhraseSimilarity& similarity);
double conn_semantic(const Sentence& s, const Comment& c, const PhraseSimilarity& similarity,
                     const WordSet& event_words = builtin_event_words());

// Budgeted greedy on article_quality; ties go to the lowest sentence id.
std::vector<int> greedy_init(const DayInstance& day, const ObjectiveParams& params);

// Exact maximizer of C_qual(C) + delta * X(S, C) over subsets with
// |C| = min(comment_count, |V_c|), via min-cost flow.
std::vector<int> select_comments(const std::vector<int>& article_sel, const DayInstance& day,
                                 const ObjectiveParams& params);

// Best-improving add/remove/swap local search on
// article_quality + delta * X(S, C); never returns a worse set.
std::vector<int> hill_climb_articles(const std::vector<int>& article_sel,
                                     const std::vector<int>& comment_sel, const DayInstance& day,
                                     const ObjectiveParams& params);

struct DayResult {
    std::vector<int> article_sel;
    std::vector<int> comment_sel;
    std::vector<double> trace;
};

DayResult alternate_optimize(const DayInstance& day, const ObjectiveParams& params);

struct TimelineResult {
    std::vector<DaySummary> days;
    ThreadStore threads;
    std::vector<Date> skipped_days;  // days in span with no articles
};

// Runs the per-day pipeline over the dataset span: candidate gathering,
// redundancy filtering, alternating optimization, thread attachment.
// The provider is only consulted when params.conn_kind is semantic.
TimelineResult generate_timeline(const EventDataset& dataset, const ScorerWeights& weights,
                                 const ObjectiveParams& params,
                                 const PhraseSimilarity& similarity = {},
                                 const WordSet& event_words = builtin_event_words());

std::string timeline_to_jsonl(const TimelineResult& result, const EventDataset& dataset);
std::string timeline_to_html(const TimelineResult& result, const EventDataset& dataset);

}  // namespace chronicle
