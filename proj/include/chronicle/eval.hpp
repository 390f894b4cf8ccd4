#pragma once

#include <map>
#include <string>
#include <vector>

#include "chronicle/corpus.hpp"
#include "chronicle/lexicons.hpp"
#include "chronicle/text.hpp"

namespace chronicle {

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Raw counting-unit totals behind a ROUGE score; summed across days for
// micro-averaged corpus scores.
struct RougeCounts {
    double overlap = 0.0;    // clipped matches
    double candidate = 0.0;  // total candidate units
    double reference = 0.0;  // total reference units

    RougeCounts& operator+=(const RougeCounts& o) {
        overlap += o.overlap;
        candidate += o.candidate;
        reference += o.reference;
        return *this;
    }
    RougeScore score() const;
};

// Bigram overlap, clipped against the union of references (per-unit
// count = max over references). No stemming, no stopword removal.
RougeCounts rouge2_counts(const TokenList& candidate,
                          const std::vector<TokenList>& references);
RougeScore rouge2(const TokenList& candidate, const std::vector<TokenList>& references);

// Counting units are unigrams plus skip-bigrams (i, j), i < j, with at
// most four tokens between them (j - i - 1 <= 4).
RougeCounts rouge_su4_counts(const TokenList& candidate,
                             const std::vector<TokenList>& references);
RougeScore rouge_su4(const TokenList& candidate, const std::vector<TokenList>& references);

struct RankedList {
    std::vector<std::string> items;   // best first
    std::vector<double> relevance;    // parallel to items
};

// DCG gain rel_i / log2(i + 1); all-zero relevance yields 0.
double ndcg_at_k(const std::vector<double>& relevance_in_rank_order, int k);
double ndcg_at_k(const RankedList& list, int k);

// Mean over lists of 1 / rank-of-first-relevant; no relevant item
// contributes 0.
double mrr(const std::vector<RankedList>& lists);

// Exact one-sided paired sign-flip permutation test for mean(a - b) > 0.
// Enumerates all 2^n sign assignments when n <= 20, otherwise samples.
double paired_permutation_test(const std::vector<double>& a, const std::vector<double>& b);

struct RankingEval {
    double macro_ndcg3 = 0.0;
    double mrr = 0.0;
    int evaluated = 0;
    int skipped = 0;  // articles without the required labels
};

struct ScorerWeights;  // jointlearn

// Ranks each article's sentences by model score; a sentence is relevant
// iff its ROUGE-2 recall against the article abstract is > 0.
RankingEval eval_sentence_ranking(const ScorerWeights& weights, const EventDataset& dataset,
                                  const WordSet& event_words = builtin_event_words());

// Comment counterpart; relevance is the editor's pick flag.
RankingEval eval_comment_ranking(const ScorerWeights& weights, const EventDataset& dataset,
                                 const LexiconSet& lexicons = LexiconSet::builtin(),
                                 const WordSet& event_words = builtin_event_words());

struct TimelineEval {
    RougeScore rouge2;
    RougeScore rouge_su4;
    int matched_days = 0;
};

// Micro-averaged ROUGE of per-day system texts against per-day gold
// references; only dates present on both sides count.
TimelineEval eval_timeline(const std::map<Date, std::string>& system_by_day,
                           const std::vector<GoldReference>& gold);

std::string render_metric_report(const std::map<std::string, double>& metrics,
                                 const std::string& dataset_name);
std::string render_metric_table(const std::map<std::string, double>& metrics,
                                const std::string& dataset_name);

}  // namespace chronicle
