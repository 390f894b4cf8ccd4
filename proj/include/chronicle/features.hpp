#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "chronicle/corpus.hpp"
#include "chronicle/lexicons.hpp"
#include "chronicle/tfidf.hpp"

namespace chronicle {

struct FeatureVector {
    Eigen::VectorXd values;
    std::string schema_id;
};

inline constexpr const char* kSentenceSchemaId = "sentence-v1";
inline constexpr const char* kCommentSchemaId = "comment-v1";

// Ordered feature names; positions match the emitted vectors.
const std::vector<std::string>& sentence_feature_names();
const std::vector<std::string>& comment_feature_names();

// Per-article inputs shared by every sentence/comment feature vector of
// that article; building it once avoids rescanning the comment pool.
struct ArticleFeatureContext {
    const EventDataset* dataset = nullptr;
    const Article* article = nullptr;
    const WordSet* event_words = nullptr;    // relation-extractor lexicon
    std::vector<const Comment*> comments;    // this article's comments, id order
    TermCounts comment_tokens;               // all comments pooled
    TermCounts comment_triple_signatures;    // "arg1|relation|arg2" per comment triple
    TokenList article_token_list;
    std::unordered_set<std::string> headline_content;

    static ArticleFeatureContext build(const EventDataset& dataset, const Article& article,
                                       const std::vector<const Comment*>& comments,
                                       const WordSet& event_words = builtin_event_words());
};

FeatureVector sentence_features(const Sentence& s, const ArticleFeatureContext& ctx,
                                const TfIdfIndex& index);
FeatureVector sentence_features(const Sentence& s, const Article& a,
                                const std::vector<const Comment*>& comments_of_a,
                                const EventDataset& dataset, const TfIdfIndex& index);

FeatureVector comment_features(const Comment& c, const ArticleFeatureContext& ctx,
                               const TfIdfIndex& index, const LexiconSet& lex);
FeatureVector comment_features(const Comment& c, const Article& a,
                               const std::vector<const Comment*>& comments_of_a,
                               const EventDataset& dataset, const TfIdfIndex& index,
                               const LexiconSet& lex);

// 0.39*(words/sentences) + 11.8*(syllables/words) - 15.59; 0 when there
// are no words or no sentences.
double flesch_kincaid(const std::string& text);

// 0.4*((words/sentences) + 100*(complex/words)); a complex word has a
// heuristic syllable count >= 3.
double gunning_fog(const std::string& text);

// Maximal [aeiouy] runs, minus a trailing silent 'e', floored at 1.
int syllable_count(const std::string& lowercase_word);

// Capitalized tokens that are not sentence-initial.
int count_named_entities(const std::string& text);

// Add-one smoothed unigram distributions over the union vocabulary of
// the two token multisets. Empty union yields two empty vectors.
std::pair<Eigen::VectorXd, Eigen::VectorXd> smoothed_unigram_pair(const TermCounts& a,
                                                                  const TermCounts& b);

// KL = sum p*ln(p/q); inputs must be strictly positive distributions of
// equal length (empty means identical-empty texts and scores 0).
double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// JS = 0.5*KL(p||m) + 0.5*KL(q||m), m = (p+q)/2; symmetric, <= ln 2.
double js_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

}  // namespace chronicle
