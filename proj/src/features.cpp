#include "chronicle/features.hpp"

#include <cmath>

#include "chronicle/threading.hpp"

namespace chronicle {

namespace {

std::string triple_signature(const RelationTriple& t) {
    return t.arg1 + "|" + t.relation + "|" + t.arg2;
}

double sum_tfidf(const TokenList& tokens, const TfIdfIndex& index) {
    double sum = 0.0;
    for (const auto& t : tokens) sum += index.idf(t);
    return sum;
}

int count_capitalized(const std::string& text) {
    int n = 0;
    for (const auto& tok : tokenize_preserve_case(text))
        if (is_capitalized(tok)) ++n;
    return n;
}

int count_in_set(const TokenList& tokens, const WordSet& words) {
    int n = 0;
    for (const auto& t : tokens)
        if (words.count(t)) ++n;
    return n;
}

}  // namespace

const std::vector<std::string>& sentence_feature_names() {
    static const std::vector<std::string> names = {
        "num_words",
        "position_absolute",
        "position_relative",
        "headline_overlap",
        "tfidf_avg",
        "tfidf_sum",
        "num_named_entities",
        "comment_word_freq_avg",
        "comment_word_freq_sum",
        "comment_relation_freq_avg",
        "comment_relation_freq_sum",
    };
    return names;
}

const std::vector<std::string>& comment_feature_names() {
    static const std::vector<std::string> names = {
        "num_words",
        "num_sentences",
        "words_per_sentence",
        "num_named_entities",
        "capitalized_num",
        "capitalized_prop",
        "tfidf_avg",
        "tfidf_sum",
        "contains_url",
        "user_rating",
        "flesch_kincaid",
        "gunning_fog",
        "connectives_num",
        "connectives_prop",
        "hedges_num",
        "hedges_prop",
        "tf_sim_article",
        "tfidf_sim_article",
        "tf_sim_comments",
        "tfidf_sim_comments",
        "js_div_article",
        "kl_div_article",
        "js_div_comments",
        "kl_div_comments",
        "positive_num",
        "positive_prop",
        "negative_num",
        "negative_prop",
        "neutral_num",
        "neutral_prop",
        "sentiment_num",
        "sentiment_prop",
    };
    return names;
}

ArticleFeatureContext ArticleFeatureContext::build(const EventDataset& dataset,
                                                   const Article& article,
                                                   const std::vector<const Comment*>& comments,
                                                   const WordSet& event_words) {
    ArticleFeatureContext ctx;
    ctx.dataset = &dataset;
    ctx.article = &article;
    ctx.event_words = &event_words;
    ctx.comments = comments;
    for (const Comment* c : comments) {
        for (const auto& t : c->tokens) ++ctx.comment_tokens[t];
        for (const auto& triple : extract_relations(c->text, event_words))
            ++ctx.comment_triple_signatures[triple_signature(triple)];
    }
    ctx.article_token_list = article_tokens(dataset, article);
    for (const auto& t : content_tokens(tokenize(article.headline), dataset.stopword_set()))
        ctx.headline_content.insert(t);
    return ctx;
}

FeatureVector sentence_features(const Sentence& s, const ArticleFeatureContext& ctx,
                                const TfIdfIndex& index) {
    const double num_words = static_cast<double>(s.tokens.size());
    const auto num_sentences = static_cast<double>(ctx.article->sentence_ids.size());

    std::unordered_set<std::string> unique_content(s.content_tokens.begin(),
                                                   s.content_tokens.end());
    double headline_overlap = 0.0;
    for (const auto& w : unique_content)
        if (ctx.headline_content.count(w)) headline_overlap += 1.0;

    const double tfidf_total = sum_tfidf(s.tokens, index);

    double comment_word_sum = 0.0;
    for (const auto& w : unique_content) {
        auto it = ctx.comment_tokens.find(w);
        if (it != ctx.comment_tokens.end()) comment_word_sum += it->second;
    }
    const double comment_word_avg =
        unique_content.empty() ? 0.0 : comment_word_sum / static_cast<double>(unique_content.size());

    const auto triples = extract_relations(s.text, *ctx.event_words);
    double relation_sum = 0.0;
    for (const auto& t : triples) {
        auto it = ctx.comment_triple_signatures.find(triple_signature(t));
        if (it != ctx.comment_triple_signatures.end()) relation_sum += it->second;
    }
    const double relation_avg =
        triples.empty() ? 0.0 : relation_sum / static_cast<double>(triples.size());

    FeatureVector fv;
    fv.schema_id = kSentenceSchemaId;
    fv.values.resize(static_cast<Eigen::Index>(sentence_feature_names().size()));
    fv.values << num_words,
        static_cast<double>(s.position),
        num_sentences > 0 ? s.position / num_sentences : 0.0,
        headline_overlap,
        num_words > 0 ? tfidf_total / num_words : 0.0,
        tfidf_total,
        static_cast<double>(count_named_entities(s.text)),
        comment_word_avg,
        comment_word_sum,
        relation_avg,
        relation_sum;
    return fv;
}

FeatureVector sentence_features(const Sentence& s, const Article& a,
                                const std::vector<const Comment*>& comments_of_a,
                                const EventDataset& dataset, const TfIdfIndex& index) {
    return sentence_features(s, ArticleFeatureContext::build(dataset, a, comments_of_a), index);
}

FeatureVector comment_features(const Comment& c, const ArticleFeatureContext& ctx,
                               const TfIdfIndex& index, const LexiconSet& lex) {
    const double num_words = static_cast<double>(c.tokens.size());
    const double num_sentences = static_cast<double>(split_sentences(c.text).size());

    const double capitalized = count_capitalized(c.text);
    const double tfidf_total = sum_tfidf(c.tokens, index);

    const double connectives = count_in_set(c.tokens, lex.connectives);
    const double hedges = count_in_set(c.tokens, lex.hedges);
    const double positive = count_in_set(c.tokens, lex.positive);
    const double negative = count_in_set(c.tokens, lex.negative);
    const double neutral = count_in_set(c.tokens, lex.neutral);
    const double sentiment = positive + negative + neutral;

    const auto own_counts = term_counts(c.tokens);
    TermCounts other_counts = ctx.comment_tokens;
    for (const auto& [term, count] : own_counts) {
        auto it = other_counts.find(term);
        if (it == other_counts.end()) continue;
        it->second -= count;
        if (it->second <= 0) other_counts.erase(it);
    }
    const auto article_counts = term_counts(ctx.article_token_list);

    const auto [p_art, q_art] = smoothed_unigram_pair(own_counts, article_counts);
    const auto [p_cmt, q_cmt] = smoothed_unigram_pair(own_counts, other_counts);

    const double prop_denom = num_words > 0 ? num_words : 1.0;

    FeatureVector fv;
    fv.schema_id = kCommentSchemaId;
    fv.values.resize(static_cast<Eigen::Index>(comment_feature_names().size()));
    fv.values << num_words,
        num_sentences,
        num_sentences > 0 ? num_words / num_sentences : 0.0,
        static_cast<double>(count_named_entities(c.text)),
        capitalized,
        capitalized / prop_denom,
        num_words > 0 ? tfidf_total / num_words : 0.0,
        tfidf_total,
        c.text.find("http") != std::string::npos ? 1.0 : 0.0,
        static_cast<double>(c.rating_pos - c.rating_neg),
        flesch_kincaid(c.text),
        gunning_fog(c.text),
        connectives,
        connectives / prop_denom,
        hedges,
        hedges / prop_denom,
        tf_similarity(own_counts, article_counts),
        tfidf_cosine(own_counts, article_counts, index),
        tf_similarity(own_counts, other_counts),
        tfidf_cosine(own_counts, other_counts, index),
        js_divergence(p_art, q_art),
        kl_divergence(p_art, q_art),
        js_divergence(p_cmt, q_cmt),
        kl_divergence(p_cmt, q_cmt),
        positive,
        positive / prop_denom,
        negative,
        negative / prop_denom,
        neutral,
        neutral / prop_denom,
        sentiment,
        sentiment / prop_denom;
    return fv;
}

FeatureVector comment_features(const Comment& c, const Article& a,
                               const std::vector<const Comment*>& comments_of_a,
                               const EventDataset& dataset, const TfIdfIndex& index,
                               const LexiconSet& lex) {
    return comment_features(c, ArticleFeatureContext::build(dataset, a, comments_of_a), index, lex);
}

int syllable_count(const std::string& lowercase_word) {
    auto vowel = [](char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };
    int runs = 0;
    bool in_run = false;
    for (char c : lowercase_word) {
        if (vowel(c)) {
            if (!in_run) ++runs;
            in_run = true;
        } else {
            in_run = false;
        }
    }
    const std::size_t n = lowercase_word.size();
    if (n >= 2 && lowercase_word[n - 1] == 'e' && !vowel(lowercase_word[n - 2]) && runs > 1)
        --runs;
    return std::max(1, runs);
}

namespace {

struct ReadabilityCounts {
    double words = 0;
    double sentences = 0;
    double syllables = 0;
    double complex_words = 0;
};

ReadabilityCounts readability_counts(const std::string& text) {
    ReadabilityCounts rc;
    rc.sentences = static_cast<double>(split_sentences(text).size());
    for (const auto& tok : tokenize(text)) {
        rc.words += 1;
        const int syl = syllable_count(tok);
        rc.syllables += syl;
        if (syl >= 3) rc.complex_words += 1;
    }
    return rc;
}

}  // namespace

double flesch_kincaid(const std::string& text) {
    const auto rc = readability_counts(text);
    if (rc.words == 0 || rc.sentences == 0) return 0.0;
    return 0.39 * (rc.words / rc.sentences) + 11.8 * (rc.syllables / rc.words) - 15.59;
}

double gunning_fog(const std::string& text) {
    const auto rc = readability_counts(text);
    if (rc.words == 0 || rc.sentences == 0) return 0.0;
    return 0.4 * ((rc.words / rc.sentences) + 100.0 * (rc.complex_words / rc.words));
}

int count_named_entities(const std::string& text) {
    int n = 0;
    for (const auto& sentence : split_sentences(text)) {
        const auto tokens = tokenize_preserve_case(sentence);
        for (std::size_t i = 1; i < tokens.size(); ++i)
            if (is_capitalized(tokens[i])) ++n;
    }
    return n;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> smoothed_unigram_pair(const TermCounts& a,
                                                                  const TermCounts& b) {
    std::map<std::string, std::pair<int, int>> merged;
    for (const auto& [term, count] : a) merged[term].first = count;
    for (const auto& [term, count] : b) merged[term].second = count;
    const auto v = static_cast<Eigen::Index>(merged.size());
    Eigen::VectorXd p(v), q(v);
    double pa = 0.0, pb = 0.0;
    Eigen::Index i = 0;
    for (const auto& [term, counts] : merged) {
        p[i] = counts.first + 1.0;
        q[i] = counts.second + 1.0;
        pa += p[i];
        pb += q[i];
        ++i;
    }
    if (v > 0) {
        p /= pa;
        q /= pb;
    }
    return {p, q};
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    double kl = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) kl += p[i] * std::log(p[i] / q[i]);
    return kl;
}

double js_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    if (p.size() == 0) return 0.0;
    const Eigen::VectorXd m = 0.5 * (p + q);
    return 0.5 * kl_divergence(p, m) + 0.5 * kl_divergence(q, m);
}

}  // namespace chronicle
