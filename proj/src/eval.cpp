#include "chronicle/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "chronicle/errors.hpp"
#include "chronicle/features.hpp"
#include "chronicle/jointlearn.hpp"

namespace chronicle {

namespace {

using UnitCounts = std::unordered_map<std::string, int>;

UnitCounts bigram_counts(const TokenList& tokens) {
    UnitCounts counts;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
        ++counts[tokens[i] + "\x1f" + tokens[i + 1]];
    return counts;
}

// Unigrams plus skip-bigrams (i, j) with j - i - 1 <= 4; the two unit
// kinds are keyed apart so they never collide.
UnitCounts su4_counts(const TokenList& tokens) {
    UnitCounts counts;
    for (const auto& t : tokens) ++counts["u\x1f" + t];
    for (std::size_t i = 0; i < tokens.size(); ++i)
        for (std::size_t j = i + 1; j < tokens.size() && j - i - 1 <= 4; ++j)
            ++counts["s\x1f" + tokens[i] + "\x1f" + tokens[j]];
    return counts;
}

template <typename UnitFn>
RougeCounts clipped_counts(const TokenList& candidate, const std::vector<TokenList>& references,
                           UnitFn&& units) {
    if (references.empty()) throw std::invalid_argument("rouge: empty reference set");
    const UnitCounts cand = units(candidate);
    UnitCounts ref_union;  // per-unit max across references
    for (const auto& ref : references)
        for (const auto& [unit, count] : units(ref))
            ref_union[unit] = std::max(ref_union[unit], count);

    RougeCounts rc;
    for (const auto& [unit, count] : cand) {
        rc.candidate += count;
        auto it = ref_union.find(unit);
        if (it != ref_union.end()) rc.overlap += std::min(count, it->second);
    }
    for (const auto& [unit, count] : ref_union) rc.reference += count;
    return rc;
}

}  // namespace

RougeScore RougeCounts::score() const {
    RougeScore s;
    s.precision = candidate > 0 ? overlap / candidate : 0.0;
    s.recall = reference > 0 ? overlap / reference : 0.0;
    s.f1 = (s.precision + s.recall) > 0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
}

RougeCounts rouge2_counts(const TokenList& candidate, const std::vector<TokenList>& references) {
    return clipped_counts(candidate, references, bigram_counts);
}

RougeScore rouge2(const TokenList& candidate, const std::vector<TokenList>& references) {
    return rouge2_counts(candidate, references).score();
}

RougeCounts rouge_su4_counts(const TokenList& candidate,
                             const std::vector<TokenList>& references) {
    return clipped_counts(candidate, references, su4_counts);
}

RougeScore rouge_su4(const TokenList& candidate, const std::vector<TokenList>& references) {
    return rouge_su4_counts(candidate, references).score();
}

double ndcg_at_k(const std::vector<double>& relevance_in_rank_order, int k) {
    if (k < 1) throw std::invalid_argument("ndcg_at_k: k must be >= 1");
    const auto top = static_cast<std::size_t>(k);
    double dcg = 0.0;
    for (std::size_t i = 0; i < relevance_in_rank_order.size() && i < top; ++i)
        dcg += relevance_in_rank_order[i] / std::log2(static_cast<double>(i) + 2.0);
    std::vector<double> ideal = relevance_in_rank_order;
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal.size() && i < top; ++i)
        idcg += ideal[i] / std::log2(static_cast<double>(i) + 2.0);
    return idcg > 0.0 ? dcg / idcg : 0.0;
}

double ndcg_at_k(const RankedList& list, int k) { return ndcg_at_k(list.relevance, k); }

double mrr(const std::vector<RankedList>& lists) {
    if (lists.empty()) return 0.0;
    double total = 0.0;
    for (const auto& list : lists) {
        for (std::size_t i = 0; i < list.relevance.size(); ++i) {
            if (list.relevance[i] > 0.0) {
                total += 1.0 / static_cast<double>(i + 1);
                break;
            }
        }
    }
    return total / static_cast<double>(lists.size());
}

double paired_permutation_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("paired_permutation_test: size mismatch");
    const std::size_t n = a.size();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
    const double observed = std::accumulate(diff.begin(), diff.end(), 0.0);

    if (n <= 20) {
        const std::uint64_t total = 1ull << n;
        std::uint64_t at_least = 0;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                sum += (mask >> i) & 1 ? -diff[i] : diff[i];
            if (sum >= observed - 1e-12) ++at_least;
        }
        return static_cast<double>(at_least) / static_cast<double>(total);
    }
    std::mt19937 rng(12345);
    const int samples = 100000;
    int at_least = 0;
    for (int s = 0; s < samples; ++s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += (rng() & 1u) ? -diff[i] : diff[i];
        if (sum >= observed - 1e-12) ++at_least;
    }
    return (1.0 + at_least) / (1.0 + samples);
}

namespace {

// Ranks items by descending score with id as the deterministic tie-break.
RankedList make_ranked(const std::vector<std::string>& ids, const std::vector<double>& scores,
                       const std::vector<double>& relevance) {
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (scores[x] != scores[y]) return scores[x] > scores[y];
        return ids[x] < ids[y];
    });
    RankedList list;
    for (std::size_t i : order) {
        list.items.push_back(ids[i]);
        list.relevance.push_back(relevance[i]);
    }
    return list;
}

}  // namespace

RankingEval eval_sentence_ranking(const ScorerWeights& weights, const EventDataset& dataset,
                                  const WordSet& event_words) {
    const TfIdfIndex index = dataset_index(dataset);
    const auto grouped = dataset.comments_by_article();
    static const std::vector<const Comment*> no_comments;

    RankingEval result;
    std::vector<double> ndcgs;
    std::vector<RankedList> lists;
    for (const auto& [id, article] : dataset.articles) {
        if (!article.abstract) {
            ++result.skipped;
            continue;
        }
        TokenList reference;
        for (const auto& text : *article.abstract) {
            auto toks = tokenize(text);
            reference.insert(reference.end(), toks.begin(), toks.end());
        }
        auto it = grouped.find(id);
        const auto& comments = it == grouped.end() ? no_comments : it->second;
        const auto ctx = ArticleFeatureContext::build(dataset, article, comments, event_words);

        std::vector<std::string> ids;
        std::vector<double> scores, relevance;
        for (const Sentence* s : dataset.sentences_of(article)) {
            ids.push_back(s->id);
            scores.push_back(score(weights, sentence_features(*s, ctx, index).values,
                                   ScoreKind::sentence));
            relevance.push_back(rouge2(s->tokens, {reference}).recall > 0.0 ? 1.0 : 0.0);
        }
        const auto list = make_ranked(ids, scores, relevance);
        ndcgs.push_back(ndcg_at_k(list, 3));
        lists.push_back(list);
        ++result.evaluated;
    }
    if (!ndcgs.empty()) {
        result.macro_ndcg3 =
            std::accumulate(ndcgs.begin(), ndcgs.end(), 0.0) / static_cast<double>(ndcgs.size());
        result.mrr = mrr(lists);
    }
    return result;
}

RankingEval eval_comment_ranking(const ScorerWeights& weights, const EventDataset& dataset,
                                 const LexiconSet& lex, const WordSet& event_words) {
    const TfIdfIndex index = dataset_index(dataset);
    const auto grouped = dataset.comments_by_article();

    RankingEval result;
    std::vector<double> ndcgs;
    std::vector<RankedList> lists;
    for (const auto& [id, article] : dataset.articles) {
        auto it = grouped.find(id);
        if (it == grouped.end() || it->second.empty()) {
            ++result.skipped;
            continue;
        }
        bool labeled = true;
        for (const Comment* c : it->second) labeled = labeled && c->editor_pick.has_value();
        if (!labeled) {
            ++result.skipped;
            continue;
        }
        const auto ctx = ArticleFeatureContext::build(dataset, article, it->second, event_words);
        std::vector<std::string> ids;
        std::vector<double> scores, relevance;
        for (const Comment* c : it->second) {
            ids.push_back(c->id);
            scores.push_back(score(weights, comment_features(*c, ctx, index, lex).values,
                                   ScoreKind::comment));
            relevance.push_back(*c->editor_pick ? 1.0 : 0.0);
        }
        const auto list = make_ranked(ids, scores, relevance);
        ndcgs.push_back(ndcg_at_k(list, 3));
        lists.push_back(list);
        ++result.evaluated;
    }
    if (!ndcgs.empty()) {
        result.macro_ndcg3 =
            std::accumulate(ndcgs.begin(), ndcgs.end(), 0.0) / static_cast<double>(ndcgs.size());
        result.mrr = mrr(lists);
    }
    return result;
}

TimelineEval eval_timeline(const std::map<Date, std::string>& system_by_day,
                           const std::vector<GoldReference>& gold) {
    TimelineEval result;
    RougeCounts r2_total, su4_total;
    for (const auto& g : gold) {
        auto it = system_by_day.find(g.date);
        if (it == system_by_day.end()) continue;
        const TokenList cand = tokenize(it->second);
        const std::vector<TokenList> refs = {tokenize(g.text)};
        r2_total += rouge2_counts(cand, refs);
        su4_total += rouge_su4_counts(cand, refs);
        ++result.matched_days;
    }
    if (result.matched_days == 0) throw DataError("eval_timeline: no matched dates");
    result.rouge2 = r2_total.score();
    result.rouge_su4 = su4_total.score();
    return result;
}

std::string render_metric_report(const std::map<std::string, double>& metrics,
                                 const std::string& dataset_name) {
    std::ostringstream out;
    for (const auto& [metric, value] : metrics) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.4f", value);
        out << metric << "\t" << dataset_name << "\t" << buf << "\n";
    }
    return out.str();
}

std::string render_metric_table(const std::map<std::string, double>& metrics,
                                const std::string& dataset_name) {
    std::size_t width = 6;
    for (const auto& [metric, value] : metrics) width = std::max(width, metric.size());
    std::ostringstream out;
    out << dataset_name << "\n";
    for (const auto& [metric, value] : metrics) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%8.4f", value);
        out << "  " << metric << std::string(width - metric.size() + 2, ' ') << buf << "\n";
    }
    return out.str();
}

}  // namespace chronicle
