#include "chronicle/timeline.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "chronicle/features.hpp"

namespace chronicle {

void ObjectiveParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("objective params: alpha must be in (0, 1]");
    if (!(redundancy_threshold > 0.0 && redundancy_threshold <= 1.0))
        throw std::invalid_argument("objective params: redundancy_threshold must be in (0, 1]");
    if (theta_cov < 0.0 || theta_cont < 0.0 || delta < 0.0 || epsilon <= 0.0)
        throw std::invalid_argument("objective params: weights must be non-negative, epsilon > 0");
    if (word_budget <= 0 || comment_count <= 0)
        throw std::invalid_argument("objective params: budget and comment count must be positive");
}

std::vector<const Sentence*> filter_redundant(const std::vector<const Sentence*>& candidates,
                                              const HistoryState& history, double threshold) {
    std::vector<const Sentence*> kept;
    kept.reserve(candidates.size());
    for (const Sentence* s : candidates) {
        std::set<std::string> unique(s->content_tokens.begin(), s->content_tokens.end());
        if (unique.empty()) {
            kept.push_back(s);
            continue;
        }
        int covered = 0;
        for (const auto& w : unique)
            if (history.covered_content_words.count(w)) ++covered;
        const double coverage = static_cast<double>(covered) / static_cast<double>(unique.size());
        if (coverage <= threshold) kept.push_back(s);
    }
    return kept;
}

double article_quality(const std::vector<int>& selected, const DayInstance& day,
                       const ObjectiveParams& params) {
    double importance = 0.0;
    for (int i : selected) importance += day.sentence_importance[i];

    double coverage = 0.0;
    const auto num_candidates = static_cast<int>(day.sentence_ids.size());
    for (int other = 0; other < num_candidates; ++other) {
        double selected_sim = 0.0;
        for (int i : selected) selected_sim += day.sentence_similarity(i, other);
        const double saturation = params.alpha * day.sentence_similarity.col(other).sum();
        coverage += std::min(selected_sim, saturation);
    }

    double continuity = 0.0;
    for (Eigen::Index t = 0; t < day.thread_cohesion.rows(); ++t) {
        double best = 0.0;
        for (int i : selected) best = std::max(best, day.thread_cohesion(t, i));
        continuity += best;
    }
    return importance + params.theta_cov * coverage + params.theta_cont * continuity;
}

double comment_quality(const std::vector<int>& selected, const DayInstance& day) {
    double total = 0.0;
    for (int j : selected) total += day.comment_importance[j];
    return total;
}

namespace {

Matching matching_for(const std::vector<int>& article_sel, const std::vector<int>& comment_sel,
                      const DayInstance& day) {
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(article_sel.size()),
                        static_cast<Eigen::Index>(comment_sel.size()));
    for (std::size_t i = 0; i < article_sel.size(); ++i)
        for (std::size_t j = 0; j < comment_sel.size(); ++j)
            sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                day.connectivity(article_sel[i], comment_sel[j]);
    return best_matching(sub);
}

int total_words(const std::vector<int>& selected, const DayInstance& day) {
    int words = 0;
    for (int i : selected) words += day.sentence_word_counts[i];
    return words;
}

std::vector<int> sorted_insert(std::vector<int> selected, int value) {
    selected.insert(std::upper_bound(selected.begin(), selected.end(), value), value);
    return selected;
}

}  // namespace

double day_objective(const std::vector<int>& article_sel, const std::vector<int>& comment_sel,
                     const DayInstance& day, const ObjectiveParams& params) {
    return article_quality(article_sel, day, params) + comment_quality(comment_sel, day) +
           params.delta * matching_for(article_sel, comment_sel, day).total_weight;
}

double conn_lexical(const Sentence& s, const Comment& c, const TfIdfIndex& index) {
    return tfidf_cosine(s.tokens, c.tokens, index);
}

double conn_semantic(const std::vector<RelationTriple>& sentence_triples,
                     const std::vector<RelationTriple>& comment_triples,
                     const PhraseSimilarity& similarity) {
    double total = 0.0;
    for (const auto& st : sentence_triples) {
        double best = 0.0;
        for (const auto& ct : comment_triples) {
            if (ct.relation != st.relation) continue;
            best = std::max(best, similarity(st.arg1, ct.arg1) * similarity(st.arg2, ct.arg2));
        }
        total += best;
    }
    return total;
}

double conn_semantic(const Sentence& s, const Comment& c, const PhraseSimilarity& similarity,
                     const WordSet& event_words) {
    return conn_semantic(extract_relations(s.text, event_words),
                         extract_relations(c.text, event_words), similarity);
}

std::vector<int> greedy_init(const DayInstance& day, const ObjectiveParams& params) {
    std::vector<int> selected;
    std::vector<bool> in_set(day.sentence_ids.size(), false);
    double current = article_quality(selected, day, params);
    int words = 0;
    while (true) {
        int best_candidate = -1;
        double best_gain = 0.0;
        std::vector<int> best_set;
        for (int i = 0; i < static_cast<int>(day.sentence_ids.size()); ++i) {
            if (in_set[i] || words + day.sentence_word_counts[i] > params.word_budget) continue;
            auto trial = sorted_insert(selected, i);
            const double gain = article_quality(trial, day, params) - current;
            if (gain > best_gain + 1e-12) {  // ties keep the lowest id
                best_gain = gain;
                best_candidate = i;
                best_set = std::move(trial);
            }
        }
        if (best_candidate < 0) break;
        selected = std::move(best_set);
        in_set[best_candidate] = true;
        words += day.sentence_word_counts[best_candidate];
        current += best_gain;
    }
    return selected;
}

std::vector<int> select_comments(const std::vector<int>& article_sel, const DayInstance& day,
                                 const ObjectiveParams& params) {
    const auto num_comments = static_cast<Eigen::Index>(day.comment_ids.size());
    Eigen::MatrixXd delta_conn(num_comments, static_cast<Eigen::Index>(article_sel.size()));
    for (Eigen::Index j = 0; j < num_comments; ++j)
        for (std::size_t i = 0; i < article_sel.size(); ++i)
            delta_conn(j, static_cast<Eigen::Index>(i)) =
                params.delta * day.connectivity(article_sel[i], j);
    return select_by_flow(day.comment_importance, delta_conn, params.comment_count);
}

std::vector<int> hill_climb_articles(const std::vector<int>& article_sel,
                                     const std::vector<int>& comment_sel, const DayInstance& day,
                                     const ObjectiveParams& params) {
    auto objective = [&](const std::vector<int>& sel) {
        return article_quality(sel, day, params) +
               params.delta * matching_for(sel, comment_sel, day).total_weight;
    };
    std::vector<int> selected = article_sel;
    double current = objective(selected);
    const int num_candidates = static_cast<int>(day.sentence_ids.size());
    while (true) {
        std::vector<bool> in_set(num_candidates, false);
        for (int i : selected) in_set[i] = true;
        const int words = total_words(selected, day);

        bool improved = false;
        std::vector<int> best_set;
        double best_value = current;
        auto consider = [&](std::vector<int>&& trial) {
            const double value = objective(trial);
            if (value > best_value + 1e-12) {
                best_value = value;
                best_set = std::move(trial);
                improved = true;
            }
        };
        // Adds, removes, then one-in-one-out swaps, in id order.
        for (int i = 0; i < num_candidates; ++i)
            if (!in_set[i] && words + day.sentence_word_counts[i] <= params.word_budget)
                consider(sorted_insert(selected, i));
        for (std::size_t out = 0; out < selected.size(); ++out) {
            std::vector<int> removed = selected;
            removed.erase(removed.begin() + static_cast<std::ptrdiff_t>(out));
            const int remaining = words - day.sentence_word_counts[selected[out]];
            consider(std::vector<int>(removed));
            for (int in = 0; in < num_candidates; ++in)
                if (!in_set[in] && remaining + day.sentence_word_counts[in] <= params.word_budget)
                    consider(sorted_insert(removed, in));
        }
        if (!improved) break;
        selected = std::move(best_set);
        current = best_value;
    }
    return selected;
}

DayResult alternate_optimize(const DayInstance& day, const ObjectiveParams& params) {
    DayResult result;
    result.article_sel = greedy_init(day, params);
    result.comment_sel = select_comments(result.article_sel, day, params);
    result.trace.push_back(day_objective(result.article_sel, result.comment_sel, day, params));

    double delta_z = std::numeric_limits<double>::infinity();
    int iterations = 0;
    while (delta_z > params.epsilon && iterations < 1000) {
        result.article_sel = hill_climb_articles(result.article_sel, result.comment_sel, day, params);
        result.comment_sel = select_comments(result.article_sel, day, params);
        const double z = day_objective(result.article_sel, result.comment_sel, day, params);
        delta_z = z - result.trace.back();
        result.trace.push_back(z);
        ++iterations;
    }
    return result;
}

namespace {

int whitespace_tokens(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    int n = 0;
    while (in >> tok) ++n;
    return n;
}

}  // namespace

TimelineResult generate_timeline(const EventDataset& dataset, const ScorerWeights& weights,
                                 const ObjectiveParams& params,
                                 const PhraseSimilarity& similarity,
                                 const WordSet& event_words) {
    params.validate();
    if (dataset.articles.empty()) throw std::invalid_argument("generate_timeline: empty dataset");
    if (params.conn_kind == ConnKind::semantic_embedding && !similarity)
        throw std::invalid_argument("generate_timeline: semantic connectivity needs a provider");

    const TfIdfIndex index = dataset_index(dataset);
    const auto grouped = dataset.comments_by_article();
    const LexiconSet lexicons = LexiconSet::builtin();
    static const std::vector<const Comment*> no_comments;

    TimelineResult result;
    HistoryState history;

    for (const auto& [date, article_ids] : dataset.articles_by_day()) {
        // Candidate pools for the day, in id order.
        std::vector<const Sentence*> day_sentences;
        std::vector<const Comment*> day_comments;
        std::vector<FeatureVector> sentence_fvs, comment_fvs;
        for (const auto& aid : article_ids) {
            const Article& article = dataset.articles.at(aid);
            auto it = grouped.find(aid);
            const auto& comments = it == grouped.end() ? no_comments : it->second;
            const auto ctx = ArticleFeatureContext::build(dataset, article, comments, event_words);
            for (const Sentence* s : dataset.sentences_of(article)) {
                day_sentences.push_back(s);
                sentence_fvs.push_back(sentence_features(*s, ctx, index));
            }
            for (const Comment* c : comments) {
                day_comments.push_back(c);
                comment_fvs.push_back(comment_features(*c, ctx, index, lexicons));
            }
        }
        std::vector<std::size_t> sentence_order(day_sentences.size());
        for (std::size_t i = 0; i < sentence_order.size(); ++i) sentence_order[i] = i;
        std::sort(sentence_order.begin(), sentence_order.end(), [&](std::size_t a, std::size_t b) {
            return day_sentences[a]->id < day_sentences[b]->id;
        });

        std::vector<const Sentence*> candidates;
        std::vector<const FeatureVector*> candidate_fvs;
        for (std::size_t i : sentence_order) {
            candidates.push_back(day_sentences[i]);
            candidate_fvs.push_back(&sentence_fvs[i]);
        }
        // Redundancy filter against the historical summaries.
        {
            const auto kept = filter_redundant(candidates, history, params.redundancy_threshold);
            std::vector<const FeatureVector*> kept_fvs;
            std::vector<const Sentence*> kept_sentences;
            std::size_t pos = 0;
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                if (pos < kept.size() && kept[pos] == candidates[i]) {
                    kept_sentences.push_back(candidates[i]);
                    kept_fvs.push_back(candidate_fvs[i]);
                    ++pos;
                }
            }
            candidates = std::move(kept_sentences);
            candidate_fvs = std::move(kept_fvs);
        }

        DayInstance day;
        const auto vs = static_cast<Eigen::Index>(candidates.size());
        day.sentence_importance.resize(vs);
        day.sentence_similarity.resize(vs, vs);
        for (Eigen::Index i = 0; i < vs; ++i) {
            day.sentence_ids.push_back(candidates[i]->id);
            day.sentence_word_counts.push_back(whitespace_tokens(candidates[i]->text));
            day.sentence_importance[i] = score(weights, *candidate_fvs[i], ScoreKind::sentence);
        }
        for (Eigen::Index i = 0; i < vs; ++i) {
            day.sentence_similarity(i, i) = tfidf_cosine(candidates[i]->tokens,
                                                         candidates[i]->tokens, index);
            for (Eigen::Index j = i + 1; j < vs; ++j) {
                const double sim = tfidf_cosine(candidates[i]->tokens, candidates[j]->tokens, index);
                day.sentence_similarity(i, j) = sim;
                day.sentence_similarity(j, i) = sim;
            }
        }

        day.thread_cohesion.resize(static_cast<Eigen::Index>(history.threads.threads.size()), vs);
        for (Eigen::Index i = 0; i < vs; ++i) {
            const auto ngrams = entity_ngrams(extract_relations(candidates[i]->text, event_words));
            for (std::size_t t = 0; t < history.threads.threads.size(); ++t)
                day.thread_cohesion(static_cast<Eigen::Index>(t), i) =
                    cohesion(ngrams, history.threads.threads[t]);
        }

        std::sort(day_comments.begin(), day_comments.end(),
                  [](const Comment* a, const Comment* b) { return a->id < b->id; });
        const auto vc = static_cast<Eigen::Index>(day_comments.size());
        day.comment_importance.resize(vc);
        day.connectivity.resize(vs, vc);

        // Recompute per-comment feature lookup (ids are unique).
        std::map<std::string, std::size_t> comment_fv_index;
        {
            std::size_t i = 0;
            for (const auto& aid : article_ids) {
                auto it = grouped.find(aid);
                const auto& comments = it == grouped.end() ? no_comments : it->second;
                for (const Comment* c : comments) comment_fv_index[c->id] = i++;
            }
        }
        for (Eigen::Index j = 0; j < vc; ++j) {
            const Comment* c = day_comments[static_cast<std::size_t>(j)];
            day.comment_ids.push_back(c->id);
            day.comment_importance[j] =
                score(weights, comment_fvs[comment_fv_index.at(c->id)], ScoreKind::comment);
            for (Eigen::Index i = 0; i < vs; ++i) {
                day.connectivity(i, j) =
                    params.conn_kind == ConnKind::lexical
                        ? conn_lexical(*candidates[i], *c, index)
                        : conn_semantic(*candidates[i], *c, similarity, event_words);
            }
        }

        const DayResult opt = alternate_optimize(day, params);

        DaySummary summary;
        summary.day = date;
        for (int i : opt.article_sel) summary.article_summary.push_back(day.sentence_ids[i]);
        for (int j : opt.comment_sel) summary.comment_summary.push_back(day.comment_ids[j]);
        summary.objective_trace = opt.trace;
        const Matching match = matching_for(opt.article_sel, opt.comment_sel, day);
        summary.matching_weight = match.total_weight;
        for (const auto& [i, j] : match.edges)
            summary.matching.push_back({day.sentence_ids[opt.article_sel[i]],
                                        day.comment_ids[opt.comment_sel[j]],
                                        day.connectivity(opt.article_sel[i], opt.comment_sel[j])});

        // Thread attachment and coverage history update.
        std::vector<const Sentence*> chosen;
        for (int i : opt.article_sel) chosen.push_back(candidates[i]);
        attach_summary(history.threads, date, chosen, event_words);
        for (const Sentence* s : chosen)
            for (const auto& w : s->content_tokens) history.covered_content_words.insert(w);

        result.days.push_back(std::move(summary));
    }

    // Days inside the span with no articles are reported, not summarized.
    const auto by_day = dataset.articles_by_day();
    for (Date d = dataset.span_begin; d <= dataset.span_end; d = d.next())
        if (!by_day.count(d)) result.skipped_days.push_back(d);

    result.threads = std::move(history.threads);
    return result;
}

std::string timeline_to_jsonl(const TimelineResult& result, const EventDataset& dataset) {
    const auto membership = thread_membership(result.threads);
    std::ostringstream out;
    for (const auto& day : result.days) {
        nlohmann::json sentences = nlohmann::json::array();
        for (const auto& sid : day.article_summary) {
            const Sentence& s = dataset.sentences.at(sid);
            const Article& a = dataset.articles.at(s.article_id);
            sentences.push_back({{"id", sid},
                                 {"article_id", s.article_id},
                                 {"source", a.source},
                                 {"thread", membership.at(sid)},
                                 {"text", s.text}});
        }
        nlohmann::json comments = nlohmann::json::array();
        for (const auto& cid : day.comment_summary) {
            const Comment& c = dataset.comments.at(cid);
            comments.push_back({{"id", cid}, {"author", c.author}, {"text", c.text}});
        }
        nlohmann::json matching = nlohmann::json::array();
        for (const auto& edge : day.matching)
            matching.push_back({{"sentence_id", edge.sentence_id},
                                {"comment_id", edge.comment_id},
                                {"weight", edge.weight}});
        nlohmann::json j{{"date", day.day.to_string()},
                         {"sentences", sentences},
                         {"comments", comments},
                         {"matching", matching},
                         {"matching_weight", day.matching_weight},
                         {"objective_trace", day.objective_trace}};
        out << j.dump() << "\n";
    }
    return out.str();
}

namespace {

std::string html_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string timeline_to_html(const TimelineResult& result, const EventDataset& dataset) {
    const auto membership = thread_membership(result.threads);
    std::ostringstream out;
    out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">\n"
        << "<title>" << html_escape(dataset.name) << " timeline</title>\n"
        << "<style>\n"
        << "body{font-family:Georgia,serif;max-width:70em;margin:1em auto;}\n"
        << "table{border-collapse:collapse;width:100%;}\n"
        << "td,th{border:1px solid #999;padding:0.5em;vertical-align:top;width:50%;}\n"
        << "h2{margin:0.2em 0;} .thread{color:#246;font-weight:bold;}\n"
        << ".author{color:#555;font-style:italic;}\n"
        << "</style></head><body>\n"
        << "<h1>" << html_escape(dataset.name) << "</h1>\n"
        << "<table>\n<tr><th>Article Summary</th><th>Comment Summary</th></tr>\n";
    for (const auto& day : result.days) {
        out << "<tr><td><h2>" << day.day.to_string() << "</h2>\n";
        for (const auto& sid : day.article_summary) {
            const Sentence& s = dataset.sentences.at(sid);
            out << "<p><span class=\"thread\">[" << membership.at(sid) << "]</span> "
                << html_escape(s.text) << "</p>\n";
        }
        out << "</td><td>\n";
        for (const auto& cid : day.comment_summary) {
            const Comment& c = dataset.comments.at(cid);
            out << "<p>" << html_escape(c.text) << " <span class=\"author\">&mdash; "
                << html_escape(c.author) << "</span></p>\n";
        }
        out << "</td></tr>\n";
    }
    out << "</table>\n</body></html>\n";
    return out.str();
}

}  // namespace chronicle
