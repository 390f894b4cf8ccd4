#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "chronicle/date.hpp"
#include "chronicle/text.hpp"
#include "chronicle/tfidf.hpp"

namespace chronicle {

struct Sentence {
    std::string id;          // "<article_id>#<position>"
    std::string article_id;
    int position = 0;        // 0-based index within the article
    std::string text;
    TokenList tokens;          // lowercased
    TokenList content_tokens;  // tokens minus stopwords
};

struct Article {
    std::string id;
    std::string source;
    Date date;
    std::string headline;
    std::vector<std::string> sentence_ids;              // ordered
    std::optional<std::vector<std::string>> abstract;   // training only
};

struct Comment {
    std::string id;
    std::string article_id;
    std::string author;
    std::string text;
    TokenList tokens;
    int rating_pos = 0;
    int rating_neg = 0;
    std::optional<bool> editor_pick;
    std::optional<std::string> timestamp;  // RFC3339, kept verbatim
};

struct GoldReference {
    Date date;
    std::string text;
};

// A dated news event corpus. Immutable after load; comments belong to
// the calendar day of their parent article.
struct EventDataset {
    std::string name;
    Date span_begin;
    Date span_end;
    std::map<std::string, Article> articles;
    std::map<std::string, Sentence> sentences;
    std::map<std::string, Comment> comments;
    std::vector<std::string> keywords;
    std::vector<GoldReference> gold_timeline;
    // The stopword list the sentences were tokenized with; empty means
    // the built-in default list.
    std::unordered_set<std::string> stopwords;

    const std::unordered_set<std::string>& stopword_set() const {
        return stopwords.empty() ? default_stopwords() : stopwords;
    }

    std::map<std::string, int> article_counts_by_source() const;
    std::map<Date, std::vector<std::string>> articles_by_day() const;
    std::vector<const Sentence*> sentences_of(const Article& a) const;
    std::vector<const Comment*> comments_of(const std::string& article_id) const;
    std::map<std::string, std::vector<const Comment*>> comments_by_article() const;
};

// Reads a bundle directory holding articles.jsonl, comments.jsonl and an
// optional gold_timeline.jsonl. Malformed records raise DataError naming
// the file and line; dangling references raise DataError naming the id.
EventDataset load_dataset(const std::string& dir,
                          const std::unordered_set<std::string>& stopwords = default_stopwords());

// Writes the same bundle layout back; load(save(d)) == d field for field.
void save_dataset(const EventDataset& dataset, const std::string& dir);

// One TF-IDF document per article (all sentence tokens) and one per
// comment; articles first, each group in id order.
TfIdfIndex dataset_index(const EventDataset& dataset);

TokenList article_tokens(const EventDataset& dataset, const Article& a);

}  // namespace chronicle
