#include "chronicle/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "chronicle/errors.hpp"

namespace chronicle {

namespace {

using nlohmann::json;

json parse_line(const std::string& file, int lineno, const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw DataError(file + ":" + std::to_string(lineno) + ": malformed JSON record");
    return j;
}

std::string require_string(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw DataError(where + ": missing or non-string field '" + key + "'");
    return j.at(key).get<std::string>();
}

// Applies fn to every line of `path`; lineno is 1-based.
template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        fn(lineno, line);
    }
}

}  // namespace

std::map<std::string, int> EventDataset::article_counts_by_source() const {
    std::map<std::string, int> counts;
    for (const auto& [id, a] : articles) ++counts[a.source];
    return counts;
}

std::map<Date, std::vector<std::string>> EventDataset::articles_by_day() const {
    std::map<Date, std::vector<std::string>> by_day;
    for (const auto& [id, a] : articles) by_day[a.date].push_back(id);
    return by_day;
}

std::vector<const Sentence*> EventDataset::sentences_of(const Article& a) const {
    std::vector<const Sentence*> out;
    out.reserve(a.sentence_ids.size());
    for (const auto& sid : a.sentence_ids) out.push_back(&sentences.at(sid));
    return out;
}

std::vector<const Comment*> EventDataset::comments_of(const std::string& article_id) const {
    std::vector<const Comment*> out;
    for (const auto& [id, c] : comments)
        if (c.article_id == article_id) out.push_back(&c);
    return out;
}

std::map<std::string, std::vector<const Comment*>> EventDataset::comments_by_article() const {
    std::map<std::string, std::vector<const Comment*>> grouped;
    for (const auto& [id, c] : comments) grouped[c.article_id].push_back(&c);
    return grouped;
}

EventDataset load_dataset(const std::string& dir,
                          const std::unordered_set<std::string>& stopwords) {
    namespace fs = std::filesystem;
    EventDataset ds;
    ds.name = fs::path(dir).filename().string();
    if (&stopwords != &default_stopwords()) ds.stopwords = stopwords;

    const std::string articles_path = (fs::path(dir) / "articles.jsonl").string();
    for_each_line(articles_path, [&](int lineno, const std::string& line) {
        const std::string where = articles_path + ":" + std::to_string(lineno);
        json j = parse_line(articles_path, lineno, line);
        Article a;
        a.id = require_string(j, "id", where);
        a.source = require_string(j, "source", where);
        try {
            a.date = Date::parse(require_string(j, "date", where));
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
        a.headline = require_string(j, "headline", where);
        if (!j.contains("sentences") || !j.at("sentences").is_array())
            throw DataError(where + ": missing 'sentences' array");
        if (j.at("sentences").empty())
            throw DataError(where + ": article '" + a.id + "' has no sentences");
        if (j.contains("abstract")) {
            if (!j.at("abstract").is_array())
                throw DataError(where + ": 'abstract' must be an array");
            a.abstract = j.at("abstract").get<std::vector<std::string>>();
        }
        if (ds.articles.count(a.id))
            throw DataError(where + ": duplicate article id '" + a.id + "'");
        int position = 0;
        for (const auto& text : j.at("sentences")) {
            if (!text.is_string()) throw DataError(where + ": sentence must be a string");
            Sentence s;
            s.article_id = a.id;
            s.position = position;
            s.id = a.id + "#" + std::to_string(position);
            s.text = text.get<std::string>();
            s.tokens = tokenize(s.text);
            s.content_tokens = content_tokens(s.tokens, stopwords);
            a.sentence_ids.push_back(s.id);
            ds.sentences.emplace(s.id, std::move(s));
            ++position;
        }
        ds.articles.emplace(a.id, std::move(a));
    });
    if (ds.articles.empty()) throw DataError(articles_path + ": no articles");

    const std::string comments_path = (fs::path(dir) / "comments.jsonl").string();
    if (fs::exists(comments_path)) {
        for_each_line(comments_path, [&](int lineno, const std::string& line) {
            const std::string where = comments_path + ":" + std::to_string(lineno);
            json j = parse_line(comments_path, lineno, line);
            Comment c;
            c.id = require_string(j, "id", where);
            c.article_id = require_string(j, "article_id", where);
            if (!ds.articles.count(c.article_id))
                throw DataError(where + ": comment '" + c.id +
                                "' references missing article '" + c.article_id + "'");
            c.author = require_string(j, "author", where);
            c.text = require_string(j, "text", where);
            c.tokens = tokenize(c.text);
            c.rating_pos = j.value("rating_pos", 0);
            c.rating_neg = j.value("rating_neg", 0);
            if (c.rating_pos < 0 || c.rating_neg < 0)
                throw DataError(where + ": negative rating on comment '" + c.id + "'");
            if (j.contains("editor_pick")) c.editor_pick = j.at("editor_pick").get<bool>();
            if (j.contains("timestamp")) c.timestamp = j.at("timestamp").get<std::string>();
            if (ds.comments.count(c.id))
                throw DataError(where + ": duplicate comment id '" + c.id + "'");
            ds.comments.emplace(c.id, std::move(c));
        });
    }

    const std::string gold_path = (fs::path(dir) / "gold_timeline.jsonl").string();
    if (fs::exists(gold_path)) {
        for_each_line(gold_path, [&](int lineno, const std::string& line) {
            const std::string where = gold_path + ":" + std::to_string(lineno);
            json j = parse_line(gold_path, lineno, line);
            GoldReference g;
            g.date = Date::parse(require_string(j, "date", where));
            g.text = require_string(j, "summary", where);
            ds.gold_timeline.push_back(std::move(g));
        });
        std::sort(ds.gold_timeline.begin(), ds.gold_timeline.end(),
                  [](const GoldReference& a, const GoldReference& b) { return a.date < b.date; });
    }

    ds.span_begin = ds.articles.begin()->second.date;
    ds.span_end = ds.span_begin;
    for (const auto& [id, a] : ds.articles) {
        ds.span_begin = std::min(ds.span_begin, a.date);
        ds.span_end = std::max(ds.span_end, a.date);
    }
    return ds;
}

void save_dataset(const EventDataset& dataset, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    std::ofstream arts((fs::path(dir) / "articles.jsonl").string());
    for (const auto& [id, a] : dataset.articles) {
        json j{{"id", a.id},
               {"source", a.source},
               {"date", a.date.to_string()},
               {"headline", a.headline}};
        json sentences = json::array();
        for (const auto& sid : a.sentence_ids) sentences.push_back(dataset.sentences.at(sid).text);
        j["sentences"] = sentences;
        if (a.abstract) j["abstract"] = *a.abstract;
        arts << j.dump() << "\n";
    }

    std::ofstream cmts((fs::path(dir) / "comments.jsonl").string());
    for (const auto& [id, c] : dataset.comments) {
        json j{{"id", c.id},
               {"article_id", c.article_id},
               {"author", c.author},
               {"text", c.text},
               {"rating_pos", c.rating_pos},
               {"rating_neg", c.rating_neg}};
        if (c.editor_pick) j["editor_pick"] = *c.editor_pick;
        if (c.timestamp) j["timestamp"] = *c.timestamp;
        cmts << j.dump() << "\n";
    }

    if (!dataset.gold_timeline.empty()) {
        std::ofstream gold((fs::path(dir) / "gold_timeline.jsonl").string());
        for (const auto& g : dataset.gold_timeline) {
            json j{{"date", g.date.to_string()}, {"summary", g.text}};
            gold << j.dump() << "\n";
        }
    }
}

TokenList article_tokens(const EventDataset& dataset, const Article& a) {
    TokenList tokens;
    for (const auto& sid : a.sentence_ids) {
        const auto& s = dataset.sentences.at(sid);
        tokens.insert(tokens.end(), s.tokens.begin(), s.tokens.end());
    }
    return tokens;
}

TfIdfIndex dataset_index(const EventDataset& dataset) {
    std::vector<TokenList> docs;
    docs.reserve(dataset.articles.size() + dataset.comments.size());
    for (const auto& [id, a] : dataset.articles) docs.push_back(article_tokens(dataset, a));
    for (const auto& [id, c] : dataset.comments) docs.push_back(c.tokens);
    return TfIdfIndex::build(docs);
}

}  // namespace chronicle
