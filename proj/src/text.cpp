#include "chronicle/text.hpp"

#include <cctype>
#include <fstream>

#include "chronicle/errors.hpp"

namespace chronicle {

namespace {

bool alnum(unsigned char c) { return std::isalnum(c) != 0; }

TokenList split_alnum(const std::string& text, bool lower) {
    TokenList out;
    std::string cur;
    for (unsigned char c : text) {
        if (alnum(c)) {
            cur.push_back(lower ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

}  // namespace

TokenList tokenize(const std::string& text) { return split_alnum(text, true); }

TokenList tokenize_preserve_case(const std::string& text) { return split_alnum(text, false); }

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '.' || c == '!' || c == '?') {
            if (!tokenize(cur).empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!tokenize(cur).empty()) out.push_back(cur);
    return out;
}

bool is_capitalized(const std::string& token) {
    return !token.empty() && std::isupper(static_cast<unsigned char>(token[0])) != 0;
}

TermCounts term_counts(const TokenList& tokens) {
    TermCounts counts;
    for (const auto& t : tokens) ++counts[t];
    return counts;
}

const std::unordered_set<std::string>& default_stopwords() {
    static const std::unordered_set<std::string> words = {
        "a",       "about",   "above",  "after",   "again",   "against", "all",
        "am",      "an",      "and",    "any",     "are",     "as",      "at",
        "be",      "because", "been",   "before",  "being",   "below",   "between",
        "both",    "but",     "by",     "can",     "cannot",  "could",   "did",
        "do",      "does",    "doing",  "down",    "during",  "each",    "few",
        "for",     "from",    "further","had",     "has",     "have",    "having",
        "he",      "her",     "here",   "hers",    "herself", "him",     "himself",
        "his",     "how",     "i",      "if",      "in",      "into",    "is",
        "it",      "its",     "itself", "just",    "me",      "more",    "most",
        "my",      "myself",  "no",     "nor",     "not",     "now",     "of",
        "off",     "on",      "once",   "only",    "or",      "other",   "ought",
        "our",     "ours",    "ourselves", "out",  "over",    "own",     "same",
        "she",     "should",  "so",     "some",    "such",    "than",    "that",
        "the",     "their",   "theirs", "them",    "themselves", "then", "there",
        "these",   "they",    "this",   "those",   "through", "to",      "too",
        "under",   "until",   "up",     "very",    "was",     "we",      "were",
        "what",    "when",    "where",  "which",   "while",   "who",     "whom",
        "why",     "will",    "with",   "would",   "you",     "your",    "yours",
        "yourself","yourselves"};
    return words;
}

std::unordered_set<std::string> load_word_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open word file: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (const auto& tok : tokenize(line)) words.insert(tok);
    }
    return words;
}

TokenList content_tokens(const TokenList& tokens,
                         const std::unordered_set<std::string>& stopwords) {
    TokenList out;
    for (const auto& t : tokens)
        if (!stopwords.count(t)) out.push_back(t);
    return out;
}

}  // namespace chronicle
