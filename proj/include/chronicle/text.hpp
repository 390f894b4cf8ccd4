#pragma once

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

namespace chronicle {

using TokenList = std::vector<std::string>;
using TermCounts = std::map<std::string, int>;

// Lowercases and splits on any run of non-alphanumeric bytes; empty
// tokens are dropped. "U.S. sanctions" -> {"u","s","sanctions"}.
TokenList tokenize(const std::string& text);

// Same split rule with the original casing kept. Token counts match
// tokenize() on identical input.
TokenList tokenize_preserve_case(const std::string& text);

// Splits text on runs of '.', '!' or '?'; returns the segments that
// still contain at least one token.
std::vector<std::string> split_sentences(const std::string& text);

bool is_capitalized(const std::string& token);

TermCounts term_counts(const TokenList& tokens);

// The shipped English stopword list; "content words" are tokens not in it.
const std::unordered_set<std::string>& default_stopwords();

// One lowercase word per line, '#' starts a comment. Used for stopword
// and lexicon overrides.
std::unordered_set<std::string> load_word_file(const std::string& path);

TokenList content_tokens(const TokenList& tokens,
                         const std::unordered_set<std::string>& stopwords);

}  // namespace chronicle
