#pragma once

#include <string>
#include <unordered_set>

namespace chronicle {

using WordSet = std::unordered_set<std::string>;

// Word lists behind the comment features. The built-in defaults are
// small seed lists; any of them can be replaced by a user file in the
// one-word-per-line format (see load_word_file).
struct LexiconSet {
    WordSet positive;
    WordSet negative;
    WordSet neutral;
    WordSet connectives;
    WordSet hedges;

    static LexiconSet builtin();
};

// Event-related verbs and nouns used by the relation extractor; includes
// common inflections so the suffix heuristic has a fallback.
const WordSet& builtin_event_words();

}  // namespace chronicle
