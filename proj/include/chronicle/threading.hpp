#pragma once

#include <map>
#include <string>
#include <vector>

#include "chronicle/corpus.hpp"
#include "chronicle/date.hpp"
#include "chronicle/lexicons.hpp"
#include "chronicle/text.hpp"

namespace chronicle {

struct RelationTriple {
    std::string arg1;      // lowercased entity span
    std::string relation;  // lowercased verb phrase between the entities
    std::string arg2;
    double confidence = 0.0;  // 1.0 adjacent-clause tier, 0.6 windowed tier
};

// A chain of summary sentences across days held together by shared
// entity n-grams. Day keys are strictly increasing over the run.
struct EventThread {
    int id = 0;
    std::map<Date, std::vector<std::string>> day_sentences;
    std::map<Date, TermCounts> day_entity_ngrams;
};

struct ThreadStore {
    std::vector<EventThread> threads;
    int next_id = 0;
};

// Pattern extractor standing in for a dependency-based OIE system:
// capitalized spans (optionally absorbing trailing lowercase tokens)
// become arguments; the token window between two adjacent spans becomes
// the relation when it holds a verb-form token and an event word.
// Triples with confidence <= 0.5 are dropped.
std::vector<RelationTriple> extract_relations(const std::string& text,
                                              const WordSet& event_words = builtin_event_words());

// Unigrams, bigrams and trigrams over each triple's two entity spans.
TermCounts entity_ngrams(const std::vector<RelationTriple>& triples);

// min over the thread's non-empty day sets of the TF similarity between
// the day's pooled entity n-grams and the sentence's entity n-grams.
double cohesion(const TermCounts& sentence_ngrams, const EventThread& thread);
double cohesion(const Sentence& s, const EventThread& thread,
                const WordSet& event_words = builtin_event_words());

// Attaches each summary sentence to its argmax-cohesion thread when that
// cohesion is > 0, else starts a singleton thread. Candidates are the
// threads that existed before this day; ties go to the lowest thread id.
// Days must arrive in strictly increasing order.
void attach_summary(ThreadStore& store, Date day,
                    const std::vector<const Sentence*>& summary,
                    const WordSet& event_words = builtin_event_words());

// Thread id for each known sentence id.
std::map<std::string, int> thread_membership(const ThreadStore& store);

std::string threads_to_jsonl(const ThreadStore& store);

}  // namespace chronicle
