#include "chronicle/threading.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chronicle {

namespace {

bool verb_form(const std::string& lower, const WordSet& event_words) {
    if (event_words.count(lower)) return true;
    auto ends_with = [&](const char* suf) {
        std::size_t n = std::strlen(suf);
        return lower.size() > n && lower.compare(lower.size() - n, n, suf) == 0;
    };
    return ends_with("ed") || ends_with("ing") || ends_with("es");
}

std::string to_lower(const std::string& s) {
    std::string out = s;
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
};

// Entity spans: a maximal run of capitalized tokens whose first token is
// not a stopword, extended over at most two trailing lowercase tokens
// that are neither stopwords, verb forms, nor event words ("Russian
// officials" keeps its head noun).
std::vector<Span> entity_spans(const std::vector<std::string>& tokens,
                               const std::vector<std::string>& lower,
                               const WordSet& event_words) {
    std::vector<Span> spans;
    const auto& stop = default_stopwords();
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (!is_capitalized(tokens[i]) || stop.count(lower[i])) {
            ++i;
            continue;
        }
        Span span{i, i + 1};
        while (span.end < tokens.size() && is_capitalized(tokens[span.end])) ++span.end;
        std::size_t absorbed = 0;
        while (span.end < tokens.size() && absorbed < 2 && !is_capitalized(tokens[span.end]) &&
               !stop.count(lower[span.end]) && !verb_form(lower[span.end], event_words) &&
               !event_words.count(lower[span.end])) {
            ++span.end;
            ++absorbed;
        }
        spans.push_back(span);
        i = span.end;
    }
    return spans;
}

std::string join(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (!out.empty()) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

}  // namespace

std::vector<RelationTriple> extract_relations(const std::string& text,
                                              const WordSet& event_words) {
    const auto tokens = tokenize_preserve_case(text);
    std::vector<std::string> lower(tokens.size());
    std::transform(tokens.begin(), tokens.end(), lower.begin(), to_lower);

    const auto spans = entity_spans(tokens, lower, event_words);
    std::vector<RelationTriple> triples;
    for (std::size_t p = 0; p + 1 < spans.size(); ++p) {
        const Span& a = spans[p];
        const Span& b = spans[p + 1];
        const std::size_t window = b.begin - a.end;
        if (window == 0 || window > 8) continue;
        bool has_verb = false, has_event = false;
        for (std::size_t i = a.end; i < b.begin; ++i) {
            has_verb = has_verb || verb_form(lower[i], event_words);
            has_event = has_event || event_words.count(lower[i]) > 0;
        }
        if (!has_verb || !has_event) continue;
        RelationTriple t;
        t.arg1 = join(lower, a.begin, a.end);
        t.relation = join(lower, a.end, b.begin);
        t.arg2 = join(lower, b.begin, b.end);
        t.confidence = window <= 4 ? 1.0 : 0.6;
        if (t.confidence > 0.5) triples.push_back(std::move(t));
    }
    return triples;
}

TermCounts entity_ngrams(const std::vector<RelationTriple>& triples) {
    TermCounts ngrams;
    for (const auto& t : triples) {
        for (const std::string* entity : {&t.arg1, &t.arg2}) {
            const auto tokens = tokenize(*entity);
            for (std::size_t n = 1; n <= 3; ++n) {
                if (tokens.size() < n) break;
                for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
                    std::string gram = tokens[i];
                    for (std::size_t j = 1; j < n; ++j) gram += " " + tokens[i + j];
                    ++ngrams[gram];
                }
            }
        }
    }
    return ngrams;
}

double cohesion(const TermCounts& sentence_ngrams, const EventThread& thread) {
    if (thread.day_sentences.empty())
        throw std::invalid_argument("cohesion: thread has no non-empty day set");
    double min_sim = 1.0;
    for (const auto& [day, ngrams] : thread.day_entity_ngrams)
        min_sim = std::min(min_sim, tf_similarity(ngrams, sentence_ngrams));
    return min_sim;
}

double cohesion(const Sentence& s, const EventThread& thread, const WordSet& event_words) {
    return cohesion(entity_ngrams(extract_relations(s.text, event_words)), thread);
}

void attach_summary(ThreadStore& store, Date day,
                    const std::vector<const Sentence*>& summary,
                    const WordSet& event_words) {
    for (const auto& thread : store.threads) {
        if (!thread.day_sentences.empty() && thread.day_sentences.rbegin()->first >= day)
            throw std::invalid_argument("attach_summary: day " + day.to_string() +
                                        " is not after existing thread days");
    }
    // Attachment targets are the threads that existed before this day,
    // scored against their pre-day content, so within-day order cannot
    // change any cohesion value.
    const std::size_t prior_threads = store.threads.size();
    struct Pending {
        const Sentence* sentence;
        TermCounts ngrams;
        int target;  // thread index, or -1 for a new thread
    };
    std::vector<Pending> pending;
    pending.reserve(summary.size());
    for (const Sentence* s : summary) {
        Pending p{s, entity_ngrams(extract_relations(s->text, event_words)), -1};
        double best_cohesion = 0.0;
        for (std::size_t t = 0; t < prior_threads; ++t) {
            const double c = cohesion(p.ngrams, store.threads[t]);
            if (c > best_cohesion) {  // ties keep the lowest thread id
                best_cohesion = c;
                p.target = static_cast<int>(t);
            }
        }
        if (best_cohesion <= 0.0) p.target = -1;
        pending.push_back(std::move(p));
    }
    for (auto& p : pending) {
        if (p.target >= 0) {
            auto& thread = store.threads[p.target];
            thread.day_sentences[day].push_back(p.sentence->id);
            for (const auto& [gram, count] : p.ngrams) thread.day_entity_ngrams[day][gram] += count;
        } else {
            EventThread thread;
            thread.id = store.next_id++;
            thread.day_sentences[day].push_back(p.sentence->id);
            thread.day_entity_ngrams[day] = std::move(p.ngrams);
            store.threads.push_back(std::move(thread));
        }
    }
}

std::map<std::string, int> thread_membership(const ThreadStore& store) {
    std::map<std::string, int> membership;
    for (const auto& thread : store.threads)
        for (const auto& [day, ids] : thread.day_sentences)
            for (const auto& id : ids) membership[id] = thread.id;
    return membership;
}

std::string threads_to_jsonl(const ThreadStore& store) {
    std::ostringstream out;
    for (const auto& thread : store.threads) {
        nlohmann::json days = nlohmann::json::object();
        for (const auto& [day, ids] : thread.day_sentences) days[day.to_string()] = ids;
        nlohmann::json j{{"id", thread.id}, {"days", days}};
        out << j.dump() << "\n";
    }
    return out.str();
}

}  // namespace chronicle
