#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chronicle/threading.hpp"
#include "testutil.hpp"

using namespace chronicle;

namespace {

Sentence make_sentence(const std::string& id, const std::string& text) {
    Sentence s;
    s.id = id;
    s.article_id = "a";
    s.text = text;
    s.tokens = tokenize(text);
    s.content_tokens = content_tokens(s.tokens, default_stopwords());
    return s;
}

}  // namespace

TEST_CASE("extract_relations") {
    SUBCASE("verb phrase between two entities") {
        const auto triples = extract_relations("Obama declared sanctions on Russian officials");
        REQUIRE(triples.size() == 1);
        CHECK(triples[0].arg1 == "obama");
        CHECK(triples[0].relation == "declared sanctions on");
        CHECK(triples[0].arg2 == "russian officials");
        CHECK(triples[0].confidence > 0.5);
    }
    SUBCASE("more thread-style sentences") {
        const auto t1 = extract_relations("President Obama warned Russia.");
        REQUIRE(t1.size() == 1);
        CHECK(t1[0].arg1 == "president obama");
        CHECK(t1[0].arg2 == "russia");

        const auto t2 = extract_relations("Obama urges Russia to move back its troops.");
        REQUIRE(t2.size() == 1);
        CHECK(t2[0].relation == "urges");
    }
    SUBCASE("no entity span means no triples") {
        CHECK(extract_relations("nothing capitalized was declared here").empty());
    }
    SUBCASE("entities without an event word between them yield nothing") {
        CHECK(extract_relations("Obama beside Putin").empty());
    }
    SUBCASE("long windows are dropped entirely") {
        CHECK(extract_relations("Obama very quietly and without any press conference at "
                                "all suddenly declared that Russia moved")
                  .empty());
    }
}

TEST_CASE("entity_ngrams") {
    SUBCASE("multi-word entity expands to unigrams and the bigram") {
        RelationTriple t{"obama", "warned", "russian officials", 1.0};
        const auto ngrams = entity_ngrams({t});
        CHECK(ngrams.at("obama") == 1);
        CHECK(ngrams.at("russian") == 1);
        CHECK(ngrams.at("officials") == 1);
        CHECK(ngrams.at("russian officials") == 1);
        CHECK(ngrams.size() == 4);
    }
    SUBCASE("no triples gives an empty multiset") { CHECK(entity_ngrams({}).empty()); }
    SUBCASE("shared entities accumulate multiplicity") {
        RelationTriple t1{"obama", "warned", "russia", 1.0};
        RelationTriple t2{"obama", "urged", "ukraine", 1.0};
        CHECK(entity_ngrams({t1, t2}).at("obama") == 2);
    }
}

TEST_CASE("cohesion") {
    SUBCASE("disjoint entity n-grams give zero") {
        EventThread thread;
        thread.id = 0;
        thread.day_sentences[{2014, 3, 17}] = {"s1"};
        thread.day_entity_ngrams[{2014, 3, 17}] = {{"obama", 1}};
        CHECK(cohesion(TermCounts{{"putin", 1}}, thread) == 0.0);
    }
    SUBCASE("identical n-grams on a single day give one") {
        EventThread thread;
        thread.id = 0;
        thread.day_sentences[{2014, 3, 17}] = {"s1"};
        thread.day_entity_ngrams[{2014, 3, 17}] = {{"obama", 1}, {"russia", 2}};
        CHECK(cohesion(TermCounts{{"obama", 1}, {"russia", 2}}, thread) == doctest::Approx(1.0));
    }
    SUBCASE("multi-day threads take the minimum over days") {
        // Sentence n-grams {x:3, y:4}; day 1 {y:1} -> 4/5, day 2 {x:1} -> 3/5.
        EventThread thread;
        thread.id = 0;
        thread.day_sentences[{2014, 3, 17}] = {"s1"};
        thread.day_entity_ngrams[{2014, 3, 17}] = {{"y", 1}};
        thread.day_sentences[{2014, 3, 18}] = {"s2"};
        thread.day_entity_ngrams[{2014, 3, 18}] = {{"x", 1}};
        const TermCounts sent{{"x", 3}, {"y", 4}};
        CHECK(cohesion(sent, thread) == doctest::Approx(0.6));
    }
    SUBCASE("a thread with no day set is invalid") {
        EventThread empty;
        CHECK_THROWS_AS(cohesion(TermCounts{{"x", 1}}, empty), std::invalid_argument);
    }
    SUBCASE("cohesion never increases as days accumulate") {
        EventThread thread;
        thread.id = 0;
        const TermCounts sent{{"obama", 2}, {"russia", 1}};
        double prev = 1.0;
        Date day{2014, 3, 17};
        const std::vector<TermCounts> day_grams = {
            {{"obama", 2}, {"russia", 1}}, {{"obama", 1}}, {{"obama", 1}, {"kiev", 3}}};
        for (const auto& grams : day_grams) {
            thread.day_sentences[day].push_back("s");
            thread.day_entity_ngrams[day] = grams;
            const double c = cohesion(sent, thread);
            CHECK(c <= prev + 1e-12);
            prev = c;
            day = day.next();
        }
    }
}

TEST_CASE("attach_summary") {
    const auto s1 = make_sentence("a#0", "Obama declared sanctions on Russia.");
    const auto s2 = make_sentence("a#1", "Putin annexed Crimea.");
    const auto s3 = make_sentence("a#2", "Markets fell sharply.");  // no triples

    SUBCASE("first day creates one thread per sentence") {
        ThreadStore store;
        attach_summary(store, {2014, 3, 17}, {&s1, &s2, &s3});
        CHECK(store.threads.size() == 3);
        for (const auto& t : store.threads) {
            CHECK(t.day_sentences.size() == 1);
            CHECK(t.day_sentences.begin()->second.size() == 1);
        }
    }
    SUBCASE("zero cohesion on a later day starts a new thread") {
        ThreadStore store;
        attach_summary(store, {2014, 3, 17}, {&s1});
        const auto s_new = make_sentence("b#0", "Volunteers searched the ocean floor.");
        attach_summary(store, {2014, 3, 18}, {&s_new});
        CHECK(store.threads.size() == 2);
    }
    SUBCASE("positive cohesion attaches to the argmax thread") {
        ThreadStore store;
        attach_summary(store, {2014, 3, 17}, {&s1, &s2});
        const auto follow = make_sentence("b#0", "Obama warned Russia again.");
        attach_summary(store, {2014, 3, 18}, {&follow});
        REQUIRE(store.threads.size() == 2);
        // The Obama/Russia thread is thread 0 and now spans two days.
        CHECK(store.threads[0].day_sentences.size() == 2);
        CHECK(store.threads[1].day_sentences.size() == 1);
        CHECK(store.threads[0].day_sentences.at({2014, 3, 18}) ==
              std::vector<std::string>{"b#0"});
    }
    SUBCASE("out-of-order days are rejected") {
        ThreadStore store;
        attach_summary(store, {2014, 3, 18}, {&s1});
        CHECK_THROWS_AS(attach_summary(store, {2014, 3, 18}, {&s2}), std::invalid_argument);
        CHECK_THROWS_AS(attach_summary(store, {2014, 3, 17}, {&s2}), std::invalid_argument);
    }
    SUBCASE("assignments partition the summarized sentences") {
        ThreadStore store;
        attach_summary(store, {2014, 3, 17}, {&s1, &s2, &s3});
        const auto follow1 = make_sentence("b#0", "Obama warned Russia again.");
        const auto follow2 = make_sentence("b#1", "Putin defended the Crimea annexation.");
        attach_summary(store, {2014, 3, 18}, {&follow1, &follow2});
        const auto membership = thread_membership(store);
        CHECK(membership.size() == 5);  // every summarized sentence exactly once
        for (const auto& t : store.threads) {
            Date prev{0, 1, 1};
            for (const auto& [day, ids] : t.day_sentences) {
                CHECK(prev < day);
                prev = day;
            }
        }
    }
    SUBCASE("identical inputs give identical stores") {
        auto run = [&] {
            ThreadStore store;
            attach_summary(store, {2014, 3, 17}, {&s1, &s2, &s3});
            const auto follow = make_sentence("b#0", "Obama warned Russia again.");
            attach_summary(store, {2014, 3, 18}, {&follow});
            return threads_to_jsonl(store);
        };
        CHECK(run() == run());
    }
}
