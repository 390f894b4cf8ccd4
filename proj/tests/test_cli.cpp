#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "testutil.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kBinary = CHRONICLE_CLI_PATH;
const std::string kToyBundle = std::string(CHRONICLE_DATA_DIR) + "/toy";

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
    static int counter = 0;
    const fs::path capture =
        fs::temp_directory_path() / ("chronicle_cli_out_" + std::to_string(::getpid()) + "_" +
                                     std::to_string(counter++));
    const std::string cmd = kBinary + " " + args + " > " + capture.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture);
    std::stringstream buffer;
    buffer << in.rdbuf();
    result.output = buffer.str();
    fs::remove(capture);
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("schema lists both feature schemas") {
    const auto r = run("schema");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("sentence schema sentence-v1") != std::string::npos);
    CHECK(r.output.find("comment schema comment-v1") != std::string::npos);
    CHECK(r.output.find("flesch_kincaid") != std::string::npos);
    CHECK(r.output.find("comment_relation_freq_sum") != std::string::npos);
}

TEST_CASE("--help succeeds and unknown flags are usage errors") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("train --help").exit_code == 0);
    CHECK(run("train --no-such-flag").exit_code == 2);
    CHECK(run("").exit_code == 2);  // subcommand required
}

TEST_CASE("train, timeline, threads, eval round trip on the toy bundle") {
    testutil::TempDir dir("cli");
    const auto weights = dir.path() / "weights.txt";
    const auto timeline = dir.path() / "timeline.jsonl";
    const auto html = dir.path() / "timeline.html";
    const auto threads = dir.path() / "threads.jsonl";

    const auto train = run("train --bundle " + kToyBundle + " --out " + weights.string());
    REQUIRE(train.exit_code == 0);
    CHECK(train.output.find("objective") != std::string::npos);
    CHECK(train.output.find("heldout_ndcg3_sentences") != std::string::npos);
    CHECK(train.output.find("dims Xs") != std::string::npos);
    CHECK(fs::exists(weights));
    CHECK(fs::exists(dir.path() / "weights.txt.report"));
    CHECK(!fs::exists(dir.path() / "weights.txt.tmp"));

    const auto tl = run("timeline --bundle " + kToyBundle + " --weights " + weights.string() +
                        " --out " + timeline.string() + " --html " + html.string());
    REQUIRE(tl.exit_code == 0);
    CHECK(fs::exists(timeline));
    CHECK(slurp(html).find("<!DOCTYPE html>") == 0);

    SUBCASE("second run is byte-identical") {
        const auto timeline2 = dir.path() / "timeline2.jsonl";
        const auto tl2 = run("timeline --bundle " + kToyBundle + " --weights " +
                             weights.string() + " --out " + timeline2.string());
        REQUIRE(tl2.exit_code == 0);
        CHECK(slurp(timeline) == slurp(timeline2));
    }
    SUBCASE("threads dump has one JSON object per thread") {
        const auto th = run("threads --bundle " + kToyBundle + " --weights " + weights.string() +
                            " --out " + threads.string());
        REQUIRE(th.exit_code == 0);
        const auto text = slurp(threads);
        CHECK(text.find("\"days\"") != std::string::npos);
        CHECK(text.find("\"id\"") != std::string::npos);
    }
    SUBCASE("eval-rouge scores the generated timeline") {
        const auto ev = run("eval-rouge --system " + timeline.string() + " --gold " + kToyBundle +
                            " --name toy");
        REQUIRE(ev.exit_code == 0);
        CHECK(ev.output.find("rouge2_recall\ttoy\t") != std::string::npos);
        CHECK(ev.output.find("matched_days\ttoy\t5.0000") != std::string::npos);
    }
    SUBCASE("eval-rank reports ranking metrics") {
        const auto ev = run("eval-rank --bundle " + kToyBundle + " --weights " + weights.string());
        REQUIRE(ev.exit_code == 0);
        CHECK(ev.output.find("sentence_ndcg3") != std::string::npos);
        CHECK(ev.output.find("comment_mrr") != std::string::npos);
    }
}

TEST_CASE("a system equal to gold scores ROUGE 1.0") {
    testutil::TempDir dir("goldvs");
    // Rebuild a system timeline whose day texts are the gold summaries.
    std::ifstream gold(kToyBundle + "/gold_timeline.jsonl");
    std::ostringstream system_jsonl;
    std::string line;
    while (std::getline(gold, line)) {
        if (line.empty()) continue;
        const auto date_pos = line.find("\"date\":\"");
        const auto date = line.substr(date_pos + 8, 10);
        const auto sum_pos = line.find("\"summary\":\"");
        const auto sum_end = line.rfind('"');
        const auto summary = line.substr(sum_pos + 11, sum_end - (sum_pos + 11));
        system_jsonl << "{\"date\":\"" << date << "\",\"sentences\":[{\"text\":\"" << summary
                     << "\"}]}\n";
    }
    dir.write_file("system.jsonl", system_jsonl.str());
    const auto ev = run("eval-rouge --system " + (dir.path() / "system.jsonl").string() +
                        " --gold " + kToyBundle + " --name toy");
    REQUIRE(ev.exit_code == 0);
    CHECK(ev.output.find("rouge2_recall\ttoy\t1.0000") != std::string::npos);
    CHECK(ev.output.find("rouge2_precision\ttoy\t1.0000") != std::string::npos);
    CHECK(ev.output.find("rouge_su4_f1\ttoy\t1.0000") != std::string::npos);
}

TEST_CASE("decoupled training is reported") {
    testutil::TempDir dir("decoupled");
    const auto weights = dir.path() / "w.txt";
    const auto r = run("train --bundle " + kToyBundle + " --out " + weights.string() +
                       " --lambda-s 0 --lambda-c 0 --lambda-sc 0");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("decoupled (lambda_sc = 0)") != std::string::npos);
}

TEST_CASE("holdout grid search reports the grid and its choice") {
    testutil::TempDir dir("grid");
    const auto weights = dir.path() / "w.txt";
    const auto r = run("train --bundle " + kToyBundle + " --out " + weights.string() +
                       " --holdout --seed 7");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("grid lambda_sc=") != std::string::npos);
    CHECK(r.output.find("chosen lambda_s=") != std::string::npos);
    const auto report = slurp(dir.path() / "w.txt.report");
    CHECK(report.find("grid search on") != std::string::npos);
}

TEST_CASE("config files configure runs and flags override them") {
    testutil::TempDir dir("config");
    const auto weights = dir.path() / "w.txt";
    REQUIRE(run("train --bundle " + kToyBundle + " --out " + weights.string()).exit_code == 0);

    dir.write_file("run.conf",
                   "[data]\nbundle = " + kToyBundle + "\nweights = " + weights.string() +
                       "\n\n[timeline]\nword_budget = 30 # tight budget\ncomment_count = 2\n" +
                       "\n[output]\npath = " + (dir.path() / "from_config.jsonl").string() + "\n");
    const auto r = run("timeline --config " + (dir.path() / "run.conf").string());
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir.path() / "from_config.jsonl"));
    CHECK(r.output.find("comments=2") != std::string::npos);

    SUBCASE("a flag overrides the config output path") {
        const auto flag_out = dir.path() / "flag.jsonl";
        const auto r2 = run("timeline --config " + (dir.path() / "run.conf").string() +
                            " --out " + flag_out.string());
        REQUIRE(r2.exit_code == 0);
        CHECK(fs::exists(flag_out));
    }
    SUBCASE("--set overrides an arbitrary key") {
        const auto r3 = run("timeline --config " + (dir.path() / "run.conf").string() +
                            " --set timeline.comment_count 1 --out " +
                            (dir.path() / "set.jsonl").string());
        REQUIRE(r3.exit_code == 0);
        CHECK(r3.output.find("comments=1") != std::string::npos);
    }
}

TEST_CASE("data errors exit 3 and leave no partial output") {
    testutil::TempDir dir("broken");
    // Corrupt bundle: valid articles, malformed comments line.
    fs::copy_file(kToyBundle + "/articles.jsonl", dir.path() / "articles.jsonl");
    dir.write_file("comments.jsonl", "{\"id\":\"c1\",\"article_id\":\"a01\"\n");
    const auto weights = dir.path() / "w.txt";
    const auto r = run("train --bundle " + dir.str() + " --out " + weights.string());
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("comments.jsonl:1") != std::string::npos);
    CHECK(!fs::exists(weights));
    CHECK(!fs::exists(dir.path() / "w.txt.tmp"));

    SUBCASE("missing bundle directory") {
        const auto r2 = run("timeline --bundle /nonexistent/bundle --weights x --out y");
        CHECK(r2.exit_code == 3);
    }
    SUBCASE("missing weights file") {
        const auto r2 = run("timeline --bundle " + kToyBundle +
                            " --weights /nonexistent/w.txt --out " +
                            (dir.path() / "t.jsonl").string());
        CHECK(r2.exit_code == 3);
        CHECK(!fs::exists(dir.path() / "t.jsonl"));
    }
    SUBCASE("embedding connectivity without an embedding file") {
        testutil::TempDir wdir("goodw");
        const auto good = wdir.path() / "w.txt";
        REQUIRE(run("train --bundle " + kToyBundle + " --out " + good.string()).exit_code == 0);
        const auto r2 = run("timeline --bundle " + kToyBundle + " --weights " + good.string() +
                            " --conn embedding --out " + (dir.path() / "e.jsonl").string());
        CHECK(r2.exit_code == 3);
    }
    SUBCASE("an unlabeled corpus is an actionable training error") {
        testutil::TempDir udir("unlabeled");
        // Articles without abstracts: strip the abstract field.
        std::ifstream arts(kToyBundle + "/articles.jsonl");
        std::ostringstream stripped;
        std::string aline;
        while (std::getline(arts, aline)) {
            const auto pos = aline.find(",\"abstract\":");
            stripped << (pos == std::string::npos ? aline : aline.substr(0, pos) + "}") << "\n";
        }
        udir.write_file("articles.jsonl", stripped.str());
        fs::copy_file(kToyBundle + "/comments.jsonl", udir.path() / "comments.jsonl");
        const auto r2 =
            run("train --bundle " + udir.str() + " --out " + (udir.path() / "w.txt").string());
        CHECK(r2.exit_code == 3);
        CHECK(r2.output.find("abstract") != std::string::npos);
    }
    SUBCASE("bad objective parameters are usage errors") {
        testutil::TempDir wdir("goodw2");
        const auto good = wdir.path() / "w.txt";
        REQUIRE(run("train --bundle " + kToyBundle + " --out " + good.string()).exit_code == 0);
        const auto r2 = run("timeline --bundle " + kToyBundle + " --weights " + good.string() +
                            " --set timeline.alpha 1.5 --out " +
                            (dir.path() / "bad.jsonl").string());
        CHECK(r2.exit_code == 2);
    }
}

TEST_CASE("eval reports render as aligned tables on request") {
    testutil::TempDir dir("table");
    const auto weights = dir.path() / "w.txt";
    REQUIRE(run("train --bundle " + kToyBundle + " --out " + weights.string()).exit_code == 0);
    const auto r = run("eval-rank --bundle " + kToyBundle + " --weights " + weights.string() +
                       " --table");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("sentence_ndcg3") != std::string::npos);
    CHECK(r.output.find("\t") == std::string::npos);  // aligned, not tab-separated
}

TEST_CASE("an event-word lexicon override changes threading") {
    testutil::TempDir dir("eventlex");
    const auto weights = dir.path() / "w.txt";
    REQUIRE(run("train --bundle " + kToyBundle + " --out " + weights.string()).exit_code == 0);
    // An event lexicon with no matching verbs: no triples, no entity
    // n-grams, so every summarized sentence becomes its own thread.
    dir.write_file("no_events.txt", "zzzunmatched\n");
    const auto threads_file = dir.path() / "threads.jsonl";
    const auto r = run("threads --bundle " + kToyBundle + " --weights " + weights.string() +
                       " --set lexicons.event_words " + (dir.path() / "no_events.txt").string() +
                       " --out " + threads_file.string());
    REQUIRE(r.exit_code == 0);
    const auto text = slurp(threads_file);
    std::size_t threads = 0, members = 0;
    for (std::size_t pos = 0; (pos = text.find("\"id\"", pos)) != std::string::npos; ++pos)
        ++threads;
    for (std::size_t pos = 0; (pos = text.find("#", pos)) != std::string::npos; ++pos)
        ++members;  // sentence ids contain '#'
    CHECK(threads == members);  // all singletons

    // The default lexicon merges at least one multi-day thread.
    const auto base_file = dir.path() / "base_threads.jsonl";
    REQUIRE(run("threads --bundle " + kToyBundle + " --weights " + weights.string() + " --out " +
                base_file.string())
                .exit_code == 0);
    const auto base = slurp(base_file);
    std::size_t base_threads = 0, base_members = 0;
    for (std::size_t pos = 0; (pos = base.find("\"id\"", pos)) != std::string::npos; ++pos)
        ++base_threads;
    for (std::size_t pos = 0; (pos = base.find("#", pos)) != std::string::npos; ++pos)
        ++base_members;
    CHECK(base_threads < base_members);
}

TEST_CASE("embedding-based connectivity runs with a vector file") {
    testutil::TempDir dir("embed");
    const auto weights = dir.path() / "w.txt";
    REQUIRE(run("train --bundle " + kToyBundle + " --out " + weights.string()).exit_code == 0);
    // Tiny embedding table covering a few toy-corpus entities.
    dir.write_file("vectors.txt",
                   "governor 1.0 0.0 0.1\nhale 0.9 0.1 0.0\nmira 0.0 1.0 0.0\n"
                   "valley 0.1 0.9 0.1\nnational 0.4 0.4 0.6\nguard 0.3 0.3 0.7\n"
                   "congress 0.8 0.2 0.3\nred 0.2 0.7 0.4\ncross 0.2 0.6 0.5\n");
    const auto r = run("timeline --bundle " + kToyBundle + " --weights " + weights.string() +
                       " --conn embedding --embeddings " + (dir.path() / "vectors.txt").string() +
                       " --out " + (dir.path() / "sem.jsonl").string());
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir.path() / "sem.jsonl"));
}
