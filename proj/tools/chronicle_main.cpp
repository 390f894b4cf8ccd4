// chronicle: socially-informed news timelines.
//
// Subcommands: train, timeline, threads, eval-rouge, eval-rank, schema.
// Exit codes: 0 ok, 2 usage, 3 data, 4 numeric.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "chronicle/corpus.hpp"
#include "chronicle/embeddings.hpp"
#include "chronicle/errors.hpp"
#include "chronicle/eval.hpp"
#include "chronicle/features.hpp"
#include "chronicle/jointlearn.hpp"
#include "chronicle/threading.hpp"
#include "chronicle/timeline.hpp"
#include "config.hpp"

namespace {

using namespace chronicle;
using cli::atomic_write;
using cli::ConfigFile;
using cli::RunConfig;

LexiconSet lexicons_from(const RunConfig& rc) {
    LexiconSet lex = LexiconSet::builtin();
    auto override_set = [&](const char* name, WordSet& target) {
        auto it = rc.lexicon_paths.find(name);
        if (it != rc.lexicon_paths.end()) target = load_word_file(it->second);
    };
    override_set("positive", lex.positive);
    override_set("negative", lex.negative);
    override_set("neutral", lex.neutral);
    override_set("connectives", lex.connectives);
    override_set("hedges", lex.hedges);
    return lex;
}

WordSet event_words_from(const RunConfig& rc) {
    auto it = rc.lexicon_paths.find("event_words");
    return it == rc.lexicon_paths.end() ? builtin_event_words() : load_word_file(it->second);
}

EventDataset load_bundle(const RunConfig& rc) {
    if (rc.bundle_dir.empty()) throw DataError("no data.bundle configured (use --bundle)");
    if (!rc.stopwords_path.empty())
        return load_dataset(rc.bundle_dir, load_word_file(rc.stopwords_path));
    return load_dataset(rc.bundle_dir);
}

// Copies the chosen articles with their sentences and comments.
EventDataset subset_dataset(const EventDataset& ds, const std::set<std::string>& article_ids) {
    EventDataset out;
    out.name = ds.name;
    out.keywords = ds.keywords;
    for (const auto& id : article_ids) {
        const Article& a = ds.articles.at(id);
        out.articles.emplace(id, a);
        for (const auto& sid : a.sentence_ids) out.sentences.emplace(sid, ds.sentences.at(sid));
    }
    for (const auto& [cid, c] : ds.comments)
        if (article_ids.count(c.article_id)) out.comments.emplace(cid, c);
    out.span_begin = out.articles.begin()->second.date;
    out.span_end = out.span_begin;
    for (const auto& [id, a] : out.articles) {
        out.span_begin = std::min(out.span_begin, a.date);
        out.span_end = std::max(out.span_end, a.date);
    }
    return out;
}

// 20% of articles (at least one) reserved for tuning, fixed by seed.
std::pair<std::set<std::string>, std::set<std::string>> holdout_split(const EventDataset& ds,
                                                                      unsigned seed) {
    std::vector<std::string> ids;
    for (const auto& [id, a] : ds.articles) ids.push_back(id);
    std::mt19937 rng(seed + 1664525u);
    for (std::size_t i = ids.size(); i > 1; --i)
        std::swap(ids[i - 1], ids[rng() % i]);
    const std::size_t held = std::max<std::size_t>(1, ids.size() / 5);
    std::set<std::string> holdout(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(held));
    std::set<std::string> train(ids.begin() + static_cast<std::ptrdiff_t>(held), ids.end());
    if (train.empty()) train = holdout;  // degenerate single-article corpus
    return {train, holdout};
}

struct HeldoutScore {
    double sentence_ndcg3 = 0.0;
    double comment_ndcg3 = 0.0;
    double mean() const { return 0.5 * (sentence_ndcg3 + comment_ndcg3); }
};

HeldoutScore heldout_score(const TrainingSet& train_ts, const EventDataset& holdout_ds,
                           const Hyperparams& hp, const LexiconSet& lex,
                           const WordSet& event_words) {
    const auto weights = solve_joint(train_ts, hp);
    HeldoutScore score;
    score.sentence_ndcg3 = eval_sentence_ranking(weights, holdout_ds, event_words).macro_ndcg3;
    score.comment_ndcg3 =
        eval_comment_ranking(weights, holdout_ds, lex, event_words).macro_ndcg3;
    return score;
}

int cmd_train(const RunConfig& rc) {
    const auto dataset = load_bundle(rc);
    if (rc.output_path.empty()) throw DataError("no output.path configured (use --out)");
    const LexiconSet lex = lexicons_from(rc);
    const WordSet event_words = event_words_from(rc);

    const auto [train_ids, holdout_ids] = holdout_split(dataset, rc.seed);
    const auto train_ds = subset_dataset(dataset, train_ids);
    const auto holdout_ds = subset_dataset(dataset, holdout_ids);
    const auto train_ts = assemble_training(train_ds, lex, event_words);

    std::ostringstream report;
    report << "chronicle training report\n";
    report << "bundle " << rc.bundle_dir << "\n";
    report << "articles " << dataset.articles.size() << " sentences "
           << dataset.sentences.size() << " comments " << dataset.comments.size() << "\n";
    for (const auto& [source, count] : dataset.article_counts_by_source())
        report << "source " << source << " " << count << "\n";

    Hyperparams chosen = rc.hyper;
    if (rc.holdout_grid) {
        report << "grid search on " << holdout_ids.size() << " held-out articles\n";
        double best = -1.0;
        for (double lsc : {0.0, 0.1, 1.0, 10.0}) {
            for (double lpair : {0.1, 1.0}) {
                for (double beta : {0.1, 1.0}) {
                    Hyperparams hp;
                    hp.lambda_s = hp.lambda_c = lpair;
                    hp.lambda_sc = lsc;
                    hp.beta_s = hp.beta_c = beta;
                    const auto s = heldout_score(train_ts, holdout_ds, hp, lex, event_words);
                    char line[160];
                    std::snprintf(line, sizeof(line),
                                  "grid lambda_sc=%-4g lambda=%-3g beta=%-3g "
                                  "ndcg3_s=%.4f ndcg3_c=%.4f mean=%.4f\n",
                                  lsc, lpair, beta, s.sentence_ndcg3, s.comment_ndcg3, s.mean());
                    report << line;
                    if (s.mean() > best) {
                        best = s.mean();
                        chosen = hp;
                    }
                }
            }
        }
        report << "chosen lambda_s=" << chosen.lambda_s << " lambda_c=" << chosen.lambda_c
               << " lambda_sc=" << chosen.lambda_sc << " beta_s=" << chosen.beta_s
               << " beta_c=" << chosen.beta_c << "\n";
    }

    const auto held = heldout_score(train_ts, holdout_ds, chosen, lex, event_words);
    const auto ts = assemble_training(dataset, lex, event_words);
    const auto weights = solve_joint(ts, chosen);

    report << "hyperparams lambda_s=" << chosen.lambda_s << " lambda_c=" << chosen.lambda_c
           << " lambda_sc=" << chosen.lambda_sc << " beta_s=" << chosen.beta_s
           << " beta_c=" << chosen.beta_c << "\n";
    report << "coupling " << (chosen.lambda_sc == 0.0 ? "decoupled (lambda_sc = 0)" : "joint")
           << "\n";
    report << "dims Xs " << ts.Xs.rows() << "x" << ts.Xs.cols() << " Xs_diff "
           << ts.Xs_diff.rows() << "x" << ts.Xs_diff.cols() << " Xc " << ts.Xc.rows() << "x"
           << ts.Xc.cols() << " Xc_diff " << ts.Xc_diff.rows() << "x" << ts.Xc_diff.cols()
           << " Q " << ts.Q.rows() << "x" << ts.Q.cols() << "\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "objective %.9g\n",
                  joint_objective(ts, chosen, weights.ws, weights.wc));
    report << buf;
    std::snprintf(buf, sizeof(buf), "heldout_ndcg3_sentences %.4f\nheldout_ndcg3_comments %.4f\n",
                  held.sentence_ndcg3, held.comment_ndcg3);
    report << buf;

    save_weights(weights, rc.output_path);
    atomic_write(rc.output_path + ".report", report.str());
    std::cout << report.str();
    std::cout << "weights written to " << rc.output_path << "\n";
    return 0;
}

// Builds the similarity provider once; the table must live as long as
// the returned closure.
PhraseSimilarity make_provider(const RunConfig& rc, std::unique_ptr<EmbeddingTable>& table) {
    if (rc.objective.conn_kind != ConnKind::semantic_embedding) return {};
    if (rc.embeddings_path.empty())
        throw DataError("timeline.conn = embedding needs timeline.embeddings (use --embeddings)");
    table = std::make_unique<EmbeddingTable>(EmbeddingTable::load(rc.embeddings_path));
    return table->phrase_similarity();
}

TimelineResult run_timeline(const RunConfig& rc, const EventDataset& dataset) {
    if (rc.weights_path.empty()) throw DataError("no data.weights configured (use --weights)");
    const auto weights = load_weights(rc.weights_path);
    std::unique_ptr<EmbeddingTable> table;
    const auto provider = make_provider(rc, table);
    return generate_timeline(dataset, weights, rc.objective, provider, event_words_from(rc));
}

int cmd_timeline(const RunConfig& rc) {
    const auto dataset = load_bundle(rc);
    if (rc.output_path.empty()) throw DataError("no output.path configured (use --out)");
    const auto result = run_timeline(rc, dataset);
    atomic_write(rc.output_path, timeline_to_jsonl(result, dataset));
    if (!rc.html_path.empty()) atomic_write(rc.html_path, timeline_to_html(result, dataset));
    for (const auto& day : result.skipped_days)
        std::cout << "notice: no articles on " << day.to_string() << ", day skipped\n";
    for (const auto& day : result.days) {
        std::cout << day.day.to_string() << " sentences=" << day.article_summary.size()
                  << " comments=" << day.comment_summary.size() << " Z=[";
        for (std::size_t i = 0; i < day.objective_trace.size(); ++i)
            std::cout << (i ? " " : "") << day.objective_trace[i];
        std::cout << "]\n";
    }
    std::cout << "timeline written to " << rc.output_path << "\n";
    return 0;
}

int cmd_threads(const RunConfig& rc) {
    const auto dataset = load_bundle(rc);
    if (rc.output_path.empty()) throw DataError("no output.path configured (use --out)");
    const auto result = run_timeline(rc, dataset);
    atomic_write(rc.output_path, threads_to_jsonl(result.threads));
    std::cout << result.threads.threads.size() << " threads written to " << rc.output_path
              << "\n";
    return 0;
}

int cmd_eval_rouge(const std::string& system_path, const std::string& gold_path,
                   const std::string& name, bool table) {
    std::ifstream in(system_path);
    if (!in) throw DataError("cannot open system timeline: " + system_path);
    std::map<Date, std::string> system_by_day;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw DataError(system_path + ":" + std::to_string(lineno) + ": malformed JSON");
        std::string text;
        for (const auto& s : j.at("sentences")) {
            if (!text.empty()) text += " ";
            text += s.at("text").get<std::string>();
        }
        system_by_day[Date::parse(j.at("date").get<std::string>())] = text;
    }

    std::vector<GoldReference> gold;
    const std::string gold_file =
        std::filesystem::is_directory(gold_path)
            ? (std::filesystem::path(gold_path) / "gold_timeline.jsonl").string()
            : gold_path;
    std::ifstream gin(gold_file);
    if (!gin) throw DataError("cannot open gold timeline: " + gold_file);
    lineno = 0;
    while (std::getline(gin, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw DataError(gold_file + ":" + std::to_string(lineno) + ": malformed JSON");
        gold.push_back({Date::parse(j.at("date").get<std::string>()),
                        j.at("summary").get<std::string>()});
    }

    const auto eval = eval_timeline(system_by_day, gold);
    std::map<std::string, double> metrics = {
        {"rouge2_precision", eval.rouge2.precision}, {"rouge2_recall", eval.rouge2.recall},
        {"rouge2_f1", eval.rouge2.f1},               {"rouge_su4_precision", eval.rouge_su4.precision},
        {"rouge_su4_recall", eval.rouge_su4.recall}, {"rouge_su4_f1", eval.rouge_su4.f1},
        {"matched_days", static_cast<double>(eval.matched_days)}};
    std::cout << (table ? render_metric_table(metrics, name) : render_metric_report(metrics, name));
    return 0;
}

int cmd_eval_rank(const RunConfig& rc, bool table) {
    const auto dataset = load_bundle(rc);
    if (rc.weights_path.empty()) throw DataError("no data.weights configured (use --weights)");
    const auto weights = load_weights(rc.weights_path);
    const WordSet event_words = event_words_from(rc);
    const auto s = eval_sentence_ranking(weights, dataset, event_words);
    const auto c = eval_comment_ranking(weights, dataset, lexicons_from(rc), event_words);
    std::map<std::string, double> metrics = {
        {"sentence_ndcg3", s.macro_ndcg3},
        {"sentence_mrr", s.mrr},
        {"sentence_articles", static_cast<double>(s.evaluated)},
        {"comment_ndcg3", c.macro_ndcg3},
        {"comment_mrr", c.mrr},
        {"comment_articles", static_cast<double>(c.evaluated)}};
    std::cout << (table ? render_metric_table(metrics, dataset.name)
                        : render_metric_report(metrics, dataset.name));
    if (s.skipped > 0)
        std::cout << "notice: " << s.skipped << " articles without abstracts skipped\n";
    if (c.skipped > 0)
        std::cout << "notice: " << c.skipped << " articles without labeled comments skipped\n";
    return 0;
}

int cmd_schema() {
    std::cout << "sentence schema " << kSentenceSchemaId << "\n";
    for (const auto& name : sentence_feature_names()) std::cout << "  " << name << "\n";
    std::cout << "comment schema " << kCommentSchemaId << "\n";
    for (const auto& name : comment_feature_names()) std::cout << "  " << name << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chronicle: socially-informed news timelines"};
    app.require_subcommand(1);

    std::string config_path, bundle, weights, out, html, embeddings, system_path, gold_path;
    std::string conn;
    int threads = 0;
    unsigned seed = 0;
    bool seed_set = false, holdout = false;
    std::map<std::string, std::string> overrides;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Config file (key = value with [sections])");
        cmd->add_option("--bundle", bundle, "Dataset bundle directory");
        cmd->add_option("--threads", threads, "Cap on internal parallelism")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--set", overrides,
                        "Override a config key, e.g. --set timeline.alpha 0.2");
    };

    auto* train = app.add_subcommand("train", "Learn sentence and comment importance scorers");
    add_common(train);
    train->add_option("--out", out, "Weights output path");
    train->add_flag("--holdout", holdout, "Grid-search hyperparameters on a 20% article split");
    train->add_option("--seed", seed, "Seed for the holdout split")
        ->each([&](const std::string&) { seed_set = true; });
    double lambda_s = -1, lambda_c = -1, lambda_sc = -1, beta_s = -1, beta_c = -1;
    train->add_option("--lambda-s", lambda_s, "Position-constraint weight");
    train->add_option("--lambda-c", lambda_c, "Preference-constraint weight");
    train->add_option("--lambda-sc", lambda_sc, "Bipartite coupling weight");
    train->add_option("--beta-s", beta_s, "Sentence ridge penalty");
    train->add_option("--beta-c", beta_c, "Comment ridge penalty");

    auto* timeline = app.add_subcommand("timeline", "Generate a socially-informed timeline");
    add_common(timeline);
    timeline->add_option("--weights", weights, "Trained weights file");
    timeline->add_option("--out", out, "Timeline JSONL output path");
    timeline->add_option("--html", html, "Optional HTML rendering path");
    timeline->add_option("--conn", conn, "Connectivity: lexical or embedding");
    timeline->add_option("--embeddings", embeddings, "Word-vector text file");

    auto* threads_cmd = app.add_subcommand("threads", "Dump event threads as JSONL");
    add_common(threads_cmd);
    threads_cmd->add_option("--weights", weights, "Trained weights file");
    threads_cmd->add_option("--out", out, "Threads JSONL output path");
    threads_cmd->add_option("--conn", conn, "Connectivity: lexical or embedding");
    threads_cmd->add_option("--embeddings", embeddings, "Word-vector text file");

    auto* eval_rouge = app.add_subcommand("eval-rouge", "Score a timeline against gold summaries");
    eval_rouge->add_option("--system", system_path, "System timeline JSONL")->required();
    eval_rouge->add_option("--gold", gold_path, "Gold bundle dir or gold_timeline.jsonl")
        ->required();
    std::string eval_name = "dataset";
    eval_rouge->add_option("--name", eval_name, "Dataset name for the report");
    bool table = false;
    eval_rouge->add_flag("--table", table, "Render an aligned table instead of key-value lines");

    auto* eval_rank = app.add_subcommand("eval-rank", "Rank sentences/comments with a scorer");
    add_common(eval_rank);
    eval_rank->add_option("--weights", weights, "Trained weights file");
    eval_rank->add_flag("--table", table, "Render an aligned table instead of key-value lines");

    app.add_subcommand("schema", "Print the ordered feature schemas");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            app.exit(e);
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        ConfigFile cfg;
        if (!config_path.empty()) cfg = ConfigFile::parse_file(config_path);
        if (!bundle.empty()) cfg.set("data.bundle", bundle);
        if (!weights.empty()) cfg.set("data.weights", weights);
        if (!out.empty()) cfg.set("output.path", out);
        if (!html.empty()) cfg.set("output.html", html);
        if (!conn.empty()) cfg.set("timeline.conn", conn);
        if (!embeddings.empty()) cfg.set("timeline.embeddings", embeddings);
        if (threads > 0) cfg.set("run.threads", std::to_string(threads));
        if (holdout) cfg.set("train.holdout", "true");
        if (seed_set) cfg.set("train.seed", std::to_string(seed));
        if (lambda_s >= 0) cfg.set("train.lambda_s", std::to_string(lambda_s));
        if (lambda_c >= 0) cfg.set("train.lambda_c", std::to_string(lambda_c));
        if (lambda_sc >= 0) cfg.set("train.lambda_sc", std::to_string(lambda_sc));
        if (beta_s >= 0) cfg.set("train.beta_s", std::to_string(beta_s));
        if (beta_c >= 0) cfg.set("train.beta_c", std::to_string(beta_c));
        for (const auto& [key, value] : overrides) cfg.set(key, value);
        const RunConfig rc = RunConfig::from(cfg);

        if (train->parsed()) return cmd_train(rc);
        if (timeline->parsed()) return cmd_timeline(rc);
        if (threads_cmd->parsed()) return cmd_threads(rc);
        if (eval_rouge->parsed()) return cmd_eval_rouge(system_path, gold_path, eval_name, table);
        if (eval_rank->parsed()) return cmd_eval_rank(rc, table);
        return cmd_schema();
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
