#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "chronicle/errors.hpp"
#include "chronicle/jointlearn.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace chronicle;

namespace {

// Random joint instance over raw matrices; Q comes from a random
// non-negative adjacency through the library's normalizer so the
// coupling form stays positive semidefinite.
TrainingSet random_training(std::mt19937& rng, int n, int m, int k, int l) {
    TrainingSet ts;
    ts.Xs = testutil::random_matrix(rng, n, k);
    ts.Ys = testutil::random_vector(rng, n, 0.0, 1.0);
    ts.Xc = testutil::random_matrix(rng, m, l);
    ts.Yc = testutil::random_vector(rng, m, 0.0, 1.0);
    const int sd = std::max(1, n / 2);
    ts.Xs_diff = testutil::random_matrix(rng, sd, k);
    ts.Ys_diff = testutil::random_vector(rng, sd);
    const int cd = std::max(1, m / 2);
    ts.Xc_diff = testutil::random_matrix(rng, cd, l);
    ts.Yc_diff = Eigen::VectorXd::Ones(cd);
    Eigen::MatrixXd R = testutil::random_matrix(rng, n, m, 0.0, 1.0);
    for (Eigen::Index i = 0; i < R.rows(); ++i)
        for (Eigen::Index j = 0; j < R.cols(); ++j)
            if (testutil::uniform01(rng) < 0.5) R(i, j) = 0.0;
    ts.Q = normalize_bipartite(R);
    return ts;
}

Hyperparams random_hyperparams(std::mt19937& rng) {
    Hyperparams hp;
    hp.lambda_s = testutil::uniform(rng, 0.05, 2.0);
    hp.lambda_c = testutil::uniform(rng, 0.05, 2.0);
    hp.lambda_sc = testutil::uniform(rng, 0.05, 2.0);
    hp.beta_s = testutil::uniform(rng, 0.5, 2.0);
    hp.beta_c = testutil::uniform(rng, 0.5, 2.0);
    return hp;
}

oracle::JointInstance to_oracle(const TrainingSet& ts, const Hyperparams& hp) {
    return {ts.Xs,       ts.Xs_diff,   ts.Xc,        ts.Xc_diff, ts.Q,
            ts.Ys,       ts.Ys_diff,   ts.Yc,        ts.Yc_diff,
            hp.lambda_s, hp.lambda_c,  hp.lambda_sc, hp.beta_s,  hp.beta_c};
}

}  // namespace

TEST_CASE("normalize_bipartite") {
    SUBCASE("single positive entry normalizes to one") {
        Eigen::MatrixXd R(1, 1);
        R << 4.0;
        CHECK(normalize_bipartite(R)(0, 0) == doctest::Approx(1.0));
    }
    SUBCASE("uniform 2x2 matrix normalizes to all 0.5") {
        Eigen::MatrixXd R = Eigen::MatrixXd::Ones(2, 2);
        const auto Q = normalize_bipartite(R);
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < 2; ++j) CHECK(Q(i, j) == doctest::Approx(0.5));
    }
    SUBCASE("all-zero rows stay zero") {
        Eigen::MatrixXd R(2, 2);
        R << 0.0, 0.0, 0.3, 0.7;
        const auto Q = normalize_bipartite(R);
        CHECK(Q(0, 0) == 0.0);
        CHECK(Q(0, 1) == 0.0);
        CHECK(Q.allFinite());
    }
    SUBCASE("negative entries are rejected") {
        Eigen::MatrixXd R(1, 2);
        R << 0.5, -0.1;
        CHECK_THROWS_AS(normalize_bipartite(R), std::invalid_argument);
    }
    SUBCASE("entries lie in [0,1] and survive scaling by 4 exactly") {
        std::mt19937 rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::MatrixXd R = testutil::random_matrix(rng, 4, 5, 0.0, 2.0);
            const auto Q = normalize_bipartite(R);
            CHECK((Q.array() >= 0.0).all());
            CHECK((Q.array() <= 1.0 + 1e-12).all());
            // Powers of two keep the arithmetic exact.
            CHECK(normalize_bipartite(4.0 * R) == Q);
        }
    }
}

TEST_CASE("gold scores") {
    EventDataset ds;
    Article a;
    a.id = "a1";
    a.source = "nyt";
    a.date = {2014, 3, 17};
    a.headline = "h";
    a.abstract = std::vector<std::string>{"the cat lay on the mat"};
    const std::vector<std::string> texts = {"the cat sat on the mat", "dogs bark loudly",
                                            "the cat lay on the mat"};
    for (std::size_t i = 0; i < texts.size(); ++i) {
        Sentence s;
        s.article_id = "a1";
        s.position = static_cast<int>(i);
        s.id = "a1#" + std::to_string(i);
        s.text = texts[i];
        s.tokens = tokenize(texts[i]);
        a.sentence_ids.push_back(s.id);
        ds.sentences.emplace(s.id, std::move(s));
    }
    ds.articles.emplace("a1", a);

    SUBCASE("rouge2 recall against the abstract") {
        const auto labels = gold_sentence_scores(ds, ds.articles.at("a1"));
        REQUIRE(labels.size() == 3);
        CHECK(labels[0] == 0.6);   // 3 of 5 reference bigrams
        CHECK(labels[1] == 0.0);
        CHECK(labels[2] == 1.0);
    }
    SUBCASE("missing abstract names the article") {
        ds.articles.at("a1").abstract.reset();
        CHECK_THROWS_WITH_AS(gold_sentence_scores(ds, ds.articles.at("a1")),
                             doctest::Contains("a1"), DataError);
    }
    SUBCASE("comment labels come from editor picks in order") {
        Comment pick, other;
        pick.id = "c1";
        pick.editor_pick = true;
        other.id = "c2";
        other.editor_pick = false;
        CHECK(gold_comment_scores({&pick, &other}) == std::vector<double>{1.0, 0.0});
        CHECK(gold_comment_scores({&other, &pick}) == std::vector<double>{0.0, 1.0});
        Comment unlabeled;
        unlabeled.id = "c3";
        CHECK_THROWS_AS(gold_comment_scores({&unlabeled}), DataError);
    }
}

TEST_CASE("solve_joint scalar ridge by hand") {
    // One sentence, x = 1, y = 2, beta_s = 1, all lambdas 0, no comments:
    // w = X'y / (X'X + beta) = 2 / 2 = 1.
    TrainingSet ts;
    ts.Xs = Eigen::MatrixXd::Constant(1, 1, 1.0);
    ts.Ys = Eigen::VectorXd::Constant(1, 2.0);
    ts.Xc = Eigen::MatrixXd::Zero(0, 1);
    ts.Yc = Eigen::VectorXd::Zero(0);
    ts.Xs_diff = Eigen::MatrixXd::Zero(0, 1);
    ts.Ys_diff = Eigen::VectorXd::Zero(0);
    ts.Xc_diff = Eigen::MatrixXd::Zero(0, 1);
    ts.Yc_diff = Eigen::VectorXd::Zero(0);
    ts.Q = Eigen::MatrixXd::Zero(1, 0);
    Hyperparams hp;
    hp.lambda_s = hp.lambda_c = hp.lambda_sc = 0.0;
    const auto w = solve_joint(ts, hp);
    CHECK(w.ws[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("solve_joint decouples when lambda_sc is zero") {
    std::mt19937 rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        auto ts = random_training(rng, 12, 9, 4, 5);
        auto hp = random_hyperparams(rng);
        hp.lambda_sc = 0.0;
        const auto joint = solve_joint(ts, hp);

        // Independent single-genre ridge solves, assembled directly.
        const Eigen::MatrixXd As = ts.Xs.transpose() * ts.Xs +
                                   hp.lambda_s * ts.Xs_diff.transpose() * ts.Xs_diff +
                                   hp.beta_s * Eigen::MatrixXd::Identity(4, 4);
        const Eigen::VectorXd bs =
            ts.Xs.transpose() * ts.Ys + hp.lambda_s * ts.Xs_diff.transpose() * ts.Ys_diff;
        const Eigen::VectorXd ws = As.ldlt().solve(bs);
        const Eigen::MatrixXd Ac = ts.Xc.transpose() * ts.Xc +
                                   hp.lambda_c * ts.Xc_diff.transpose() * ts.Xc_diff +
                                   hp.beta_c * Eigen::MatrixXd::Identity(5, 5);
        const Eigen::VectorXd bc =
            ts.Xc.transpose() * ts.Yc + hp.lambda_c * ts.Xc_diff.transpose() * ts.Yc_diff;
        const Eigen::VectorXd wc = Ac.ldlt().solve(bc);

        CHECK((joint.ws - ws).lpNorm<Eigen::Infinity>() < 1e-9);
        CHECK((joint.wc - wc).lpNorm<Eigen::Infinity>() < 1e-9);
    }
}

TEST_CASE("solve_joint agrees with the gradient-descent oracle") {
    std::mt19937 rng(2718);
    for (int trial = 0; trial < 3; ++trial) {
        const auto ts = random_training(rng, 20, 15, 5, 5);
        const auto hp = random_hyperparams(rng);
        const auto solved = solve_joint(ts, hp);
        Eigen::VectorXd w_hat(10);
        w_hat << solved.ws, solved.wc;
        const auto inst = to_oracle(ts, hp);
        const Eigen::VectorXd w_gd = oracle::gradient_descent_minimizer(inst, 10);
        CHECK((w_hat - w_gd).lpNorm<Eigen::Infinity>() < 1e-5);
        // Library objective and oracle objective agree at both points.
        CHECK(joint_objective(ts, hp, solved.ws, solved.wc) ==
              doctest::Approx(oracle::objective(inst, w_hat)).epsilon(1e-10));
    }
}

TEST_CASE("solution is a minimum: perturbations never improve the objective") {
    std::mt19937 rng(31415);
    const auto ts = random_training(rng, 15, 10, 4, 4);
    const auto hp = random_hyperparams(rng);
    const auto solved = solve_joint(ts, hp);
    const double at_solution = joint_objective(ts, hp, solved.ws, solved.wc);
    for (double eps : {1e-2, 1e-1}) {
        for (int trial = 0; trial < 100; ++trial) {
            const Eigen::VectorXd noise_s = testutil::random_vector(rng, 4);
            const Eigen::VectorXd noise_c = testutil::random_vector(rng, 4);
            const double perturbed =
                joint_objective(ts, hp, solved.ws + eps * noise_s, solved.wc + eps * noise_c);
            CHECK(at_solution <= perturbed + 1e-12);
        }
    }
}

TEST_CASE("analytic gradient vanishes at the solution and matches finite differences") {
    std::mt19937 rng(999);
    const auto ts = random_training(rng, 18, 12, 5, 4);
    const auto hp = random_hyperparams(rng);
    const auto solved = solve_joint(ts, hp);
    const Eigen::VectorXd g = joint_gradient(ts, hp, solved.ws, solved.wc);
    CHECK(g.lpNorm<Eigen::Infinity>() <= 1e-6);

    // Spot-check five coordinates of the definition's finite differences
    // at a non-stationary point too.
    Eigen::VectorXd w(9);
    w << solved.ws, solved.wc;
    const auto inst = to_oracle(ts, hp);
    const Eigen::VectorXd w_off = w + Eigen::VectorXd::Constant(9, 0.05);
    const Eigen::VectorXd g_lib =
        joint_gradient(ts, hp, w_off.head(5), w_off.tail(4));
    const Eigen::VectorXd g_fd = oracle::central_difference_gradient(inst, w_off);
    for (int c = 0; c < 5; ++c) {
        const int i = testutil::uniform_int(rng, 9);
        CHECK(g_lib[i] == doctest::Approx(g_fd[i]).epsilon(1e-5));
    }
}

TEST_CASE("raising the coupling weight weakly reduces the coupling disagreement") {
    // The quantity the solver penalizes is the identity-diagonal coupling
    // form |p|^2 + |q|^2 - 2 p'Qq; the edge-weighted sum
    // sum Q_sc (p_s - q_c)^2 tracks it on these instances.
    std::mt19937 rng(555);
    for (int trial = 0; trial < 5; ++trial) {
        const auto ts = random_training(rng, 12, 10, 4, 4);
        auto hp = random_hyperparams(rng);
        double prev_penalized = std::numeric_limits<double>::infinity();
        double prev_edge_sum = std::numeric_limits<double>::infinity();
        for (double lsc : {0.0, 0.5, 1.0, 2.0, 5.0}) {
            hp.lambda_sc = lsc;
            const auto solved = solve_joint(ts, hp);
            const Eigen::VectorXd p = ts.Xs * solved.ws;
            const Eigen::VectorXd q = ts.Xc * solved.wc;
            const double penalized =
                p.squaredNorm() + q.squaredNorm() - 2.0 * p.dot(ts.Q * q);
            double edge_sum = 0.0;
            for (Eigen::Index i = 0; i < ts.Q.rows(); ++i)
                for (Eigen::Index j = 0; j < ts.Q.cols(); ++j)
                    edge_sum += ts.Q(i, j) * std::pow(p[i] - q[j], 2);
            CHECK(penalized <= prev_penalized + 1e-9);
            CHECK(edge_sum <= prev_edge_sum + 1e-9);
            prev_penalized = penalized;
            prev_edge_sum = edge_sum;
        }
    }
}

TEST_CASE("score applies standardization and is linear") {
    ScorerWeights w;
    w.ws = Eigen::VectorXd::Zero(3);
    w.ws << 1.0, -2.0, 0.5;
    w.wc = Eigen::VectorXd::Zero(2);
    w.sentence_schema = kSentenceSchemaId;
    w.comment_schema = kCommentSchemaId;
    w.sentence_stats = {Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(3)};
    w.comment_stats = {Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2)};

    SUBCASE("zero vector scores zero") {
        CHECK(score(w, Eigen::VectorXd::Zero(3), ScoreKind::sentence) == 0.0);
    }
    SUBCASE("dot product on identity stats") {
        Eigen::VectorXd x(3);
        x << 2.0, 1.0, 4.0;
        CHECK(score(w, x, ScoreKind::sentence) == doctest::Approx(2.0 - 2.0 + 2.0));
        CHECK(score(w, 2.0 * x, ScoreKind::sentence) ==
              doctest::Approx(2.0 * score(w, x, ScoreKind::sentence)));
    }
    SUBCASE("standardization shifts and scales") {
        w.sentence_stats.mean << 1.0, 1.0, 1.0;
        w.sentence_stats.stddev << 2.0, 1.0, 1.0;
        Eigen::VectorXd x(3);
        x << 3.0, 1.0, 2.0;  // standardized: (1, 0, 1)
        CHECK(score(w, x, ScoreKind::sentence) == doctest::Approx(1.0 + 0.0 + 0.5));
    }
    SUBCASE("dimension mismatch is an error") {
        CHECK_THROWS_AS(score(w, Eigen::VectorXd::Zero(5), ScoreKind::sentence),
                        std::invalid_argument);
    }
    SUBCASE("schema mismatch is an error") {
        FeatureVector fv{Eigen::VectorXd::Zero(3), "other-schema"};
        CHECK_THROWS_AS(score(w, fv, ScoreKind::sentence), std::invalid_argument);
    }
}

TEST_CASE("weights file round-trips exactly") {
    std::mt19937 rng(8080);
    ScorerWeights w;
    w.ws = testutil::random_vector(rng, 11);
    w.wc = testutil::random_vector(rng, 32);
    w.ws[0] = 1.0 / 3.0;  // not representable in decimal
    w.sentence_schema = kSentenceSchemaId;
    w.comment_schema = kCommentSchemaId;
    w.sentence_stats = {testutil::random_vector(rng, 11), testutil::random_vector(rng, 11, 0.1, 2.0)};
    w.comment_stats = {testutil::random_vector(rng, 32), testutil::random_vector(rng, 32, 0.1, 2.0)};

    testutil::TempDir dir("weights");
    const std::string path = (dir.path() / "w.txt").string();
    save_weights(w, path);
    const auto loaded = load_weights(path);
    CHECK(loaded.sentence_schema == w.sentence_schema);
    CHECK(loaded.comment_schema == w.comment_schema);
    CHECK(loaded.ws == w.ws);  // bitwise equality via 17 significant digits
    CHECK(loaded.wc == w.wc);
    CHECK(loaded.sentence_stats.mean == w.sentence_stats.mean);
    CHECK(loaded.sentence_stats.stddev == w.sentence_stats.stddev);
    CHECK(loaded.comment_stats.mean == w.comment_stats.mean);
    CHECK(loaded.comment_stats.stddev == w.comment_stats.stddev);

    SUBCASE("a second save of the loaded weights is byte-identical") {
        const std::string path2 = (dir.path() / "w2.txt").string();
        save_weights(loaded, path2);
        std::ifstream f1(path), f2(path2);
        std::stringstream s1, s2;
        s1 << f1.rdbuf();
        s2 << f2.rdbuf();
        CHECK(s1.str() == s2.str());
    }
}

TEST_CASE("assemble_training shapes") {
    // Three-sentence article with two picks and three non-picks.
    EventDataset ds;
    Article a;
    a.id = "a1";
    a.source = "nyt";
    a.date = {2014, 3, 17};
    a.headline = "Obama froze assets";
    a.abstract = std::vector<std::string>{"Obama froze the assets of officials."};
    const std::vector<std::string> texts = {"Obama froze the assets of seven officials.",
                                            "Markets reacted with caution.",
                                            "Officials promised a response."};
    for (std::size_t i = 0; i < texts.size(); ++i) {
        Sentence s;
        s.article_id = "a1";
        s.position = static_cast<int>(i);
        s.id = "a1#" + std::to_string(i);
        s.text = texts[i];
        s.tokens = tokenize(texts[i]);
        s.content_tokens = content_tokens(s.tokens, default_stopwords());
        a.sentence_ids.push_back(s.id);
        ds.sentences.emplace(s.id, std::move(s));
    }
    ds.articles.emplace("a1", a);
    ds.span_begin = ds.span_end = a.date;
    for (int i = 0; i < 5; ++i) {
        Comment c;
        c.id = "c" + std::to_string(i);
        c.article_id = "a1";
        c.author = "u";
        c.text = i < 2 ? "The asset freeze seems right." : "Markets panic as always.";
        c.tokens = tokenize(c.text);
        c.editor_pick = i < 2;
        ds.comments.emplace(c.id, std::move(c));
    }

    const auto ts = assemble_training(ds, LexiconSet::builtin());
    CHECK(ts.Xs.rows() == 3);
    CHECK(ts.Xs_diff.rows() == 2);        // pairs (0,1), (0,2)
    CHECK(ts.Xc.rows() == 5);
    CHECK(ts.Xc_diff.rows() == 6);        // 2 picks x 3 non-picks
    CHECK(ts.Q.rows() == 3);
    CHECK(ts.Q.cols() == 5);
    CHECK((ts.Yc_diff.array() == 1.0).all());
    CHECK((ts.Q.array() >= 0.0).all());
    CHECK((ts.Q.array() <= 1.0 + 1e-12).all());

    SUBCASE("difference labels are first minus later gold scores") {
        const auto gold = gold_sentence_scores(ds, ds.articles.at("a1"));
        CHECK(ts.Ys_diff[0] == doctest::Approx(gold[0] - gold[1]));
        CHECK(ts.Ys_diff[1] == doctest::Approx(gold[0] - gold[2]));
    }
    SUBCASE("a solvable end-to-end instance") {
        const auto w = solve_joint(ts, Hyperparams{});
        CHECK(w.ws.allFinite());
        CHECK(w.wc.allFinite());
        CHECK(w.ws.size() == 11);
        CHECK(w.wc.size() == 32);
    }
    SUBCASE("degenerate one-sentence one-comment corpus") {
        EventDataset tiny;
        Article one;
        one.id = "b1";
        one.source = "s";
        one.date = {2014, 3, 17};
        one.headline = "h";
        one.abstract = std::vector<std::string>{"something"};
        Sentence s;
        s.article_id = "b1";
        s.position = 0;
        s.id = "b1#0";
        s.text = "Only one sentence.";
        s.tokens = tokenize(s.text);
        s.content_tokens = content_tokens(s.tokens, default_stopwords());
        one.sentence_ids.push_back(s.id);
        tiny.sentences.emplace(s.id, std::move(s));
        tiny.articles.emplace("b1", one);
        Comment c;
        c.id = "c1";
        c.article_id = "b1";
        c.text = "A single comment.";
        c.tokens = tokenize(c.text);
        c.editor_pick = false;
        tiny.comments.emplace("c1", std::move(c));
        const auto degenerate = assemble_training(tiny, LexiconSet::builtin());
        CHECK(degenerate.Xs_diff.rows() == 0);
        CHECK(degenerate.Xc_diff.rows() == 0);  // no pick/non-pick pair exists
        CHECK(degenerate.Q.rows() == 1);
        CHECK(degenerate.Q.cols() == 1);
    }
}

TEST_CASE("pairwise rows are capped at 50 per article with a fixed sample") {
    EventDataset ds;
    Article a;
    a.id = "a1";
    a.source = "nyt";
    a.date = {2014, 3, 17};
    a.headline = "h";
    a.abstract = std::vector<std::string>{"one sentence only"};
    Sentence s;
    s.article_id = "a1";
    s.position = 0;
    s.id = "a1#0";
    s.text = "One sentence only.";
    s.tokens = tokenize(s.text);
    s.content_tokens = content_tokens(s.tokens, default_stopwords());
    a.sentence_ids.push_back(s.id);
    ds.sentences.emplace(s.id, std::move(s));
    ds.articles.emplace("a1", a);
    for (int i = 0; i < 18; ++i) {  // 8 picks x 10 non-picks = 80 pairs
        Comment c;
        c.id = "c" + std::to_string(100 + i);
        c.article_id = "a1";
        c.text = "comment " + std::to_string(i);
        c.tokens = tokenize(c.text);
        c.editor_pick = i < 8;
        ds.comments.emplace(c.id, std::move(c));
    }
    const auto ts = assemble_training(ds, LexiconSet::builtin());
    CHECK(ts.Xc_diff.rows() == 50);
    const auto again = assemble_training(ds, LexiconSet::builtin());
    CHECK(ts.Xc_diff == again.Xc_diff);
}
