#include "chronicle/jointlearn.hpp"

#include <Eigen/Cholesky>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "chronicle/errors.hpp"
#include "chronicle/eval.hpp"

namespace chronicle {

Eigen::VectorXd Standardization::apply(const Eigen::VectorXd& raw) const {
    if (mean.size() == 0) return raw;  // identity stats (untrained instances)
    if (raw.size() != mean.size())
        throw std::invalid_argument("standardization: dimension mismatch");
    return (raw - mean).cwiseQuotient(stddev);
}

std::vector<double> gold_sentence_scores(const EventDataset& dataset, const Article& article) {
    if (!article.abstract)
        throw DataError("article '" + article.id + "' has no abstract");
    TokenList reference;
    for (const auto& text : *article.abstract) {
        auto toks = tokenize(text);
        reference.insert(reference.end(), toks.begin(), toks.end());
    }
    std::vector<double> labels;
    labels.reserve(article.sentence_ids.size());
    for (const Sentence* s : dataset.sentences_of(article))
        labels.push_back(rouge2(s->tokens, {reference}).recall);
    return labels;
}

std::vector<double> gold_comment_scores(const std::vector<const Comment*>& comments) {
    std::vector<double> labels;
    labels.reserve(comments.size());
    for (const Comment* c : comments) {
        if (!c->editor_pick)
            throw DataError("comment '" + c->id + "' has no editor_pick label");
        labels.push_back(*c->editor_pick ? 1.0 : 0.0);
    }
    return labels;
}

Eigen::MatrixXd normalize_bipartite(const Eigen::MatrixXd& R) {
    if ((R.array() < 0.0).any())
        throw std::invalid_argument("normalize_bipartite: negative entry");
    const Eigen::VectorXd row_deg = R.rowwise().sum();
    const Eigen::VectorXd col_deg = R.colwise().sum();
    // Zero-degree convention: 0^(-1/2) * 0 = 0.
    auto inv_sqrt = [](const Eigen::VectorXd& d) {
        return d.array().unaryExpr([](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; });
    };
    return inv_sqrt(row_deg).matrix().asDiagonal() * R * inv_sqrt(col_deg).matrix().asDiagonal();
}

namespace {

Standardization fit_standardization(const Eigen::MatrixXd& X) {
    Standardization st;
    st.mean = Eigen::VectorXd::Zero(X.cols());
    if (X.rows() > 0) st.mean = X.colwise().mean().transpose();
    st.stddev = Eigen::VectorXd::Ones(X.cols());
    if (X.rows() > 1) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            const double var =
                (X.col(j).array() - st.mean[j]).square().sum() / static_cast<double>(X.rows());
            if (var > 1e-24) st.stddev[j] = std::sqrt(var);
        }
    }
    return st;
}

void standardize_rows(Eigen::MatrixXd& X, const Standardization& st) {
    X.rowwise() -= st.mean.transpose();
    X.array().rowwise() /= st.stddev.transpose().array();
}

}  // namespace

TrainingSet assemble_training(const EventDataset& dataset, const LexiconSet& lexicons,
                              const WordSet& event_words) {
    const TfIdfIndex index = dataset_index(dataset);
    const auto grouped = dataset.comments_by_article();
    static const std::vector<const Comment*> no_comments;

    struct SentenceRow {
        Eigen::VectorXd x;
        double y;
        int article;   // dense article ordinal
        int position;
    };
    struct CommentRow {
        Eigen::VectorXd x;
        double y;
        int article;
    };
    std::vector<SentenceRow> sentence_rows;
    std::vector<CommentRow> comment_rows;
    std::vector<std::vector<double>> R_entries;  // per sentence row: sims to same-article comments

    int article_ordinal = 0;
    std::vector<std::pair<int, int>> article_sentence_range;  // [begin, end) into sentence_rows
    std::vector<std::pair<int, int>> article_comment_range;
    for (const auto& [id, article] : dataset.articles) {
        auto it = grouped.find(id);
        const auto& comments = it == grouped.end() ? no_comments : it->second;
        const auto ctx = ArticleFeatureContext::build(dataset, article, comments, event_words);
        const auto gold_s = gold_sentence_scores(dataset, article);

        const int s_begin = static_cast<int>(sentence_rows.size());
        int pos = 0;
        for (const Sentence* s : dataset.sentences_of(article)) {
            sentence_rows.push_back(
                {sentence_features(*s, ctx, index).values, gold_s[pos], article_ordinal, pos});
            ++pos;
        }
        const int c_begin = static_cast<int>(comment_rows.size());
        const auto gold_c = gold_comment_scores(comments);
        for (std::size_t k = 0; k < comments.size(); ++k) {
            comment_rows.push_back({comment_features(*comments[k], ctx, index, lexicons).values,
                                    gold_c[k], article_ordinal});
        }
        article_sentence_range.emplace_back(s_begin, static_cast<int>(sentence_rows.size()));
        article_comment_range.emplace_back(c_begin, static_cast<int>(comment_rows.size()));
        ++article_ordinal;
    }

    const auto N = static_cast<Eigen::Index>(sentence_rows.size());
    const auto M = static_cast<Eigen::Index>(comment_rows.size());
    const Eigen::Index k = N > 0 ? sentence_rows[0].x.size() : 0;
    const Eigen::Index l = M > 0 ? comment_rows[0].x.size() : 0;

    TrainingSet ts;
    ts.Xs.resize(N, k);
    ts.Ys.resize(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        ts.Xs.row(i) = sentence_rows[i].x.transpose();
        ts.Ys[i] = sentence_rows[i].y;
    }
    ts.Xc.resize(M, l);
    ts.Yc.resize(M);
    for (Eigen::Index i = 0; i < M; ++i) {
        ts.Xc.row(i) = comment_rows[i].x.transpose();
        ts.Yc[i] = comment_rows[i].y;
    }

    ts.sentence_stats = fit_standardization(ts.Xs);
    ts.comment_stats = fit_standardization(ts.Xc);
    standardize_rows(ts.Xs, ts.sentence_stats);
    standardize_rows(ts.Xc, ts.comment_stats);

    // Position-difference rows pair sentence 0 with each later sentence.
    std::vector<std::pair<int, int>> s_pairs;
    for (const auto& [begin, end] : article_sentence_range)
        for (int j = begin + 1; j < end; ++j) s_pairs.emplace_back(begin, j);
    ts.Xs_diff.resize(static_cast<Eigen::Index>(s_pairs.size()), k);
    ts.Ys_diff.resize(static_cast<Eigen::Index>(s_pairs.size()));
    for (std::size_t r = 0; r < s_pairs.size(); ++r) {
        const auto [first, other] = s_pairs[r];
        ts.Xs_diff.row(static_cast<Eigen::Index>(r)) = ts.Xs.row(first) - ts.Xs.row(other);
        ts.Ys_diff[static_cast<Eigen::Index>(r)] = sentence_rows[first].y - sentence_rows[other].y;
    }

    // Pick/non-pick pairs, capped per article with a fixed-seed sample.
    std::vector<std::pair<int, int>> c_pairs;
    for (const auto& [begin, end] : article_comment_range) {
        std::vector<std::pair<int, int>> article_pairs;
        for (int p = begin; p < end; ++p) {
            if (comment_rows[p].y != 1.0) continue;
            for (int q = begin; q < end; ++q)
                if (comment_rows[q].y == 0.0) article_pairs.emplace_back(p, q);
        }
        if (static_cast<int>(article_pairs.size()) > kMaxPairRowsPerArticle) {
            std::mt19937 rng(7709);
            for (int i = 0; i < kMaxPairRowsPerArticle; ++i) {
                const auto j = i + static_cast<int>(rng() % (article_pairs.size() - i));
                std::swap(article_pairs[i], article_pairs[j]);
            }
            article_pairs.resize(kMaxPairRowsPerArticle);
        }
        c_pairs.insert(c_pairs.end(), article_pairs.begin(), article_pairs.end());
    }
    ts.Xc_diff.resize(static_cast<Eigen::Index>(c_pairs.size()), l);
    ts.Yc_diff = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(c_pairs.size()));
    for (std::size_t r = 0; r < c_pairs.size(); ++r) {
        const auto [pick, nonpick] = c_pairs[r];
        ts.Xc_diff.row(static_cast<Eigen::Index>(r)) = ts.Xc.row(pick) - ts.Xc.row(nonpick);
    }

    // Same-article TF-IDF similarities; cross-article pairs stay zero.
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(N, M);
    {
        int a = 0;
        for (const auto& [id, article] : dataset.articles) {
            const auto [sb, se] = article_sentence_range[a];
            const auto [cb, ce] = article_comment_range[a];
            auto it = grouped.find(id);
            const auto& comments = it == grouped.end() ? no_comments : it->second;
            const auto sentences = dataset.sentences_of(article);
            for (int i = sb; i < se; ++i)
                for (int j = cb; j < ce; ++j)
                    R(i, j) = tfidf_cosine(sentences[i - sb]->tokens, comments[j - cb]->tokens,
                                           index);
            ++a;
        }
    }
    ts.Q = normalize_bipartite(R);
    return ts;
}

double joint_objective(const TrainingSet& ts, const Hyperparams& hp,
                       const Eigen::VectorXd& ws, const Eigen::VectorXd& wc) {
    const Eigen::VectorXd ps = ts.Xs * ws;
    const Eigen::VectorXd pc = ts.Xc * wc;
    double j = (ps - ts.Ys).squaredNorm() + hp.beta_s * ws.squaredNorm();
    j += (pc - ts.Yc).squaredNorm() + hp.beta_c * wc.squaredNorm();
    if (ts.Xs_diff.rows() > 0)
        j += hp.lambda_s * (ts.Xs_diff * ws - ts.Ys_diff).squaredNorm();
    if (ts.Xc_diff.rows() > 0)
        j += hp.lambda_c * (ts.Xc_diff * wc - ts.Yc_diff).squaredNorm();
    // Coupling quadratic form with identity diagonal blocks:
    // lsc * (|ps|^2 + |pc|^2 - 2 ps' Q pc).
    j += hp.lambda_sc *
         (ps.squaredNorm() + pc.squaredNorm() - 2.0 * ps.dot(ts.Q * pc));
    return j;
}

Eigen::VectorXd joint_gradient(const TrainingSet& ts, const Hyperparams& hp,
                               const Eigen::VectorXd& ws, const Eigen::VectorXd& wc) {
    const Eigen::VectorXd ps = ts.Xs * ws;
    const Eigen::VectorXd pc = ts.Xc * wc;
    Eigen::VectorXd gs = 2.0 * ts.Xs.transpose() * (ps - ts.Ys) + 2.0 * hp.beta_s * ws;
    Eigen::VectorXd gc = 2.0 * ts.Xc.transpose() * (pc - ts.Yc) + 2.0 * hp.beta_c * wc;
    if (ts.Xs_diff.rows() > 0)
        gs += 2.0 * hp.lambda_s * ts.Xs_diff.transpose() * (ts.Xs_diff * ws - ts.Ys_diff);
    if (ts.Xc_diff.rows() > 0)
        gc += 2.0 * hp.lambda_c * ts.Xc_diff.transpose() * (ts.Xc_diff * wc - ts.Yc_diff);
    gs += 2.0 * hp.lambda_sc * ts.Xs.transpose() * (ps - ts.Q * pc);
    gc += 2.0 * hp.lambda_sc * ts.Xc.transpose() * (pc - ts.Q.transpose() * ps);
    Eigen::VectorXd g(gs.size() + gc.size());
    g << gs, gc;
    return g;
}

ScorerWeights solve_joint(const TrainingSet& ts, const Hyperparams& hp) {
    if (hp.beta_s <= 0.0 || hp.beta_c <= 0.0)
        throw std::invalid_argument("solve_joint: beta_s and beta_c must be > 0");
    const Eigen::Index k = ts.Xs.cols();
    const Eigen::Index l = ts.Xc.cols();
    if (ts.Xs.rows() != ts.Ys.size() || ts.Xc.rows() != ts.Yc.size() ||
        ts.Q.rows() != ts.Xs.rows() || ts.Q.cols() != ts.Xc.rows() ||
        (ts.Xs_diff.rows() > 0 && ts.Xs_diff.cols() != k) ||
        (ts.Xc_diff.rows() > 0 && ts.Xc_diff.cols() != l) ||
        ts.Xs_diff.rows() != ts.Ys_diff.size() || ts.Xc_diff.rows() != ts.Yc_diff.size())
        throw std::invalid_argument("solve_joint: dimension mismatch");
    if (!ts.Xs.allFinite() || !ts.Xc.allFinite() || !ts.Ys.allFinite() || !ts.Yc.allFinite() ||
        !ts.Q.allFinite() || !ts.Xs_diff.allFinite() || !ts.Xc_diff.allFinite())
        throw NumericError("solve_joint: non-finite matrix entry");

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k + l, k + l);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k + l);

    // X' X plus the coupling form X' L X, assembled blockwise.
    const Eigen::MatrixXd XsTXs = ts.Xs.transpose() * ts.Xs;
    const Eigen::MatrixXd XcTXc = ts.Xc.transpose() * ts.Xc;
    A.topLeftCorner(k, k) = (1.0 + hp.lambda_sc) * XsTXs;
    A.bottomRightCorner(l, l) = (1.0 + hp.lambda_sc) * XcTXc;
    const Eigen::MatrixXd cross =
        -hp.lambda_sc * (ts.Xs.transpose() * (ts.Q * ts.Xc));
    A.topRightCorner(k, l) = cross;
    A.bottomLeftCorner(l, k) = cross.transpose();

    if (ts.Xs_diff.rows() > 0)
        A.topLeftCorner(k, k) += hp.lambda_s * (ts.Xs_diff.transpose() * ts.Xs_diff);
    if (ts.Xc_diff.rows() > 0)
        A.bottomRightCorner(l, l) += hp.lambda_c * (ts.Xc_diff.transpose() * ts.Xc_diff);
    A.topLeftCorner(k, k) += hp.beta_s * Eigen::MatrixXd::Identity(k, k);
    A.bottomRightCorner(l, l) += hp.beta_c * Eigen::MatrixXd::Identity(l, l);

    b.head(k) = ts.Xs.transpose() * ts.Ys;
    b.tail(l) = ts.Xc.transpose() * ts.Yc;
    if (ts.Xs_diff.rows() > 0) b.head(k) += hp.lambda_s * (ts.Xs_diff.transpose() * ts.Ys_diff);
    if (ts.Xc_diff.rows() > 0) b.tail(l) += hp.lambda_c * (ts.Xc_diff.transpose() * ts.Yc_diff);

    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    Eigen::VectorXd w;
    if (ldlt.info() == Eigen::Success) {
        w = ldlt.solve(b);
    }
    if (ldlt.info() != Eigen::Success || !w.allFinite()) {
        // One jittered retry before giving up.
        Eigen::LDLT<Eigen::MatrixXd> retry(
            A + 1e-10 * Eigen::MatrixXd::Identity(k + l, k + l));
        if (retry.info() != Eigen::Success)
            throw NumericError("solve_joint: factorization failed");
        w = retry.solve(b);
        if (!w.allFinite()) throw NumericError("solve_joint: non-finite solution");
    }

    ScorerWeights weights;
    weights.ws = w.head(k);
    weights.wc = w.tail(l);
    weights.sentence_schema = kSentenceSchemaId;
    weights.comment_schema = kCommentSchemaId;
    weights.sentence_stats = ts.sentence_stats;
    weights.comment_stats = ts.comment_stats;
    if (weights.sentence_stats.mean.size() == 0)
        weights.sentence_stats = {Eigen::VectorXd::Zero(k), Eigen::VectorXd::Ones(k)};
    if (weights.comment_stats.mean.size() == 0)
        weights.comment_stats = {Eigen::VectorXd::Zero(l), Eigen::VectorXd::Ones(l)};
    return weights;
}

double score(const ScorerWeights& weights, const Eigen::VectorXd& raw_features, ScoreKind kind) {
    const auto& w = kind == ScoreKind::sentence ? weights.ws : weights.wc;
    const auto& stats = kind == ScoreKind::sentence ? weights.sentence_stats : weights.comment_stats;
    if (raw_features.size() != w.size())
        throw std::invalid_argument("score: feature dimension does not match schema");
    return stats.apply(raw_features).dot(w);
}

double score(const ScorerWeights& weights, const FeatureVector& features, ScoreKind kind) {
    const auto& expected =
        kind == ScoreKind::sentence ? weights.sentence_schema : weights.comment_schema;
    if (features.schema_id != expected)
        throw std::invalid_argument("score: schema '" + features.schema_id +
                                    "' does not match trained schema '" + expected + "'");
    return score(weights, features.values, kind);
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_vector(std::ostream& out, const char* tag, const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out << tag << " " << format_double(v[i]) << "\n";
}

}  // namespace

void save_weights(const ScorerWeights& weights, const std::string& path) {
    std::ostringstream out;
    out << "chronicle-weights v1\n";
    out << "sentence_schema " << weights.sentence_schema << "\n";
    out << "comment_schema " << weights.comment_schema << "\n";
    out << "k " << weights.ws.size() << "\n";
    out << "l " << weights.wc.size() << "\n";
    write_vector(out, "ms", weights.sentence_stats.mean);
    write_vector(out, "ss", weights.sentence_stats.stddev);
    write_vector(out, "ws", weights.ws);
    write_vector(out, "mc", weights.comment_stats.mean);
    write_vector(out, "sc", weights.comment_stats.stddev);
    write_vector(out, "wc", weights.wc);
    std::ofstream file(path, std::ios::trunc);
    if (!file) throw DataError("cannot write weights file: " + path);
    file << out.str();
}

ScorerWeights load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open weights file: " + path);
    std::string header;
    std::getline(in, header);
    if (header != "chronicle-weights v1")
        throw DataError(path + ": unsupported weights format '" + header + "'");

    ScorerWeights w;
    Eigen::Index k = -1, l = -1;
    std::vector<double> ms, ss, ws, mc, sc, wc;
    std::string tag;
    while (in >> tag) {
        if (tag == "sentence_schema") in >> w.sentence_schema;
        else if (tag == "comment_schema") in >> w.comment_schema;
        else if (tag == "k") in >> k;
        else if (tag == "l") in >> l;
        else {
            double value = 0.0;
            if (!(in >> value)) throw DataError(path + ": malformed value after '" + tag + "'");
            if (tag == "ms") ms.push_back(value);
            else if (tag == "ss") ss.push_back(value);
            else if (tag == "ws") ws.push_back(value);
            else if (tag == "mc") mc.push_back(value);
            else if (tag == "sc") sc.push_back(value);
            else if (tag == "wc") wc.push_back(value);
            else throw DataError(path + ": unknown tag '" + tag + "'");
        }
    }
    auto to_vec = [](const std::vector<double>& v) {
        return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()))
            .eval();
    };
    if (k < 0 || l < 0 || static_cast<Eigen::Index>(ws.size()) != k ||
        static_cast<Eigen::Index>(wc.size()) != l ||
        ms.size() != ws.size() || ss.size() != ws.size() || mc.size() != wc.size() ||
        sc.size() != wc.size())
        throw DataError(path + ": inconsistent weight dimensions");
    w.ws = to_vec(ws);
    w.wc = to_vec(wc);
    w.sentence_stats = {to_vec(ms), to_vec(ss)};
    w.comment_stats = {to_vec(mc), to_vec(sc)};
    return w;
}

}  // namespace chronicle
