#include "config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chronicle/errors.hpp"

namespace chronicle::cli {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw DataError(origin + ":" + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw DataError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.values_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

std::optional<std::string> ConfigFile::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void ConfigFile::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::string ConfigFile::get_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        return std::stod(*v);
    } catch (const std::exception&) {
        throw DataError("config key '" + key + "' is not a number: " + *v);
    }
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        return std::stoi(*v);
    } catch (const std::exception&) {
        throw DataError("config key '" + key + "' is not an integer: " + *v);
    }
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw DataError("config key '" + key + "' is not a boolean: " + *v);
}

RunConfig RunConfig::from(const ConfigFile& cfg) {
    RunConfig rc;
    rc.bundle_dir = cfg.get_or("data.bundle", "");
    rc.weights_path = cfg.get_or("data.weights", "");
    rc.output_path = cfg.get_or("output.path", "");
    rc.html_path = cfg.get_or("output.html", "");
    rc.embeddings_path = cfg.get_or("timeline.embeddings", "");
    rc.stopwords_path = cfg.get_or("lexicons.stopwords", "");
    for (const char* name : {"positive", "negative", "neutral", "connectives", "hedges",
                             "event_words"}) {
        const auto v = cfg.get(std::string("lexicons.") + name);
        if (v) rc.lexicon_paths[name] = *v;
    }
    rc.hyper.lambda_s = cfg.get_double("train.lambda_s", 1.0);
    rc.hyper.lambda_c = cfg.get_double("train.lambda_c", 1.0);
    rc.hyper.lambda_sc = cfg.get_double("train.lambda_sc", 1.0);
    rc.hyper.beta_s = cfg.get_double("train.beta_s", 1.0);
    rc.hyper.beta_c = cfg.get_double("train.beta_c", 1.0);
    rc.holdout_grid = cfg.get_bool("train.holdout", false);
    rc.seed = static_cast<unsigned>(cfg.get_int("train.seed", 0));
    rc.objective.theta_cov = cfg.get_double("timeline.theta_cov", 1.0);
    rc.objective.alpha = cfg.get_double("timeline.alpha", 0.1);
    rc.objective.theta_cont = cfg.get_double("timeline.theta_cont", 1.0);
    rc.objective.delta = cfg.get_double("timeline.delta", 1.0);
    rc.objective.epsilon = cfg.get_double("timeline.epsilon", 0.01);
    rc.objective.word_budget = cfg.get_int("timeline.word_budget", 100);
    rc.objective.comment_count = cfg.get_int("timeline.comment_count", 5);
    rc.objective.redundancy_threshold = cfg.get_double("timeline.redundancy_threshold", 0.8);
    const std::string conn = cfg.get_or("timeline.conn", "lexical");
    if (conn == "lexical") {
        rc.objective.conn_kind = ConnKind::lexical;
    } else if (conn == "embedding") {
        rc.objective.conn_kind = ConnKind::semantic_embedding;
    } else {
        throw DataError("timeline.conn must be 'lexical' or 'embedding', got '" + conn + "'");
    }
    rc.threads = cfg.get_int("run.threads", 1);
    if (rc.threads < 1) throw DataError("run.threads must be >= 1");
    return rc;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::trunc | std::ios::binary);
        if (!out) throw DataError("cannot write " + temp.string());
        out << content;
        if (!out.good()) throw DataError("write failed for " + temp.string());
    }
    fs::rename(temp, target);
}

}  // namespace chronicle::cli
