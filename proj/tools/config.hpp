#pragma once

#include <map>
#include <optional>
#include <string>

#include "chronicle/jointlearn.hpp"
#include "chronicle/timeline.hpp"

namespace chronicle::cli {

// Flat "key = value" file with [section] headers and '#' comments.
// Lookup keys are "section.key"; flags override file values.
class ConfigFile {
public:
    ConfigFile() = default;
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text, const std::string& origin);

    std::optional<std::string> get(const std::string& key) const;
    void set(const std::string& key, const std::string& value);  // flag overrides

    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

private:
    std::map<std::string, std::string> values_;
};

struct RunConfig {
    std::string bundle_dir;
    std::string weights_path;
    std::string output_path;
    std::string html_path;
    std::string embeddings_path;
    std::string stopwords_path;  // optional lexicon overrides
    std::map<std::string, std::string> lexicon_paths;
    Hyperparams hyper;
    ObjectiveParams objective;
    bool holdout_grid = false;
    unsigned seed = 0;
    int threads = 1;

    static RunConfig from(const ConfigFile& cfg);
};

// Writes via a temp file in the target directory plus rename, so failed
// runs leave nothing partial behind.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace chronicle::cli
