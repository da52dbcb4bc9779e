#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "xlg/alignment_metrics.hpp"
#include "xlg/corpus.hpp"
#include "xlg/embedding.hpp"
#include "xlg/error.hpp"
#include "xlg/features.hpp"
#include "xlg/parallel.hpp"

namespace xlg {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) detail::fail_input(where + ": not a number: '" + std::string(s) + "'");
  return v;
}

inline const std::vector<std::string>& analysis_modes() {
  static const std::vector<std::string> modes = {"corr", "search", "ablate", "anova", "ancova", "pca", "pcr"};
  return modes;
}

inline bool stochastic_mode(const std::string& mode) { return mode == "search" || mode == "ablate" || mode == "pcr"; }

/// Everything a full run needs. Read from a `key = value` text file; `#` starts a
/// comment, list values are comma-separated and repeated keys append.
struct RunConfig {
  std::vector<std::filesystem::path> embeddings;  // one directory per document
  std::vector<std::filesystem::path> corpora;     // one directory per document
  std::optional<std::filesystem::path> languages;
  std::size_t k = kDefaultMarginK;
  std::size_t gh_max_points = kDefaultGhMaxPoints;
  std::size_t folds = 10;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> analyses;
  std::filesystem::path out_dir = ".";
  std::size_t char_overlap_corpus = 0;   // index into corpora
  std::size_t token_overlap_corpus = 0;  // index into corpora
  std::size_t workers = 0;

  void validate() const {
    if (k < 1) detail::fail_input("config: k must be >= 1");
    if (folds < 2) detail::fail_input("config: folds must be >= 2");
    if (gh_max_points < 1) detail::fail_input("config: gh_max_points must be >= 1");
    for (const auto& a : analyses) {
      const auto& modes = analysis_modes();
      if (std::find(modes.begin(), modes.end(), a) == modes.end())
        detail::fail_input("config: unknown analysis '" + a + "'");
      if (stochastic_mode(a) && !seed) detail::fail_input("config: analysis '" + a + "' needs a seed");
    }
    if (!corpora.empty() && (char_overlap_corpus >= corpora.size() || token_overlap_corpus >= corpora.size()))
      detail::fail_input("config: overlap corpus index out of range");
  }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(v);
  while (std::getline(in, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

inline std::uint64_t parse_unsigned(const std::string& v, const std::string& where) {
  std::uint64_t out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || v.empty())
    fail_input(where + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

}  // namespace detail

/// Relative paths are resolved against `base`.
inline RunConfig parse_config(std::istream& in, const std::filesystem::path& base = {},
                              const std::string& origin = "config") {
  RunConfig c;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) detail::fail_input(where + ": expected key = value");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string value = detail::trim(t.substr(eq + 1));
    if (key == "embeddings") {
      for (const auto& p : detail::split_list(value)) c.embeddings.push_back(resolve(p));
    } else if (key == "corpus") {
      for (const auto& p : detail::split_list(value)) c.corpora.push_back(resolve(p));
    } else if (key == "languages") {
      c.languages = resolve(value);
    } else if (key == "k") {
      c.k = detail::parse_unsigned(value, where);
    } else if (key == "gh_max_points") {
      c.gh_max_points = detail::parse_unsigned(value, where);
    } else if (key == "folds") {
      c.folds = detail::parse_unsigned(value, where);
    } else if (key == "seed") {
      c.seed = detail::parse_unsigned(value, where);
    } else if (key == "analyses") {
      for (const auto& a : detail::split_list(value)) c.analyses.push_back(a);
    } else if (key == "out_dir") {
      c.out_dir = resolve(value);
    } else if (key == "char_overlap_corpus") {
      c.char_overlap_corpus = detail::parse_unsigned(value, where);
    } else if (key == "token_overlap_corpus") {
      c.token_overlap_corpus = detail::parse_unsigned(value, where);
    } else if (key == "threads") {
      c.workers = detail::parse_unsigned(value, where);
    } else {
      detail::fail_input(where + ": unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) detail::fail_input("cannot open config " + path.string());
  return parse_config(in, path.parent_path(), path.string());
}

/// Languages with an embedding file in `dir`: `<lang>.xemb` (binary) or `<lang>.txt` (text).
inline std::map<std::string, std::filesystem::path> discover_embeddings(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) detail::fail_input("not a directory: " + dir.string());
  std::map<std::string, std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto ext = e.path().extension();
    if (ext != ".xemb" && ext != ".txt") continue;
    const auto lang = e.path().stem().string();
    auto it = out.find(lang);
    if (it == out.end() || ext == ".xemb") out[lang] = e.path();
  }
  return out;
}

struct PairMetricsRun {
  std::vector<std::string> languages;  // successfully loaded, sorted
  std::vector<std::pair<LangPair, AlignmentMetrics>> rows;  // canonical pair order
  std::vector<std::string> failures;

  bool partial() const { return !failures.empty(); }
};

/// All five metrics for every unordered pair of languages, averaged per metric across the
/// configured documents. Languages with a missing or unreadable file in any document, and
/// pairs whose computation fails, are reported in `failures` and skipped.
inline PairMetricsRun run_pair_metrics(const RunConfig& config) {
  if (config.embeddings.empty()) detail::fail_input("run_pair_metrics: no embedding directories configured");
  std::vector<std::map<std::string, std::filesystem::path>> files;
  for (const auto& dir : config.embeddings) files.push_back(discover_embeddings(dir));
  std::set<std::string> candidates;
  if (config.languages) {
    for (const auto& [lang, meta] : load_language_table(*config.languages)) candidates.insert(lang);
  } else {
    for (const auto& f : files)
      for (const auto& [lang, path] : f) candidates.insert(lang);
  }

  PairMetricsRun run;
  std::map<std::string, std::vector<EmbeddingMatrix>> loaded;
  for (const auto& lang : candidates) {
    std::vector<EmbeddingMatrix> docs;
    bool ok = true;
    for (std::size_t d = 0; d < files.size() && ok; ++d) {
      auto it = files[d].find(lang);
      if (it == files[d].end()) {
        run.failures.push_back(lang + ": no embedding file in " + config.embeddings[d].string());
        ok = false;
        continue;
      }
      try {
        docs.push_back(load_embeddings(it->second));
      } catch (const std::exception& e) {
        run.failures.push_back(lang + ": " + e.what());
        ok = false;
      }
    }
    if (ok) {
      run.languages.push_back(lang);
      loaded.emplace(lang, std::move(docs));
    }
  }

  std::vector<LangPair> pairs;
  for (std::size_t i = 0; i < run.languages.size(); ++i)
    for (std::size_t j = i + 1; j < run.languages.size(); ++j) pairs.emplace_back(run.languages[i], run.languages[j]);
  std::vector<std::optional<AlignmentMetrics>> results(pairs.size());
  std::vector<std::string> errors(pairs.size());
  MetricParams params{config.k, config.gh_max_points, 1};
  parallel_for(
      pairs.size(),
      [&](std::size_t p) {
        const auto& da = loaded.at(pairs[p].first);
        const auto& db = loaded.at(pairs[p].second);
        try {
          AlignmentMetrics sum;
          for (std::size_t d = 0; d < da.size(); ++d) {
            const auto m = compute_alignment_metrics(align_pair(da[d], db[d]), params);
            for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i) sum[i] += m[i];
          }
          for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i) sum[i] /= static_cast<double>(da.size());
          results[p] = sum;
        } catch (const std::exception& e) {
          errors[p] = pairs[p].first + "-" + pairs[p].second + ": " + e.what();
        }
      },
      config.workers);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (results[p])
      run.rows.emplace_back(pairs[p], *results[p]);
    else
      run.failures.push_back(errors[p]);
  }
  return run;
}

// ---- CSV ----

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline LangPair canonical(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace detail

inline void write_metrics_csv(std::ostream& out, const std::vector<std::pair<LangPair, AlignmentMetrics>>& rows) {
  out << "lang_a,lang_b";
  for (auto name : kMetricNames) out << ',' << name;
  out << '\n';
  for (const auto& [pair, m] : rows) {
    out << pair.first << ',' << pair.second;
    for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i) out << ',' << format_double(m[i]);
    out << '\n';
  }
}

/// Keyed by (lang_a, lang_b) in lexicographic order whatever the file order.
inline std::map<LangPair, AlignmentMetrics> read_metrics_csv(std::istream& in, const std::string& origin = "metrics") {
  std::string line;
  if (!std::getline(in, line)) detail::fail_input(origin + ": empty file");
  const auto header = detail::split_csv(line);
  std::vector<std::string> want{"lang_a", "lang_b"};
  for (auto n : kMetricNames) want.emplace_back(n);
  if (header != want) detail::fail_input(origin + ": unexpected header");
  std::map<LangPair, AlignmentMetrics> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv(line);
    const std::string where = origin + ":" + std::to_string(lineno);
    if (cells.size() != want.size()) detail::fail_input(where + ": expected " + std::to_string(want.size()) + " cells");
    AlignmentMetrics m;
    for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i) m[i] = parse_double(cells[2 + i], where);
    if (!out.emplace(detail::canonical(cells[0], cells[1]), m).second)
      detail::fail_input(where + ": duplicate pair " + cells[0] + "-" + cells[1]);
  }
  return out;
}

inline std::map<LangPair, AlignmentMetrics> load_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) detail::fail_input("cannot open " + path.string());
  return read_metrics_csv(in, path.string());
}

using FeatureTable = std::map<LangPair, PairFeatureVector>;

/// Pair features for every unordered pair of table languages. Character overlap uses
/// `char_corpus`, token overlap `token_corpus`; either may be null, and a language missing
/// from a corpus leaves that overlap empty for its pairs.
inline FeatureTable compute_feature_table(const LanguageTable& table, const Corpus* char_corpus,
                                          const Corpus* token_corpus) {
  const auto agg = training_aggregates(table);
  auto texts_for = [](const Corpus* c, const std::string& a, const std::string& b) {
    std::optional<std::pair<std::string, std::string>> out;
    if (!c) return out;
    auto ia = c->documents.find(a);
    auto ib = c->documents.find(b);
    if (ia == c->documents.end() || ib == c->documents.end()) return out;
    return aligned_texts(ia->second, ib->second);
  };
  FeatureTable out;
  for (auto ia = table.begin(); ia != table.end(); ++ia)
    for (auto ib = std::next(ia); ib != table.end(); ++ib) {
      OverlapTexts texts{texts_for(char_corpus, ia->first, ib->first), texts_for(token_corpus, ia->first, ib->first)};
      out.emplace(LangPair{ia->first, ib->first}, pair_features(ia->second, ib->second, agg, texts));
    }
  return out;
}

inline void write_features_csv(std::ostream& out, const FeatureTable& rows) {
  out << "lang_a,lang_b";
  for (auto name : kPairFeatureNames) out << ',' << name;
  out << '\n';
  for (const auto& [pair, f] : rows) {
    out << pair.first << ',' << pair.second;
    for (std::size_t i = 0; i < kNumPairFeatures; ++i) out << ',' << (f[i] ? format_double(*f[i]) : "NA");
    out << '\n';
  }
}

inline FeatureTable read_features_csv(std::istream& in, const std::string& origin = "features") {
  std::string line;
  if (!std::getline(in, line)) detail::fail_input(origin + ": empty file");
  const auto header = detail::split_csv(line);
  std::vector<std::string> want{"lang_a", "lang_b"};
  for (auto n : kPairFeatureNames) want.emplace_back(n);
  if (header != want) detail::fail_input(origin + ": unexpected header");
  FeatureTable out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv(line);
    const std::string where = origin + ":" + std::to_string(lineno);
    if (cells.size() != want.size()) detail::fail_input(where + ": expected " + std::to_string(want.size()) + " cells");
    PairFeatureVector f;
    for (std::size_t i = 0; i < kNumPairFeatures; ++i)
      if (cells[2 + i] != "NA" && !cells[2 + i].empty()) f[i] = parse_double(cells[2 + i], where);
    if (!out.emplace(detail::canonical(cells[0], cells[1]), f).second)
      detail::fail_input(where + ": duplicate pair " + cells[0] + "-" + cells[1]);
  }
  return out;
}

inline FeatureTable load_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) detail::fail_input("cannot open " + path.string());
  return read_features_csv(in, path.string());
}

// ---- plot data ----

/// One (x, y, group) CSV per feature/metric combination, plus per-language metric means.
/// Returns the files written, in creation order.
inline std::vector<std::filesystem::path> write_plot_data(const FeatureTable& features,
                                                          const std::map<LangPair, AlignmentMetrics>& metrics,
                                                          const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (std::size_t f = 0; f < kNumPairFeatures; ++f)
    for (std::size_t m = 0; m < AlignmentMetrics::size(); ++m) {
      const auto path = dir / (std::string(kPairFeatureNames[f]) + "__" + std::string(kMetricNames[m]) + ".csv");
      std::ofstream out(path, std::ios::binary);
      out << "x,y,group\n";
      for (const auto& [pair, fv] : features) {
        auto it = metrics.find(pair);
        if (it == metrics.end() || !fv[f]) continue;
        const bool same = fv[kSameFamily] && *fv[kSameFamily] == 1.0;
        out << format_double(*fv[f]) << ',' << format_double(it->second[m]) << ','
            << (same ? "same_family" : "different_family") << '\n';
      }
      written.push_back(path);
    }
  const auto per_lang = per_language_metrics(metrics);
  const auto path = dir / "per_language.csv";
  std::ofstream out(path, std::ios::binary);
  out << "lang";
  for (auto name : kMetricNames) out << ',' << name;
  out << '\n';
  for (const auto& [lang, m] : per_lang) {
    out << lang;
    for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i) out << ',' << format_double(m[i]);
    out << '\n';
  }
  written.push_back(path);
  return written;
}

}  // namespace xlg
