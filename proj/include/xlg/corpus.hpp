#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "xlg/error.hpp"

namespace xlg {

/// verse ID -> sentence text; std::map keeps IDs in lexicographic order.
using Document = std::map<std::string, std::string>;

struct Corpus {
  std::string name;
  std::map<std::string, Document> documents;  // lang -> document
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace detail

/// Reads one "<verse_id>\t<text>" document. A leading "verse_id\ttext" header is skipped.
inline Document load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) detail::fail_input("cannot open " + path.string());
  Document doc;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      detail::fail_input(path.string() + ":" + std::to_string(lineno) + ": expected verse_id<TAB>text");
    std::string id = line.substr(0, tab);
    std::string text = line.substr(tab + 1);
    if (lineno == 1 && id == "verse_id" && text == "text") continue;
    if (id.empty()) detail::fail_input(path.string() + ":" + std::to_string(lineno) + ": empty verse id");
    if (!doc.emplace(id, std::move(text)).second)
      detail::fail_input(path.string() + ":" + std::to_string(lineno) + ": duplicate verse id '" + id + "'");
  }
  if (doc.empty()) detail::fail_input(path.string() + ": document has no verses");
  return doc;
}

/// Loads every <lang>.tsv in `dir`.
inline Corpus load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) detail::fail_input("not a directory: " + dir.string());
  Corpus corpus;
  corpus.name = dir.filename().string();
  if (corpus.name.empty()) corpus.name = dir.parent_path().filename().string();
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".tsv") continue;
    corpus.documents.emplace(entry.path().stem().string(), load_document(entry.path()));
  }
  if (corpus.documents.empty()) detail::fail_input(dir.string() + ": no <lang>.tsv documents");
  return corpus;
}

enum class WordOrder { SVO, SOV, VSO, VOS, OVS, OSV, UNKNOWN };

inline constexpr std::array<std::string_view, 7> kWordOrderNames = {"SVO", "SOV", "VSO", "VOS",
                                                                    "OVS", "OSV", "UNKNOWN"};

inline std::string_view to_string(WordOrder w) { return kWordOrderNames[static_cast<std::size_t>(w)]; }

/// Empty, "NA" and "UNKNOWN" map to UNKNOWN; anything else outside the six orders throws.
inline WordOrder parse_word_order(std::string_view s) {
  std::string up(s);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up.empty() || up == "NA" || up == "UNKNOWN") return WordOrder::UNKNOWN;
  for (std::size_t i = 0; i + 1 < kWordOrderNames.size(); ++i)
    if (up == kWordOrderNames[i]) return static_cast<WordOrder>(i);
  detail::fail_input("invalid word order '" + std::string(s) + "'");
}

enum class TypoKind { syntax, phonology, inventory, geography };

inline constexpr std::array<std::string_view, 4> kTypoColumns = {"syntax_vec", "phonology_vec",
                                                                 "inventory_vec", "geo_vec"};

struct LanguageMeta {
  std::string lang;
  std::string family;
  std::string subfamily;
  WordOrder word_order = WordOrder::UNKNOWN;
  bool polysynthetic = false;
  std::uint64_t train_sentences = 0;
  std::array<std::optional<std::vector<double>>, 4> typo_vectors;  // indexed by TypoKind

  const std::optional<std::vector<double>>& typo(TypoKind k) const {
    return typo_vectors[static_cast<std::size_t>(k)];
  }
};

using LanguageTable = std::map<std::string, LanguageMeta>;

namespace detail {

inline bool parse_bool(const std::string& raw, const std::string& where) {
  const std::string s = lower(trim(raw));
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail_input(where + ": malformed boolean '" + raw + "'");
}

inline std::uint64_t parse_count(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    if (!s.empty() && s[0] == '-') fail_input(where + ": negative sentence count '" + raw + "'");
    fail_input(where + ": malformed count '" + raw + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    fail_input(where + ": count out of range '" + raw + "'");
  }
}

inline std::vector<double> parse_vector(const std::string& raw, const std::string& where) {
  std::vector<double> v;
  std::stringstream ss(raw);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) fail_input(where + ": malformed vector entry '" + tok + "'");
    v.push_back(x);
  }
  return v;
}

}  // namespace detail

/// Parses the language metadata TSV. Columns are located by header name; the four
/// vector columns are optional and an empty cell records the vector as absent.
inline LanguageTable parse_language_table(std::istream& in, const std::string& origin = "language table") {
  std::string line;
  if (!std::getline(in, line)) detail::fail_input(origin + ": empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_tabs(line);
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (detail::trim(header[i]) == name) return i;
    return std::nullopt;
  };
  const std::array<std::string_view, 6> required = {"lang", "family", "subfamily", "word_order",
                                                    "polysynthetic", "train_sentences"};
  std::array<std::size_t, 6> col{};
  for (std::size_t i = 0; i < required.size(); ++i) {
    auto c = column(required[i]);
    if (!c) detail::fail_input(origin + ": missing column '" + std::string(required[i]) + "'");
    col[i] = *c;
  }
  std::array<std::optional<std::size_t>, 4> vec_col;
  for (std::size_t k = 0; k < kTypoColumns.size(); ++k) vec_col[k] = column(kTypoColumns[k]);

  LanguageTable table;
  std::array<std::optional<std::size_t>, 4> vec_dim;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_tabs(line);
    cells.resize(std::max(cells.size(), header.size()));
    const std::string where = origin + ":" + std::to_string(lineno);
    LanguageMeta meta;
    meta.lang = detail::trim(cells[col[0]]);
    if (meta.lang.empty()) detail::fail_input(where + ": empty language code");
    meta.family = detail::trim(cells[col[1]]);
    meta.subfamily = detail::trim(cells[col[2]]);
    meta.word_order = parse_word_order(detail::trim(cells[col[3]]));
    meta.polysynthetic = detail::parse_bool(cells[col[4]], where);
    meta.train_sentences = detail::parse_count(cells[col[5]], where);
    for (std::size_t k = 0; k < vec_col.size(); ++k) {
      if (!vec_col[k]) continue;
      const std::string cell = detail::trim(cells[*vec_col[k]]);
      if (cell.empty() || cell == "NA") continue;
      auto v = detail::parse_vector(cell, where);
      if (vec_dim[k] && *vec_dim[k] != v.size())
        detail::fail_input(where + ": " + std::string(kTypoColumns[k]) + " has dimension " +
                           std::to_string(v.size()) + ", expected " + std::to_string(*vec_dim[k]));
      vec_dim[k] = v.size();
      meta.typo_vectors[k] = std::move(v);
    }
    if (!table.emplace(meta.lang, meta).second)
      detail::fail_input(where + ": duplicate language '" + meta.lang + "'");
  }
  return table;
}

inline LanguageTable load_language_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) detail::fail_input("cannot open " + path.string());
  return parse_language_table(in, path.string());
}

}  // namespace xlg
