#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xlg/alignment_metrics.hpp"
#include "xlg/corpus.hpp"
#include "xlg/error.hpp"
#include "xlg/knn.hpp"
#include "xlg/text_overlap.hpp"

namespace xlg {

/// 1 - cosine similarity, in [0, 2].
inline double typological_distance(std::span<const double> va, std::span<const double> vb) {
  return 1.0 - cosine(va, vb);
}

struct TrainingAggregate {
  std::uint64_t in_family = 0;
  std::uint64_t in_subfamily = 0;
};

/// Training sentences summed over each language's family (and family+subfamily), the
/// language itself included. An empty label makes the language its own group.
inline std::map<std::string, TrainingAggregate> training_aggregates(const LanguageTable& table) {
  std::map<std::string, std::uint64_t> family_mass;
  std::map<std::pair<std::string, std::string>, std::uint64_t> subfamily_mass;
  for (const auto& [lang, m] : table) {
    if (!m.family.empty()) family_mass[m.family] += m.train_sentences;
    if (!m.family.empty() && !m.subfamily.empty()) subfamily_mass[{m.family, m.subfamily}] += m.train_sentences;
  }
  std::map<std::string, TrainingAggregate> out;
  for (const auto& [lang, m] : table) {
    TrainingAggregate agg;
    agg.in_family = m.family.empty() ? m.train_sentences : family_mass.at(m.family);
    agg.in_subfamily = (m.family.empty() || m.subfamily.empty()) ? m.train_sentences
                                                                  : subfamily_mass.at({m.family, m.subfamily});
    out.emplace(lang, agg);
  }
  return out;
}

struct LanguageFeatureVector {
  std::string family;
  std::string subfamily;
  WordOrder word_order = WordOrder::UNKNOWN;
  bool polysynthetic = false;
  std::uint64_t train_sentences = 0;
  std::uint64_t in_family_sentences = 0;
  std::uint64_t in_subfamily_sentences = 0;
};

inline LanguageFeatureVector language_features(const LanguageMeta& m, const TrainingAggregate& agg) {
  return {m.family, m.subfamily, m.word_order, m.polysynthetic, m.train_sentences, agg.in_family,
          agg.in_subfamily};
}

inline constexpr std::size_t kNumPairFeatures = 13;

inline constexpr std::array<std::string_view, kNumPairFeatures> kPairFeatureNames = {
    "combined_sentences", "combined_in_family", "combined_in_subfamily", "same_family",
    "same_subfamily",     "same_word_order",    "same_polysynthesis",    "token_overlap",
    "char_overlap",       "syntactic_dist",     "phonological_dist",     "inventory_dist",
    "geographic_dist"};

/// The 13 language-pair predictors in kPairFeatureNames order. Missing inputs stay
/// empty and are never imputed.
struct PairFeatureVector {
  std::array<std::optional<double>, kNumPairFeatures> values;

  std::optional<double>& operator[](std::size_t i) { return values[i]; }
  const std::optional<double>& operator[](std::size_t i) const { return values[i]; }
  bool complete() const {
    for (const auto& v : values)
      if (!v) return false;
    return true;
  }
  friend bool operator==(const PairFeatureVector&, const PairFeatureVector&) = default;
};

enum PairFeature : std::size_t {
  kCombinedSentences,
  kCombinedInFamily,
  kCombinedInSubfamily,
  kSameFamily,
  kSameSubfamily,
  kSameWordOrder,
  kSamePolysynthesis,
  kTokenOverlap,
  kCharOverlap,
  kSyntacticDist,
  kPhonologicalDist,
  kInventoryDist,
  kGeographicDist,
};

/// Texts for the two overlap features; either pair may be absent.
struct OverlapTexts {
  std::optional<std::pair<std::string, std::string>> characters;
  std::optional<std::pair<std::string, std::string>> tokens;
};

/// Concatenation (space-joined) of each side's verses over the shared verse IDs.
inline std::optional<std::pair<std::string, std::string>> aligned_texts(const Document& a, const Document& b) {
  std::string ta;
  std::string tb;
  bool any = false;
  for (const auto& [id, text] : a) {
    auto it = b.find(id);
    if (it == b.end()) continue;
    if (any) {
      ta += ' ';
      tb += ' ';
    }
    ta += text;
    tb += it->second;
    any = true;
  }
  if (!any) return std::nullopt;
  return std::make_pair(std::move(ta), std::move(tb));
}

inline bool same_label(const std::string& x, const std::string& y) { return !x.empty() && x == y; }

inline PairFeatureVector pair_features(const LanguageMeta& ma, const LanguageMeta& mb,
                                       const std::map<std::string, TrainingAggregate>& agg,
                                       const OverlapTexts& texts = {}) {
  const auto& aa = agg.at(ma.lang);
  const auto& ab = agg.at(mb.lang);
  const bool fam = same_label(ma.family, mb.family);
  const bool sub = fam && same_label(ma.subfamily, mb.subfamily);
  PairFeatureVector f;
  f[kCombinedSentences] = static_cast<double>(ma.train_sentences + mb.train_sentences);
  // Each side's group mass, minus the partner when the partner sits in that group.
  const auto fam_a = aa.in_family - (fam ? mb.train_sentences : 0);
  const auto fam_b = ab.in_family - (fam ? ma.train_sentences : 0);
  const auto sub_a = aa.in_subfamily - (sub ? mb.train_sentences : 0);
  const auto sub_b = ab.in_subfamily - (sub ? ma.train_sentences : 0);
  f[kCombinedInFamily] = static_cast<double>(fam_a + fam_b);
  f[kCombinedInSubfamily] = static_cast<double>(sub_a + sub_b);
  f[kSameFamily] = fam ? 1.0 : 0.0;
  f[kSameSubfamily] = sub ? 1.0 : 0.0;
  const bool order = ma.word_order != WordOrder::UNKNOWN && ma.word_order == mb.word_order;
  f[kSameWordOrder] = order ? 1.0 : 0.0;
  f[kSamePolysynthesis] = ma.polysynthetic == mb.polysynthetic ? 1.0 : 0.0;
  if (texts.tokens) f[kTokenOverlap] = multiset_jaccard(texts.tokens->first, texts.tokens->second, OverlapUnit::token);
  if (texts.characters)
    f[kCharOverlap] = multiset_jaccard(texts.characters->first, texts.characters->second, OverlapUnit::character);
  const std::array<TypoKind, 4> kinds = {TypoKind::syntax, TypoKind::phonology, TypoKind::inventory,
                                         TypoKind::geography};
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const auto& va = ma.typo(kinds[i]);
    const auto& vb = mb.typo(kinds[i]);
    if (va && vb) f[kSyntacticDist + i] = typological_distance(*va, *vb);
  }
  return f;
}

using LangPair = std::pair<std::string, std::string>;

/// Per-language mean of each metric over every pair the language takes part in.
inline std::map<std::string, AlignmentMetrics> per_language_metrics(
    const std::map<LangPair, AlignmentMetrics>& pair_metrics, const std::vector<std::string>& languages = {}) {
  std::map<std::string, std::pair<AlignmentMetrics, std::size_t>> acc;
  for (const auto& [pair, m] : pair_metrics) {
    for (const auto* lang : {&pair.first, &pair.second}) {
      auto& [sum, count] = acc[*lang];
      for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i) sum[i] += m[i];
      ++count;
    }
  }
  for (const auto& lang : languages)
    if (!acc.count(lang)) detail::fail_input("per_language_metrics: language '" + lang + "' is in no pair");
  std::map<std::string, AlignmentMetrics> out;
  for (auto& [lang, entry] : acc) {
    AlignmentMetrics mean;
    for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i)
      mean[i] = entry.first[i] / static_cast<double>(entry.second);
    out.emplace(lang, mean);
  }
  return out;
}

}  // namespace xlg
