#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "xlg/corpus.hpp"
#include "xlg/embedding.hpp"
#include "xlg/error.hpp"
#include "xlg/pipeline.hpp"

namespace xlg {

/// A small multilingual study with planted structure, for demos and end-to-end tests.
/// Languages fall into two word-order groups (verb-initial / subject-initial); each group
/// stretches the shared latent space with its own spectrum, so same-group pairs are more
/// isomorphic. Families cut across groups, and the first `zero_shot` languages have no
/// training data.
struct SyntheticStudy {
  std::size_t languages = 6;
  std::size_t sentences = 120;
  std::size_t dim = 16;
  double noise = 0.1;
  std::size_t zero_shot = 2;
  std::size_t missing_per_language = 3;  // verses dropped from each language (distractor rows)
  std::uint64_t seed = 1;
};

namespace detail {

inline std::string lang_code(std::size_t i) {
  std::string s = "l";
  s += static_cast<char>('a' + (i / 26) % 26);
  s += static_cast<char>('a' + i % 26);
  return s;
}

inline std::string synthetic_word(std::mt19937_64& rng) {
  static const std::string letters = "aeioubdgklmnprstvz";
  std::string w;
  const std::size_t len = 2 + rng() % 5;
  for (std::size_t i = 0; i < len; ++i) w += letters[rng() % letters.size()];
  return w;
}

inline std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace detail

/// Writes `dir/embeddings/<lang>.xemb`, `dir/corpus/<lang>.tsv` and `dir/languages.tsv`.
inline void write_synthetic_study(const SyntheticStudy& s, const std::filesystem::path& dir) {
  if (s.languages < 2 || s.sentences < 8 || s.dim < 2) detail::fail_input("synthetic: study too small");
  if (s.missing_per_language * 2 >= s.sentences) detail::fail_input("synthetic: too many missing verses");
  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> nd;
  const auto n = static_cast<Eigen::Index>(s.sentences);
  const auto d = static_cast<Eigen::Index>(s.dim);
  RowMatrix latent(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) latent(i, j) = nd(rng);

  // Per-group spectra: one decays geometrically, the other is flat-ish.
  std::vector<Eigen::VectorXd> stretch(2, Eigen::VectorXd(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    stretch[0](j) = std::pow(0.8, static_cast<double>(j));
    stretch[1](j) = 1.0 / (1.0 + 0.05 * static_cast<double>(j));
  }

  const std::size_t n_families = std::max<std::size_t>(2, s.languages / 3);
  std::vector<std::vector<double>> family_syntax(n_families), family_phon(n_families), family_inv(n_families);
  for (std::size_t f = 0; f < n_families; ++f)
    for (auto* v : {&family_syntax[f], &family_phon[f], &family_inv[f]})
      for (int j = 0; j < 8; ++j) v->push_back(nd(rng));

  // Shared concept lexicon: one word per (family, concept); languages mutate some words.
  const std::size_t n_concepts = 60;
  std::vector<std::vector<std::string>> family_lexicon(n_families);
  for (auto& lex : family_lexicon)
    for (std::size_t c = 0; c < n_concepts; ++c) lex.push_back(detail::synthetic_word(rng));
  std::vector<std::vector<std::size_t>> sentence_concepts(s.sentences);
  for (auto& sc : sentence_concepts) {
    const std::size_t len = 4 + rng() % 6;
    for (std::size_t w = 0; w < len; ++w) sc.push_back(rng() % n_concepts);
  }

  std::filesystem::create_directories(dir / "embeddings");
  std::filesystem::create_directories(dir / "corpus");
  std::ofstream table(dir / "languages.tsv", std::ios::binary);
  table << "lang\tfamily\tsubfamily\tword_order\tpolysynthetic\ttrain_sentences\tsyntax_vec\tphonology_vec\t"
           "inventory_vec\tgeo_vec\n";
  for (std::size_t l = 0; l < s.languages; ++l) {
    const std::string lang = detail::lang_code(l);
    const std::size_t group = l % 2;
    const std::size_t family = (l / 2) % n_families;
    const std::size_t subfamily = l % 3;

    RowMatrix e(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < d; ++j) e(i, j) = latent(i, j) * stretch[group](j) + s.noise * nd(rng);
    // Drop a few verses so every pair has unshared rows.
    std::vector<std::string> ids;
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < s.sentences; ++i) {
      if ((i + l) % (s.sentences / std::max<std::size_t>(1, s.missing_per_language)) == 0 &&
          s.missing_per_language > 0)
        continue;
      ids.push_back("MAT_" + std::to_string(1 + i / 25) + "_" + std::to_string(1 + i % 25));
      keep.push_back(static_cast<Eigen::Index>(i));
    }
    RowMatrix kept(static_cast<Eigen::Index>(keep.size()), d);
    for (std::size_t r = 0; r < keep.size(); ++r) kept.row(static_cast<Eigen::Index>(r)) = e.row(keep[r]);
    save_embeddings_binary(EmbeddingMatrix(lang, std::move(kept), ids), dir / "embeddings" / (lang + ".xemb"));

    std::vector<std::string> lexicon = family_lexicon[family];
    for (auto& w : lexicon)
      if (rng() % 4 == 0) w = detail::synthetic_word(rng);
    std::ofstream doc(dir / "corpus" / (lang + ".tsv"), std::ios::binary);
    doc << "verse_id\ttext\n";
    for (std::size_t r = 0; r < keep.size(); ++r) {
      doc << ids[r] << '\t';
      const auto& sc = sentence_concepts[static_cast<std::size_t>(keep[r])];
      // Verb-initial languages emit the concepts in rotated order.
      for (std::size_t w = 0; w < sc.size(); ++w) {
        const std::size_t c = group == 0 ? sc[(w + 1) % sc.size()] : sc[w];
        doc << (w ? " " : "") << lexicon[c];
      }
      doc << '\n';
    }

    auto perturb = [&](const std::vector<double>& base) {
      std::vector<double> v = base;
      for (auto& x : v) x += 0.3 * nd(rng);
      return v;
    };
    const bool poly = l % 5 == 4;
    const std::uint64_t train = l < s.zero_shot ? 0 : 1000 * (1 + rng() % 50);
    table << lang << "\tF" << family << "\tS" << subfamily << '\t' << (group == 0 ? "VSO" : "SVO") << '\t'
          << (poly ? "true" : "false") << '\t' << train << '\t' << detail::join_doubles(perturb(family_syntax[family]))
          << '\t' << detail::join_doubles(perturb(family_phon[family])) << '\t'
          << detail::join_doubles(perturb(family_inv[family])) << '\t'
          << detail::join_doubles({nd(rng) + static_cast<double>(family), nd(rng), 1.0}) << '\n';
  }
}

}  // namespace xlg
