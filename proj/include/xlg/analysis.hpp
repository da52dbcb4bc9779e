#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xlg/alignment_metrics.hpp"
#include "xlg/corpus.hpp"
#include "xlg/error.hpp"
#include "xlg/features.hpp"
#include "xlg/pipeline.hpp"
#include "xlg/stats/anova.hpp"
#include "xlg/stats/correlation.hpp"
#include "xlg/stats/distributions.hpp"
#include "xlg/stats/pca.hpp"
#include "xlg/stats/regression.hpp"

namespace xlg {

using json = nlohmann::json;

struct AnalysisOptions {
  std::size_t folds = stats::kDefaultFolds;
  std::uint64_t seed = stats::kDefaultSeed;
  std::string control = "combined_sentences";  // covariate held constant for semi-partial r
  std::vector<std::string> factors = {"same_word_order", "same_polysynthesis"};
  std::vector<std::string> covariates = {"combined_sentences", "combined_in_family", "combined_in_subfamily"};
  std::size_t workers = 0;
};

/// Features joined with metrics on the language pair, after listwise deletion.
struct AnalysisData {
  std::vector<LangPair> pairs;
  Eigen::MatrixXd x;  // n x 13, kPairFeatureNames order
  Eigen::MatrixXd y;  // n x 5, kMetricNames order
  std::size_t dropped_incomplete = 0;
  std::size_t unmatched = 0;  // pairs present in only one of the two tables
};

inline AnalysisData join_features_metrics(const FeatureTable& features,
                                          const std::map<LangPair, AlignmentMetrics>& metrics) {
  AnalysisData d;
  std::vector<std::pair<const PairFeatureVector*, const AlignmentMetrics*>> rows;
  for (const auto& [pair, f] : features) {
    auto it = metrics.find(pair);
    if (it == metrics.end()) {
      ++d.unmatched;
      continue;
    }
    if (!f.complete()) {
      ++d.dropped_incomplete;
      continue;
    }
    d.pairs.push_back(pair);
    rows.emplace_back(&f, &it->second);
  }
  for (const auto& [pair, m] : metrics)
    if (!features.count(pair)) ++d.unmatched;
  const auto n = static_cast<Eigen::Index>(rows.size());
  d.x.resize(n, static_cast<Eigen::Index>(kNumPairFeatures));
  d.y.resize(n, static_cast<Eigen::Index>(AlignmentMetrics::size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [f, m] = rows[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < kNumPairFeatures; ++j) d.x(i, static_cast<Eigen::Index>(j)) = *(*f)[j];
    for (std::size_t j = 0; j < AlignmentMetrics::size(); ++j) d.y(i, static_cast<Eigen::Index>(j)) = (*m)[j];
  }
  return d;
}

namespace detail {

inline std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index j) {
  return std::vector<double>(m.col(j).data(), m.col(j).data() + m.rows());
}

inline bool constant_column(const Eigen::MatrixXd& m, Eigen::Index j) {
  return m.rows() == 0 || (m.col(j).array() == m(0, j)).all();
}

inline std::size_t feature_index(const std::string& name) {
  for (std::size_t i = 0; i < kNumPairFeatures; ++i)
    if (kPairFeatureNames[i] == name) return i;
  fail_input("unknown feature '" + name + "'");
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json metrics_json(const AlignmentMetrics& m) {
  json j = json::object();
  for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i) j[std::string(kMetricNames[i])] = m[i];
  return j;
}

inline json anova_json(const stats::AnovaResult& r) {
  return {{"f_stat", number_or_null(r.f_stat)},
          {"f_infinite", r.infinite_f()},
          {"p_value", r.p_value},
          {"eta_p2", r.eta_p2},
          {"ss_effect", r.ss_effect},
          {"ss_error", r.ss_error},
          {"df_effect", r.df_effect},
          {"df_error", r.df_error}};
}

inline double correlation_p(double r, std::size_t n) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  return stats::t_two_sided(r * std::sqrt(df / (1.0 - r * r)), df);
}

inline std::string level_name(double v) { return format_double(v); }

// Feature columns that vary across rows, in index order.
inline std::vector<std::size_t> informative_features(const Eigen::MatrixXd& x, json& notes) {
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < kNumPairFeatures; ++j) {
    if (constant_column(x, static_cast<Eigen::Index>(j)))
      notes.push_back("feature '" + std::string(kPairFeatureNames[j]) + "' is constant and was excluded");
    else
      keep.push_back(j);
  }
  return keep;
}

inline Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = x.col(static_cast<Eigen::Index>(cols[j]));
  return out;
}

inline json feature_names(const std::vector<std::size_t>& cols) {
  json out = json::array();
  for (auto c : cols) out.push_back(std::string(kPairFeatureNames[c]));
  return out;
}

// One-way ANOVA of every metric by the levels of a categorical column.
inline json grouped_anova(const std::vector<std::string>& labels, const Eigen::MatrixXd& y, bool with_tukey) {
  json per_metric = json::object();
  for (std::size_t m = 0; m < AlignmentMetrics::size(); ++m) {
    const auto groups = stats::group_by(column(y, static_cast<Eigen::Index>(m)), labels);
    json entry;
    json levels = json::array();
    std::vector<std::vector<double>> values;
    for (const auto& [level, vals] : groups) {
      double s = 0.0;
      for (double v : vals) s += v;
      levels.push_back({{"level", level}, {"n", vals.size()}, {"mean", s / static_cast<double>(vals.size())}});
      values.push_back(vals);
    }
    entry["groups"] = levels;
    try {
      entry["anova"] = anova_json(stats::anova_oneway(values));
    } catch (const std::exception& e) {
      entry["anova"] = nullptr;
      entry["skipped"] = e.what();
    }
    if (with_tukey && entry["anova"].is_object()) {
      try {
        json tk = json::array();
        std::vector<std::string> names;
        for (const auto& [level, vals] : groups) names.push_back(level);
        for (const auto& c : stats::tukey_hsd(values))
          tk.push_back({{"group_a", names[c.group_a]},
                        {"group_b", names[c.group_b]},
                        {"mean_diff", c.mean_diff},
                        {"q", c.q},
                        {"p_value", c.p_value}});
        entry["tukey"] = tk;
      } catch (const std::exception& e) {
        entry["tukey"] = nullptr;
        entry["tukey_skipped"] = e.what();
      }
    }
    per_metric[std::string(kMetricNames[m])] = entry;
  }
  return per_metric;
}

}  // namespace detail

inline json correlation_suite(const AnalysisData& d, const std::string& control, json& notes) {
  json corr = json::array();
  json semi = json::array();
  const auto n = static_cast<std::size_t>(d.x.rows());
  if (n < 3) {
    notes.push_back("fewer than 3 complete rows; correlations skipped");
    return {{"correlations", corr}, {"semipartial", semi}};
  }
  const auto ctrl = detail::feature_index(control);
  const auto ctrl_col = detail::column(d.x, static_cast<Eigen::Index>(ctrl));
  const bool ctrl_ok = !detail::constant_column(d.x, static_cast<Eigen::Index>(ctrl));
  if (!ctrl_ok) notes.push_back("control feature '" + control + "' is constant; semi-partial correlations skipped");
  for (std::size_t f = 0; f < kNumPairFeatures; ++f) {
    const bool f_ok = !detail::constant_column(d.x, static_cast<Eigen::Index>(f));
    const auto fx = detail::column(d.x, static_cast<Eigen::Index>(f));
    for (std::size_t m = 0; m < AlignmentMetrics::size(); ++m) {
      const auto my = detail::column(d.y, static_cast<Eigen::Index>(m));
      const bool m_ok = !detail::constant_column(d.y, static_cast<Eigen::Index>(m));
      json row = {{"feature", std::string(kPairFeatureNames[f])}, {"metric", std::string(kMetricNames[m])}, {"n", n}};
      if (f_ok && m_ok) {
        const double r = stats::pearson(fx, my);
        row["r"] = r;
        row["p_value"] = detail::correlation_p(r, n);
        if (ctrl_ok && f != ctrl) {
          const double r23 = stats::pearson(my, ctrl_col);
          const double r13 = stats::pearson(fx, ctrl_col);
          json s = {{"feature", row["feature"]}, {"metric", row["metric"]}, {"control", control}};
          s["r"] = std::abs(r23) < 1.0 ? json(stats::semipartial(r, r13, r23)) : json(nullptr);
          semi.push_back(s);
        }
      } else {
        row["r"] = nullptr;
        row["p_value"] = nullptr;
      }
      corr.push_back(row);
    }
  }
  return {{"correlations", corr}, {"semipartial", semi}};
}

/// The analyze report for one mode.
inline json run_analysis(const std::string& mode, const FeatureTable& features,
                         const std::map<LangPair, AlignmentMetrics>& metrics, const AnalysisOptions& opt = {}) {
  const auto& modes = analysis_modes();
  if (std::find(modes.begin(), modes.end(), mode) == modes.end()) detail::fail_input("analyze: unknown mode '" + mode + "'");
  const AnalysisData d = join_features_metrics(features, metrics);
  if (d.x.rows() == 0)
    detail::fail_input("analyze: no language pair has both complete features and metrics (" +
                       std::to_string(d.dropped_incomplete) + " incomplete, " + std::to_string(d.unmatched) +
                       " unmatched)");
  json report = {{"command", "analyze"},
                 {"mode", mode},
                 {"n_rows", d.x.rows()},
                 {"dropped_rows", d.dropped_incomplete},
                 {"unmatched_pairs", d.unmatched},
                 {"folds", opt.folds},
                 {"seed", opt.seed}};
  json notes = json::array();
  json results;
  if (mode == "corr") {
    results = correlation_suite(d, opt.control, notes);
  } else if (mode == "search" || mode == "ablate" || mode == "pcr") {
    const auto cols = detail::informative_features(d.x, notes);
    if (cols.empty()) detail::fail_input("analyze: no informative features");
    const Eigen::MatrixXd x = detail::select_columns(d.x, cols);
    report["features"] = detail::feature_names(cols);
    json per_metric = json::object();
    if (mode == "search") {
      std::vector<stats::FeatureSearchResult> found;
      for (std::size_t m = 0; m < AlignmentMetrics::size(); ++m) {
        auto r = stats::exhaustive_feature_search(x, d.y.col(static_cast<Eigen::Index>(m)), opt.folds, opt.seed,
                                                  opt.workers);
        json best = json::array();
        for (auto c : r.best) best.push_back(std::string(kPairFeatureNames[cols[c]]));
        per_metric[std::string(kMetricNames[m])] = {{"best", best},
                                                    {"adj_r2", r.best_adj_r2},
                                                    {"models_evaluated", r.models_evaluated},
                                                    {"rank_deficient", r.rank_deficient}};
        found.push_back(std::move(r));
      }
      const auto tallies = stats::tally_best_features(found, cols.size());
      json t = json::object();
      for (std::size_t j = 0; j < cols.size(); ++j) t[std::string(kPairFeatureNames[cols[j]])] = tallies[j];
      results = {{"per_metric", per_metric}, {"tallies", t}};
    } else if (mode == "ablate") {
      std::vector<stats::AblationResult> runs;
      for (std::size_t m = 0; m < AlignmentMetrics::size(); ++m) {
        auto r = stats::ablation_single_step(x, d.y.col(static_cast<Eigen::Index>(m)), opt.folds, opt.seed,
                                             opt.workers);
        json entries = json::array();
        for (const auto& e : r.entries)
          entries.push_back({{"feature", std::string(kPairFeatureNames[cols[e.feature]])},
                             {"delta", e.delta},
                             {"rank", e.rank}});
        per_metric[std::string(kMetricNames[m])] = {{"baseline_adj_r2", r.baseline_adj_r2}, {"entries", entries}};
        runs.push_back(std::move(r));
      }
      const auto avg = stats::average_ranks(runs);
      std::vector<std::size_t> order(avg.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return avg[a] < avg[b]; });
      json ranks = json::array();
      for (auto j : order) ranks.push_back({{"feature", std::string(kPairFeatureNames[cols[j]])}, {"average_rank", avg[j]}});
      results = {{"per_metric", per_metric}, {"average_ranks", ranks}};
    } else {
      for (std::size_t m = 0; m < AlignmentMetrics::size(); ++m) {
        const auto r = stats::pcr(x, d.y.col(static_cast<Eigen::Index>(m)), cols.size(), opt.folds, opt.seed);
        per_metric[std::string(kMetricNames[m])] = {
            {"cv_adj_r2", r.cv_adj_r2}, {"train_r2", r.train_r2}, {"best_components", r.best_components}};
      }
      results = {{"per_metric", per_metric}};
    }
  } else if (mode == "pca") {
    const auto cols = detail::informative_features(d.x, notes);
    if (cols.empty()) detail::fail_input("analyze: no informative features");
    report["features"] = detail::feature_names(cols);
    const auto p = stats::pca(detail::select_columns(d.x, cols), true);
    json comps = json::array();
    for (Eigen::Index c = 0; c < p.components.cols(); ++c) {
      json loadings = json::object();
      for (std::size_t j = 0; j < cols.size(); ++j)
        loadings[std::string(kPairFeatureNames[cols[j]])] = p.components(static_cast<Eigen::Index>(j), c);
      comps.push_back({{"component", c + 1},
                       {"explained_variance", p.explained_variance(c)},
                       {"explained_ratio", p.explained_ratio(c)},
                       {"loadings", loadings}});
    }
    results = {{"standardized", true}, {"components", comps}};
  } else if (mode == "anova" || mode == "ancova") {
    json per_factor = json::object();
    std::vector<std::size_t> cov_idx;
    if (mode == "ancova") {
      for (const auto& c : opt.covariates) cov_idx.push_back(detail::feature_index(c));
      report["covariates"] = opt.covariates;
    }
    const std::vector<std::string> factors =
        mode == "anova" ? std::vector<std::string>{"same_family", "same_subfamily", "same_word_order", "same_polysynthesis"}
                        : opt.factors;
    for (const auto& fname : factors) {
      const auto f = static_cast<Eigen::Index>(detail::feature_index(fname));
      if (detail::constant_column(d.x, f)) {
        notes.push_back("factor '" + fname + "' has a single level; skipped");
        continue;
      }
      std::vector<std::string> labels;
      for (Eigen::Index i = 0; i < d.x.rows(); ++i) labels.push_back(detail::level_name(d.x(i, f)));
      if (mode == "anova") {
        per_factor[fname] = detail::grouped_anova(labels, d.y, false);
        continue;
      }
      const Eigen::MatrixXd cov = detail::select_columns(d.x, cov_idx);
      json per_metric = json::object();
      for (std::size_t m = 0; m < AlignmentMetrics::size(); ++m) {
        try {
          per_metric[std::string(kMetricNames[m])] = {
              {"ancova", detail::anova_json(stats::ancova(d.y.col(static_cast<Eigen::Index>(m)), labels, cov))}};
        } catch (const std::exception& e) {
          per_metric[std::string(kMetricNames[m])] = {{"ancova", nullptr}, {"skipped", e.what()}};
        }
      }
      per_factor[fname] = per_metric;
    }
    results = {{"per_factor", per_factor}};
  } else {
    detail::fail_input("analyze: unknown mode '" + mode + "'");
  }
  report["results"] = results;
  report["notes"] = notes;
  return report;
}

/// Zero-shot languages (no training sentences) and double zero-shot pairs (both members
/// zero-shot), each analysed separately. `features` supplies pair predictors for the
/// double zero-shot correlations; when absent they are derived from the language table.
inline json run_zero_shot_analysis(const std::map<LangPair, AlignmentMetrics>& metrics, const LanguageTable& table,
                                   const FeatureTable* features = nullptr) {
  json report = {{"command", "zero-shot"}};
  json notes = json::array();
  std::vector<std::string> zero;
  for (const auto& [lang, meta] : table)
    if (meta.train_sentences == 0) zero.push_back(lang);
  report["zero_shot_languages"] = zero;

  // Simple zero-shot: per-language means over every pair the language appears in.
  std::map<LangPair, AlignmentMetrics> known;
  for (const auto& [pair, m] : metrics)
    if (table.count(pair.first) && table.count(pair.second)) known.emplace(pair, m);
  const auto per_lang = per_language_metrics(known);
  json lang_rows = json::array();
  std::vector<std::string> order_labels, poly_labels;
  std::vector<AlignmentMetrics> rows;
  for (const auto& lang : zero) {
    auto it = per_lang.find(lang);
    if (it == per_lang.end()) continue;
    const auto& meta = table.at(lang);
    lang_rows.push_back({{"lang", lang},
                         {"word_order", std::string(to_string(meta.word_order))},
                         {"polysynthetic", meta.polysynthetic},
                         {"metrics", detail::metrics_json(it->second)}});
    rows.push_back(it->second);
    poly_labels.push_back(meta.polysynthetic ? "polysynthetic" : "other");
    order_labels.push_back(std::string(to_string(meta.word_order)));
  }
  json simple = {{"n", rows.size()}, {"languages", lang_rows}};
  if (rows.empty()) {
    notes.push_back("simple zero-shot partition is empty; analyses skipped");
  } else {
    Eigen::MatrixXd y(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(AlignmentMetrics::size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t m = 0; m < AlignmentMetrics::size(); ++m)
        y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = rows[i][m];
    // Word order: languages with UNKNOWN order are left out of this factor.
    std::vector<std::string> wo;
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < order_labels.size(); ++i)
      if (order_labels[i] != "UNKNOWN") {
        wo.push_back(order_labels[i]);
        keep.push_back(static_cast<Eigen::Index>(i));
      }
    Eigen::MatrixXd y_wo(static_cast<Eigen::Index>(keep.size()), y.cols());
    for (std::size_t i = 0; i < keep.size(); ++i) y_wo.row(static_cast<Eigen::Index>(i)) = y.row(keep[i]);
    simple["word_order"] = detail::grouped_anova(wo, y_wo, true);
    simple["polysynthesis"] = detail::grouped_anova(poly_labels, y, false);
  }
  report["simple_zero_shot"] = simple;

  // Double zero-shot pairs.
  FeatureTable derived;
  if (!features) {
    LanguageTable sub;
    for (const auto& lang : zero) sub.emplace(lang, table.at(lang));
    derived = compute_feature_table(sub, nullptr, nullptr);
    // Aggregates must come from the whole table, not only the zero-shot subset.
    const auto agg = training_aggregates(table);
    for (auto& [pair, f] : derived) f = pair_features(table.at(pair.first), table.at(pair.second), agg);
    features = &derived;
  }
  std::map<LangPair, AlignmentMetrics> dz_metrics;
  for (const auto& [pair, m] : known)
    if (table.at(pair.first).train_sentences == 0 && table.at(pair.second).train_sentences == 0)
      dz_metrics.emplace(pair, m);
  json dz = {{"n", dz_metrics.size()}};
  if (dz_metrics.empty()) {
    notes.push_back("double zero-shot partition is empty; analyses skipped");
  } else {
    // Correlations use every feature that is present for all double zero-shot pairs.
    std::array<bool, kNumPairFeatures> available{};
    available.fill(true);
    for (const auto& [pair, m] : dz_metrics) {
      auto it = features->find(pair);
      for (std::size_t j = 0; j < kNumPairFeatures; ++j)
        available[j] = available[j] && it != features->end() && (*it).second[j].has_value();
    }
    json corr = json::array();
    std::vector<LangPair> pairs;
    for (const auto& [pair, m] : dz_metrics) pairs.push_back(pair);
    const auto n = pairs.size();
    for (std::size_t f = 0; f < kNumPairFeatures; ++f) {
      if (!available[f]) continue;
      std::vector<double> fx;
      for (const auto& p : pairs) fx.push_back(*features->at(p)[f]);
      const bool f_ok = n >= 3 && std::any_of(fx.begin(), fx.end(), [&](double v) { return v != fx[0]; });
      for (std::size_t m = 0; m < AlignmentMetrics::size(); ++m) {
        std::vector<double> my;
        for (const auto& p : pairs) my.push_back(dz_metrics.at(p)[m]);
        const bool m_ok = std::any_of(my.begin(), my.end(), [&](double v) { return v != my[0]; });
        json row = {{"feature", std::string(kPairFeatureNames[f])}, {"metric", std::string(kMetricNames[m])}, {"n", n}};
        if (f_ok && m_ok) {
          const double r = stats::pearson(fx, my);
          row["r"] = r;
          row["p_value"] = detail::correlation_p(r, n);
        } else {
          row["r"] = nullptr;
          row["p_value"] = nullptr;
        }
        corr.push_back(row);
      }
    }
    dz["correlations"] = corr;
    Eigen::MatrixXd y(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(AlignmentMetrics::size()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t m = 0; m < AlignmentMetrics::size(); ++m)
        y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = dz_metrics.at(pairs[i])[m];
    json factors = json::object();
    for (auto f : {kSameWordOrder, kSamePolysynthesis}) {
      if (!available[f]) continue;
      std::vector<std::string> labels;
      for (const auto& p : pairs) labels.push_back(detail::level_name(*features->at(p)[f]));
      factors[std::string(kPairFeatureNames[f])] = detail::grouped_anova(labels, y, false);
    }
    dz["anova"] = factors;
  }
  report["double_zero_shot"] = dz;
  report["notes"] = notes;
  return report;
}

/// First constituent of the basic word order: "S", "V" or "O"; empty when unknown.
inline std::string word_order_class(WordOrder w) {
  if (w == WordOrder::UNKNOWN) return {};
  return std::string(1, to_string(w)[0]);
}

/// Side-by-side metrics of two runs over the same pairs, with deltas (b - a). With a
/// language table, pairs are also grouped by whether both languages share the initial
/// constituent of their basic word order.
inline json run_case_study_compare(const std::map<LangPair, AlignmentMetrics>& a,
                                   const std::map<LangPair, AlignmentMetrics>& b, const LanguageTable* table = nullptr) {
  if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
        return x.first == y.first;
      }))
    detail::fail_input("compare: the two runs cover different language pairs");
  json report = {{"command", "compare"}, {"n_pairs", a.size()}};
  json pairs = json::array();
  AlignmentMetrics mean_delta;
  for (const auto& [pair, ma] : a) {
    const auto& mb = b.at(pair);
    AlignmentMetrics delta;
    for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i) {
      delta[i] = mb[i] - ma[i];
      mean_delta[i] += delta[i];
    }
    pairs.push_back({{"lang_a", pair.first},
                     {"lang_b", pair.second},
                     {"a", detail::metrics_json(ma)},
                     {"b", detail::metrics_json(mb)},
                     {"delta", detail::metrics_json(delta)}});
  }
  if (!a.empty())
    for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i) mean_delta[i] /= static_cast<double>(a.size());
  report["pairs"] = pairs;
  report["mean_delta"] = detail::metrics_json(mean_delta);
  if (table) {
    struct Group {
      std::size_t n = 0;
      AlignmentMetrics sa, sb;
    };
    std::map<std::string, Group> groups{{"similar", {}}, {"different", {}}};
    std::size_t excluded = 0;
    for (const auto& [pair, ma] : a) {
      auto ia = table->find(pair.first);
      auto ib = table->find(pair.second);
      const std::string ca = ia == table->end() ? "" : word_order_class(ia->second.word_order);
      const std::string cb = ib == table->end() ? "" : word_order_class(ib->second.word_order);
      if (ca.empty() || cb.empty()) {
        ++excluded;
        continue;
      }
      auto& g = groups[ca == cb ? "similar" : "different"];
      ++g.n;
      for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i) {
        g.sa[i] += ma[i];
        g.sb[i] += b.at(pair)[i];
      }
    }
    json grouping = json::object();
    for (auto& [name, g] : groups) {
      json entry = {{"n", g.n}};
      if (g.n > 0) {
        for (std::size_t i = 0; i < AlignmentMetrics::size(); ++i) {
          g.sa[i] /= static_cast<double>(g.n);
          g.sb[i] /= static_cast<double>(g.n);
        }
        entry["mean_a"] = detail::metrics_json(g.sa);
        entry["mean_b"] = detail::metrics_json(g.sb);
      } else {
        entry["mean_a"] = nullptr;
        entry["mean_b"] = nullptr;
      }
      grouping[name] = entry;
    }
    grouping["excluded_unknown"] = excluded;
    report["word_order_groups"] = grouping;
  }
  return report;
}

}  // namespace xlg
