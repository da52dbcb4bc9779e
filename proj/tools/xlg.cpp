// xlg: cross-lingual alignment and isomorphism analysis.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xlg/alignment_metrics.hpp"
#include "xlg/analysis.hpp"
#include "xlg/corpus.hpp"
#include "xlg/embedding.hpp"
#include "xlg/mining.hpp"
#include "xlg/parallel.hpp"
#include "xlg/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

// Writes to `path`, or stdout for "-" / empty.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) xlg::detail::fail_input("cannot write " + path);
  write(out);
}

void emit_json(const std::string& path, const xlg::json& j) {
  emit(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

std::size_t workers_for(std::size_t requested) {
  const std::size_t cap = xlg::worker_count();
  return requested == 0 ? cap : std::min(requested, cap);
}

void report_failures(const std::vector<std::string>& failures) {
  for (const auto& f : failures) std::cerr << "xlg: skipped " << f << '\n';
}

struct MineArgs {
  std::string src, tgt, out, direction = "intersection";
  std::size_t k = xlg::kDefaultMarginK;
};

int run_mine(const MineArgs& a) {
  const auto src = xlg::load_embeddings(a.src);
  const auto tgt = xlg::load_embeddings(a.tgt);
  const std::size_t workers = workers_for(0);
  const auto mined = a.direction == "forward" ? xlg::mine_direction(src, tgt, a.k, workers)
                                              : xlg::mine_intersection(src, tgt, a.k, workers);
  emit(a.out, [&](std::ostream& out) {
    out << "rowA\trowB\tmargin\n";
    for (const auto& p : mined.pairs) out << p.a << '\t' << p.b << '\t' << xlg::format_double(p.margin) << '\n';
  });
  return kExitOk;
}

struct MetricsArgs {
  std::vector<std::string> pair;
  std::string config, languages, out;
  std::vector<std::string> embeddings;
  std::size_t k = xlg::kDefaultMarginK;
  std::size_t gh_max_points = xlg::kDefaultGhMaxPoints;
};

int run_metrics(const MetricsArgs& a) {
  if (!a.pair.empty()) {
    const auto ea = xlg::load_embeddings(a.pair[0]);
    const auto eb = xlg::load_embeddings(a.pair[1]);
    const auto bitext = xlg::align_pair(ea, eb);
    const auto m = xlg::compute_alignment_metrics(bitext, {a.k, a.gh_max_points, workers_for(0)});
    xlg::json j = xlg::detail::metrics_json(m);
    j["command"] = "metrics";
    j["lang_a"] = ea.lang();
    j["lang_b"] = eb.lang();
    j["n_gold"] = bitext.gold.size();
    j["k"] = a.k;
    j["gh_max_points"] = a.gh_max_points;
    emit_json(a.out, j);
    return kExitOk;
  }
  xlg::RunConfig cfg;
  if (!a.config.empty()) {
    cfg = xlg::load_config(a.config);
  } else {
    if (a.embeddings.empty()) xlg::detail::fail_input("metrics: give --pair, --config or --embeddings");
    for (const auto& e : a.embeddings) cfg.embeddings.emplace_back(e);
    if (!a.languages.empty()) cfg.languages = a.languages;
    cfg.k = a.k;
    cfg.gh_max_points = a.gh_max_points;
    cfg.validate();
  }
  cfg.workers = workers_for(cfg.workers);
  const auto run = xlg::run_pair_metrics(cfg);
  emit(a.out, [&](std::ostream& out) { xlg::write_metrics_csv(out, run.rows); });
  report_failures(run.failures);
  return run.partial() ? kExitPartial : kExitOk;
}

struct FeaturesArgs {
  std::string languages, out;
  std::vector<std::string> corpora;
  std::size_t char_corpus = 0, token_corpus = 0;
};

xlg::FeatureTable build_features(const xlg::LanguageTable& table, const std::vector<xlg::Corpus>& corpora,
                                 std::size_t char_idx, std::size_t token_idx) {
  if (!corpora.empty() && (char_idx >= corpora.size() || token_idx >= corpora.size()))
    xlg::detail::fail_input("features: overlap corpus index out of range");
  const xlg::Corpus* c = corpora.empty() ? nullptr : &corpora[char_idx];
  const xlg::Corpus* t = corpora.empty() ? nullptr : &corpora[token_idx];
  return xlg::compute_feature_table(table, c, t);
}

int run_features(const FeaturesArgs& a) {
  const auto table = xlg::load_language_table(a.languages);
  std::vector<xlg::Corpus> corpora;
  for (const auto& c : a.corpora) corpora.push_back(xlg::load_corpus(c));
  const auto features = build_features(table, corpora, a.char_corpus, a.token_corpus);
  emit(a.out, [&](std::ostream& out) { xlg::write_features_csv(out, features); });
  return kExitOk;
}

struct AnalyzeArgs {
  std::string features, metrics, mode, out, control = "combined_sentences";
  std::uint64_t seed = 17;
  std::size_t folds = 10;
};

int run_analyze(const AnalyzeArgs& a) {
  xlg::AnalysisOptions opt;
  opt.seed = a.seed;
  opt.folds = a.folds;
  opt.control = a.control;
  opt.workers = workers_for(0);
  emit_json(a.out, xlg::run_analysis(a.mode, xlg::load_features_csv(a.features), xlg::load_metrics_csv(a.metrics), opt));
  return kExitOk;
}

struct ZeroShotArgs {
  std::string metrics, languages, features, out;
};

int run_zero_shot(const ZeroShotArgs& a) {
  const auto table = xlg::load_language_table(a.languages);
  std::optional<xlg::FeatureTable> features;
  if (!a.features.empty()) features = xlg::load_features_csv(a.features);
  emit_json(a.out, xlg::run_zero_shot_analysis(xlg::load_metrics_csv(a.metrics), table,
                                               features ? &*features : nullptr));
  return kExitOk;
}

struct CompareArgs {
  std::string a, b, languages, out;
};

int run_compare(const CompareArgs& a) {
  std::optional<xlg::LanguageTable> table;
  if (!a.languages.empty()) table = xlg::load_language_table(a.languages);
  emit_json(a.out, xlg::run_case_study_compare(xlg::load_metrics_csv(a.a), xlg::load_metrics_csv(a.b),
                                               table ? &*table : nullptr));
  return kExitOk;
}

struct ReportArgs {
  std::string config, metrics, features, out_dir;
};

// Full run from a config file: metrics, features, configured analyses and plot data.
int run_full(const std::string& config_path) {
  auto cfg = xlg::load_config(config_path);
  cfg.workers = workers_for(cfg.workers);
  fs::create_directories(cfg.out_dir);
  const auto run = xlg::run_pair_metrics(cfg);
  emit((cfg.out_dir / "metrics.csv").string(), [&](std::ostream& out) { xlg::write_metrics_csv(out, run.rows); });
  report_failures(run.failures);
  std::map<xlg::LangPair, xlg::AlignmentMetrics> metrics(run.rows.begin(), run.rows.end());
  bool partial = run.partial();
  if (cfg.languages) {
    const auto table = xlg::load_language_table(*cfg.languages);
    std::vector<xlg::Corpus> corpora;
    for (const auto& c : cfg.corpora) corpora.push_back(xlg::load_corpus(c));
    const auto features = build_features(table, corpora, cfg.char_overlap_corpus, cfg.token_overlap_corpus);
    emit((cfg.out_dir / "features.csv").string(), [&](std::ostream& out) { xlg::write_features_csv(out, features); });
    xlg::AnalysisOptions opt;
    opt.folds = cfg.folds;
    if (cfg.seed) opt.seed = *cfg.seed;
    opt.workers = cfg.workers;
    // A numerically degenerate analysis (e.g. a rank-deficient design) skips only itself.
    for (const auto& mode : cfg.analyses) {
      try {
        emit_json((cfg.out_dir / ("analysis_" + mode + ".json")).string(),
                  xlg::run_analysis(mode, features, metrics, opt));
      } catch (const xlg::NumericError& e) {
        std::cerr << "xlg: analysis " << mode << " skipped: " << e.what() << '\n';
        partial = true;
      }
    }
    xlg::write_plot_data(features, metrics, cfg.out_dir / "plots");
  } else if (!cfg.analyses.empty()) {
    std::cerr << "xlg: no language table configured; analyses skipped\n";
    partial = true;
  }
  return partial ? kExitPartial : kExitOk;
}

int run_report(const ReportArgs& a) {
  if (!a.config.empty()) return run_full(a.config);
  if (a.metrics.empty() || a.features.empty() || a.out_dir.empty())
    xlg::detail::fail_input("report: give --config, or --metrics, --features and --out-dir");
  const auto files = xlg::write_plot_data(xlg::load_features_csv(a.features), xlg::load_metrics_csv(a.metrics), a.out_dir);
  for (const auto& f : files) std::cout << f.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-lingual alignment and isomorphism analysis.\n"
               "Worker threads are capped by the XLG_THREADS environment variable."};
  app.require_subcommand(1);

  MineArgs mine;
  auto* mine_cmd = app.add_subcommand("mine", "Margin-based bitext mining between two embedding matrices");
  mine_cmd->add_option("--src", mine.src, "Source embeddings (.xemb binary, anything else text)")->required();
  mine_cmd->add_option("--tgt", mine.tgt, "Target embeddings")->required();
  mine_cmd->add_option("--k", mine.k, "Margin neighbourhood size")->capture_default_str()->check(CLI::PositiveNumber);
  mine_cmd->add_option("--direction", mine.direction, "forward or intersection")
      ->capture_default_str()
      ->check(CLI::IsMember({"forward", "intersection"}));
  mine_cmd->add_option("--out", mine.out, "Output TSV (rowA, rowB, margin); stdout if omitted");

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "Alignment and isomorphism metrics for one pair or a sweep");
  auto* pair_opt = metrics_cmd->add_option("--pair", metrics.pair, "Two embedding files; writes JSON")->expected(2);
  auto* cfg_opt = metrics_cmd->add_option("--config", metrics.config, "Run config; writes CSV over all pairs");
  auto* emb_opt = metrics_cmd->add_option("--embeddings", metrics.embeddings,
                                          "Embedding directory per document (repeatable); writes CSV");
  metrics_cmd->add_option("--languages", metrics.languages, "Language table restricting the sweep");
  metrics_cmd->add_option("--k", metrics.k, "Margin neighbourhood size")->capture_default_str()->check(CLI::PositiveNumber);
  metrics_cmd->add_option("--gh-max-points", metrics.gh_max_points, "Rows used for the persistence diagrams")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  metrics_cmd->add_option("--out", metrics.out, "Output path; stdout if omitted");
  pair_opt->excludes(cfg_opt)->excludes(emb_opt);
  cfg_opt->excludes(emb_opt);

  FeaturesArgs features;
  auto* features_cmd = app.add_subcommand("features", "The 13 language-pair predictors as CSV");
  features_cmd->add_option("--languages", features.languages, "Language table TSV")->required();
  features_cmd->add_option("--corpus", features.corpora,
                           "Corpus directory of <lang>.tsv documents (repeatable). Token overlap expects "
                           "pre-tokenized, whitespace-separated text");
  features_cmd->add_option("--char-corpus", features.char_corpus, "Index of the --corpus used for char overlap")
      ->capture_default_str();
  features_cmd->add_option("--token-corpus", features.token_corpus, "Index of the --corpus used for token overlap")
      ->capture_default_str();
  features_cmd->add_option("--out", features.out, "Output CSV; stdout if omitted");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Statistical analysis of features against metrics");
  analyze_cmd->add_option("--features", analyze.features, "Features CSV")->required();
  analyze_cmd->add_option("--metrics", analyze.metrics, "Metrics CSV")->required();
  analyze_cmd->add_option("--mode", analyze.mode, "Analysis")
      ->required()
      ->check(CLI::IsMember(xlg::analysis_modes()));
  analyze_cmd->add_option("--seed", analyze.seed, "Cross-validation shuffle seed")->capture_default_str();
  analyze_cmd->add_option("--folds", analyze.folds, "Cross-validation folds")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}));
  analyze_cmd->add_option("--control", analyze.control, "Covariate for semi-partial correlations (corr mode)")
      ->capture_default_str();
  analyze_cmd->add_option("--out", analyze.out, "Output JSON; stdout if omitted");

  ZeroShotArgs zero;
  auto* zero_cmd = app.add_subcommand("zero-shot", "Analyses over zero-shot languages and double zero-shot pairs");
  zero_cmd->add_option("--metrics", zero.metrics, "Metrics CSV")->required();
  zero_cmd->add_option("--languages", zero.languages, "Language table TSV")->required();
  zero_cmd->add_option("--features", zero.features, "Features CSV (default: derived from the language table)");
  zero_cmd->add_option("--out", zero.out, "Output JSON; stdout if omitted");

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "Side-by-side comparison of two metric runs");
  compare_cmd->add_option("--a", compare.a, "Baseline metrics CSV")->required();
  compare_cmd->add_option("--b", compare.b, "Variant metrics CSV")->required();
  compare_cmd->add_option("--languages", compare.languages, "Language table for word-order grouping");
  compare_cmd->add_option("--out", compare.out, "Output JSON; stdout if omitted");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Plot-data CSVs, or a full run from a config file");
  report_cmd->add_option("--config", report.config, "Run config: metrics, features, analyses and plots into out_dir");
  report_cmd->add_option("--metrics", report.metrics, "Metrics CSV");
  report_cmd->add_option("--features", report.features, "Features CSV");
  report_cmd->add_option("--out-dir", report.out_dir, "Directory for plot-data CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*mine_cmd) return run_mine(mine);
    if (*metrics_cmd) return run_metrics(metrics);
    if (*features_cmd) return run_features(features);
    if (*analyze_cmd) return run_analyze(analyze);
    if (*zero_cmd) return run_zero_shot(zero);
    if (*compare_cmd) return run_compare(compare);
    if (*report_cmd) return run_report(report);
  } catch (const std::exception& e) {
    std::cerr << "xlg: error: " << e.what() << '\n';
    return kExitFatal;
  }
  return kExitFatal;
}
