// xlg-synth: writes a small synthetic study (embeddings, corpus, language table).

#include <CLI11.hpp>

#include <iostream>

#include "xlg/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic multilingual study for trying out xlg"};
  xlg::SyntheticStudy s;
  std::string out;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--languages", s.languages, "Number of languages")->capture_default_str();
  app.add_option("--sentences", s.sentences, "Verses per language before dropping")->capture_default_str();
  app.add_option("--dim", s.dim, "Embedding dimension")->capture_default_str();
  app.add_option("--noise", s.noise, "Per-language embedding noise")->capture_default_str();
  app.add_option("--zero-shot", s.zero_shot, "Languages without training data")->capture_default_str();
  app.add_option("--seed", s.seed, "Random seed")->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    xlg::write_synthetic_study(s, out);
  } catch (const std::exception& e) {
    std::cerr << "xlg-synth: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
