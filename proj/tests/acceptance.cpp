// Acceptance suite. Runs against the built gdim binary and the shipped
// lexicon: acceptance <path-to-gdim> <lexicon-dir>. Prints one line per
// criterion and exits nonzero if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdim/annotate.hpp"
#include "gdim/apps.hpp"
#include "gdim/classifier.hpp"
#include "gdim/dataset.hpp"
#include "gdim/ngram_lm.hpp"
#include "gdim/random.hpp"
#include "gdim/stats.hpp"
#include "gdim/textkit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gdim;

namespace {

std::string g_binary;
std::string g_lexicon_dir;
fs::path g_work;

int run_cmd(const std::string& args) {
  std::string cmd = g_binary + " " + args + " > /dev/null";
  return std::system(cmd.c_str());
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

bool close_to(double a, double b, double tol) {
  return std::fabs(a - b) <= tol;
}

Example labeled(const std::string& text, Dimension dim, GenderLabel label) {
  Example ex = Example::with_defaults(text, "fixture");
  ex.labels[dim] = label;
  ex.label_origin[dim] = Origin::Gold;
  return ex;
}

// Axis-aligned hand-wired model (embed_dim 3): masculine scores come from
// component 0, feminine from 1, neutral from 2.
BiEncoderModel wired_model(std::set<Dimension> tasks) {
  BiEncoderModel model;
  model.config.tasks = std::move(tasks);
  model.config.feature_dim = 1 << 12;
  model.config.embed_dim = 3;
  model.hash_seed = 0x9e3779b97f4a7c15ull;
  model.feature_embeddings.assign(model.config.feature_dim * 3, 0.0f);
  for (Dimension dim : kAllDimensions) {
    if (!model.config.tasks.count(dim)) continue;
    for (const ClassId& c : model.candidates(dim)) {
      std::vector<float> w(3, 0.0f);
      w[static_cast<std::size_t>(c.label)] = 1.0f;
      model.class_embeddings[c] = w;
    }
  }
  return model;
}

void pin_text(BiEncoderModel& model, const std::string& text,
              const std::array<float, 3>& axis) {
  for (std::size_t f :
       hash_features(text, model.hash_seed, model.config.feature_dim)) {
    for (std::size_t j = 0; j < 3; ++j) {
      model.feature_embeddings[f * 3 + j] = axis[j];
    }
  }
}

constexpr std::array<float, 3> kMascAxis = {4.0f, 0.0f, 0.0f};
constexpr std::array<float, 3> kFemAxis = {0.0f, 4.0f, 0.0f};

std::pair<std::vector<Example>, std::vector<Example>> separable_about_corpus(
    int train_per_class, int test_per_class, std::uint64_t seed) {
  std::map<GenderLabel, std::vector<std::string>> vocab = {
      {GenderLabel::Masculine, {"anchor", "basalt", "cobalt", "derrick"}},
      {GenderLabel::Feminine, {"ember", "fjord", "garnet", "harbor"}},
      {GenderLabel::Neutral, {"icicle", "juniper", "kelp", "lantern"}},
  };
  Rng rng(seed);
  std::vector<Example> train, test;
  for (auto& [label, words] : vocab) {
    for (int i = 0; i < train_per_class + test_per_class; ++i) {
      std::string text;
      for (int j = 0; j < 5; ++j) {
        if (j) text += " ";
        text += words[rng.uniform(words.size())];
      }
      auto& dest = i < train_per_class ? train : test;
      dest.push_back(labeled(text, Dimension::About, label));
    }
  }
  return {train, test};
}

std::vector<std::string> ws_split(const std::string& text) {
  std::istringstream ss(text);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

// Frozen two-sided Welch references (binary 160/200 vs 120/200, and a small
// continuous sample), computed once with an independent statistics package.
constexpr double kBinaryT = 4.460941604639;
constexpr double kBinaryDf = 382.692307692308;
constexpr double kBinaryP = 1.074240479939e-05;
constexpr double kContT = 1.389210227469;
constexpr double kContDf = 5.973666685709;
constexpr double kContP = 2.143404021950e-01;

// ------------------------------------------------------------- criterion 1

bool criterion_statistics(std::string* why) {
  Lexicon lex = Lexicon::load_dir(g_lexicon_dir);
  Rng rng(101);

  // count_gendered and word_list_label vs literal recounts.
  std::vector<std::string> pool = {"he",  "she",   "king", "queen", "report",
                                   "man", "woman", "tree", "him",   "her"};
  for (int trial = 0; trial < 40; ++trial) {
    std::string text;
    for (int i = 0; i < 10; ++i) text += pool[rng.uniform(pool.size())] + " ";
    auto tokens = tokenize(text);
    long masc = 0, fem = 0;
    for (const Token& t : tokens) {
      if (lex.masculine_words.count(t.surface)) ++masc;
      if (lex.feminine_words.count(t.surface)) ++fem;
    }
    auto counted = count_gendered(tokens, lex);
    if (counted.first != masc || counted.second != fem) {
      *why = "count_gendered disagrees with recount";
      return false;
    }
    GenderLabel expect = masc > fem   ? GenderLabel::Masculine
                         : fem > masc ? GenderLabel::Feminine
                                      : GenderLabel::Neutral;
    if (word_list_label(tokens, lex) != expect) {
      *why = "word_list_label disagrees with recount";
      return false;
    }
  }

  // overrepresentation vs a nested-loop oracle on a ~160-token corpus.
  std::vector<std::string> vocab = {"dog", "ran", "sang", "blue",
                                    "ate", "sky", "w"};
  std::array<GenderLabel, 4> glabels = {GenderLabel::Masculine,
                                        GenderLabel::Feminine,
                                        GenderLabel::Neutral,
                                        GenderLabel::Unknown};
  std::vector<std::pair<std::vector<Token>, GenderLabel>> corpus;
  for (int d = 0; d < 16; ++d) {
    std::string text;
    for (int i = 0; i < 10; ++i) text += vocab[rng.uniform(vocab.size())] + " ";
    corpus.push_back({tokenize(text), glabels[rng.uniform(glabels.size())]});
  }
  auto stats = overrepresentation(corpus, 2);
  if (stats.empty()) {
    *why = "overrepresentation returned nothing";
    return false;
  }
  for (const auto& s : stats) {
    long w_in_g = 0, g_total = 0, w_total = 0, total = 0;
    for (const auto& [tokens, g] : corpus) {
      if (g == GenderLabel::Unknown) continue;
      for (const Token& t : tokens) {
        ++total;
        if (g == s.gender) ++g_total;
        if (t.surface == s.word) {
          ++w_total;
          if (g == s.gender) ++w_in_g;
        }
      }
    }
    double oracle = (static_cast<double>(w_in_g) / g_total) /
                    (static_cast<double>(w_total) / total);
    if (!close_to(s.ratio, oracle, 1e-9) || w_total != s.count) {
      *why = "overrepresentation ratio off for " + s.word;
      return false;
    }
  }

  // generation_stats vs a literal recount.
  std::vector<std::pair<std::string, std::string>> generations = {
      {"ABOUT:masculine", "he and the king met him"},
      {"ABOUT:masculine", "she spoke to her"},
      {"ABOUT:feminine", "queen queen she tree"},
      {"TO:masculine", "nothing gendered at all"},
  };
  auto gstats = generation_stats(generations, lex);
  for (const GenStats& s : gstats) {
    long gendered = 0, masc = 0;
    for (const auto& [control, text] : generations) {
      if (control != s.control) continue;
      for (const Token& t : tokenize(text)) {
        if (lex.masculine_words.count(t.surface)) { ++gendered; ++masc; }
        else if (lex.feminine_words.count(t.surface)) ++gendered;
      }
    }
    if (s.gendered_word_count != gendered || s.masculine_count != masc) {
      *why = "generation_stats recount mismatch for " + s.control;
      return false;
    }
    if (gendered > 0 &&
        !close_to(*s.pct_masculine, 100.0 * masc / gendered, 1e-9)) {
      *why = "generation_stats percentage mismatch";
      return false;
    }
    if (gendered == 0 && s.pct_masculine.has_value()) {
      *why = "generation_stats reported a percentage with no gendered words";
      return false;
    }
  }

  // Welch t-test vs the textbook formula and frozen reference p-values.
  std::vector<double> a(200, 0.0), b(200, 0.0);
  for (int i = 0; i < 160; ++i) a[i] = 1.0;
  for (int i = 0; i < 120; ++i) b[i] = 1.0;
  auto textbook = [](const std::vector<double>& x, const std::vector<double>& y) {
    auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double e : v) s += e;
      return s / v.size();
    };
    double mx = mean(x), my = mean(y), vx = 0, vy = 0;
    for (double e : x) vx += (e - mx) * (e - mx);
    for (double e : y) vy += (e - my) * (e - my);
    vx /= x.size() - 1;
    vy /= y.size() - 1;
    double se2 = vx / x.size() + vy / y.size();
    double t = (mx - my) / std::sqrt(se2);
    double df = se2 * se2 / ((vx / x.size()) * (vx / x.size()) / (x.size() - 1) +
                             (vy / y.size()) * (vy / y.size()) / (y.size() - 1));
    return std::pair{t, df};
  };
  WelchResult wb = welch_t_test(a, b);
  auto [tb, dfb] = textbook(a, b);
  if (!close_to(wb.t, tb, 1e-9) || !close_to(wb.df, dfb, 1e-9) ||
      !close_to(wb.t, kBinaryT, 1e-9) || !close_to(wb.df, kBinaryDf, 1e-9) ||
      !close_to(wb.p, kBinaryP, 1e-9)) {
    *why = "Welch binary fixture mismatch";
    return false;
  }
  WelchResult wc = welch_t_test({1.1, 2.3, 3.1, 4.8, 5.6, 6.2},
                                {2.0, 2.1, 2.9, 3.0, 3.3});
  if (!close_to(wc.t, kContT, 1e-9) || !close_to(wc.df, kContDf, 1e-9) ||
      !close_to(wc.p, kContP, 1e-9)) {
    *why = "Welch continuous fixture mismatch";
    return false;
  }
  return true;
}

// ------------------------------------------------------------- criterion 2

// Double-precision reference loss over lifted parameters; the perturbation is
// applied after lifting so the finite difference is free of float rounding.
struct LiftedParams {
  std::vector<std::size_t> features;  // with multiplicity
  std::map<std::size_t, std::vector<double>> rows;
  std::map<ClassId, std::vector<double>> classes;
  std::size_t embed_dim = 0;
  std::vector<ClassId> candidates;
  ClassId target{Dimension::About, GenderLabel::Masculine};
};

LiftedParams lift(const BiEncoderModel& model, const std::string& text,
                  Dimension dim, GenderLabel label) {
  LiftedParams p;
  p.embed_dim = model.config.embed_dim;
  p.features = hash_features(text, model.hash_seed, model.config.feature_dim);
  for (std::size_t f : p.features) {
    auto& row = p.rows[f];
    if (row.empty()) {
      row.resize(p.embed_dim);
      for (std::size_t j = 0; j < p.embed_dim; ++j) {
        row[j] = model.feature_embeddings[f * p.embed_dim + j];
      }
    }
  }
  p.candidates = model.candidates(dim);
  for (const ClassId& c : p.candidates) {
    const auto& w = model.class_embeddings.at(c);
    p.classes[c] = std::vector<double>(w.begin(), w.end());
  }
  p.target = {dim, label};
  return p;
}

double reference_loss(const LiftedParams& p) {
  std::vector<double> v(p.embed_dim, 0.0);
  for (std::size_t f : p.features) {
    const auto& row = p.rows.at(f);
    for (std::size_t j = 0; j < p.embed_dim; ++j) v[j] += row[j];
  }
  if (!p.features.empty()) {
    for (double& x : v) x /= static_cast<double>(p.features.size());
  }
  double mx = -1e300;
  std::map<ClassId, double> scores;
  for (const ClassId& c : p.candidates) {
    double s = 0.0;
    const auto& w = p.classes.at(c);
    for (std::size_t j = 0; j < p.embed_dim; ++j) s += v[j] * w[j];
    scores[c] = s;
    mx = std::max(mx, s);
  }
  double z = 0.0;
  for (const auto& [c, s] : scores) z += std::exp(s - mx);
  return -(scores.at(p.target) - mx - std::log(z));
}

bool criterion_gradients(std::string* why) {
  BiEncoderModel model = wired_model({Dimension::About});
  Rng rng(55);
  for (float& x : model.feature_embeddings) {
    x = static_cast<float>(rng.uniform_sym(0.3));
  }
  for (auto& [c, w] : model.class_embeddings) {
    for (float& x : w) x = static_cast<float>(rng.uniform_sym(0.3));
  }
  const std::vector<std::pair<std::string, GenderLabel>> step = {
      {"anchor basalt cobalt", GenderLabel::Masculine},
      {"ember ember fjord", GenderLabel::Feminine},
      {"kelp lantern", GenderLabel::Neutral},
  };
  const double h = 1e-6;
  for (const auto& [text, label] : step) {
    LossGradients grads =
        compute_gradients(model, text, Dimension::About, label);
    LiftedParams base = lift(model, text, Dimension::About, label);
    if (!close_to(grads.loss, reference_loss(base), 1e-9)) {
      *why = "loss disagrees with reference forward pass";
      return false;
    }
    auto check_fd = [&](double analytic, double plus, double minus) {
      double fd = (plus - minus) / (2 * h);
      double denom = std::max({std::fabs(fd), std::fabs(analytic), 1e-10});
      return std::fabs(analytic - fd) / denom <= 1e-4;
    };
    for (const auto& [f, dr] : grads.feature_rows) {
      for (std::size_t j = 0; j < base.embed_dim; ++j) {
        LiftedParams plus = base, minus = base;
        plus.rows[f][j] += h;
        minus.rows[f][j] -= h;
        if (!check_fd(dr[j], reference_loss(plus), reference_loss(minus))) {
          *why = "feature-row gradient off at feature " + std::to_string(f);
          return false;
        }
      }
    }
    for (const auto& [c, dw] : grads.classes) {
      for (std::size_t j = 0; j < base.embed_dim; ++j) {
        LiftedParams plus = base, minus = base;
        plus.classes[c][j] += h;
        minus.classes[c][j] -= h;
        if (!check_fd(dw[j], reference_loss(plus), reference_loss(minus))) {
          *why = "class gradient off for " + to_string(c);
          return false;
        }
      }
    }
  }
  return true;
}

// ------------------------------------------------------------- criterion 3

bool criterion_separable(std::string* why) {
  auto [train_data, test_data] = separable_about_corpus(20, 10, 77);
  TrainConfig config;
  config.feature_dim = 1 << 12;
  config.embed_dim = 16;
  config.learning_rate = 0.5;
  config.epochs = 50;
  config.seed = 5;
  TrainResult single = train(train_data, test_data, config);
  EvalReport report = evaluate(single.model, test_data);
  for (const auto& [label, acc] :
       report.dimensions.at(Dimension::About).class_accuracy) {
    if (acc < 0.95) {
      *why = "single-task " + to_string(label) + " accuracy " +
             std::to_string(acc);
      return false;
    }
  }

  // Multitask: disjoint signal words per dimension, all three labels gold.
  std::map<GenderLabel, std::string> about = {
      {GenderLabel::Masculine, "anchor"},
      {GenderLabel::Feminine, "ember"},
      {GenderLabel::Neutral, "icicle"}};
  std::map<GenderLabel, std::string> to = {{GenderLabel::Masculine, "moss"},
                                           {GenderLabel::Feminine, "nickel"}};
  std::map<GenderLabel, std::string> as = {{GenderLabel::Masculine, "opal"},
                                           {GenderLabel::Feminine, "pyrite"}};
  Rng rng(13);
  std::vector<Example> multi_train, multi_test;
  for (int i = 0; i < 210; ++i) {
    auto pick = [&rng](auto& m) {
      auto it = m.begin();
      std::advance(it, rng.uniform(m.size()));
      return *it;
    };
    auto [ga, wa] = pick(about);
    auto [gt, wt] = pick(to);
    auto [gs, ws] = pick(as);
    Example ex = Example::with_defaults(wa + " " + wt + " " + ws, "syn");
    ex.labels[Dimension::About] = ga;
    ex.labels[Dimension::To] = gt;
    ex.labels[Dimension::As] = gs;
    (i < 150 ? multi_train : multi_test).push_back(ex);
  }
  TrainConfig mconfig = config;
  mconfig.tasks = {Dimension::About, Dimension::To, Dimension::As};
  mconfig.epochs = 50;
  TrainResult multi = train(multi_train, multi_test, mconfig);
  EvalReport mreport = evaluate(multi.model, multi_test);
  for (const auto& [dim, dr] : mreport.dimensions) {
    for (const auto& [label, acc] : dr.class_accuracy) {
      if (acc < 0.90) {
        *why = "multitask " + to_string(dim) + "/" + to_string(label) +
               " accuracy " + std::to_string(acc);
        return false;
      }
    }
  }
  return true;
}

// ------------------------------------------------------------- criterion 4

bool criterion_flipping(std::string* why) {
  std::vector<Example> corpus;
  for (int i = 0; i < 40; ++i) {
    corpus.push_back(labeled("text " + std::to_string(i), Dimension::About,
                             GenderLabel::Neutral));
  }
  for (long start : {0L, 7L}) {
    long corpus_masc = 0, corpus_flipped = 0;
    std::vector<std::map<Dimension, int>> masc_per_example(corpus.size());
    for (long epoch = start; epoch < start + 10; ++epoch) {
      EpochView view = epoch_view(corpus, epoch, 4242);
      for (std::size_t i = 0; i < view.examples.size(); ++i) {
        for (Dimension d : {Dimension::To, Dimension::As}) {
          GenderLabel g = view.examples[i].labels.at(d);
          if (view.examples[i].label_origin.at(d) != Origin::Flipped) {
            *why = "flipped label missing its origin mark";
            return false;
          }
          ++corpus_flipped;
          if (g == GenderLabel::Masculine) {
            ++masc_per_example[i][d];
            ++corpus_masc;
          } else if (g != GenderLabel::Feminine) {
            *why = "flipped label is not binary";
            return false;
          }
        }
      }
    }
    for (const auto& counts : masc_per_example) {
      for (Dimension d : {Dimension::To, Dimension::As}) {
        if (counts.at(d) != 5) {
          *why = "example not masculine in exactly 5 of 10 epochs";
          return false;
        }
      }
    }
    if (corpus_masc * 2 != corpus_flipped) {
      *why = "corpus-level masculine fraction is not exactly 0.50";
      return false;
    }
  }
  return true;
}

// ------------------------------------------------------------- criterion 5

bool criterion_oversampling(std::string* why) {
  EpochView view;
  for (int i = 0; i < 80; ++i) {
    view.examples.push_back(labeled("m" + std::to_string(i), Dimension::About,
                                    GenderLabel::Masculine));
  }
  for (int i = 0; i < 10; ++i) {
    view.examples.push_back(labeled("f" + std::to_string(i), Dimension::About,
                                    GenderLabel::Feminine));
    view.examples.push_back(labeled("n" + std::to_string(i), Dimension::About,
                                    GenderLabel::Neutral));
  }
  EpochView balanced = oversample_balance(view, Dimension::About);
  std::map<GenderLabel, long> counts;
  std::set<std::string> texts;
  for (const Example& ex : balanced.examples) {
    ++counts[ex.labels.at(Dimension::About)];
    texts.insert(ex.text);
  }
  if (counts[GenderLabel::Masculine] != 80 ||
      counts[GenderLabel::Feminine] != 80 ||
      counts[GenderLabel::Neutral] != 80) {
    *why = "class counts did not balance to (80,80,80)";
    return false;
  }
  if (texts.size() != 100) {
    *why = "distinct texts not preserved (" + std::to_string(texts.size()) +
           " of 100)";
    return false;
  }
  return true;
}

// ------------------------------------------------------------- criterion 6

bool criterion_masking(std::string* why) {
  Lexicon lex = Lexicon::load_dir(g_lexicon_dir);
  Rng rng(2024);
  std::vector<std::string> filler = {"report", "window", "coffee", "engine",
                                     "garden", "letter", "market", "bridge"};
  auto make = [&](int n) {
    std::vector<Example> out;
    for (int i = 0; i < n; ++i) {
      bool fem = i % 2 == 0;
      std::string text = fem ? "she" : "he";
      if (rng.uniform(2) == 0) text += fem ? " mary" : " john";
      // Non-explicit signal word, correct for its class 80% of the time.
      bool correct = rng.uniform(10) < 8;
      text += (fem == correct) ? " bonnet" : " cigar";
      text += " " + filler[rng.uniform(filler.size())];
      text += " " + filler[rng.uniform(filler.size())];
      out.push_back(labeled(text, Dimension::About,
                            fem ? GenderLabel::Feminine
                                : GenderLabel::Masculine));
    }
    return out;
  };
  std::vector<Example> train_data = make(200);
  std::vector<Example> test_data = make(80);

  TrainConfig config;
  config.feature_dim = 1 << 12;
  config.embed_dim = 16;
  config.learning_rate = 0.5;
  config.epochs = 12;
  config.seed = 7;
  auto run = [&](MaskMode mode) {
    auto [result, report] =
        ablation_masked_train(train_data, test_data, config, mode, lex);
    return report.dimensions.at(Dimension::About).avg;
  };
  double acc_none = run(MaskMode::None);
  double acc_words = run(MaskMode::Words);
  double acc_wan = run(MaskMode::WordsAndNames);
  std::ostringstream ss;
  ss << "none " << acc_none << ", words " << acc_words << ", words+names "
     << acc_wan;
  if (!(acc_none >= acc_words && acc_words >= acc_wan && acc_wan > 0.65)) {
    *why = "ablation not ordered: " + ss.str();
    return false;
  }
  return true;
}

// ------------------------------------------------------------- criterion 7

bool criterion_eval_grid(std::string* why) {
  fs::path dir = g_work / "c7";
  fs::create_directories(dir);
  auto [train_data, valid_data] = separable_about_corpus(20, 10, 77);
  save_corpus(train_data, (dir / "train.jsonl").string());
  save_corpus(valid_data, (dir / "valid.jsonl").string());

  if (run_cmd("train --train " + (dir / "train.jsonl").string() + " --valid " +
              (dir / "valid.jsonl").string() +
              " --task about --epochs 30 --lr 0.5 --feature-dim 4096"
              " --embed-dim 16 --seed 11 --out-dir " +
              (dir / "run").string()) != 0) {
    *why = "train subcommand failed";
    return false;
  }

  // 12 hand-labeled examples, 4 per class, including deliberate mislabels so
  // the grid has cells below 1.0.
  std::vector<Example> fixture;
  const std::array<std::pair<const char*, GenderLabel>, 12> rows = {{
      {"anchor basalt cobalt derrick anchor", GenderLabel::Masculine},
      {"basalt basalt anchor cobalt derrick", GenderLabel::Masculine},
      {"cobalt derrick anchor anchor basalt", GenderLabel::Masculine},
      {"ember fjord garnet harbor ember", GenderLabel::Masculine},
      {"ember ember fjord garnet harbor", GenderLabel::Feminine},
      {"fjord harbor ember garnet garnet", GenderLabel::Feminine},
      {"garnet ember harbor fjord ember", GenderLabel::Feminine},
      {"icicle juniper kelp lantern kelp", GenderLabel::Feminine},
      {"icicle icicle juniper kelp lantern", GenderLabel::Neutral},
      {"juniper lantern icicle kelp kelp", GenderLabel::Neutral},
      {"kelp lantern juniper icicle icicle", GenderLabel::Neutral},
      {"anchor basalt derrick cobalt anchor", GenderLabel::Neutral},
  }};
  for (const auto& [text, label] : rows) {
    fixture.push_back(labeled(text, Dimension::About, label));
  }
  save_corpus(fixture, (dir / "fixture.jsonl").string());
  if (run_cmd("eval --model " + (dir / "run" / "model.bin").string() +
              " --data " + (dir / "fixture.jsonl").string() + " --json-out " +
              (dir / "eval.json").string()) != 0) {
    *why = "eval subcommand failed";
    return false;
  }
  json grid = json::parse(read_bytes(dir / "eval.json"));

  // Brute-force accuracies from raw class scores.
  BiEncoderModel model = BiEncoderModel::load((dir / "run" / "model.bin").string());
  std::map<GenderLabel, long> total, correct;
  for (const Example& ex : fixture) {
    auto scores =
        score_classes(ex.text, model.candidates(Dimension::About), model);
    ClassId best = scores.begin()->first;
    for (const auto& [c, s] : scores) {
      if (s > scores.at(best)) best = c;
    }
    GenderLabel gold = ex.labels.at(Dimension::About);
    ++total[gold];
    if (best.label == gold) ++correct[gold];
  }
  double avg_sum = 0.0;
  for (const auto& [label, n] : total) {
    double acc = static_cast<double>(correct[label]) / n;
    avg_sum += acc;
    double reported = grid.at("about").at(to_string(label)).get<double>();
    if (!close_to(reported, acc, 1e-12)) {
      *why = "grid cell about/" + to_string(label) + " is " +
             std::to_string(reported) + ", brute force says " +
             std::to_string(acc);
      return false;
    }
  }
  double avg = avg_sum / static_cast<double>(total.size());
  if (!close_to(grid.at("about").at("avg").get<double>(), avg, 1e-12) ||
      !close_to(grid.at("all_avg").get<double>(), avg, 1e-12)) {
    *why = "grid averages disagree with brute force";
    return false;
  }

  // Degenerate constant predictor: masculine always wins on TO, giving the
  // 1.0 / 0.0 / 0.5 row.
  BiEncoderModel constant = wired_model({Dimension::To});
  for (float& x : constant.feature_embeddings) x = 0.1f;
  for (auto& [c, w] : constant.class_embeddings) {
    std::fill(w.begin(), w.end(),
              c.label == GenderLabel::Masculine ? 1.0f : -1.0f);
  }
  constant.save((dir / "constant.bin").string());
  std::vector<Example> to_fixture;
  for (int i = 0; i < 6; ++i) {
    to_fixture.push_back(labeled("utterance " + std::to_string(i),
                                 Dimension::To,
                                 i % 2 ? GenderLabel::Feminine
                                       : GenderLabel::Masculine));
  }
  save_corpus(to_fixture, (dir / "to_fixture.jsonl").string());
  if (run_cmd("eval --model " + (dir / "constant.bin").string() + " --data " +
              (dir / "to_fixture.jsonl").string() + " --json-out " +
              (dir / "to_eval.json").string()) != 0) {
    *why = "constant-model eval failed";
    return false;
  }
  json to_grid = json::parse(read_bytes(dir / "to_eval.json"));
  if (to_grid.at("to").at("masculine").get<double>() != 1.0 ||
      to_grid.at("to").at("feminine").get<double>() != 0.0 ||
      !close_to(to_grid.at("to").at("avg").get<double>(), 0.5, 1e-12)) {
    *why = "degenerate constant-predictor pattern not reproduced";
    return false;
  }
  return true;
}

// ------------------------------------------------------------- criterion 8

bool criterion_genderedness(std::string* why) {
  BiEncoderModel model = wired_model({Dimension::About});
  pin_text(model, "he", kMascAxis);
  pin_text(model, "she", kFemAxis);
  const double hi = std::exp(4.0) / (std::exp(4.0) + 2.0);
  const double lo = 1.0 / (std::exp(4.0) + 2.0);

  std::vector<Document> docs = {
      {"d1", "", {"he", "he", "she"}},
      {"d2", "", {"she", "he", "she", "he"}},  // median (hi+lo)/2
      {"d3", "", {"she", "she", "she", "she", "he"}},
      {"d4", "", {"he", "he"}},
      {"d5", "", {"she"}},
  };
  std::map<std::string, double> expect = {{"d1", hi},
                                          {"d2", 0.5 * (hi + lo)},
                                          {"d3", lo},
                                          {"d4", hi},
                                          {"d5", lo}};
  GenderednessReport report = document_genderedness(docs, model, 1);
  if (report.ranked.size() != 5) {
    *why = "expected 5 scored documents";
    return false;
  }
  double mean = 0.0;
  for (const auto& s : report.ranked) {
    if (!close_to(s.median_score, expect.at(s.doc_id), 1e-12)) {
      *why = "median for " + s.doc_id + " off hand computation";
      return false;
    }
    mean += expect.at(s.doc_id);
  }
  mean /= 5.0;
  if (!close_to(report.mean_of_medians, mean, 1e-12)) {
    *why = "mean of medians off hand computation";
    return false;
  }
  for (std::size_t i = 1; i < report.ranked.size(); ++i) {
    if (report.ranked[i - 1].median_score < report.ranked[i].median_score) {
      *why = "ranking not descending";
      return false;
    }
  }

  // Medians are invariant under paragraph order.
  Rng rng(88);
  Document shuffled = docs[2];
  for (int trial = 0; trial < 100; ++trial) {
    deterministic_shuffle(shuffled.paragraphs, rng);
    GenderednessReport r = document_genderedness({shuffled}, model, 1);
    if (!close_to(r.ranked[0].median_score, expect.at("d3"), 1e-12)) {
      *why = "median changed under paragraph permutation";
      return false;
    }
  }
  return true;
}

// ------------------------------------------------------------- criterion 9

bool criterion_generation(std::string* why) {
  Lexicon lex = Lexicon::load_dir(g_lexicon_dir);
  const std::vector<std::string> masc_pool = {"he", "him", "his", "man",
                                              "king"};
  const std::vector<std::string> fem_pool = {"she", "her", "woman", "queen",
                                             "lady"};
  std::vector<ControlToken> controls;
  for (Dimension d : kAllDimensions) {
    controls.push_back({d, GenderLabel::Masculine});
    controls.push_back({d, GenderLabel::Feminine});
  }

  // ABOUT training lines carry gendered words at 3x the TO/AS rate. Filler
  // vocabularies are disjoint per control so each control token conditions
  // its own sublanguage.
  Rng rng(31337);
  std::vector<std::string> corpus;
  for (std::size_t ci = 0; ci < controls.size(); ++ci) {
    const ControlToken& control = controls[ci];
    const auto& pool = control.label == GenderLabel::Masculine ? masc_pool
                                                               : fem_pool;
    const int gendered_permille =
        control.dimension == Dimension::About ? 390 : 130;
    for (int line = 0; line < 40; ++line) {
      std::string text = control.rendered();
      for (int t = 0; t < 28; ++t) {
        if (rng.uniform(1000) < static_cast<std::uint64_t>(gendered_permille)) {
          text += " " + pool[rng.uniform(pool.size())];
        } else {
          text += " w" + std::to_string(ci) + "x" +
                  std::to_string(rng.uniform(18));
        }
      }
      corpus.push_back(text);
    }
  }
  ControlLM lm = train_controlled_lm(corpus, 3);

  std::map<Dimension, long> gendered_by_dim;
  std::map<std::string, std::pair<long, long>> by_control;  // gendered, masc
  for (const ControlToken& control : controls) {
    for (int i = 0; i < 200; ++i) {
      GenerateOptions options;
      options.top_k = 10;
      options.block_n = 3;
      options.min_tokens = 20;
      options.max_tokens = 40;
      options.seed = splitmix64(fnv1a64(control.rendered()) ^
                                static_cast<std::uint64_t>(i));
      std::string text = generate(lm, control, options);
      auto tokens = ws_split(text);
      if (tokens.size() < 20) {
        *why = "generation under 20 tokens for " + control.rendered();
        return false;
      }
      std::set<std::string> trigrams;
      for (std::size_t t = 0; t + 3 <= tokens.size(); ++t) {
        std::string key =
            tokens[t] + "\x1f" + tokens[t + 1] + "\x1f" + tokens[t + 2];
        if (!trigrams.insert(key).second) {
          *why = "repeated trigram in a generation for " + control.rendered();
          return false;
        }
      }
      auto [masc, fem] = count_gendered(tokenize(text), lex);
      gendered_by_dim[control.dimension] += masc + fem;
      auto& entry = by_control[control.rendered()];
      entry.first += masc + fem;
      entry.second += masc;
    }
  }
  if (!(gendered_by_dim[Dimension::About] > gendered_by_dim[Dimension::To] &&
        gendered_by_dim[Dimension::About] > gendered_by_dim[Dimension::As])) {
    *why = "ABOUT generations not more gendered than TO/AS";
    return false;
  }
  for (Dimension d : kAllDimensions) {
    auto pct = [&](GenderLabel g) {
      const auto& [gendered, masc] =
          by_control.at(ControlToken{d, g}.rendered());
      return gendered > 0 ? 100.0 * masc / gendered : 0.0;
    };
    if (!(pct(GenderLabel::Masculine) > pct(GenderLabel::Feminine))) {
      *why = "masculine control not more masculine than feminine on " +
             to_string(d);
      return false;
    }
  }
  return true;
}

// ------------------------------------------------------------ criterion 10

bool criterion_offense(std::string* why) {
  BiEncoderModel model =
      wired_model({Dimension::About, Dimension::To, Dimension::As});
  pin_text(model, "alphatoken", kMascAxis);
  pin_text(model, "omegatoken", kFemAxis);
  std::vector<std::string> safe, offensive;
  for (int i = 0; i < 200; ++i) {
    safe.push_back(i < 160 ? "alphatoken" : "omegatoken");
    offensive.push_back(i < 120 ? "alphatoken" : "omegatoken");
  }
  OffensiveReport report = offensive_analysis(safe, offensive, model);
  for (Dimension d : kAllDimensions) {
    const OffensiveDimension& od = report.dimensions.at(d);
    if (!(od.pct_masculine_safe > od.pct_masculine_offensive)) {
      *why = "sign wrong on " + to_string(d);
      return false;
    }
    if (!close_to(od.pct_masculine_safe, 80.0, 1e-9) ||
        !close_to(od.pct_masculine_offensive, 60.0, 1e-9)) {
      *why = "percentages off on " + to_string(d);
      return false;
    }
    if (!od.test.has_value()) {
      *why = "t-test missing on " + to_string(d);
      return false;
    }
    if (!close_to(od.test->t, kBinaryT, 1e-9) ||
        !close_to(od.test->df, kBinaryDf, 1e-9) ||
        !close_to(od.test->p, kBinaryP, 1e-9)) {
      *why = "t/p off the reference on " + to_string(d);
      return false;
    }
  }
  return true;
}

// ------------------------------------------------------------ criterion 11

bool criterion_reproducibility(std::string* why) {
  fs::path dir = g_work / "c11";
  fs::create_directories(dir);
  auto [train_data, valid_data] = separable_about_corpus(20, 10, 3);
  save_corpus(train_data, (dir / "train.jsonl").string());
  save_corpus(valid_data, (dir / "valid.jsonl").string());

  auto same_bytes = [&](const fs::path& a, const fs::path& b,
                        const std::string& what) {
    if (read_bytes(a) != read_bytes(b)) {
      *why = what + " differs between identical runs";
      return false;
    }
    return true;
  };

  // train: model file and epoch log.
  for (const char* run : {"r1", "r2"}) {
    if (run_cmd("train --train " + (dir / "train.jsonl").string() +
                " --valid " + (dir / "valid.jsonl").string() +
                " --task about --epochs 10 --lr 0.5 --feature-dim 4096"
                " --embed-dim 16 --seed 21 --out-dir " +
                (dir / run).string()) != 0) {
      *why = "train run failed";
      return false;
    }
  }
  if (!same_bytes(dir / "r1" / "model.bin", dir / "r2" / "model.bin",
                  "model.bin") ||
      !same_bytes(dir / "r1" / "train_log.jsonl", dir / "r2" / "train_log.jsonl",
                  "train_log.jsonl")) {
    return false;
  }

  // eval report.
  for (const char* name : {"e1.json", "e2.json"}) {
    if (run_cmd("eval --model " + (dir / "r1" / "model.bin").string() +
                " --data " + (dir / "valid.jsonl").string() + " --json-out " +
                (dir / name).string()) != 0) {
      *why = "eval run failed";
      return false;
    }
  }
  if (!same_bytes(dir / "e1.json", dir / "e2.json", "eval report")) return false;

  // control-corpus (word-list labeler) and generate.
  write_text(dir / "utterances.txt",
             "he walked his dog to the market\n"
             "she sang while her sister listened\n"
             "the committee approved the annual budget\n"
             "the king greeted the queen at the gate\n"
             "he told him a long story about the king\n"
             "she asked her mother about the recipe\n");
  for (const char* name : {"cc1.txt", "cc2.txt"}) {
    if (run_cmd("control-corpus --in " + (dir / "utterances.txt").string() +
                " --out " + (dir / name).string() +
                " --wordlist --lexicon-dir " + g_lexicon_dir) != 0) {
      *why = "control-corpus run failed";
      return false;
    }
  }
  if (!same_bytes(dir / "cc1.txt", dir / "cc2.txt", "control corpus")) {
    return false;
  }
  for (const char* name : {"g1.tsv", "g2.tsv"}) {
    if (run_cmd("generate --corpus " + (dir / "cc1.txt").string() + " --out " +
                (dir / name).string() +
                " --control ABOUT:masculine --control ABOUT:feminine"
                " --n 5 --min-tokens 3 --max-tokens 15 --seed 9") != 0) {
      *why = "generate run failed";
      return false;
    }
  }
  if (!same_bytes(dir / "g1.tsv", dir / "g2.tsv", "generations")) return false;

  // score ranking.
  write_text(dir / "docs.jsonl",
             R"({"doc_id":"d1","paragraphs":["anchor basalt","ember fjord"]})"
             "\n"
             R"({"doc_id":"d2","paragraphs":["icicle kelp","anchor anchor"]})"
             "\n");
  for (const char* name : {"s1.tsv", "s2.tsv"}) {
    if (run_cmd("score --model " + (dir / "r1" / "model.bin").string() +
                " --docs " + (dir / "docs.jsonl").string() + " --out " +
                (dir / name).string() + " --min-paragraphs 1") != 0) {
      *why = "score run failed";
      return false;
    }
  }
  if (!same_bytes(dir / "s1.tsv", dir / "s2.tsv", "score ranking")) {
    return false;
  }

  // over-representation table.
  write_text(dir / "gendered.jsonl",
             R"({"text":"sword sword shield crown","gender":"masculine"})"
             "\n"
             R"({"text":"ribbon shield crown crown","gender":"feminine"})"
             "\n");
  for (const char* name : {"t1.tsv", "t2.tsv"}) {
    if (run_cmd("stats --in " + (dir / "gendered.jsonl").string() + " --out " +
                (dir / name).string() + " --min-count 1") != 0) {
      *why = "stats run failed";
      return false;
    }
  }
  return same_bytes(dir / "t1.tsv", dir / "t2.tsv", "stats table");
}

struct Criterion {
  int number;
  const char* name;
  std::function<bool(std::string*)> fn;
  double limit_seconds;  // 0 means no limit
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <gdim-binary> <lexicon-dir>\n";
    return 2;
  }
  g_binary = argv[1];
  g_lexicon_dir = argv[2];
  g_work = fs::temp_directory_path() / "gdim_acceptance";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  const std::vector<Criterion> criteria = {
      {1, "statistics match independent oracles", criterion_statistics, 1.0},
      {2, "analytic gradients match finite differences", criterion_gradients,
       5.0},
      {3, "separable corpora are learned", criterion_separable, 30.0},
      {4, "label flipping balances exactly", criterion_flipping, 1.0},
      {5, "oversampling balances exactly", criterion_oversampling, 1.0},
      {6, "masking ablation is ordered", criterion_masking, 60.0},
      {7, "evaluation grid matches brute force", criterion_eval_grid, 0.0},
      {8, "genderedness medians match hand computation",
       criterion_genderedness, 0.0},
      {9, "controlled generation shifts gendered words",
       criterion_generation, 60.0},
      {10, "offensive analysis matches the reference test",
       criterion_offense, 0.0},
      {11, "identical runs are byte-identical", criterion_reproducibility,
       0.0},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string why;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
      ok = c.fn(&why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok && c.limit_seconds > 0 && elapsed > c.limit_seconds) {
      ok = false;
      why = "over time budget (" + std::to_string(elapsed) + "s)";
    }
    std::cout << "criterion " << (c.number < 10 ? " " : "") << c.number << ": "
              << (ok ? "PASS" : "FAIL") << "  " << c.name;
    if (!ok && !why.empty()) std::cout << "  [" << why << "]";
    std::cout << "\n";
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
