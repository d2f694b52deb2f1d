// gdim: annotate, train, evaluate, and audit gender information in text
// along the about/to/as dimensions.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdim/annotate.hpp"
#include "gdim/apps.hpp"
#include "gdim/classifier.hpp"
#include "gdim/dataset.hpp"
#include "gdim/manifest.hpp"
#include "gdim/random.hpp"
#include "gdim/ngram_lm.hpp"
#include "gdim/textkit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gdim;

namespace {

// Exit codes: 0 success, 1 internal/runtime failure, 2 usage/input error.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_file(const std::string& path) {
  if (!fs::exists(path)) throw InputError("no such file: " + path);
}

std::string default_lexicon_dir() {
  const char* env = std::getenv("GDIM_LEXICON_DIR");
  return env ? env : "";
}

Lexicon load_lexicon(const std::string& dir) {
  if (dir.empty()) {
    throw InputError("no lexicon directory (set --lexicon-dir or GDIM_LEXICON_DIR)");
  }
  if (!fs::is_directory(dir)) throw InputError("no such directory: " + dir);
  return Lexicon::load_dir(dir);
}

std::set<Dimension> parse_task(const std::string& task) {
  if (task == "multitask") {
    return {Dimension::About, Dimension::To, Dimension::As};
  }
  return {parse_dimension(task)};
}

void print_distribution(const std::vector<Example>& examples) {
  std::cout << "label distribution:\n";
  std::cout << std::left << std::setw(8) << "dim" << std::right
            << std::setw(10) << "masc" << std::setw(10) << "fem"
            << std::setw(10) << "neutral" << std::setw(10) << "unknown"
            << "\n";
  for (Dimension d : kAllDimensions) {
    std::map<GenderLabel, long> counts;
    for (const Example& ex : examples) ++counts[ex.labels.at(d)];
    std::cout << std::left << std::setw(8) << to_string(d) << std::right
              << std::setw(10) << counts[GenderLabel::Masculine]
              << std::setw(10) << counts[GenderLabel::Feminine]
              << std::setw(10) << counts[GenderLabel::Neutral]
              << std::setw(10) << counts[GenderLabel::Unknown] << "\n";
  }
}

json report_to_json(const EvalReport& report) {
  json j;
  for (const auto& [dim, dr] : report.dimensions) {
    json d;
    for (const auto& [label, acc] : dr.class_accuracy) {
      d[to_string(label)] = acc;
    }
    d["avg"] = dr.avg;
    j[to_string(dim)] = d;
  }
  j["all_avg"] = report.all_avg;
  return j;
}

void print_report(const EvalReport& report) {
  std::cout << std::left << std::setw(8) << "dim" << std::right
            << std::setw(10) << "M" << std::setw(10) << "F" << std::setw(10)
            << "N" << std::setw(10) << "Avg." << "\n";
  auto cell = [](const DimensionReport& dr, GenderLabel g) -> std::string {
    auto it = dr.class_accuracy.find(g);
    if (it == dr.class_accuracy.end()) return "-";
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(4) << it->second;
    return ss.str();
  };
  for (const auto& [dim, dr] : report.dimensions) {
    std::ostringstream avg;
    avg << std::fixed << std::setprecision(4) << dr.avg;
    std::cout << std::left << std::setw(8) << to_string(dim) << std::right
              << std::setw(10) << cell(dr, GenderLabel::Masculine)
              << std::setw(10) << cell(dr, GenderLabel::Feminine)
              << std::setw(10) << cell(dr, GenderLabel::Neutral)
              << std::setw(10) << avg.str() << "\n";
  }
  std::cout << "all avg: " << std::fixed << std::setprecision(4)
            << report.all_avg << "\n";
}

std::string parent_dir(const std::string& path) {
  auto parent = fs::path(path).parent_path();
  return parent.empty() ? "." : parent.string();
}

// ---------------------------------------------------------------- annotate

struct AnnotateArgs {
  std::string in, out, lexicon_dir = default_lexicon_dir();
  std::string rules = "pronoun";
  std::string they_maps_to = "neutral";
  double name_threshold = 0.9;
};

GenderLabel resolve_speaker_gender(const json& turn, const json& conversation,
                                   const std::set<std::string>& rules,
                                   const Lexicon& lexicon,
                                   const AnnotateConfig& config, Origin* origin) {
  if (turn.contains("speaker_gender")) {
    *origin = Origin::Gold;
    return parse_gender_label(turn["speaker_gender"].get<std::string>());
  }
  *origin = Origin::Rule;
  const std::string speaker = turn.value("speaker", std::string());
  if (rules.count("persona") && conversation.contains("personas") &&
      conversation["personas"].contains(speaker)) {
    std::vector<std::string> lines;
    for (const auto& l : conversation["personas"][speaker]) {
      lines.push_back(l.get<std::string>());
    }
    GenderLabel g = persona_gender(lines, lexicon, config);
    if (g != GenderLabel::Unknown) return g;
  }
  if (rules.count("kinship")) {
    GenderLabel g = kinship_label(tokenize(turn.at("text").get<std::string>()),
                                  lexicon);
    if (g != GenderLabel::Unknown) return g;
  }
  if (rules.count("names") && !speaker.empty()) {
    GenderLabel g = name_gender_label(speaker, lexicon, config.name_threshold);
    if (g != GenderLabel::Unknown) return g;
  }
  return GenderLabel::Unknown;
}

int cmd_annotate(const AnnotateArgs& args, const std::string& command_line) {
  require_file(args.in);
  std::set<std::string> rules;
  {
    std::istringstream ss(args.rules);
    std::string rule;
    while (std::getline(ss, rule, ',')) {
      if (rule != "pronoun" && rule != "persona" && rule != "kinship" &&
          rule != "names" && rule != "dialogue") {
        throw CLI::ValidationError("unknown rule: " + rule);
      }
      rules.insert(rule);
    }
  }
  Lexicon lexicon = load_lexicon(args.lexicon_dir);
  AnnotateConfig config;
  config.they_maps_to = parse_gender_label(args.they_maps_to);
  config.name_threshold = args.name_threshold;

  const std::string source = fs::path(args.in).stem().string();
  std::vector<Example> examples;

  std::ifstream in(args.in);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw InputError(args.in + " line " + std::to_string(lineno) +
                       ": invalid JSON");
    }
    if (j.contains("turns")) {
      const std::string cid = j.value("id", "conv-" + std::to_string(lineno));
      std::vector<std::pair<Utterance, GenderLabel>> turns;
      std::vector<Origin> as_origins;
      for (const auto& turn : j["turns"]) {
        Origin origin = Origin::Rule;
        GenderLabel g =
            resolve_speaker_gender(turn, j, rules, lexicon, config, &origin);
        Utterance utt;
        utt.text = turn.at("text").get<std::string>();
        utt.conversation_id = cid;
        turns.push_back({utt, g});
        as_origins.push_back(origin);
      }
      std::vector<GenderLabel> to_labels;
      if (rules.count("dialogue")) to_labels = dialogue_to_labels(turns);
      for (std::size_t i = 0; i < turns.size(); ++i) {
        Example ex = Example::with_defaults(turns[i].first.text, source);
        ex.conversation_id = cid;
        ex.labels[Dimension::As] = turns[i].second;
        ex.label_origin[Dimension::As] = as_origins[i];
        if (!to_labels.empty()) {
          ex.labels[Dimension::To] = to_labels[i];
          ex.label_origin[Dimension::To] = Origin::Rule;
        }
        if (rules.count("pronoun")) {
          ex.labels[Dimension::About] =
              pronoun_majority_label(tokenize(ex.text), lexicon, config);
          ex.label_origin[Dimension::About] = Origin::Rule;
        }
        examples.push_back(std::move(ex));
      }
    } else {
      Example ex = Example::with_defaults(j.at("text").get<std::string>(),
                                          source);
      if (j.contains("gender")) {
        ex.labels[Dimension::About] =
            parse_gender_label(j["gender"].get<std::string>());
        ex.label_origin[Dimension::About] = Origin::Gold;
      } else if (rules.count("pronoun")) {
        ex.labels[Dimension::About] =
            pronoun_majority_label(tokenize(ex.text), lexicon, config);
        ex.label_origin[Dimension::About] = Origin::Rule;
      }
      examples.push_back(std::move(ex));
    }
  }

  auto assembled = assemble({{source, examples}});
  save_corpus(assembled, args.out);
  print_distribution(assembled);

  RunManifest manifest;
  manifest.command = command_line;
  manifest.config = {{"rules", args.rules},
                     {"they_maps_to", args.they_maps_to},
                     {"name_threshold", std::to_string(args.name_threshold)}};
  manifest.add_input(args.in);
  manifest.write(parent_dir(args.out));
  return 0;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  std::vector<std::string> corpus;
  std::string valid;
  std::string task = "multitask";
  std::string out_dir = "run";
  std::string mask = "none";
  std::string lexicon_dir = default_lexicon_dir();
  TrainConfig config;
};

int cmd_train(const TrainArgs& args, const std::string& command_line) {
  for (const auto& path : args.corpus) require_file(path);
  std::vector<Example> train_data;
  for (const auto& path : args.corpus) {
    auto part = load_corpus(path);
    train_data.insert(train_data.end(), part.begin(), part.end());
  }
  std::vector<Example> valid_data;
  if (!args.valid.empty()) {
    require_file(args.valid);
    valid_data = load_corpus(args.valid);
  } else {
    auto parts = split(train_data, 0.8, 0.1, 0.1, args.config.seed);
    train_data = parts.train;
    valid_data = parts.valid;
  }

  TrainConfig config = args.config;
  config.tasks = parse_task(args.task);
  config.mask_mode = parse_mask_mode(args.mask);
  Lexicon lexicon;
  if (config.mask_mode != MaskMode::None) {
    lexicon = load_lexicon(args.lexicon_dir);
  }

  TrainResult result = train(train_data, valid_data, config, lexicon);

  fs::create_directories(args.out_dir);
  const std::string model_path =
      (fs::path(args.out_dir) / "model.bin").string();
  result.model.save(model_path);

  std::ofstream log((fs::path(args.out_dir) / "train_log.jsonl").string());
  for (const EpochLog& e : result.log) {
    json j;
    j["epoch"] = e.epoch;
    j["loss"] = e.mean_loss;
    j["valid_avg"] = e.valid_avg;
    for (const auto& [c, acc] : e.valid_class_accuracy) {
      j["class_accuracy"][to_string(c)] = acc;
    }
    log << j.dump() << "\n";
  }
  const double best_valid =
      result.best_epoch >= 0 ? result.log[result.best_epoch].valid_avg : 0.0;
  std::cout << "best epoch " << result.best_epoch << ", valid avg "
            << best_valid;
  std::cout << "\nfeature collision rate: " << result.feature_collision_rate
            << "\nmodel written to " << model_path << "\n";

  RunManifest manifest;
  manifest.command = command_line;
  manifest.seed = config.seed;
  manifest.config = {
      {"task", args.task},
      {"epochs", std::to_string(config.epochs)},
      {"lr", std::to_string(config.learning_rate)},
      {"embed_dim", std::to_string(config.embed_dim)},
      {"feature_dim", std::to_string(config.feature_dim)},
      {"mask", args.mask},
      // Multitask batches interleave dimensions by uniform shuffling of
      // (example, dimension) pairs; balancing runs per epoch after flipping.
      {"pair_order", "uniform_shuffle"},
      {"balance", "per_epoch_after_flip"},
  };
  for (const auto& path : args.corpus) manifest.add_input(path);
  if (!args.valid.empty()) manifest.add_input(args.valid);
  manifest.write(args.out_dir);
  return 0;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string model, data;
  std::string format = "canonical";
  std::string json_out;
  std::string lexicon_dir = default_lexicon_dir();
  bool certain_only = false;
};

int cmd_eval(const EvalArgs& args, const std::string& command_line) {
  require_file(args.model);
  require_file(args.data);
  BiEncoderModel model = BiEncoderModel::load(args.model);
  std::vector<Example> data = args.format == "mdgender"
                                  ? load_mdgender(args.data)
                                  : load_corpus(args.data);
  if (args.certain_only) {
    std::erase_if(data, [](const Example& ex) {
      return !ex.confidence || *ex.confidence != Confidence::Certain;
    });
  }
  if (data.empty()) throw InputError("no examples in " + args.data);
  if (model.config.mask_mode != MaskMode::None) {
    Lexicon lexicon = load_lexicon(args.lexicon_dir);
    for (Example& ex : data) {
      ex.text = apply_mask(ex.text, model.config.mask_mode, lexicon);
    }
  }
  EvalReport report;
  try {
    report = evaluate(model, data);
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
  print_report(report);
  if (!args.json_out.empty()) {
    std::ofstream out(args.json_out);
    out << report_to_json(report).dump(2) << "\n";
    RunManifest manifest;
    manifest.command = command_line;
    manifest.config = {{"format", args.format},
                       {"certain_only", args.certain_only ? "true" : "false"}};
    manifest.add_input(args.model);
    manifest.add_input(args.data);
    manifest.write(parent_dir(args.json_out));
  }
  return 0;
}

// ------------------------------------------------------------------ impute

int cmd_impute(const std::string& model_path, const std::string& in,
               const std::string& out, const std::string& command_line) {
  require_file(model_path);
  require_file(in);
  BiEncoderModel model = BiEncoderModel::load(model_path);
  auto corpus = load_corpus(in);
  save_corpus(impute_about(corpus, model), out);
  RunManifest manifest;
  manifest.command = command_line;
  manifest.add_input(model_path);
  manifest.add_input(in);
  manifest.write(parent_dir(out));
  return 0;
}

// ------------------------------------------------------------------- score

struct ScoreArgs {
  std::string model, docs, out;
  std::size_t min_paragraphs = 25;
};

int cmd_score(const ScoreArgs& args, const std::string& command_line) {
  require_file(args.model);
  require_file(args.docs);
  BiEncoderModel model = BiEncoderModel::load(args.model);
  auto docs = load_documents(args.docs);
  GenderednessReport report =
      document_genderedness(docs, model, args.min_paragraphs);

  std::ofstream out(args.out);
  if (!out) throw InputError("cannot write " + args.out);
  for (const auto& s : report.ranked_filtered) {
    out << s.doc_id << "\t" << std::setprecision(10) << s.median_score << "\t"
        << s.paragraph_count << "\n";
  }
  std::cout << "documents scored: " << report.ranked.size()
            << " (skipped empty: " << report.skipped_empty << ")\n"
            << "mean of medians: " << report.mean_of_medians << "\n"
            << "ranking written to " << args.out << " ("
            << report.ranked_filtered.size() << " docs with >= "
            << args.min_paragraphs << " paragraphs)\n";

  RunManifest manifest;
  manifest.command = command_line;
  manifest.config = {{"min_paragraphs", std::to_string(args.min_paragraphs)}};
  manifest.add_input(args.model);
  manifest.add_input(args.docs);
  manifest.write(parent_dir(args.out));
  return 0;
}

// ------------------------------------------------------------------- stats

struct StatsArgs {
  std::string in, out;
  std::string pos_filter;  // comma-separated tags; empty keeps everything
  long min_count = 500;
};

int cmd_stats(const StatsArgs& args, const std::string& command_line) {
  require_file(args.in);
  std::set<std::string> allowed_pos;
  {
    std::istringstream ss(args.pos_filter);
    std::string tag;
    while (std::getline(ss, tag, ',')) {
      if (!tag.empty()) allowed_pos.insert(tag);
    }
  }

  std::vector<std::pair<std::vector<Token>, GenderLabel>> corpus;
  std::ifstream in(args.in);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw InputError(args.in + " line " + std::to_string(lineno) +
                       ": invalid JSON");
    }
    auto tokens = tokenize(j.at("text").get<std::string>());
    if (!allowed_pos.empty() && j.contains("pos")) {
      const auto& pos = j["pos"];
      if (pos.size() != tokens.size()) {
        throw InputError(args.in + " line " + std::to_string(lineno) +
                         ": pos column length mismatch");
      }
      std::vector<Token> kept;
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (allowed_pos.count(pos[i].get<std::string>())) {
          kept.push_back(tokens[i]);
        }
      }
      tokens = kept;
    }
    corpus.push_back({std::move(tokens),
                      parse_gender_label(j.at("gender").get<std::string>())});
  }
  if (corpus.empty()) throw InputError("no documents in " + args.in);

  auto stats = overrepresentation(corpus, args.min_count);
  std::ofstream out(args.out);
  if (!out) throw InputError("cannot write " + args.out);
  std::cout << std::left << std::setw(20) << "word" << std::setw(12)
            << "gender" << std::right << std::setw(12) << "ratio"
            << std::setw(10) << "count" << "\n";
  for (const WordStats& w : stats) {
    out << w.word << "\t" << to_string(w.gender) << "\t"
        << std::setprecision(10) << w.ratio << "\t" << w.count << "\n";
    std::cout << std::left << std::setw(20) << w.word << std::setw(12)
              << to_string(w.gender) << std::right << std::setw(12)
              << std::fixed << std::setprecision(4) << w.ratio
              << std::setw(10) << w.count << "\n";
    std::cout.unsetf(std::ios::fixed);
  }

  RunManifest manifest;
  manifest.command = command_line;
  manifest.config = {{"min_count", std::to_string(args.min_count)},
                     {"pos", args.pos_filter}};
  manifest.add_input(args.in);
  manifest.write(parent_dir(args.out));
  return 0;
}

// ---------------------------------------------------------- control-corpus

struct ControlCorpusArgs {
  std::string in, out, model;
  std::string dim = "about";
  std::string lexicon_dir = default_lexicon_dir();
  bool wordlist = false;
};

int cmd_control_corpus(const ControlCorpusArgs& args,
                       const std::string& command_line) {
  require_file(args.in);
  auto utterances = load_lines(args.in);
  Dimension dim = parse_dimension(args.dim);
  std::vector<std::string> corpus;
  if (args.wordlist) {
    corpus = build_control_corpus_wordlist(utterances,
                                           load_lexicon(args.lexicon_dir), dim);
  } else {
    require_file(args.model);
    corpus = build_control_corpus(utterances, BiEncoderModel::load(args.model),
                                  dim);
  }
  std::ofstream out(args.out);
  if (!out) throw InputError("cannot write " + args.out);
  for (const auto& l : corpus) out << l << "\n";

  RunManifest manifest;
  manifest.command = command_line;
  manifest.config = {{"dim", args.dim},
                     {"labeler", args.wordlist ? "wordlist" : "model"}};
  manifest.add_input(args.in);
  if (!args.wordlist) manifest.add_input(args.model);
  manifest.write(parent_dir(args.out));
  return 0;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string corpus, out;
  std::vector<std::string> controls;
  int order = 3;
  long n = 1;
  GenerateOptions options;
};

int cmd_generate(const GenerateArgs& args, const std::string& command_line) {
  require_file(args.corpus);
  ControlLM lm = train_controlled_lm(load_lines(args.corpus), args.order);
  std::ofstream out(args.out);
  if (!out) throw InputError("cannot write " + args.out);
  for (const std::string& control_str : args.controls) {
    ControlToken control = ControlToken::parse(control_str);
    for (long i = 0; i < args.n; ++i) {
      GenerateOptions options = args.options;
      options.seed = splitmix64(args.options.seed ^
                                fnv1a64(control_str) ^
                                static_cast<std::uint64_t>(i));
      out << control.rendered() << "\t" << generate(lm, control, options)
          << "\n";
    }
  }

  RunManifest manifest;
  manifest.command = command_line;
  manifest.seed = args.options.seed;
  manifest.config = {
      {"order", std::to_string(args.order)},
      {"k", std::to_string(args.options.top_k)},
      {"block", std::to_string(args.options.block_n)},
      {"min_tokens", std::to_string(args.options.min_tokens)},
      {"max_tokens", std::to_string(args.options.max_tokens)},
      {"n", std::to_string(args.n)},
      // Token minimum counted in this toolkit's whitespace tokens.
      {"token_unit", "whitespace"},
  };
  manifest.add_input(args.corpus);
  manifest.write(parent_dir(args.out));
  return 0;
}

// --------------------------------------------------------------- stats-gen

int cmd_stats_gen(const std::string& in, const std::string& out,
                  const std::string& lexicon_dir,
                  const std::string& command_line) {
  require_file(in);
  Lexicon lexicon = load_lexicon(lexicon_dir);
  std::vector<std::pair<std::string, std::string>> generations;
  for (const std::string& line : load_lines(in)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InputError("expected control<TAB>text lines in " + in);
    }
    generations.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  auto stats = generation_stats(generations, lexicon);

  json j = json::array();
  std::cout << std::left << std::setw(20) << "control" << std::right
            << std::setw(14) << "gend. words" << std::setw(12) << "pct masc"
            << "\n";
  for (const GenStats& s : stats) {
    json row;
    row["control"] = s.control;
    row["gendered_word_count"] = s.gendered_word_count;
    if (s.pct_masculine) row["pct_masculine"] = *s.pct_masculine;
    j.push_back(row);
    std::ostringstream pct;
    if (s.pct_masculine) {
      pct << std::fixed << std::setprecision(2) << *s.pct_masculine;
    } else {
      pct << "-";
    }
    std::cout << std::left << std::setw(20) << s.control << std::right
              << std::setw(14) << s.gendered_word_count << std::setw(12)
              << pct.str() << "\n";
  }
  std::ofstream f(out);
  if (!f) throw InputError("cannot write " + out);
  f << j.dump(2) << "\n";

  RunManifest manifest;
  manifest.command = command_line;
  manifest.add_input(in);
  manifest.write(parent_dir(out));
  return 0;
}

// ----------------------------------------------------------------- offense

int cmd_offense(const std::string& model_path, const std::string& safe_path,
                const std::string& offensive_path, const std::string& out,
                const std::string& command_line) {
  require_file(model_path);
  require_file(safe_path);
  require_file(offensive_path);
  BiEncoderModel model = BiEncoderModel::load(model_path);
  OffensiveReport report = offensive_analysis(
      load_lines(safe_path), load_lines(offensive_path), model);

  json j;
  std::cout << std::left << std::setw(8) << "dim" << std::right
            << std::setw(12) << "safe" << std::setw(12) << "offensive"
            << std::setw(14) << "t-statistic" << std::setw(14) << "p-value"
            << "\n";
  for (const auto& [dim, od] : report.dimensions) {
    json row;
    row["pct_masculine_safe"] = od.pct_masculine_safe;
    row["pct_masculine_offensive"] = od.pct_masculine_offensive;
    std::ostringstream t_str, p_str;
    if (od.test) {
      row["t_statistic"] = od.test->t;
      row["p_value"] = od.test->p;
      t_str << std::scientific << std::setprecision(3) << od.test->t;
      p_str << std::scientific << std::setprecision(3) << od.test->p;
    } else {
      t_str << "-";
      p_str << "-";
    }
    j[to_string(dim)] = row;
    std::cout << std::left << std::setw(8) << to_string(dim) << std::right
              << std::setw(12) << std::fixed << std::setprecision(2)
              << od.pct_masculine_safe << std::setw(12)
              << od.pct_masculine_offensive << std::setw(14) << t_str.str()
              << std::setw(14) << p_str.str() << "\n";
    std::cout.unsetf(std::ios::fixed);
  }
  std::ofstream f(out);
  if (!f) throw InputError("cannot write " + out);
  f << j.dump(2) << "\n";

  RunManifest manifest;
  manifest.command = command_line;
  manifest.add_input(model_path);
  manifest.add_input(safe_path);
  manifest.add_input(offensive_path);
  manifest.write(parent_dir(out));
  return 0;
}

// ---------------------------------------------------------- gendered-words

struct WordsArgs {
  std::string model, in, out;
  std::string lexicon_dir = default_lexicon_dir();
  double prob_threshold = 0.70;
  std::size_t top_n = 20;
  std::size_t min_len = 3;
};

int cmd_gendered_words(const WordsArgs& args, const std::string& command_line) {
  require_file(args.model);
  require_file(args.in);
  BiEncoderModel model = BiEncoderModel::load(args.model);
  Lexicon lexicon = load_lexicon(args.lexicon_dir);
  GenderedWordLists lists =
      gendered_word_analysis(load_lines(args.in), model, args.prob_threshold,
                             lexicon, args.top_n, args.min_len);
  json j;
  for (const auto& [name, words] :
       {std::pair{"masculine", &lists.masculine},
        std::pair{"feminine", &lists.feminine}}) {
    json arr = json::array();
    std::cout << name << ":";
    for (const RankedWord& w : *words) {
      arr.push_back({{"word", w.word}, {"count", w.count}});
      std::cout << " " << w.word << "(" << w.count << ")";
    }
    std::cout << "\n";
    j[name] = arr;
  }
  std::ofstream f(args.out);
  if (!f) throw InputError("cannot write " + args.out);
  f << j.dump(2) << "\n";

  RunManifest manifest;
  manifest.command = command_line;
  manifest.config = {{"prob_threshold", std::to_string(args.prob_threshold)},
                     {"top_n", std::to_string(args.top_n)},
                     {"min_len", std::to_string(args.min_len)}};
  manifest.add_input(args.model);
  manifest.add_input(args.in);
  manifest.write(parent_dir(args.out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::string command_line;
  for (int i = 0; i < argc; ++i) {
    if (i) command_line.push_back(' ');
    command_line += argv[i];
  }

  CLI::App app{"gender-dimension text toolkit"};
  app.require_subcommand(1);
  app.set_config("--config");

  AnnotateArgs annotate_args;
  auto* annotate_cmd = app.add_subcommand("annotate", "rule-based labeling");
  annotate_cmd->add_option("--in", annotate_args.in, "input JSONL")->required();
  annotate_cmd->add_option("--out", annotate_args.out, "canonical corpus out")
      ->required();
  annotate_cmd->add_option("--rules", annotate_args.rules,
                           "comma list: pronoun,persona,kinship,names,dialogue");
  annotate_cmd->add_option("--lexicon-dir", annotate_args.lexicon_dir);
  annotate_cmd->add_option("--they-maps-to", annotate_args.they_maps_to);
  annotate_cmd->add_option("--name-threshold", annotate_args.name_threshold);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train a bi-encoder model");
  train_cmd->add_option("--train", train_args.corpus, "training corpora")
      ->required();
  train_cmd->add_option("--valid", train_args.valid, "validation corpus");
  train_cmd->add_option("--task", train_args.task, "about|to|as|multitask");
  train_cmd->add_option("--epochs", train_args.config.epochs);
  train_cmd->add_option("--lr", train_args.config.learning_rate);
  train_cmd->add_option("--embed-dim", train_args.config.embed_dim);
  train_cmd->add_option("--feature-dim", train_args.config.feature_dim);
  train_cmd->add_option("--seed", train_args.config.seed);
  train_cmd->add_option("--mask", train_args.mask,
                        "none|words|words_and_names");
  train_cmd->add_option("--lexicon-dir", train_args.lexicon_dir);
  train_cmd->add_option("--out-dir", train_args.out_dir);

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model");
  eval_cmd->add_option("--model", eval_args.model)->required();
  eval_cmd->add_option("--data", eval_args.data)->required();
  eval_cmd->add_option("--format", eval_args.format, "canonical|mdgender");
  eval_cmd->add_option("--json-out", eval_args.json_out);
  eval_cmd->add_option("--lexicon-dir", eval_args.lexicon_dir);
  eval_cmd->add_flag("--certain-only", eval_args.certain_only);

  std::string impute_model, impute_in, impute_out;
  auto* impute_cmd = app.add_subcommand("impute", "impute about labels");
  impute_cmd->add_option("--model", impute_model)->required();
  impute_cmd->add_option("--in", impute_in)->required();
  impute_cmd->add_option("--out", impute_out)->required();

  ScoreArgs score_args;
  auto* score_cmd = app.add_subcommand("score", "document genderedness");
  score_cmd->add_option("--model", score_args.model)->required();
  score_cmd->add_option("--docs", score_args.docs)->required();
  score_cmd->add_option("--out", score_args.out)->required();
  score_cmd->add_option("--min-paragraphs", score_args.min_paragraphs);

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "over-representation table");
  stats_cmd->add_option("--in", stats_args.in)->required();
  stats_cmd->add_option("--out", stats_args.out)->required();
  stats_cmd->add_option("--min-count", stats_args.min_count);
  stats_cmd->add_option("--pos", stats_args.pos_filter,
                        "keep only these POS tags when a pos column exists");

  ControlCorpusArgs cc_args;
  auto* cc_cmd = app.add_subcommand("control-corpus",
                                    "prepend control tokens to utterances");
  cc_cmd->add_option("--in", cc_args.in)->required();
  cc_cmd->add_option("--out", cc_args.out)->required();
  cc_cmd->add_option("--dim", cc_args.dim);
  cc_cmd->add_option("--model", cc_args.model);
  cc_cmd->add_flag("--wordlist", cc_args.wordlist);
  cc_cmd->add_option("--lexicon-dir", cc_args.lexicon_dir);

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand("generate", "controlled generation");
  gen_cmd->add_option("--corpus", gen_args.corpus, "control corpus")
      ->required();
  gen_cmd->add_option("--out", gen_args.out)->required();
  gen_cmd->add_option("--control", gen_args.controls, "e.g. ABOUT:feminine")
      ->required();
  gen_cmd->add_option("--order", gen_args.order);
  gen_cmd->add_option("--k", gen_args.options.top_k);
  gen_cmd->add_option("--block", gen_args.options.block_n);
  gen_cmd->add_option("--min-tokens", gen_args.options.min_tokens);
  gen_cmd->add_option("--max-tokens", gen_args.options.max_tokens);
  gen_cmd->add_option("--n", gen_args.n, "generations per control token");
  gen_cmd->add_option("--seed", gen_args.options.seed);

  std::string sg_in, sg_out, sg_lexicon = default_lexicon_dir();
  auto* sg_cmd = app.add_subcommand("stats-gen", "gendered-word stats over generations");
  sg_cmd->add_option("--in", sg_in)->required();
  sg_cmd->add_option("--out", sg_out)->required();
  sg_cmd->add_option("--lexicon-dir", sg_lexicon);

  std::string off_model, off_safe, off_offensive, off_out;
  auto* off_cmd = app.add_subcommand("offense", "safe vs offensive genderedness");
  off_cmd->add_option("--model", off_model)->required();
  off_cmd->add_option("--safe", off_safe)->required();
  off_cmd->add_option("--offensive", off_offensive)->required();
  off_cmd->add_option("--out", off_out)->required();

  WordsArgs words_args;
  auto* words_cmd = app.add_subcommand("gendered-words",
                                       "high-confidence word ranking");
  words_cmd->add_option("--model", words_args.model)->required();
  words_cmd->add_option("--in", words_args.in)->required();
  words_cmd->add_option("--out", words_args.out)->required();
  words_cmd->add_option("--prob-threshold", words_args.prob_threshold);
  words_cmd->add_option("--top-n", words_args.top_n);
  words_cmd->add_option("--min-len", words_args.min_len);
  words_cmd->add_option("--lexicon-dir", words_args.lexicon_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*annotate_cmd) return cmd_annotate(annotate_args, command_line);
    if (*train_cmd) return cmd_train(train_args, command_line);
    if (*eval_cmd) return cmd_eval(eval_args, command_line);
    if (*impute_cmd) {
      return cmd_impute(impute_model, impute_in, impute_out, command_line);
    }
    if (*score_cmd) return cmd_score(score_args, command_line);
    if (*stats_cmd) return cmd_stats(stats_args, command_line);
    if (*cc_cmd) return cmd_control_corpus(cc_args, command_line);
    if (*gen_cmd) return cmd_generate(gen_args, command_line);
    if (*sg_cmd) return cmd_stats_gen(sg_in, sg_out, sg_lexicon, command_line);
    if (*off_cmd) {
      return cmd_offense(off_model, off_safe, off_offensive, off_out,
                         command_line);
    }
    if (*words_cmd) return cmd_gendered_words(words_args, command_line);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
