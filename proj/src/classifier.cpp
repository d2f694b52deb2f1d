#include "gdim/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "gdim/random.hpp"

namespace gdim {

MaskMode parse_mask_mode(std::string_view s) {
  if (s == "none") return MaskMode::None;
  if (s == "words") return MaskMode::Words;
  if (s == "words_and_names") return MaskMode::WordsAndNames;
  throw std::invalid_argument("bad mask mode: " + std::string(s));
}

std::string to_string(MaskMode mode) {
  switch (mode) {
    case MaskMode::None: return "none";
    case MaskMode::Words: return "words";
    case MaskMode::WordsAndNames: return "words_and_names";
  }
  throw std::logic_error("bad MaskMode");
}

std::vector<ClassId> BiEncoderModel::candidates(Dimension dim) const {
  if (!config.tasks.count(dim)) {
    throw std::runtime_error("model does not support dimension " +
                             to_string(dim));
  }
  if (dim == Dimension::About) {
    return {{dim, GenderLabel::Masculine},
            {dim, GenderLabel::Feminine},
            {dim, GenderLabel::Neutral}};
  }
  // TO/AS carry no neutral training data; neutral is an unsupported class.
  return {{dim, GenderLabel::Masculine}, {dim, GenderLabel::Feminine}};
}

std::vector<std::size_t> hash_features(const std::string& text,
                                       std::uint64_t hash_seed,
                                       std::size_t feature_dim) {
  std::vector<Token> tokens = tokenize(text);
  std::vector<std::size_t> features;
  features.reserve(tokens.size() * 2);
  for (const Token& t : tokens) {
    features.push_back(fnv1a64(t.surface, hash_seed) % feature_dim);
  }
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    std::string bigram = tokens[i].surface + "\x1f" + tokens[i + 1].surface;
    features.push_back(fnv1a64(bigram, hash_seed) % feature_dim);
  }
  return features;
}

std::vector<float> encode_text(const std::string& text,
                               const BiEncoderModel& model) {
  const std::size_t d = model.config.embed_dim;
  std::vector<double> acc(d, 0.0);
  auto features =
      hash_features(text, model.hash_seed, model.config.feature_dim);
  for (std::size_t f : features) {
    const float* row = &model.feature_embeddings[f * d];
    for (std::size_t j = 0; j < d; ++j) acc[j] += row[j];
  }
  std::vector<float> out(d, 0.0f);
  if (!features.empty()) {
    for (std::size_t j = 0; j < d; ++j) {
      out[j] = static_cast<float>(acc[j] / static_cast<double>(features.size()));
    }
  }
  return out;
}

std::map<ClassId, double> score_classes(const std::string& text,
                                        const std::vector<ClassId>& candidates,
                                        const BiEncoderModel& model) {
  if (candidates.empty()) throw std::runtime_error("empty candidate set");
  std::vector<float> v = encode_text(text, model);
  std::map<ClassId, double> scores;
  for (const ClassId& c : candidates) {
    if (!model.config.tasks.count(c.dimension)) {
      throw std::runtime_error("candidate outside model tasks: " +
                               to_string(c));
    }
    auto it = model.class_embeddings.find(c);
    if (it == model.class_embeddings.end()) {
      throw std::runtime_error("no embedding for class " + to_string(c));
    }
    double dot = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) dot += v[j] * it->second[j];
    scores[c] = dot;
  }
  return scores;
}

namespace {

// Softmax in candidate (class) order; returns probabilities aligned with
// candidates.
std::vector<double> softmax(const std::vector<double>& scores) {
  double mx = *std::max_element(scores.begin(), scores.end());
  std::vector<double> p(scores.size());
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] - mx);
    z += p[i];
  }
  for (double& x : p) x /= z;
  return p;
}

std::vector<double> candidate_scores(const BiEncoderModel& model,
                                     const std::string& text,
                                     const std::vector<ClassId>& cands) {
  auto scored = score_classes(text, cands, model);
  std::vector<double> s;
  s.reserve(cands.size());
  for (const ClassId& c : cands) s.push_back(scored.at(c));
  return s;
}

}  // namespace

std::pair<GenderLabel, double> predict(const BiEncoderModel& model,
                                       const std::string& text,
                                       Dimension dim) {
  auto cands = model.candidates(dim);
  auto p = softmax(candidate_scores(model, text, cands));
  // Candidates are already in tie-breaking order; keep the first maximum.
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return {cands[best].label, p[best]};
}

double cross_entropy_loss(const BiEncoderModel& model, const std::string& text,
                          Dimension dim, GenderLabel label) {
  auto cands = model.candidates(dim);
  auto p = softmax(candidate_scores(model, text, cands));
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cands[i].label == label) return -std::log(p[i]);
  }
  throw std::runtime_error("label is not a candidate class for " +
                           to_string(dim));
}

LossGradients compute_gradients(const BiEncoderModel& model,
                                const std::string& text, Dimension dim,
                                GenderLabel label) {
  const std::size_t d = model.config.embed_dim;
  auto cands = model.candidates(dim);
  auto features =
      hash_features(text, model.hash_seed, model.config.feature_dim);
  std::vector<float> v = encode_text(text, model);
  auto p = softmax(candidate_scores(model, text, cands));

  LossGradients grads;
  bool found = false;
  std::vector<double> dv(d, 0.0);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    double g = p[i] - (cands[i].label == label ? 1.0 : 0.0);
    if (cands[i].label == label) {
      grads.loss = -std::log(p[i]);
      found = true;
    }
    std::vector<double> dw(d);
    const auto& w = model.class_embeddings.at(cands[i]);
    for (std::size_t j = 0; j < d; ++j) {
      dw[j] = g * v[j];
      dv[j] += g * w[j];
    }
    grads.classes[cands[i]] = std::move(dw);
  }
  if (!found) {
    throw std::runtime_error("label is not a candidate class for " +
                             to_string(dim));
  }
  if (!features.empty()) {
    const double scale = 1.0 / static_cast<double>(features.size());
    for (std::size_t f : features) {
      auto [it, fresh] = grads.feature_rows.try_emplace(f,
                                                        std::vector<double>(d));
      for (std::size_t j = 0; j < d; ++j) it->second[j] += scale * dv[j];
    }
  }
  return grads;
}

std::string apply_mask(const std::string& text, MaskMode mode,
                       const Lexicon& lexicon) {
  if (mode == MaskMode::None) return text;
  auto masked =
      mask_gendered(tokenize(text), lexicon, mode == MaskMode::WordsAndNames);
  std::string out;
  for (const Token& t : masked) {
    if (!out.empty()) out.push_back(' ');
    out += t.original;
  }
  return out;
}

namespace {

struct TrainPair {
  std::string text;  // already masked
  Dimension dim;
  GenderLabel label;
};

std::vector<Example> masked_copy(const std::vector<Example>& examples,
                                 MaskMode mode, const Lexicon& lexicon) {
  if (mode == MaskMode::None) return examples;
  std::vector<Example> out = examples;
  for (Example& ex : out) ex.text = apply_mask(ex.text, mode, lexicon);
  return out;
}

double collision_rate(const std::vector<Example>& data,
                      std::uint64_t hash_seed, std::size_t feature_dim) {
  std::unordered_set<std::string> grams;
  for (const Example& ex : data) {
    auto tokens = tokenize(ex.text);
    for (const Token& t : tokens) grams.insert(t.surface);
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      grams.insert(tokens[i].surface + "\x1f" + tokens[i + 1].surface);
    }
  }
  if (grams.empty()) return 0.0;
  std::unordered_set<std::size_t> buckets;
  for (const std::string& g : grams) {
    buckets.insert(fnv1a64(g, hash_seed) % feature_dim);
  }
  return 1.0 - static_cast<double>(buckets.size()) /
                   static_cast<double>(grams.size());
}

}  // namespace

TrainResult train(const std::vector<Example>& train_data,
                  const std::vector<Example>& valid_data,
                  const TrainConfig& config, const Lexicon& lexicon) {
  if (train_data.empty()) throw std::runtime_error("empty training corpus");
  if (config.tasks.empty()) throw std::runtime_error("no tasks configured");

  BiEncoderModel model;
  model.config = config;
  model.hash_seed = splitmix64(config.seed ^ fnv1a64("hash-seed"));

  const std::size_t d = config.embed_dim;
  Rng init = substream(config.seed, "init");
  const double radius = 0.5 / std::sqrt(static_cast<double>(d));
  model.feature_embeddings.resize(config.feature_dim * d);
  for (float& x : model.feature_embeddings) {
    x = static_cast<float>(init.uniform_sym(radius));
  }
  for (Dimension dim : kAllDimensions) {
    if (!config.tasks.count(dim)) continue;
    for (const ClassId& c : model.candidates(dim)) {
      std::vector<float>& w = model.class_embeddings[c];
      w.resize(d);
      for (float& x : w) x = static_cast<float>(init.uniform_sym(radius));
    }
  }

  const std::vector<Example> masked_train =
      masked_copy(train_data, config.mask_mode, lexicon);
  const std::vector<Example> masked_valid =
      masked_copy(valid_data.empty() ? train_data : valid_data,
                  config.mask_mode, lexicon);

  TrainResult result;
  result.feature_collision_rate =
      collision_rate(masked_train, model.hash_seed, config.feature_dim);

  double best_valid = -1.0;
  BiEncoderModel best_model = model;

  for (long epoch = 0; epoch < config.epochs; ++epoch) {
    EpochView view = epoch_view(masked_train, epoch, config.seed);

    std::vector<TrainPair> pairs;
    for (Dimension dim : kAllDimensions) {
      if (!config.tasks.count(dim)) continue;
      EpochView balanced = oversample_balance(view, dim);
      auto cands = model.candidates(dim);
      for (const Example& ex : balanced.examples) {
        GenderLabel label = ex.labels.at(dim);
        if (label == GenderLabel::Unknown) continue;
        bool in_cands = std::any_of(cands.begin(), cands.end(),
                                    [&](const ClassId& c) {
                                      return c.label == label;
                                    });
        if (!in_cands) continue;
        pairs.push_back(TrainPair{ex.text, dim, label});
      }
    }
    Rng order = substream(config.seed,
                          "order:" + std::to_string(epoch));
    deterministic_shuffle(pairs, order);

    double loss_sum = 0.0;
    for (const TrainPair& pair : pairs) {
      LossGradients grads =
          compute_gradients(model, pair.text, pair.dim, pair.label);
      if (!std::isfinite(grads.loss)) {
        throw std::runtime_error("training diverged at epoch " +
                                 std::to_string(epoch));
      }
      loss_sum += grads.loss;
      const double lr = config.learning_rate;
      for (const auto& [c, dw] : grads.classes) {
        auto& w = model.class_embeddings.at(c);
        for (std::size_t j = 0; j < d; ++j) {
          w[j] = static_cast<float>(w[j] - lr * dw[j]);
        }
      }
      for (const auto& [f, dr] : grads.feature_rows) {
        float* row = &model.feature_embeddings[f * d];
        for (std::size_t j = 0; j < d; ++j) {
          row[j] = static_cast<float>(row[j] - lr * dr[j]);
        }
      }
    }

    EpochLog log;
    log.epoch = epoch;
    log.mean_loss = pairs.empty() ? 0.0 : loss_sum / pairs.size();
    if (!std::isfinite(log.mean_loss)) {
      throw std::runtime_error("training diverged at epoch " +
                               std::to_string(epoch));
    }
    EvalReport report = evaluate(model, masked_valid);
    log.valid_avg = report.all_avg;
    for (const auto& [dim, dr] : report.dimensions) {
      for (const auto& [label, acc] : dr.class_accuracy) {
        log.valid_class_accuracy[ClassId{dim, label}] = acc;
      }
    }
    result.log.push_back(log);

    if (log.valid_avg > best_valid) {
      best_valid = log.valid_avg;
      best_model = model;
      result.best_epoch = epoch;
    }
  }

  result.model = std::move(best_model);
  return result;
}

EvalReport evaluate(const BiEncoderModel& model,
                    const std::vector<Example>& eval_data) {
  EvalReport report;
  long total_examples = 0;
  for (Dimension dim : kAllDimensions) {
    if (!model.config.tasks.count(dim)) continue;
    auto cands = model.candidates(dim);
    std::map<GenderLabel, long> seen, correct;
    for (const Example& ex : eval_data) {
      GenderLabel gold = ex.labels.at(dim);
      if (gold == GenderLabel::Unknown) continue;
      bool in_cands = std::any_of(cands.begin(), cands.end(),
                                  [&](const ClassId& c) {
                                    return c.label == gold;
                                  });
      if (!in_cands) continue;
      ++seen[gold];
      ++total_examples;
      auto [pred, prob] = predict(model, ex.text, dim);
      (void)prob;
      if (pred == gold) ++correct[gold];
    }
    if (seen.empty()) continue;
    DimensionReport dr;
    double sum = 0.0;
    for (GenderLabel g : kClassLabels) {
      auto it = seen.find(g);
      if (it == seen.end()) continue;
      double acc = static_cast<double>(correct[g]) /
                   static_cast<double>(it->second);
      dr.class_accuracy[g] = acc;
      sum += acc;
    }
    dr.avg = sum / static_cast<double>(dr.class_accuracy.size());
    report.dimensions[dim] = dr;
  }
  if (total_examples == 0) {
    throw std::runtime_error("no labeled examples to evaluate");
  }
  double sum = 0.0;
  for (const auto& [dim, dr] : report.dimensions) sum += dr.avg;
  report.all_avg = sum / static_cast<double>(report.dimensions.size());
  return report;
}

std::pair<TrainResult, EvalReport> ablation_masked_train(
    const std::vector<Example>& train_data,
    const std::vector<Example>& valid_data, const TrainConfig& config,
    MaskMode mask_mode, const Lexicon& lexicon) {
  TrainConfig cfg = config;
  cfg.mask_mode = mask_mode;
  TrainResult result = train(train_data, valid_data, cfg, lexicon);
  std::vector<Example> masked_valid = valid_data;
  for (Example& ex : masked_valid) {
    ex.text = apply_mask(ex.text, mask_mode, lexicon);
  }
  EvalReport report = evaluate(result.model, masked_valid);
  return {std::move(result), std::move(report)};
}

namespace {

constexpr char kMagic[5] = {'G', 'D', 'I', 'M', '1'};

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("truncated model file");
  return value;
}

}  // namespace

void BiEncoderModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint64_t>(out, config.feature_dim);
  write_pod<std::uint64_t>(out, config.embed_dim);
  write_pod<std::uint64_t>(out, hash_seed);
  write_pod<std::uint64_t>(out, config.seed);
  write_pod<std::int64_t>(out, config.epochs);
  write_pod<double>(out, config.learning_rate);
  write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(config.mask_mode));
  write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(config.tasks.size()));
  for (Dimension dim : kAllDimensions) {
    if (config.tasks.count(dim)) {
      write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(dim));
    }
  }
  out.write(reinterpret_cast<const char*>(feature_embeddings.data()),
            static_cast<std::streamsize>(feature_embeddings.size() *
                                         sizeof(float)));
  write_pod<std::uint32_t>(out,
                           static_cast<std::uint32_t>(class_embeddings.size()));
  for (const auto& [c, w] : class_embeddings) {
    write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(c.dimension));
    write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(c.label));
    out.write(reinterpret_cast<const char*>(w.data()),
              static_cast<std::streamsize>(w.size() * sizeof(float)));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

BiEncoderModel BiEncoderModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a GDIM1 model file: " + path);
  }
  BiEncoderModel model;
  model.config.feature_dim = read_pod<std::uint64_t>(in);
  model.config.embed_dim = read_pod<std::uint64_t>(in);
  model.hash_seed = read_pod<std::uint64_t>(in);
  model.config.seed = read_pod<std::uint64_t>(in);
  model.config.epochs = read_pod<std::int64_t>(in);
  model.config.learning_rate = read_pod<double>(in);
  model.config.mask_mode =
      static_cast<MaskMode>(read_pod<std::uint8_t>(in));
  auto n_tasks = read_pod<std::uint8_t>(in);
  for (std::uint8_t i = 0; i < n_tasks; ++i) {
    model.config.tasks.insert(static_cast<Dimension>(read_pod<std::uint8_t>(in)));
  }
  model.feature_embeddings.resize(model.config.feature_dim *
                                  model.config.embed_dim);
  in.read(reinterpret_cast<char*>(model.feature_embeddings.data()),
          static_cast<std::streamsize>(model.feature_embeddings.size() *
                                       sizeof(float)));
  if (!in) throw std::runtime_error("truncated model file: " + path);
  auto n_classes = read_pod<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_classes; ++i) {
    ClassId c{static_cast<Dimension>(read_pod<std::uint8_t>(in)),
              static_cast<GenderLabel>(read_pod<std::uint8_t>(in))};
    std::vector<float> w(model.config.embed_dim);
    in.read(reinterpret_cast<char*>(w.data()),
            static_cast<std::streamsize>(w.size() * sizeof(float)));
    if (!in) throw std::runtime_error("truncated model file: " + path);
    model.class_embeddings[c] = std::move(w);
  }
  return model;
}

}  // namespace gdim
