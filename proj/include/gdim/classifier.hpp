#ifndef GDIM_CLASSIFIER_HPP
#define GDIM_CLASSIFIER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gdim/dataset.hpp"
#include "gdim/textkit.hpp"
#include "gdim/types.hpp"

namespace gdim {

enum class MaskMode { None, Words, WordsAndNames };

MaskMode parse_mask_mode(std::string_view s);
std::string to_string(MaskMode mode);

struct TrainConfig {
  std::set<Dimension> tasks = {Dimension::About};
  std::size_t feature_dim = 1u << 18;
  std::size_t embed_dim = 32;
  double learning_rate = 0.1;
  long epochs = 20;
  std::uint64_t seed = 0;
  MaskMode mask_mode = MaskMode::None;
};

// Text side: mean of learned embeddings over hashed unigram+bigram features.
// Class side: one learned embedding per (dimension, label). Classes are
// scored by dot product with the text vector and ranked.
class BiEncoderModel {
 public:
  TrainConfig config;
  std::uint64_t hash_seed = 0;
  // feature_dim x embed_dim, row-major.
  std::vector<float> feature_embeddings;
  std::map<ClassId, std::vector<float>> class_embeddings;

  // Candidate classes for a dimension: all three for ABOUT, masculine and
  // feminine for TO/AS (no neutral training data exists for those).
  std::vector<ClassId> candidates(Dimension dim) const;

  void save(const std::string& path) const;
  static BiEncoderModel load(const std::string& path);
};

// Hashed unigram + bigram feature ids for a text, in token order.
std::vector<std::size_t> hash_features(const std::string& text,
                                       std::uint64_t hash_seed,
                                       std::size_t feature_dim);

std::vector<float> encode_text(const std::string& text,
                               const BiEncoderModel& model);

std::map<ClassId, double> score_classes(const std::string& text,
                                        const std::vector<ClassId>& candidates,
                                        const BiEncoderModel& model);

// Softmax over the dimension's candidate scores; ties break in class order
// (masculine < feminine < neutral).
std::pair<GenderLabel, double> predict(const BiEncoderModel& model,
                                       const std::string& text, Dimension dim);

// Gradients of the in-dimension cross-entropy loss for one example, exposed
// for the finite-difference check. Keys are feature rows (by feature id) and
// candidate classes.
struct LossGradients {
  double loss = 0.0;
  std::map<std::size_t, std::vector<double>> feature_rows;
  std::map<ClassId, std::vector<double>> classes;
};

double cross_entropy_loss(const BiEncoderModel& model, const std::string& text,
                          Dimension dim, GenderLabel label);

LossGradients compute_gradients(const BiEncoderModel& model,
                                const std::string& text, Dimension dim,
                                GenderLabel label);

struct EpochLog {
  long epoch = 0;
  double mean_loss = 0.0;
  double valid_avg = 0.0;
  std::map<ClassId, double> valid_class_accuracy;
};

struct TrainResult {
  BiEncoderModel model;
  std::vector<EpochLog> log;
  long best_epoch = -1;
  double feature_collision_rate = 0.0;
};

// SGD over shuffled (example, dimension) pairs; each epoch resolves TO/AS
// unknowns via epoch_view and balances classes by oversampling; keeps the
// parameters of the epoch with the best validation average per-class
// accuracy. The lexicon is only consulted when mask_mode != None.
TrainResult train(const std::vector<Example>& train_data,
                  const std::vector<Example>& valid_data,
                  const TrainConfig& config, const Lexicon& lexicon = {});

struct DimensionReport {
  std::map<GenderLabel, double> class_accuracy;  // only classes with examples
  double avg = 0.0;  // mean over defined class accuracies
};

struct EvalReport {
  std::map<Dimension, DimensionReport> dimensions;
  double all_avg = 0.0;  // mean of the per-dimension averages
};

// Per-class accuracy per dimension; unknown-labeled examples are skipped.
EvalReport evaluate(const BiEncoderModel& model,
                    const std::vector<Example>& eval_data);

// Masks texts (train, valid, and the returned model's inputs at eval time are
// the caller's concern; this trains on masked text) and trains.
std::pair<TrainResult, EvalReport> ablation_masked_train(
    const std::vector<Example>& train_data,
    const std::vector<Example>& valid_data, const TrainConfig& config,
    MaskMode mask_mode, const Lexicon& lexicon);

// Applies the model's mask mode to a text the way training did.
std::string apply_mask(const std::string& text, MaskMode mode,
                       const Lexicon& lexicon);

}  // namespace gdim

#endif  // GDIM_CLASSIFIER_HPP
