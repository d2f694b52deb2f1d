#ifndef GDIM_DATASET_HPP
#define GDIM_DATASET_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gdim/types.hpp"

namespace gdim {

class BiEncoderModel;  // classifier.hpp

// One labeled text unit. Every dimension is present; unknown marks missing
// evidence. label_origin records where each label came from.
struct Example {
  std::string text;
  std::map<Dimension, GenderLabel> labels;
  std::map<Dimension, Origin> label_origin;
  std::string source;
  std::optional<Confidence> confidence;
  std::optional<std::string> conversation_id;

  static Example with_defaults(std::string text, std::string source);
};

// The corpus as seen by one training epoch: TO/AS unknowns resolved to
// masculine or feminine, alternating across epochs.
struct EpochView {
  long epoch = 0;
  std::uint64_t seed = 0;
  std::vector<Example> examples;
};

// Merges annotated source corpora into one example sequence, filling missing
// dimensions with unknown. Throws with source name and line number on
// malformed records (empty text).
std::vector<Example> assemble(
    const std::vector<std::pair<std::string, std::vector<Example>>>& sources);

// Fills ABOUT=unknown labels with the model argmax; the model must have been
// trained only on gold-ABOUT data (caller contract) and must support ABOUT.
std::vector<Example> impute_about(const std::vector<Example>& examples,
                                  const BiEncoderModel& model);

// Deterministic per-(seed, example) assignment of masculine/feminine to
// TO/AS unknowns, flipped on odd epochs so each example alternates labels.
EpochView epoch_view(const std::vector<Example>& examples, long epoch,
                     std::uint64_t seed);

// Round-robin duplication of minority-class examples for the given dimension
// until masculine/feminine/neutral counts match the majority; empty classes
// stay empty, unknown-labeled examples pass through uncounted.
EpochView oversample_balance(const EpochView& view, Dimension dimension);

struct SplitResult {
  std::vector<Example> train;
  std::vector<Example> valid;
  std::vector<Example> test;
};

// Seeded shuffled partition; examples sharing a conversation_id stay in one
// split. Fractions must be positive and sum to 1.
SplitResult split(const std::vector<Example>& examples, double train_frac,
                  double valid_frac, double test_frac, std::uint64_t seed);

// Canonical corpus JSONL.
std::vector<Example> load_corpus(const std::string& path);
void save_corpus(const std::vector<Example>& examples, const std::string& path);

// MDGender-format JSONL: one labeled dimension per record, masculine or
// feminine only, with annotator confidence.
std::vector<Example> load_mdgender(const std::string& path);
void save_mdgender(const std::vector<Example>& examples,
                   const std::string& path);

}  // namespace gdim

#endif  // GDIM_DATASET_HPP
