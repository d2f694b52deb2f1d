#ifndef GDIM_ANNOTATE_HPP
#define GDIM_ANNOTATE_HPP

#include <optional>
#include <string>
#include <vector>

#include "gdim/textkit.hpp"
#include "gdim/types.hpp"

namespace gdim {

struct Utterance {
  std::string text;
  std::optional<std::string> speaker_id;
  std::optional<std::string> conversation_id;
  std::optional<long> turn_index;
};

struct AnnotateConfig {
  // Target label for a they-majority.
  GenderLabel they_maps_to = GenderLabel::Neutral;
  double name_threshold = 0.9;
};

// Majority over gendered pronoun groups; strict majority required, ties and
// zero counts give unknown.
GenderLabel pronoun_majority_label(const std::vector<Token>& tokens,
                                   const Lexicon& lexicon,
                                   const AnnotateConfig& config = {});

// Baby-name lookup. threshold must be in (0.5, 1]; names inside the ambiguity
// band or absent from the table give unknown.
GenderLabel name_gender_label(const std::string& name, const Lexicon& lexicon,
                              double threshold);

// Kinship terms of exactly one gender decide; both or neither give unknown.
GenderLabel kinship_label(const std::vector<Token>& tokens,
                          const Lexicon& lexicon);

// Persona sentences: "i am a/an ... <gendered noun>" first, then
// "my name is <name>". First rule that fires wins.
GenderLabel persona_gender(const std::vector<std::string>& persona_lines,
                           const Lexicon& lexicon,
                           const AnnotateConfig& config = {});

// TO labels: gender of the next speaker when a later turn exists, else the
// previous speaker; a lone utterance gets unknown.
std::vector<GenderLabel> dialogue_to_labels(
    const std::vector<std::pair<Utterance, GenderLabel>>& conversation);

struct RetainedRecord {
  Utterance utterance;
  GenderLabel as_label = GenderLabel::Unknown;
};

// Keeps records whose externally supplied masculine probability clears the
// confidence band on either side.
std::vector<RetainedRecord> confident_retention(
    const std::vector<std::pair<Utterance, double>>& records, double threshold);

}  // namespace gdim

#endif  // GDIM_ANNOTATE_HPP
