#include "gdim/annotate.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace gdim {

GenderLabel pronoun_majority_label(const std::vector<Token>& tokens,
                                   const Lexicon& lexicon,
                                   const AnnotateConfig& config) {
  long he = 0, she = 0, they = 0;
  for (const Token& t : tokens) {
    if (lexicon.he_forms.count(t.surface)) ++he;
    if (lexicon.she_forms.count(t.surface)) ++she;
    if (lexicon.they_forms.count(t.surface)) ++they;
  }
  long best = std::max(he, std::max(she, they));
  if (best == 0) return GenderLabel::Unknown;
  int winners = (he == best) + (she == best) + (they == best);
  if (winners > 1) return GenderLabel::Unknown;
  if (he == best) return GenderLabel::Masculine;
  if (she == best) return GenderLabel::Feminine;
  return config.they_maps_to;
}

GenderLabel name_gender_label(const std::string& name, const Lexicon& lexicon,
                              double threshold) {
  if (threshold <= 0.5 || threshold > 1.0) {
    throw std::runtime_error("name threshold must be in (0.5, 1]");
  }
  std::string key;
  key.reserve(name.size());
  for (unsigned char c : name) key.push_back(static_cast<char>(std::tolower(c)));
  auto it = lexicon.name_table.find(key);
  if (it == lexicon.name_table.end()) return GenderLabel::Unknown;
  if (it->second.prob_masculine >= threshold) return GenderLabel::Masculine;
  if (it->second.prob_masculine <= 1.0 - threshold) return GenderLabel::Feminine;
  return GenderLabel::Unknown;
}

GenderLabel kinship_label(const std::vector<Token>& tokens,
                          const Lexicon& lexicon) {
  bool masc = false, fem = false;
  for (const Token& t : tokens) {
    auto it = lexicon.kinship.find(t.surface);
    if (it == lexicon.kinship.end()) continue;
    if (it->second == GenderLabel::Masculine) masc = true;
    if (it->second == GenderLabel::Feminine) fem = true;
  }
  if (masc == fem) return GenderLabel::Unknown;
  return masc ? GenderLabel::Masculine : GenderLabel::Feminine;
}

namespace {

// Gendered noun = kinship term or explicit word-list word.
GenderLabel gendered_noun(const Token& t, const Lexicon& lexicon) {
  auto it = lexicon.kinship.find(t.surface);
  if (it != lexicon.kinship.end()) return it->second;
  if (lexicon.masculine_words.count(t.surface)) return GenderLabel::Masculine;
  if (lexicon.feminine_words.count(t.surface)) return GenderLabel::Feminine;
  return GenderLabel::Unknown;
}

GenderLabel self_description(const std::vector<Token>& tokens,
                             const Lexicon& lexicon) {
  for (std::size_t i = 0; i + 3 < tokens.size(); ++i) {
    if (tokens[i].surface != "i" || tokens[i + 1].surface != "am") continue;
    const std::string& det = tokens[i + 2].surface;
    if (det != "a" && det != "an") continue;
    for (std::size_t j = i + 3; j < tokens.size(); ++j) {
      GenderLabel g = gendered_noun(tokens[j], lexicon);
      if (g != GenderLabel::Unknown) return g;
    }
  }
  return GenderLabel::Unknown;
}

GenderLabel name_statement(const std::vector<Token>& tokens,
                           const Lexicon& lexicon, double threshold) {
  for (std::size_t i = 0; i + 3 < tokens.size(); ++i) {
    if (tokens[i].surface == "my" && tokens[i + 1].surface == "name" &&
        tokens[i + 2].surface == "is") {
      return name_gender_label(tokens[i + 3].surface, lexicon, threshold);
    }
  }
  return GenderLabel::Unknown;
}

}  // namespace

GenderLabel persona_gender(const std::vector<std::string>& persona_lines,
                           const Lexicon& lexicon,
                           const AnnotateConfig& config) {
  std::vector<std::vector<Token>> tokenized;
  tokenized.reserve(persona_lines.size());
  for (const auto& line : persona_lines) tokenized.push_back(tokenize(line));

  for (const auto& tokens : tokenized) {
    GenderLabel g = self_description(tokens, lexicon);
    if (g != GenderLabel::Unknown) return g;
  }
  for (const auto& tokens : tokenized) {
    GenderLabel g = name_statement(tokens, lexicon, config.name_threshold);
    if (g != GenderLabel::Unknown) return g;
  }
  return GenderLabel::Unknown;
}

std::vector<GenderLabel> dialogue_to_labels(
    const std::vector<std::pair<Utterance, GenderLabel>>& conversation) {
  std::vector<GenderLabel> labels;
  labels.reserve(conversation.size());
  for (std::size_t i = 0; i < conversation.size(); ++i) {
    if (i + 1 < conversation.size()) {
      labels.push_back(conversation[i + 1].second);
    } else if (i > 0) {
      labels.push_back(conversation[i - 1].second);
    } else {
      labels.push_back(GenderLabel::Unknown);
    }
  }
  return labels;
}

std::vector<RetainedRecord> confident_retention(
    const std::vector<std::pair<Utterance, double>>& records,
    double threshold) {
  if (threshold <= 0.5) {
    throw std::runtime_error("threshold must exceed 0.5");
  }
  std::vector<RetainedRecord> kept;
  for (const auto& [utt, prob] : records) {
    if (prob < 0.0 || prob > 1.0) {
      throw std::runtime_error("probability out of [0,1]");
    }
    if (prob >= threshold) {
      kept.push_back({utt, GenderLabel::Masculine});
    } else if (prob <= 1.0 - threshold) {
      kept.push_back({utt, GenderLabel::Feminine});
    }
  }
  return kept;
}

}  // namespace gdim
