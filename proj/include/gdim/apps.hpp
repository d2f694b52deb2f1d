#ifndef GDIM_APPS_HPP
#define GDIM_APPS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gdim/classifier.hpp"
#include "gdim/ngram_lm.hpp"
#include "gdim/stats.hpp"
#include "gdim/textkit.hpp"
#include "gdim/types.hpp"

namespace gdim {

struct Document {
  std::string doc_id;
  std::string title;
  std::vector<std::string> paragraphs;
};

struct GenderednessScore {
  std::string doc_id;
  std::vector<double> paragraph_scores;  // P(ABOUT:masculine) per paragraph
  double median_score = 0.0;
  std::size_t paragraph_count = 0;
};

struct GenderednessReport {
  // All scored documents, ranked descending by median (most masculine first).
  std::vector<GenderednessScore> ranked;
  // Documents meeting min_paragraphs, same order; these feed the extreme
  // rankings.
  std::vector<GenderednessScore> ranked_filtered;
  double mean_of_medians = 0.0;  // over all scored documents
  std::size_t skipped_empty = 0;
};

GenderednessReport document_genderedness(const std::vector<Document>& documents,
                                         const BiEncoderModel& model,
                                         std::size_t min_paragraphs);

// Classifier-labeled control corpus: each line is "DIM:label utterance".
std::vector<std::string> build_control_corpus(
    const std::vector<std::string>& utterances, const BiEncoderModel& model,
    Dimension dimension);

// Word-list baseline labels instead of classifier labels.
std::vector<std::string> build_control_corpus_wordlist(
    const std::vector<std::string>& utterances, const Lexicon& lexicon,
    Dimension dimension);

struct GenStats {
  std::string control;  // rendered control token or baseline tag
  long gendered_word_count = 0;
  long masculine_count = 0;
  std::optional<double> pct_masculine;  // absent when no gendered words
};

std::vector<GenStats> generation_stats(
    const std::vector<std::pair<std::string, std::string>>& generations,
    const Lexicon& lexicon);

struct OffensiveDimension {
  double pct_masculine_safe = 0.0;
  double pct_masculine_offensive = 0.0;
  std::optional<WelchResult> test;  // absent when a class is too small
};

struct OffensiveReport {
  std::map<Dimension, OffensiveDimension> dimensions;
};

// Per dimension: percentage of masculine labels among masculine+feminine
// labeled utterances in each class, plus a Welch t-test on the binary
// masculine indicators.
OffensiveReport offensive_analysis(const std::vector<std::string>& safe,
                                   const std::vector<std::string>& offensive,
                                   const BiEncoderModel& model);

struct RankedWord {
  std::string word;
  long count = 0;
};

struct GenderedWordLists {
  std::vector<RankedWord> masculine;
  std::vector<RankedWord> feminine;
};

// Most frequent words in utterances the model labels masculine/feminine on
// ABOUT with probability above prob_threshold, excluding stopwords and words
// shorter than min_len.
GenderedWordLists gendered_word_analysis(
    const std::vector<std::string>& utterances, const BiEncoderModel& model,
    double prob_threshold, const Lexicon& lexicon, std::size_t top_n,
    std::size_t min_len);

std::vector<Document> load_documents(const std::string& path);
std::vector<std::string> load_lines(const std::string& path);

}  // namespace gdim

#endif  // GDIM_APPS_HPP
