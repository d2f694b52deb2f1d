#ifndef GDIM_TEXTKIT_HPP
#define GDIM_TEXTKIT_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gdim/types.hpp"

namespace gdim {

inline const std::string kMaskToken = "<MASK>";

struct Token {
  std::string surface;   // case-folded
  std::string original;  // as written
  std::size_t index = 0;  // position within the utterance
};

struct NameEntry {
  double prob_masculine = 0.0;  // fraction of occurrences that are masculine
  long count = 0;
};

// Gendered word lists, baby-name probabilities, kinship terms, stopwords and
// the pronoun inventory. Read-only after load.
struct Lexicon {
  std::set<std::string> masculine_words;
  std::set<std::string> feminine_words;
  std::map<std::string, NameEntry> name_table;
  std::map<std::string, GenderLabel> kinship;
  std::set<std::string> stopwords;

  // Pronoun inventory, kept in the lexicon so it can be swapped out.
  std::set<std::string> he_forms = {"he", "him", "his", "himself"};
  std::set<std::string> she_forms = {"she", "her", "hers", "herself"};
  std::set<std::string> they_forms = {"they", "them",    "their",
                                      "theirs", "themself", "themselves"};

  void load_word_list(const std::string& path, GenderLabel gender);
  void load_name_table(const std::string& path);
  void load_kinship(const std::string& path);
  void load_stopwords(const std::string& path);
  void load_pronouns(const std::string& path);

  // Loads whichever of the conventional files exist under dir:
  // masculine.txt feminine.txt names.tsv kinship.tsv stopwords.txt pronouns.tsv
  static Lexicon load_dir(const std::string& dir);
};

struct WordStats {
  std::string word;
  GenderLabel gender = GenderLabel::Unknown;
  double ratio = 0.0;  // P(word|gender) / P(word)
  long count = 0;      // total corpus occurrences
};

// Whitespace split with leading/trailing punctuation peeled into separate
// tokens; surfaces are ASCII case-folded.
std::vector<Token> tokenize(const std::string& text);

std::pair<long, long> count_gendered(const std::vector<Token>& tokens,
                                     const Lexicon& lexicon);

// Majority vote over explicit gendered words; equal counts (including none)
// give neutral. Never returns unknown.
GenderLabel word_list_label(const std::vector<Token>& tokens,
                            const Lexicon& lexicon);

// Per-gender over-representation ranking: for every word with total count
// >= min_count, ratio(w, g) = (count(w,g)/count(*,g)) / (count(w)/count(*)).
// Unknown-labeled documents are excluded from all counts. Output is grouped
// by gender, descending ratio, ties by word.
std::vector<WordStats> overrepresentation(
    const std::vector<std::pair<std::vector<Token>, GenderLabel>>& corpus,
    long min_count);

// Replaces explicit gendered words (and names, when mask_names) with <MASK>.
// Length-preserving and idempotent.
std::vector<Token> mask_gendered(const std::vector<Token>& tokens,
                                 const Lexicon& lexicon, bool mask_names);

}  // namespace gdim

#endif  // GDIM_TEXTKIT_HPP
