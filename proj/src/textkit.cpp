#include "gdim/textkit.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace gdim {

namespace {

bool is_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

std::string casefold(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, '\t')) fields.push_back(field);
  return fields;
}

bool skip_line(const std::string& line) {
  return line.empty() || line[0] == '#';
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::istringstream ss(text);
  std::string chunk;
  auto emit = [&tokens](const std::string& piece) {
    tokens.push_back(Token{casefold(piece), piece, tokens.size()});
  };
  while (ss >> chunk) {
    // Peel leading punctuation.
    std::size_t begin = 0;
    while (begin < chunk.size() && is_punct(chunk[begin])) {
      emit(chunk.substr(begin, 1));
      ++begin;
    }
    // Find the trailing punctuation run, then emit core + trailing.
    std::size_t end = chunk.size();
    while (end > begin && is_punct(chunk[end - 1])) --end;
    if (end > begin) emit(chunk.substr(begin, end - begin));
    for (std::size_t i = end; i < chunk.size(); ++i) emit(chunk.substr(i, 1));
  }
  return tokens;
}

std::pair<long, long> count_gendered(const std::vector<Token>& tokens,
                                     const Lexicon& lexicon) {
  long masc = 0, fem = 0;
  for (const Token& t : tokens) {
    if (lexicon.masculine_words.count(t.surface)) ++masc;
    if (lexicon.feminine_words.count(t.surface)) ++fem;
  }
  return {masc, fem};
}

GenderLabel word_list_label(const std::vector<Token>& tokens,
                            const Lexicon& lexicon) {
  auto [masc, fem] = count_gendered(tokens, lexicon);
  if (masc > fem) return GenderLabel::Masculine;
  if (fem > masc) return GenderLabel::Feminine;
  return GenderLabel::Neutral;
}

std::vector<WordStats> overrepresentation(
    const std::vector<std::pair<std::vector<Token>, GenderLabel>>& corpus,
    long min_count) {
  if (corpus.empty()) throw std::runtime_error("empty corpus");
  if (min_count < 1) throw std::runtime_error("min_count must be >= 1");

  std::unordered_map<std::string, long> total_counts;
  std::map<GenderLabel, std::unordered_map<std::string, long>> gender_counts;
  std::map<GenderLabel, long> gender_totals;
  long grand_total = 0;

  for (const auto& [tokens, gender] : corpus) {
    if (gender == GenderLabel::Unknown) continue;
    for (const Token& t : tokens) {
      ++total_counts[t.surface];
      ++gender_counts[gender][t.surface];
      ++gender_totals[gender];
      ++grand_total;
    }
  }
  if (grand_total == 0) throw std::runtime_error("empty corpus");

  std::vector<WordStats> out;
  for (GenderLabel g : kClassLabels) {
    auto it = gender_totals.find(g);
    if (it == gender_totals.end() || it->second == 0) continue;
    const double in_gender = static_cast<double>(it->second);
    std::vector<WordStats> rows;
    for (const auto& [word, g_count] : gender_counts[g]) {
      long total = total_counts[word];
      if (total < min_count) continue;
      double p_word_given_gender = static_cast<double>(g_count) / in_gender;
      double p_word = static_cast<double>(total) / grand_total;
      rows.push_back(WordStats{word, g, p_word_given_gender / p_word, total});
    }
    std::sort(rows.begin(), rows.end(), [](const WordStats& a,
                                           const WordStats& b) {
      if (a.ratio != b.ratio) return a.ratio > b.ratio;
      return a.word < b.word;
    });
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<Token> mask_gendered(const std::vector<Token>& tokens,
                                 const Lexicon& lexicon, bool mask_names) {
  std::vector<Token> out = tokens;
  for (Token& t : out) {
    bool hit = lexicon.masculine_words.count(t.surface) ||
               lexicon.feminine_words.count(t.surface);
    if (!hit && mask_names) hit = lexicon.name_table.count(t.surface) > 0;
    if (hit) {
      t.surface = kMaskToken;
      t.original = kMaskToken;
    }
  }
  return out;
}

void Lexicon::load_word_list(const std::string& path, GenderLabel gender) {
  auto in = open_or_throw(path);
  auto& target = gender == GenderLabel::Masculine ? masculine_words
                                                  : feminine_words;
  std::string line;
  while (std::getline(in, line)) {
    if (skip_line(line)) continue;
    target.insert(casefold(line));
  }
}

void Lexicon::load_name_table(const std::string& path) {
  auto in = open_or_throw(path);
  std::string line;
  while (std::getline(in, line)) {
    if (skip_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() < 3) {
      throw std::runtime_error("bad name table line in " + path + ": " + line);
    }
    NameEntry entry{std::stod(fields[1]), std::stol(fields[2])};
    if (entry.prob_masculine < 0.0 || entry.prob_masculine > 1.0) {
      throw std::runtime_error("prob_masculine out of range in " + path);
    }
    name_table[casefold(fields[0])] = entry;
  }
}

void Lexicon::load_kinship(const std::string& path) {
  auto in = open_or_throw(path);
  std::string line;
  while (std::getline(in, line)) {
    if (skip_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() < 2) {
      throw std::runtime_error("bad kinship line in " + path + ": " + line);
    }
    GenderLabel g = parse_gender_label(fields[1]);
    if (g != GenderLabel::Masculine && g != GenderLabel::Feminine) {
      throw std::runtime_error("kinship gender must be masculine or feminine");
    }
    kinship[casefold(fields[0])] = g;
  }
}

void Lexicon::load_stopwords(const std::string& path) {
  auto in = open_or_throw(path);
  std::string line;
  while (std::getline(in, line)) {
    if (skip_line(line)) continue;
    stopwords.insert(casefold(line));
  }
}

void Lexicon::load_pronouns(const std::string& path) {
  auto in = open_or_throw(path);
  he_forms.clear();
  she_forms.clear();
  they_forms.clear();
  std::string line;
  while (std::getline(in, line)) {
    if (skip_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() < 2) {
      throw std::runtime_error("bad pronoun line in " + path + ": " + line);
    }
    const std::string form = casefold(fields[0]);
    if (fields[1] == "he") he_forms.insert(form);
    else if (fields[1] == "she") she_forms.insert(form);
    else if (fields[1] == "they") they_forms.insert(form);
    else throw std::runtime_error("bad pronoun class: " + fields[1]);
  }
}

Lexicon Lexicon::load_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  Lexicon lex;
  auto path = [&dir](const char* name) { return (fs::path(dir) / name).string(); };
  if (fs::exists(path("masculine.txt"))) {
    lex.load_word_list(path("masculine.txt"), GenderLabel::Masculine);
  }
  if (fs::exists(path("feminine.txt"))) {
    lex.load_word_list(path("feminine.txt"), GenderLabel::Feminine);
  }
  if (fs::exists(path("names.tsv"))) lex.load_name_table(path("names.tsv"));
  if (fs::exists(path("kinship.tsv"))) lex.load_kinship(path("kinship.tsv"));
  if (fs::exists(path("stopwords.txt"))) {
    lex.load_stopwords(path("stopwords.txt"));
  }
  if (fs::exists(path("pronouns.tsv"))) lex.load_pronouns(path("pronouns.tsv"));
  for (const auto& w : lex.masculine_words) {
    if (lex.feminine_words.count(w)) {
      throw std::runtime_error("word in both gender lists: " + w);
    }
  }
  return lex;
}

}  // namespace gdim
