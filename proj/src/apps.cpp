#include "gdim/apps.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace gdim {

using nlohmann::json;

GenderednessReport document_genderedness(const std::vector<Document>& documents,
                                         const BiEncoderModel& model,
                                         std::size_t min_paragraphs) {
  if (!model.config.tasks.count(Dimension::About)) {
    throw std::runtime_error("model does not support the about dimension");
  }
  GenderednessReport report;
  for (const Document& doc : documents) {
    if (doc.paragraphs.empty()) {
      std::cerr << "warning: skipping document with no paragraphs: "
                << doc.doc_id << "\n";
      ++report.skipped_empty;
      continue;
    }
    GenderednessScore score;
    score.doc_id = doc.doc_id;
    score.paragraph_count = doc.paragraphs.size();
    for (const std::string& paragraph : doc.paragraphs) {
      auto cands = model.candidates(Dimension::About);
      auto scores = score_classes(paragraph, cands, model);
      // Softmax probability of ABOUT:masculine.
      double mx = scores.begin()->second;
      for (const auto& [c, s] : scores) mx = std::max(mx, s);
      double z = 0.0, masc = 0.0;
      for (const auto& [c, s] : scores) {
        double e = std::exp(s - mx);
        z += e;
        if (c.label == GenderLabel::Masculine) masc = e;
      }
      score.paragraph_scores.push_back(masc / z);
    }
    score.median_score = median(score.paragraph_scores);
    report.ranked.push_back(std::move(score));
  }
  std::sort(report.ranked.begin(), report.ranked.end(),
            [](const GenderednessScore& a, const GenderednessScore& b) {
              if (a.median_score != b.median_score) {
                return a.median_score > b.median_score;
              }
              return a.doc_id < b.doc_id;
            });
  double sum = 0.0;
  for (const auto& s : report.ranked) {
    sum += s.median_score;
    if (s.paragraph_count >= min_paragraphs) {
      report.ranked_filtered.push_back(s);
    }
  }
  if (!report.ranked.empty()) {
    report.mean_of_medians = sum / static_cast<double>(report.ranked.size());
  }
  return report;
}

std::vector<std::string> build_control_corpus(
    const std::vector<std::string>& utterances, const BiEncoderModel& model,
    Dimension dimension) {
  std::vector<std::string> out;
  out.reserve(utterances.size());
  for (const std::string& utt : utterances) {
    auto [label, prob] = predict(model, utt, dimension);
    (void)prob;
    out.push_back(ControlToken{dimension, label}.rendered() + " " + utt);
  }
  return out;
}

std::vector<std::string> build_control_corpus_wordlist(
    const std::vector<std::string>& utterances, const Lexicon& lexicon,
    Dimension dimension) {
  std::vector<std::string> out;
  out.reserve(utterances.size());
  for (const std::string& utt : utterances) {
    GenderLabel label = word_list_label(tokenize(utt), lexicon);
    out.push_back(ControlToken{dimension, label}.rendered() + " " + utt);
  }
  return out;
}

std::vector<GenStats> generation_stats(
    const std::vector<std::pair<std::string, std::string>>& generations,
    const Lexicon& lexicon) {
  std::map<std::string, GenStats> by_control;
  std::vector<std::string> order;
  for (const auto& [control, text] : generations) {
    auto it = by_control.find(control);
    if (it == by_control.end()) {
      order.push_back(control);
      it = by_control.emplace(control, GenStats{control, 0, 0, {}}).first;
    }
    auto [masc, fem] = count_gendered(tokenize(text), lexicon);
    it->second.gendered_word_count += masc + fem;
    it->second.masculine_count += masc;
  }
  std::vector<GenStats> out;
  for (const std::string& control : order) {
    GenStats stats = by_control.at(control);
    if (stats.gendered_word_count > 0) {
      stats.pct_masculine = 100.0 * static_cast<double>(stats.masculine_count) /
                            static_cast<double>(stats.gendered_word_count);
    }
    out.push_back(std::move(stats));
  }
  return out;
}

OffensiveReport offensive_analysis(const std::vector<std::string>& safe,
                                   const std::vector<std::string>& offensive,
                                   const BiEncoderModel& model) {
  for (Dimension d : kAllDimensions) {
    if (!model.config.tasks.count(d)) {
      throw std::runtime_error("offensive analysis needs all three dimensions");
    }
  }
  OffensiveReport report;
  for (Dimension dim : kAllDimensions) {
    auto indicators = [&](const std::vector<std::string>& utterances) {
      std::vector<double> out;
      for (const std::string& utt : utterances) {
        auto [label, prob] = predict(model, utt, dim);
        (void)prob;
        if (label == GenderLabel::Masculine) out.push_back(1.0);
        else if (label == GenderLabel::Feminine) out.push_back(0.0);
        // Neutral predictions are excluded from the ratio.
      }
      return out;
    };
    std::vector<double> safe_ind = indicators(safe);
    std::vector<double> off_ind = indicators(offensive);

    OffensiveDimension od;
    auto pct = [](const std::vector<double>& v) {
      if (v.empty()) return 0.0;
      double s = 0.0;
      for (double x : v) s += x;
      return 100.0 * s / static_cast<double>(v.size());
    };
    od.pct_masculine_safe = pct(safe_ind);
    od.pct_masculine_offensive = pct(off_ind);
    if (safe_ind.size() >= 2 && off_ind.size() >= 2) {
      od.test = welch_t_test(safe_ind, off_ind);
    } else {
      std::cerr << "warning: too few gendered utterances for t-test on "
                << to_string(dim) << "\n";
    }
    report.dimensions[dim] = od;
  }
  return report;
}

GenderedWordLists gendered_word_analysis(
    const std::vector<std::string>& utterances, const BiEncoderModel& model,
    double prob_threshold, const Lexicon& lexicon, std::size_t top_n,
    std::size_t min_len) {
  if (prob_threshold <= 0.0) {
    throw std::runtime_error("prob_threshold must be positive");
  }
  std::unordered_map<std::string, long> masc_counts, fem_counts;
  for (const std::string& utt : utterances) {
    auto [label, prob] = predict(model, utt, Dimension::About);
    if (prob <= prob_threshold) continue;
    std::unordered_map<std::string, long>* counts = nullptr;
    if (label == GenderLabel::Masculine) counts = &masc_counts;
    else if (label == GenderLabel::Feminine) counts = &fem_counts;
    else continue;
    for (const Token& t : tokenize(utt)) {
      if (t.surface.size() < min_len) continue;
      if (lexicon.stopwords.count(t.surface)) continue;
      ++(*counts)[t.surface];
    }
  }
  auto top = [top_n](const std::unordered_map<std::string, long>& counts) {
    std::vector<RankedWord> words;
    for (const auto& [word, count] : counts) words.push_back({word, count});
    std::sort(words.begin(), words.end(),
              [](const RankedWord& a, const RankedWord& b) {
                if (a.count != b.count) return a.count > b.count;
                return a.word < b.word;
              });
    if (words.size() > top_n) words.resize(top_n);
    return words;
  };
  return {top(masc_counts), top(fem_counts)};
}

std::vector<Document> load_documents(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Document> docs;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw std::runtime_error(path + " line " + std::to_string(lineno) +
                               ": invalid JSON");
    }
    Document doc;
    doc.doc_id = j.at("doc_id").get<std::string>();
    doc.title = j.value("title", std::string());
    for (const auto& p : j.at("paragraphs")) {
      doc.paragraphs.push_back(p.get<std::string>());
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<std::string> load_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace gdim
