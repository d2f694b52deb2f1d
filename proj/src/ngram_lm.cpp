#include "gdim/ngram_lm.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gdim/random.hpp"

namespace gdim {

std::string ControlToken::rendered() const {
  return dimension_tag(dimension) + ":" + to_string(label);
}

ControlToken ControlToken::parse(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("bad control token: " + s);
  }
  ControlToken token{parse_dimension(s.substr(0, colon)),
                     parse_gender_label(s.substr(colon + 1))};
  if (token.label == GenderLabel::Unknown) {
    throw std::invalid_argument("control token label cannot be unknown");
  }
  return token;
}

namespace {

std::vector<std::string> whitespace_split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string ControlLM::context_key(
    const std::vector<std::string>& context) const {
  std::string key;
  for (const auto& t : context) {
    key += t;
    key.push_back('\x1f');
  }
  return key;
}

void ControlLM::train(const std::vector<std::string>& corpus_lines) {
  if (order_ < 2) throw std::runtime_error("order must be >= 2");
  if (corpus_lines.empty()) throw std::runtime_error("empty corpus");

  std::set<std::string> vocab_set;
  std::vector<std::vector<std::string>> lines;
  for (const std::string& line : corpus_lines) {
    auto tokens = whitespace_split(line);
    if (tokens.empty()) continue;
    ControlToken::parse(tokens.front());  // validate the leading control
    tokens.push_back(kEosToken);
    for (std::size_t i = 1; i < tokens.size(); ++i) vocab_set.insert(tokens[i]);
    lines.push_back(std::move(tokens));
  }
  if (lines.empty()) throw std::runtime_error("empty corpus");

  vocab_.assign(vocab_set.begin(), vocab_set.end());
  for (std::size_t i = 0; i < vocab_.size(); ++i) vocab_index_[vocab_[i]] = i;

  const std::size_t ctx_len = static_cast<std::size_t>(order_) - 1;
  for (const auto& tokens : lines) {
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      std::vector<std::string> context;
      for (std::size_t back = ctx_len; back > 0; --back) {
        if (i >= back) context.push_back(tokens[i - back]);
        else context.push_back(kBosToken);
      }
      std::string key = context_key(context);
      ++counts_[key][vocab_index_.at(tokens[i])];
      ++context_totals_[key];
    }
  }
}

std::vector<double> ControlLM::next_distribution(
    const std::vector<std::string>& context) const {
  const std::size_t v = vocab_.size();
  if (v == 0) throw std::runtime_error("model not trained");
  std::vector<double> dist(v, 0.0);
  std::string key = context_key(context);
  auto it = counts_.find(key);
  if (it == counts_.end()) {
    std::fill(dist.begin(), dist.end(), 1.0 / static_cast<double>(v));
    return dist;
  }
  const double total = static_cast<double>(context_totals_.at(key)) +
                       static_cast<double>(v);
  for (std::size_t i = 0; i < v; ++i) dist[i] = 1.0 / total;
  for (const auto& [idx, count] : it->second) {
    dist[idx] = (static_cast<double>(count) + 1.0) / total;
  }
  return dist;
}

ControlLM train_controlled_lm(const std::vector<std::string>& control_corpus,
                              int order) {
  ControlLM lm(order);
  lm.train(control_corpus);
  return lm;
}

std::string generate(const ControlLM& lm, const ControlToken& control,
                     const GenerateOptions& options) {
  if (options.top_k < 1) throw std::runtime_error("k must be >= 1");
  if (options.block_n < 2) throw std::runtime_error("block_n must be >= 2");

  const std::size_t ctx_len = static_cast<std::size_t>(lm.order()) - 1;
  const std::size_t block_n = static_cast<std::size_t>(options.block_n);
  const auto& vocab = lm.vocab();
  const std::size_t eos = [&] {
    auto it = std::find(vocab.begin(), vocab.end(), kEosToken);
    return it == vocab.end() ? vocab.size() : static_cast<std::size_t>(
                                                  it - vocab.begin());
  }();

  Rng rng(options.seed);
  std::vector<std::string> sequence = {control.rendered()};
  std::vector<std::string> output;
  std::set<std::string> seen_ngrams;

  auto ngram_key = [](const std::vector<std::string>& toks, std::size_t begin,
                      std::size_t len) {
    std::string key;
    for (std::size_t i = begin; i < begin + len; ++i) {
      key += toks[i];
      key.push_back('\x1f');
    }
    return key;
  };

  while (output.size() < static_cast<std::size_t>(options.max_tokens)) {
    std::vector<std::string> context;
    for (std::size_t back = ctx_len; back > 0; --back) {
      if (sequence.size() >= back) {
        context.push_back(sequence[sequence.size() - back]);
      } else {
        context.push_back(kBosToken);
      }
    }
    std::vector<double> dist = lm.next_distribution(context);

    const bool allow_eos =
        output.size() >= static_cast<std::size_t>(options.min_tokens);
    auto blocked = [&](std::size_t idx) {
      if (idx == eos) return !allow_eos;
      if (output.size() + 1 < block_n) return false;
      std::vector<std::string> tail(output.end() - (block_n - 1), output.end());
      tail.push_back(vocab[idx]);
      return seen_ngrams.count(ngram_key(tail, 0, block_n)) > 0;
    };

    // Rank the vocabulary by probability (ties by word for determinism).
    std::vector<std::size_t> ranked(vocab.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i] = i;
    std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
      if (dist[a] != dist[b]) return dist[a] > dist[b];
      return vocab[a] < vocab[b];
    });

    std::vector<std::size_t> top;
    for (std::size_t i = 0;
         i < ranked.size() && top.size() < static_cast<std::size_t>(options.top_k);
         ++i) {
      if (ranked[i] == eos && !allow_eos) continue;
      top.push_back(ranked[i]);
    }

    std::vector<std::size_t> unblocked;
    for (std::size_t idx : top) {
      if (!blocked(idx)) unblocked.push_back(idx);
    }

    std::size_t chosen = vocab.size();
    if (!unblocked.empty()) {
      double z = 0.0;
      for (std::size_t idx : unblocked) z += dist[idx];
      double r = rng.uniform_real() * z;
      double acc = 0.0;
      chosen = unblocked.back();
      for (std::size_t idx : unblocked) {
        acc += dist[idx];
        if (r < acc) {
          chosen = idx;
          break;
        }
      }
    } else {
      // Everything in the top-k completes a repeated n-gram; take the best
      // unblocked token anywhere in the vocabulary.
      for (std::size_t idx : ranked) {
        if ((idx != eos || allow_eos) && !blocked(idx)) {
          chosen = idx;
          break;
        }
      }
      if (chosen == vocab.size()) break;  // nothing left to emit
    }

    if (chosen == eos) break;
    output.push_back(vocab[chosen]);
    sequence.push_back(vocab[chosen]);
    if (output.size() >= block_n) {
      seen_ngrams.insert(ngram_key(output, output.size() - block_n, block_n));
    }
  }

  std::string text;
  for (const std::string& tok : output) {
    if (!text.empty()) text.push_back(' ');
    text += tok;
  }
  return text;
}

}  // namespace gdim
