#ifndef GDIM_NGRAM_LM_HPP
#define GDIM_NGRAM_LM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gdim/types.hpp"

namespace gdim {

struct ControlToken {
  Dimension dimension;
  GenderLabel label;  // masculine/feminine/neutral

  std::string rendered() const;  // e.g. ABOUT:feminine
  static ControlToken parse(const std::string& s);
};

inline const std::string kBosToken = "<s>";
inline const std::string kEosToken = "</s>";

// Order-n conditional model with add-one smoothing over the observed
// vocabulary. The control token occupies the first context position of each
// training line; contexts never seen fall back to a uniform distribution.
class ControlLM {
 public:
  explicit ControlLM(int order = 3) : order_(order) {}

  int order() const { return order_; }
  const std::vector<std::string>& vocab() const { return vocab_; }

  void train(const std::vector<std::string>& corpus_lines);

  // P(word | context) for every vocabulary word, sums to 1. context is the
  // most recent (order-1) tokens, shorter contexts are BOS-padded by the
  // caller.
  std::vector<double> next_distribution(
      const std::vector<std::string>& context) const;

 private:
  int order_;
  std::vector<std::string> vocab_;  // sorted; includes </s>
  std::map<std::string, std::size_t> vocab_index_;
  // context key -> (word index -> count), context key -> total
  std::map<std::string, std::map<std::size_t, long>> counts_;
  std::map<std::string, long> context_totals_;

  std::string context_key(const std::vector<std::string>& context) const;
};

ControlLM train_controlled_lm(const std::vector<std::string>& control_corpus,
                              int order);

struct GenerateOptions {
  int top_k = 10;
  int block_n = 3;       // no n-gram of this size may repeat in the output
  int min_tokens = 20;   // end token masked until this many tokens emitted
  int max_tokens = 60;
  std::uint64_t seed = 0;
};

// Top-k sampling with repeated-n-gram blocking under the given control token.
std::string generate(const ControlLM& lm, const ControlToken& control,
                     const GenerateOptions& options);

}  // namespace gdim

#endif  // GDIM_NGRAM_LM_HPP
