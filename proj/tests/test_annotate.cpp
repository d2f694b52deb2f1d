#include <doctest.h>

#include <array>
#include <set>

#include "gdim/annotate.hpp"
#include "gdim/random.hpp"

using namespace gdim;

namespace {

Lexicon test_lexicon() {
  Lexicon lex;
  lex.masculine_words = {"he", "man", "boy"};
  lex.feminine_words = {"she", "woman", "girl"};
  lex.kinship = {{"daughter", GenderLabel::Feminine},
                 {"son", GenderLabel::Masculine},
                 {"sister", GenderLabel::Feminine},
                 {"brother", GenderLabel::Masculine}};
  lex.name_table["bob"] = {0.99, 800};
  lex.name_table["mary"] = {0.01, 900};
  lex.name_table["alex"] = {0.55, 500};
  return lex;
}

Utterance utt(const std::string& text) {
  Utterance u;
  u.text = text;
  return u;
}

}  // namespace

TEST_CASE("pronoun majority") {
  Lexicon lex;
  CHECK(pronoun_majority_label(tokenize("He wrote books. He died in 1901."),
                               lex) == GenderLabel::Masculine);
  CHECK(pronoun_majority_label(tokenize("She met him."), lex) ==
        GenderLabel::Unknown);
  CHECK(pronoun_majority_label(
            tokenize("They identify as nonbinary. They perform."), lex) ==
        GenderLabel::Neutral);
  CHECK(pronoun_majority_label(tokenize("no pronouns at all"), lex) ==
        GenderLabel::Unknown);
}

TEST_CASE("they mapping is configurable") {
  Lexicon lex;
  AnnotateConfig config;
  config.they_maps_to = GenderLabel::Unknown;
  CHECK(pronoun_majority_label(tokenize("they sing"), lex, config) ==
        GenderLabel::Unknown);
}

TEST_CASE("pronoun majority ignores non-pronoun tokens and order") {
  Lexicon lex;
  Rng rng(5);
  std::vector<std::string> words = {"she", "her", "he", "walked", "the", "dog"};
  GenderLabel expected =
      pronoun_majority_label(tokenize("she her he walked the dog"), lex);
  for (int trial = 0; trial < 30; ++trial) {
    auto shuffled = words;
    deterministic_shuffle(shuffled, rng);
    std::string text;
    for (const auto& w : shuffled) text += w + " ";
    CHECK(pronoun_majority_label(tokenize(text), lex) == expected);
  }
  // Padding with non-pronouns never changes the answer.
  CHECK(pronoun_majority_label(
            tokenize("she her he walked the dog lots of filler words here"),
            lex) == expected);
}

TEST_CASE("name lookup with confidence band") {
  Lexicon lex = test_lexicon();
  CHECK(name_gender_label("Bob", lex, 0.9) == GenderLabel::Masculine);
  CHECK(name_gender_label("mary", lex, 0.9) == GenderLabel::Feminine);
  CHECK(name_gender_label("alex", lex, 0.9) == GenderLabel::Unknown);
  CHECK(name_gender_label("zzz", lex, 0.9) == GenderLabel::Unknown);
  CHECK_THROWS(name_gender_label("bob", lex, 0.5));
}

TEST_CASE("kinship label") {
  Lexicon lex = test_lexicon();
  CHECK(kinship_label(tokenize("my daughter arrived"), lex) ==
        GenderLabel::Feminine);
  CHECK(kinship_label(tokenize("his son and daughter"), lex) ==
        GenderLabel::Unknown);
  CHECK(kinship_label(tokenize("the car arrived"), lex) ==
        GenderLabel::Unknown);
}

TEST_CASE("persona rules in priority order") {
  Lexicon lex = test_lexicon();
  CHECK(persona_gender({"i am a old woman"}, lex) == GenderLabel::Feminine);
  CHECK(persona_gender({"my name is bob"}, lex) == GenderLabel::Masculine);
  CHECK(persona_gender({"i like turtles"}, lex) == GenderLabel::Unknown);
  // Self-description beats the name rule even on a later line.
  CHECK(persona_gender({"my name is mary", "i am a man"}, lex) ==
        GenderLabel::Masculine);
  // Ambiguous name stays unknown.
  CHECK(persona_gender({"my name is alex"}, lex) == GenderLabel::Unknown);
}

TEST_CASE("dialogue TO labels use next speaker, then last") {
  std::vector<std::pair<Utterance, GenderLabel>> conv = {
      {utt("hi"), GenderLabel::Masculine},
      {utt("hello"), GenderLabel::Feminine},
      {utt("bye"), GenderLabel::Masculine},
  };
  CHECK(dialogue_to_labels(conv) ==
        std::vector<GenderLabel>{GenderLabel::Feminine, GenderLabel::Masculine,
                                 GenderLabel::Feminine});

  std::vector<std::pair<Utterance, GenderLabel>> two = {
      {utt("hi"), GenderLabel::Masculine},
      {utt("hello"), GenderLabel::Feminine},
  };
  CHECK(dialogue_to_labels(two) ==
        std::vector<GenderLabel>{GenderLabel::Feminine,
                                 GenderLabel::Masculine});

  std::vector<std::pair<Utterance, GenderLabel>> one = {
      {utt("hi"), GenderLabel::Masculine}};
  CHECK(dialogue_to_labels(one) ==
        std::vector<GenderLabel>{GenderLabel::Unknown});
  CHECK(dialogue_to_labels({}).empty());
}

TEST_CASE("dialogue TO labels stay within speaker genders") {
  Rng rng(17);
  std::array<GenderLabel, 3> genders = {GenderLabel::Masculine,
                                        GenderLabel::Feminine,
                                        GenderLabel::Neutral};
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::pair<Utterance, GenderLabel>> conv;
    std::set<GenderLabel> present;
    std::size_t n = 1 + rng.uniform(6);
    for (std::size_t i = 0; i < n; ++i) {
      GenderLabel g = genders[rng.uniform(genders.size())];
      present.insert(g);
      conv.push_back({utt("t"), g});
    }
    auto labels = dialogue_to_labels(conv);
    REQUIRE(labels.size() == conv.size());
    for (GenderLabel l : labels) {
      CHECK((l == GenderLabel::Unknown || present.count(l) == 1));
    }
  }
}

TEST_CASE("confident retention") {
  std::vector<std::pair<Utterance, double>> records = {
      {utt("a"), 0.97}, {utt("b"), 0.5}, {utt("c"), 0.05}};
  auto kept = confident_retention(records, 0.9);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].utterance.text == "a");
  CHECK(kept[0].as_label == GenderLabel::Masculine);
  CHECK(kept[1].utterance.text == "c");
  CHECK(kept[1].as_label == GenderLabel::Feminine);
  CHECK_THROWS_WITH(confident_retention(records, 0.5),
                    doctest::Contains("threshold must exceed 0.5"));
}

TEST_CASE("annotators prefer unknown on conflicting evidence") {
  Lexicon lex = test_lexicon();
  Rng rng(29);
  std::vector<std::string> masc = {"son", "brother"};
  std::vector<std::string> fem = {"daughter", "sister"};
  for (int trial = 0; trial < 20; ++trial) {
    // One term of each gender, in random order with filler: always unknown.
    std::vector<std::string> words = {masc[rng.uniform(masc.size())],
                                      fem[rng.uniform(fem.size())], "the",
                                      "arrived"};
    deterministic_shuffle(words, rng);
    std::string text;
    for (const auto& w : words) text += w + " ";
    CHECK(kinship_label(tokenize(text), lex) == GenderLabel::Unknown);
    // Same number of he and she forms: unknown.
    CHECK(pronoun_majority_label(tokenize("he she " + text), lex) ==
          GenderLabel::Unknown);
  }
}
