#include "gdim/dataset.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "gdim/classifier.hpp"
#include "gdim/random.hpp"

namespace gdim {

using nlohmann::json;

Example Example::with_defaults(std::string text, std::string source) {
  Example ex;
  ex.text = std::move(text);
  ex.source = std::move(source);
  for (Dimension d : kAllDimensions) {
    ex.labels[d] = GenderLabel::Unknown;
    ex.label_origin[d] = Origin::Rule;
  }
  return ex;
}

std::vector<Example> assemble(
    const std::vector<std::pair<std::string, std::vector<Example>>>& sources) {
  std::vector<Example> out;
  for (const auto& [name, records] : sources) {
    long line = 0;
    for (const Example& record : records) {
      ++line;
      if (record.text.empty()) {
        throw std::runtime_error("malformed record in " + name + " line " +
                                 std::to_string(line) + ": empty text");
      }
      Example ex = record;
      ex.source = name;
      for (Dimension d : kAllDimensions) {
        if (!ex.labels.count(d)) {
          ex.labels[d] = GenderLabel::Unknown;
          ex.label_origin[d] = Origin::Rule;
        } else if (!ex.label_origin.count(d)) {
          ex.label_origin[d] = Origin::Rule;
        }
      }
      out.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<Example> impute_about(const std::vector<Example>& examples,
                                  const BiEncoderModel& model) {
  if (!model.config.tasks.count(Dimension::About)) {
    throw std::runtime_error("model does not support the about dimension");
  }
  std::vector<Example> out = examples;
  for (Example& ex : out) {
    if (ex.labels.at(Dimension::About) != GenderLabel::Unknown) continue;
    auto [label, prob] = predict(model, ex.text, Dimension::About);
    (void)prob;
    ex.labels[Dimension::About] = label;
    ex.label_origin[Dimension::About] = Origin::Imputed;
  }
  return out;
}

EpochView epoch_view(const std::vector<Example>& examples, long epoch,
                     std::uint64_t seed) {
  EpochView view;
  view.epoch = epoch;
  view.seed = seed;
  view.examples = examples;
  for (std::size_t i = 0; i < view.examples.size(); ++i) {
    Example& ex = view.examples[i];
    for (Dimension d : {Dimension::To, Dimension::As}) {
      if (ex.labels.at(d) != GenderLabel::Unknown) continue;
      std::uint64_t h = splitmix64(seed ^ splitmix64(
          (static_cast<std::uint64_t>(i) << 2) | static_cast<std::uint64_t>(d)));
      bool masculine_at_even = (h & 1) != 0;
      bool flip = (epoch % 2) != 0;
      bool masculine = masculine_at_even != flip;
      ex.labels[d] = masculine ? GenderLabel::Masculine : GenderLabel::Feminine;
      ex.label_origin[d] = Origin::Flipped;
    }
  }
  return view;
}

EpochView oversample_balance(const EpochView& view, Dimension dimension) {
  std::map<GenderLabel, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < view.examples.size(); ++i) {
    GenderLabel g = view.examples[i].labels.at(dimension);
    if (g == GenderLabel::Unknown) continue;
    by_class[g].push_back(i);
  }
  std::size_t majority = 0;
  for (const auto& [g, idx] : by_class) majority = std::max(majority, idx.size());

  EpochView out = view;
  for (GenderLabel g : kClassLabels) {
    auto it = by_class.find(g);
    if (it == by_class.end() || it->second.empty()) continue;
    const auto& idx = it->second;
    for (std::size_t need = majority - idx.size(), k = 0; k < need; ++k) {
      out.examples.push_back(view.examples[idx[k % idx.size()]]);
    }
  }
  return out;
}

SplitResult split(const std::vector<Example>& examples, double train_frac,
                  double valid_frac, double test_frac, std::uint64_t seed) {
  if (train_frac <= 0 || valid_frac <= 0 || test_frac <= 0 ||
      std::abs(train_frac + valid_frac + test_frac - 1.0) > 1e-9) {
    throw std::runtime_error("split fractions must be positive and sum to 1");
  }
  // Conversation-grouped examples move together; order of first appearance.
  std::map<std::string, std::size_t> group_of;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& cid = examples[i].conversation_id;
    if (cid) {
      auto it = group_of.find(*cid);
      if (it == group_of.end()) {
        group_of[*cid] = groups.size();
        groups.push_back({i});
      } else {
        groups[it->second].push_back(i);
      }
    } else {
      groups.push_back({i});
    }
  }
  Rng rng = substream(seed, "split");
  deterministic_shuffle(groups, rng);

  const std::size_t n = examples.size();
  auto target = [n](double f) {
    return static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
  };
  std::size_t train_target = target(train_frac);
  std::size_t valid_target = target(train_frac + valid_frac);

  SplitResult result;
  std::size_t assigned = 0;
  for (const auto& group : groups) {
    auto* dest = &result.train;
    if (assigned >= valid_target) dest = &result.test;
    else if (assigned >= train_target) dest = &result.valid;
    for (std::size_t i : group) dest->push_back(examples[i]);
    assigned += group.size();
  }
  return result;
}

namespace {

json example_to_json(const Example& ex) {
  json j;
  j["text"] = ex.text;
  for (Dimension d : kAllDimensions) j[to_string(d)] = to_string(ex.labels.at(d));
  json origin;
  for (Dimension d : kAllDimensions) {
    origin[to_string(d)] = to_string(ex.label_origin.at(d));
  }
  j["origin"] = origin;
  j["source"] = ex.source;
  if (ex.confidence) j["confidence"] = to_string(*ex.confidence);
  if (ex.conversation_id) j["conversation_id"] = *ex.conversation_id;
  return j;
}

Example example_from_json(const json& j, const std::string& path, long line) {
  try {
    Example ex;
    ex.text = j.at("text").get<std::string>();
    for (Dimension d : kAllDimensions) {
      ex.labels[d] = parse_gender_label(j.at(to_string(d)).get<std::string>());
      if (j.contains("origin") && j["origin"].contains(to_string(d))) {
        ex.label_origin[d] =
            parse_origin(j["origin"][to_string(d)].get<std::string>());
      } else {
        ex.label_origin[d] = Origin::Rule;
      }
    }
    ex.source = j.value("source", std::string("unknown"));
    if (j.contains("confidence")) {
      ex.confidence = parse_confidence(j["confidence"].get<std::string>());
    }
    if (j.contains("conversation_id")) {
      ex.conversation_id = j["conversation_id"].get<std::string>();
    }
    return ex;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + " line " + std::to_string(line) + ": " +
                             e.what());
  }
}

}  // namespace

std::vector<Example> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Example> out;
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
    out.push_back(example_from_json(j, path, lineno));
  }
  return out;
}

void save_corpus(const std::vector<Example>& examples,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const Example& ex : examples) out << example_to_json(ex).dump() << "\n";
}

std::vector<Example> load_mdgender(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Example> out;
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
    try {
      Dimension dim = parse_dimension(j.at("dim").get<std::string>());
      GenderLabel gender =
          parse_gender_label(j.at("gender").get<std::string>());
      if (gender != GenderLabel::Masculine && gender != GenderLabel::Feminine) {
        throw std::runtime_error("gender must be masculine or feminine");
      }
      Example ex = Example::with_defaults(j.at("text").get<std::string>(),
                                          "mdgender");
      ex.labels[dim] = gender;
      ex.label_origin[dim] = Origin::Gold;
      ex.confidence = parse_confidence(j.at("confidence").get<std::string>());
      out.push_back(std::move(ex));
    } catch (const json::exception& e) {
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": " +
                               e.what());
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  return out;
}

void save_mdgender(const std::vector<Example>& examples,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const Example& ex : examples) {
    std::optional<Dimension> dim;
    for (Dimension d : kAllDimensions) {
      if (ex.labels.at(d) == GenderLabel::Unknown) continue;
      if (dim) throw std::runtime_error("mdgender record must label one dimension");
      dim = d;
    }
    if (!dim) throw std::runtime_error("mdgender record must label one dimension");
    json j;
    j["text"] = ex.text;
    j["dim"] = to_string(*dim);
    j["gender"] = to_string(ex.labels.at(*dim));
    j["confidence"] = to_string(ex.confidence.value_or(Confidence::Certain));
    out << j.dump() << "\n";
  }
}

}  // namespace gdim
