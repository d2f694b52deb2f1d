#include "gdim/types.hpp"

namespace gdim {

std::string to_string(GenderLabel label) {
  switch (label) {
    case GenderLabel::Masculine: return "masculine";
    case GenderLabel::Feminine: return "feminine";
    case GenderLabel::Neutral: return "neutral";
    case GenderLabel::Unknown: return "unknown";
  }
  throw std::logic_error("bad GenderLabel");
}

std::string to_string(Dimension dim) {
  switch (dim) {
    case Dimension::About: return "about";
    case Dimension::To: return "to";
    case Dimension::As: return "as";
  }
  throw std::logic_error("bad Dimension");
}

std::string dimension_tag(Dimension dim) {
  switch (dim) {
    case Dimension::About: return "ABOUT";
    case Dimension::To: return "TO";
    case Dimension::As: return "AS";
  }
  throw std::logic_error("bad Dimension");
}

std::string to_string(Origin origin) {
  switch (origin) {
    case Origin::Gold: return "gold";
    case Origin::Rule: return "rule";
    case Origin::Imputed: return "imputed";
    case Origin::Flipped: return "flipped";
  }
  throw std::logic_error("bad Origin");
}

std::string to_string(Confidence conf) {
  switch (conf) {
    case Confidence::Certain: return "certain";
    case Confidence::PrettySure: return "pretty_sure";
    case Confidence::Unsure: return "unsure";
  }
  throw std::logic_error("bad Confidence");
}

GenderLabel parse_gender_label(std::string_view s) {
  if (s == "masculine") return GenderLabel::Masculine;
  if (s == "feminine") return GenderLabel::Feminine;
  if (s == "neutral") return GenderLabel::Neutral;
  if (s == "unknown") return GenderLabel::Unknown;
  throw std::invalid_argument("bad gender label: " + std::string(s));
}

Dimension parse_dimension(std::string_view s) {
  if (s == "about" || s == "ABOUT") return Dimension::About;
  if (s == "to" || s == "TO") return Dimension::To;
  if (s == "as" || s == "AS") return Dimension::As;
  throw std::invalid_argument("bad dimension: " + std::string(s));
}

Origin parse_origin(std::string_view s) {
  if (s == "gold") return Origin::Gold;
  if (s == "rule") return Origin::Rule;
  if (s == "imputed") return Origin::Imputed;
  if (s == "flipped") return Origin::Flipped;
  throw std::invalid_argument("bad origin: " + std::string(s));
}

Confidence parse_confidence(std::string_view s) {
  if (s == "certain") return Confidence::Certain;
  if (s == "pretty_sure") return Confidence::PrettySure;
  if (s == "unsure") return Confidence::Unsure;
  throw std::invalid_argument("bad confidence: " + std::string(s));
}

namespace {
int class_rank(GenderLabel label) {
  switch (label) {
    case GenderLabel::Masculine: return 0;
    case GenderLabel::Feminine: return 1;
    case GenderLabel::Neutral: return 2;
    default: throw std::invalid_argument("unknown is not a class");
  }
}
}  // namespace

bool ClassId::operator<(const ClassId& other) const {
  if (dimension != other.dimension) {
    return static_cast<int>(dimension) < static_cast<int>(other.dimension);
  }
  return class_rank(label) < class_rank(other.label);
}

std::string to_string(const ClassId& c) {
  return dimension_tag(c.dimension) + ":" + to_string(c.label);
}

}  // namespace gdim
