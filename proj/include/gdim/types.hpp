#ifndef GDIM_TYPES_HPP
#define GDIM_TYPES_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gdim {

enum class GenderLabel { Masculine, Feminine, Neutral, Unknown };

enum class Dimension { About, To, As };

// Provenance of a per-dimension label on an example.
enum class Origin { Gold, Rule, Imputed, Flipped };

enum class Confidence { Certain, PrettySure, Unsure };

inline constexpr std::array<Dimension, 3> kAllDimensions = {
    Dimension::About, Dimension::To, Dimension::As};

inline constexpr std::array<GenderLabel, 3> kClassLabels = {
    GenderLabel::Masculine, GenderLabel::Feminine, GenderLabel::Neutral};

std::string to_string(GenderLabel label);
std::string to_string(Dimension dim);
std::string to_string(Origin origin);
std::string to_string(Confidence conf);

// Uppercase rendering used by control tokens and report headers.
std::string dimension_tag(Dimension dim);

GenderLabel parse_gender_label(std::string_view s);
Dimension parse_dimension(std::string_view s);
Origin parse_origin(std::string_view s);
Confidence parse_confidence(std::string_view s);

// One of the nine (dimension, class) prediction targets. Unknown is not a
// class: it is never ranked or predicted.
struct ClassId {
  Dimension dimension;
  GenderLabel label;

  bool operator==(const ClassId&) const = default;
  // Lexicographic over (dimension, masculine < feminine < neutral); also the
  // score tie-breaking order.
  bool operator<(const ClassId& other) const;
};

std::string to_string(const ClassId& c);

}  // namespace gdim

#endif  // GDIM_TYPES_HPP
