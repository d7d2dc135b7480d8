#pragma once

#include <array>
#include <string>

namespace padp::concern {

// Five Factor Model traits, ordered from highest privacy concern to lowest.
enum class Trait { NEU = 0, OPN = 1, CON = 2, AGR = 3, EXT = 4 };

constexpr std::array<Trait, 5> concern_ordering() {
  return {Trait::NEU, Trait::OPN, Trait::CON, Trait::AGR, Trait::EXT};
}

const char* trait_name(Trait trait);

// Continuous trait scores on a questionnaire scale (default [1, 5]).
struct TraitScores {
  double neu = 0.0;
  double opn = 0.0;
  double con = 0.0;
  double agr = 0.0;
  double ext = 0.0;

  std::array<double, 5> ordered() const { return {neu, opn, con, agr, ext}; }
  bool operator==(const TraitScores&) const = default;
};

// Binary yes/no trait labels.
struct TraitLabels {
  bool neu = false;
  bool opn = false;
  bool con = false;
  bool agr = false;
  bool ext = false;

  std::array<bool, 5> ordered() const { return {neu, opn, con, agr, ext}; }
  bool operator==(const TraitLabels&) const = default;
};

// Trait weighting in concern order (NEU, OPN, CON, AGR, EXT).
struct WeightVector {
  std::array<double, 5> v = {5.0, 4.7, 4.3, 4.1, 1.0};
};

struct ScoreBounds {
  double lo = 1.0;
  double hi = 5.0;
};

enum class ConcernLabel { HiPC, MePC, LoPC };

const char* label_name(ConcernLabel label);
ConcernLabel label_from_name(const std::string& name);

inline constexpr double kGoldNormalizer = 125.0;

// r = (1/125) * sum_i v_i * s_i, clamped to [0, 1] with a warning when the
// raw value falls outside. Scores must lie within bounds.
double gold_score(const TraitScores& scores, const WeightVector& weights = {},
                  const ScoreBounds& bounds = {});

// r = sigmoid(sum_i v_i * y_i) over predicted trait scores.
double sigmoid_score(const std::array<double, 5>& y, const WeightVector& weights = {});

// HiPC:  NEU=yes, OPN=yes, AGR=no, EXT=no (CON anything)
// LoPC:  NEU=no,  OPN=no,  AGR=yes, EXT=yes (CON anything)
// MePC:  everything else
ConcernLabel derive_label(const TraitLabels& labels);

}  // namespace padp::concern
