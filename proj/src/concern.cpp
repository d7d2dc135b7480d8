#include "padp/concern.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace padp::concern {

const char* trait_name(Trait trait) {
  switch (trait) {
    case Trait::NEU: return "NEU";
    case Trait::OPN: return "OPN";
    case Trait::CON: return "CON";
    case Trait::AGR: return "AGR";
    case Trait::EXT: return "EXT";
  }
  return "?";
}

const char* label_name(ConcernLabel label) {
  switch (label) {
    case ConcernLabel::HiPC: return "HiPC";
    case ConcernLabel::MePC: return "MePC";
    case ConcernLabel::LoPC: return "LoPC";
  }
  return "?";
}

ConcernLabel label_from_name(const std::string& name) {
  if (name == "HiPC") return ConcernLabel::HiPC;
  if (name == "MePC") return ConcernLabel::MePC;
  if (name == "LoPC") return ConcernLabel::LoPC;
  throw std::invalid_argument("unknown concern label '" + name + "'");
}

double gold_score(const TraitScores& scores, const WeightVector& weights,
                  const ScoreBounds& bounds) {
  double z = 0.0;
  const auto s = scores.ordered();
  for (size_t i = 0; i < 5; ++i) {
    if (s[i] < bounds.lo || s[i] > bounds.hi) {
      throw std::invalid_argument("gold_score: trait score out of bounds");
    }
    z += weights.v[i] * s[i];
  }
  double r = z / kGoldNormalizer;
  if (r > 1.0 || r < 0.0) {
    std::fprintf(stderr, "gold_score: raw value %.6f outside [0,1], clamping\n", r);
    r = r > 1.0 ? 1.0 : 0.0;
  }
  return r;
}

double sigmoid_score(const std::array<double, 5>& y, const WeightVector& weights) {
  double z = 0.0;
  for (size_t i = 0; i < 5; ++i) {
    if (!std::isfinite(y[i])) throw std::invalid_argument("sigmoid_score: non-finite input");
    z += weights.v[i] * y[i];
  }
  return 1.0 / (1.0 + std::exp(-z));
}

ConcernLabel derive_label(const TraitLabels& l) {
  if (l.neu && l.opn && !l.agr && !l.ext) return ConcernLabel::HiPC;
  if (!l.neu && !l.opn && l.agr && l.ext) return ConcernLabel::LoPC;
  return ConcernLabel::MePC;
}

}  // namespace padp::concern
