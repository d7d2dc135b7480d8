#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "padp/concern.hpp"

namespace padp::synth {

// One synthetic user, shaped like a row of the status-corpus dataset.
// Network features exist only for schema completeness; nothing downstream
// consumes them.
struct UserRecord {
  std::string id;
  std::vector<std::string> statuses;
  concern::TraitScores traits;
  concern::TraitLabels labels;
  double gold_r = 0.0;
  concern::ConcernLabel concern_label = concern::ConcernLabel::MePC;
  std::array<double, 6> network = {0, 0, 0, 0, 0, 0};  // netsize, btw, nbtw, den, brkage, nbrkage

  bool operator==(const UserRecord&) const = default;
};

struct GenSpec {
  size_t n_users = 250;
  size_t total_statuses = 9917;
  size_t lo_count = 9;    // LoPC
  size_t me_count = 212;  // MePC
  size_t hi_count = 29;   // HiPC
  uint64_t seed = 0;
  concern::ScoreBounds bounds{};
};

// Token pools for status generation. Category draw probabilities are
// modulated by the trait profile; tokens within a category are uniform.
struct Lexicon {
  std::vector<std::string> first_person;
  std::vector<std::string> negative_emotion;
  std::vector<std::string> positive_emotion;
  std::vector<std::string> social;
  std::vector<std::string> articles;
  std::vector<std::string> negations;
  std::vector<std::string> discrepancy;
  std::vector<std::string> tentative;
  std::vector<std::string> long_words;
  std::vector<std::string> present_tense;
  std::vector<std::string> neutral;
};

const Lexicon& default_lexicon();

// Relative weight of each lexicon category for a trait profile, in the field
// order of Lexicon. Normalized scores t = (s - lo) / (hi - lo) shift the
// trait-linked categories: neurotic profiles say "i" and complain more,
// extraverts mention friends and good moods, agreeable users drop articles
// and negativity, conscientious users avoid negations and hedging, open
// users prefer long words and tentative phrasing over the here-and-now.
std::array<double, 11> category_weights(const concern::TraitScores& traits,
                                        const concern::ScoreBounds& bounds = {});

// `count` short lowercase statuses (5-12 tokens each), deterministic per seed.
std::vector<std::string> gen_statuses(const concern::TraitScores& traits, size_t count,
                                      const Lexicon& lexicon, uint64_t seed,
                                      const concern::ScoreBounds& bounds = {});

// Full cohort: concern labels hit the spec counts exactly, trait labels are
// drawn consistently with each concern label, scores are sampled in the
// label-matching half of the range, and statuses total spec.total_statuses.
std::vector<UserRecord> gen_users(const GenSpec& spec);

void write_dataset(const std::vector<UserRecord>& users, const std::string& path);
std::vector<UserRecord> read_dataset(const std::string& path);

// Concatenation of a user's statuses, used when extracting text features.
std::string joined_text(const UserRecord& user);

}  // namespace padp::synth
