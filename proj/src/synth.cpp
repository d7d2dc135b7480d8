#include "padp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "padp/rng.hpp"

namespace padp::synth {

namespace {

constexpr const char* kHeader =
    "user_id,status_count,statuses,sNEU,sOPN,sCON,sAGR,sEXT,"
    "cNEU,cOPN,cCON,cAGR,cEXT,gold_r,concern_label,"
    "netsize,btw,nbtw,den,brkage,nbrkage";
constexpr size_t kColumns = 21;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& field, bool force = false) {
  const bool needs = force || field.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Splits one physical CSV line into fields, honoring quotes. Rows never span
// lines here (statuses contain no newlines by construction).
std::vector<std::string> csv_split(const std::string& line, size_t row_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) {
    throw std::runtime_error("read_dataset: row " + std::to_string(row_no) +
                             ": unterminated quote");
  }
  fields.push_back(std::move(cur));
  return fields;
}

double parse_double(const std::string& field, size_t row_no, const char* col) {
  try {
    size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument("trailing garbage");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("read_dataset: row " + std::to_string(row_no) + ": bad number in " +
                             col + " ('" + field + "')");
  }
}

bool parse_yes_no(const std::string& field, size_t row_no, const char* col) {
  if (field == "yes") return true;
  if (field == "no") return false;
  throw std::runtime_error("read_dataset: row " + std::to_string(row_no) + ": " + col +
                           " must be yes or no, got '" + field + "'");
}

// Truncated normal by resampling: center of the label-conditioned half-range,
// sigma = half-range / 6.
double sample_half_range(Rng& rng, double lo, double hi, bool upper) {
  const double mid = 0.5 * (lo + hi);
  const double a = upper ? mid : lo;
  const double b = upper ? hi : mid;
  const double center = 0.5 * (a + b);
  const double sigma = (b - a) / 6.0;
  for (;;) {
    const double v = center + sigma * rng.gaussian();
    if (v >= a && v <= b) return v;
  }
}

size_t weighted_pick(Rng& rng, const double* weights, size_t n) {
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) total += weights[i];
  double u = rng.next_double() * total;
  for (size_t i = 0; i < n; ++i) {
    u -= weights[i];
    if (u < 0.0) return i;
  }
  return n - 1;
}

concern::TraitLabels draw_labels(Rng& rng, concern::ConcernLabel target) {
  using concern::ConcernLabel;
  concern::TraitLabels labels;
  if (target == ConcernLabel::HiPC) {
    labels = {true, true, rng.next_index(2) == 1, false, false};
    return labels;
  }
  if (target == ConcernLabel::LoPC) {
    labels = {false, false, rng.next_index(2) == 1, true, true};
    return labels;
  }
  // MePC: any combination the two rules above do not claim.
  for (;;) {
    labels = {rng.next_index(2) == 1, rng.next_index(2) == 1, rng.next_index(2) == 1,
              rng.next_index(2) == 1, rng.next_index(2) == 1};
    if (concern::derive_label(labels) == ConcernLabel::MePC) return labels;
  }
}

}  // namespace

const Lexicon& default_lexicon() {
  static const Lexicon lex = {
      // first_person
      {"i", "me", "my", "mine", "myself", "im", "ive"},
      // negative_emotion
      {"sad", "tired", "angry", "awful", "worried", "anxious", "terrible", "stressed", "upset",
       "miserable", "hate", "cry"},
      // positive_emotion
      {"happy", "great", "love", "awesome", "fun", "glad", "amazing", "sweet", "nice", "excited",
       "wonderful", "smile"},
      // social
      {"friends", "party", "everyone", "crew", "hangout", "guys", "chat", "meetup", "club",
       "weekend", "crowd", "together"},
      // articles
      {"the", "a", "an"},
      // negations
      {"not", "never", "no", "cant", "dont", "wont"},
      // discrepancy
      {"should", "would", "could", "wish", "hope", "if"},
      // tentative
      {"maybe", "perhaps", "possibly", "somewhat", "guess", "appears", "seems", "likely"},
      // long_words
      {"philosophy", "imagination", "perspective", "fascinating", "aesthetics", "literature",
       "curiosity", "abstraction", "extraordinary", "contemplation"},
      // present_tense
      {"is", "am", "are", "going", "doing", "making", "watching", "eating", "walking", "playing"},
      // neutral
      {"today", "day", "work", "home", "time", "thing", "week", "good", "new", "old", "school",
       "morning", "night", "coffee", "music", "game", "movie", "book", "out", "back", "here",
       "there", "again", "later", "soon", "really", "just", "still", "all", "lot"},
  };
  return lex;
}

std::array<double, 11> category_weights(const concern::TraitScores& traits,
                                        const concern::ScoreBounds& bounds) {
  const double range = bounds.hi - bounds.lo;
  if (range <= 0.0) throw std::invalid_argument("category_weights: invalid score bounds");
  const double t_neu = (traits.neu - bounds.lo) / range;
  const double t_opn = (traits.opn - bounds.lo) / range;
  const double t_con = (traits.con - bounds.lo) / range;
  const double t_agr = (traits.agr - bounds.lo) / range;
  const double t_ext = (traits.ext - bounds.lo) / range;

  std::array<double, 11> w{};
  w[0] = 1.0 + 2.0 * t_neu - 0.8 * t_opn;   // first_person
  w[1] = 0.5 + 2.0 * t_neu - 0.8 * t_agr;   // negative_emotion
  w[2] = 0.5 + 1.5 * t_ext + 1.5 * t_agr;   // positive_emotion
  w[3] = 0.5 + 2.0 * t_ext;                 // social
  w[4] = 1.0 - 0.8 * t_agr;                 // articles
  w[5] = 0.8 - 0.6 * t_con;                 // negations
  w[6] = 0.8 - 0.6 * t_con;                 // discrepancy
  w[7] = 0.5 + 1.5 * t_opn;                 // tentative
  w[8] = 0.5 + 2.0 * t_opn;                 // long_words
  w[9] = 1.0 - 0.8 * t_opn;                 // present_tense
  w[10] = 2.0;                              // neutral
  for (double& x : w) x = std::max(x, 0.05);
  return w;
}

std::vector<std::string> gen_statuses(const concern::TraitScores& traits, size_t count,
                                      const Lexicon& lexicon, uint64_t seed,
                                      const concern::ScoreBounds& bounds) {
  const auto weights = category_weights(traits, bounds);
  const std::vector<std::string>* pools[11] = {
      &lexicon.first_person, &lexicon.negative_emotion, &lexicon.positive_emotion,
      &lexicon.social,       &lexicon.articles,         &lexicon.negations,
      &lexicon.discrepancy,  &lexicon.tentative,        &lexicon.long_words,
      &lexicon.present_tense, &lexicon.neutral};
  for (const auto* pool : pools) {
    if (pool->empty()) throw std::invalid_argument("gen_statuses: lexicon category is empty");
  }

  Rng rng(seed);
  std::vector<std::string> statuses;
  statuses.reserve(count);
  for (size_t s = 0; s < count; ++s) {
    const size_t len = 5 + rng.next_index(8);  // 5..12 tokens
    std::string text;
    for (size_t t = 0; t < len; ++t) {
      const size_t cat = weighted_pick(rng, weights.data(), weights.size());
      const auto& pool = *pools[cat];
      if (t > 0) text.push_back(' ');
      text += pool[rng.next_index(pool.size())];
    }
    statuses.push_back(std::move(text));
  }
  return statuses;
}

std::vector<UserRecord> gen_users(const GenSpec& spec) {
  if (spec.n_users == 0) throw std::invalid_argument("gen_users: n_users must be positive");
  if (spec.lo_count + spec.me_count + spec.hi_count != spec.n_users) {
    throw std::invalid_argument("gen_users: label counts must sum to n_users");
  }
  if (spec.bounds.hi <= spec.bounds.lo) {
    throw std::invalid_argument("gen_users: invalid score bounds");
  }

  Rng rng(spec.seed);

  // Concern labels in spec counts, order shuffled.
  std::vector<concern::ConcernLabel> assigned;
  assigned.reserve(spec.n_users);
  assigned.insert(assigned.end(), spec.lo_count, concern::ConcernLabel::LoPC);
  assigned.insert(assigned.end(), spec.me_count, concern::ConcernLabel::MePC);
  assigned.insert(assigned.end(), spec.hi_count, concern::ConcernLabel::HiPC);
  rng.shuffle(assigned);

  // Status quota per user: log-normal weights, exact total via the
  // largest-remainder rule.
  std::vector<double> quota_weights(spec.n_users);
  for (double& w : quota_weights) w = std::exp(0.35 * rng.gaussian());
  const double weight_sum = std::accumulate(quota_weights.begin(), quota_weights.end(), 0.0);
  std::vector<size_t> counts(spec.n_users);
  std::vector<std::pair<double, size_t>> fractional(spec.n_users);
  size_t allocated = 0;
  for (size_t i = 0; i < spec.n_users; ++i) {
    const double exact = static_cast<double>(spec.total_statuses) * quota_weights[i] / weight_sum;
    counts[i] = static_cast<size_t>(exact);
    fractional[i] = {exact - static_cast<double>(counts[i]), i};
    allocated += counts[i];
  }
  std::sort(fractional.begin(), fractional.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (size_t r = 0; allocated < spec.total_statuses; ++r, ++allocated) {
    ++counts[fractional[r % spec.n_users].second];
  }

  std::vector<UserRecord> users(spec.n_users);
  for (size_t i = 0; i < spec.n_users; ++i) {
    UserRecord& user = users[i];
    char id[16];
    std::snprintf(id, sizeof(id), "u%04zu", i);
    user.id = id;

    user.labels = draw_labels(rng, assigned[i]);
    user.concern_label = concern::derive_label(user.labels);

    const auto flags = user.labels.ordered();
    double scores[5];
    for (size_t t = 0; t < 5; ++t) {
      scores[t] = sample_half_range(rng, spec.bounds.lo, spec.bounds.hi, flags[t]);
    }
    user.traits = {scores[0], scores[1], scores[2], scores[3], scores[4]};
    user.gold_r = concern::gold_score(user.traits, {}, spec.bounds);

    // Log-normal marginals, scaled per column for plausible magnitudes.
    const double mus[6] = {5.0, 7.5, -1.2, -2.0, 6.0, -1.5};
    const double sigmas[6] = {0.9, 1.4, 0.8, 0.6, 1.3, 0.7};
    for (size_t f = 0; f < 6; ++f) {
      user.network[f] = std::exp(mus[f] + sigmas[f] * rng.gaussian());
    }

    // Statuses use a derived per-user stream so their draw count never
    // perturbs the cohort-level stream.
    const uint64_t status_seed = splitmix64(spec.seed + 0x9e3779b97f4a7c15ULL * (i + 1));
    user.statuses = gen_statuses(user.traits, counts[i], default_lexicon(), status_seed,
                                 spec.bounds);
  }
  return users;
}

std::string joined_text(const UserRecord& user) {
  std::string text;
  for (const auto& s : user.statuses) {
    if (!text.empty()) text.push_back(' ');
    text += s;
  }
  return text;
}

void write_dataset(const std::vector<UserRecord>& users, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_dataset: cannot open '" + path + "'");
  out << kHeader << '\n';
  for (const auto& user : users) {
    std::string joined;
    for (size_t i = 0; i < user.statuses.size(); ++i) {
      if (i > 0) joined.push_back('|');
      joined += user.statuses[i];
    }
    const auto s = user.traits.ordered();
    const auto c = user.labels.ordered();
    out << csv_quote(user.id) << ',' << user.statuses.size() << ',' << csv_quote(joined, true);
    for (double v : s) out << ',' << format_double(v);
    for (bool b : c) out << ',' << (b ? "yes" : "no");
    out << ',' << format_double(user.gold_r) << ',' << concern::label_name(user.concern_label);
    for (double v : user.network) out << ',' << format_double(v);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_dataset: write failed for '" + path + "'");
}

std::vector<UserRecord> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_dataset: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) {
    std::fprintf(stderr, "read_dataset: '%s' is empty\n", path.c_str());
    return {};
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    // Name the first expected column that is absent; otherwise the header is
    // just reordered or malformed.
    const auto have = csv_split(line, 1);
    const auto want = csv_split(kHeader, 1);
    for (const auto& col : want) {
      if (std::find(have.begin(), have.end(), col) == have.end()) {
        throw std::runtime_error("read_dataset: missing column '" + col + "'");
      }
    }
    throw std::runtime_error("read_dataset: unexpected column order in header");
  }

  std::vector<UserRecord> users;
  size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = csv_split(line, row_no);
    if (fields.size() != kColumns) {
      throw std::runtime_error("read_dataset: row " + std::to_string(row_no) + ": expected " +
                               std::to_string(kColumns) + " fields, got " +
                               std::to_string(fields.size()));
    }

    UserRecord user;
    user.id = fields[0];
    const auto declared = static_cast<size_t>(parse_double(fields[1], row_no, "status_count"));

    if (!fields[2].empty()) {
      std::stringstream ss(fields[2]);
      std::string status;
      while (std::getline(ss, status, '|')) user.statuses.push_back(status);
    }
    if (user.statuses.size() != declared) {
      throw std::runtime_error("read_dataset: row " + std::to_string(row_no) +
                               ": status_count disagrees with statuses field");
    }

    user.traits.neu = parse_double(fields[3], row_no, "sNEU");
    user.traits.opn = parse_double(fields[4], row_no, "sOPN");
    user.traits.con = parse_double(fields[5], row_no, "sCON");
    user.traits.agr = parse_double(fields[6], row_no, "sAGR");
    user.traits.ext = parse_double(fields[7], row_no, "sEXT");
    user.labels.neu = parse_yes_no(fields[8], row_no, "cNEU");
    user.labels.opn = parse_yes_no(fields[9], row_no, "cOPN");
    user.labels.con = parse_yes_no(fields[10], row_no, "cCON");
    user.labels.agr = parse_yes_no(fields[11], row_no, "cAGR");
    user.labels.ext = parse_yes_no(fields[12], row_no, "cEXT");
    user.gold_r = parse_double(fields[13], row_no, "gold_r");
    try {
      user.concern_label = concern::label_from_name(fields[14]);
    } catch (const std::exception& e) {
      throw std::runtime_error("read_dataset: row " + std::to_string(row_no) + ": " + e.what());
    }
    for (size_t f = 0; f < 6; ++f) {
      static const char* names[6] = {"netsize", "btw", "nbtw", "den", "brkage", "nbrkage"};
      user.network[f] = parse_double(fields[15 + f], row_no, names[f]);
    }
    users.push_back(std::move(user));
  }
  return users;
}

}  // namespace padp::synth
