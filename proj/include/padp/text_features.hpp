#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace padp::text {

// Lowercases and splits on any non-alphanumeric byte.
std::vector<std::string> tokenize(const std::string& raw);

// The most frequent word n-grams (1..max_n tokens) of a corpus, ranked by
// frequency with lexicographic tie-break. Indices are dense and assigned in
// that rank order. Built from the training split only.
class NgramVocabulary {
 public:
  NgramVocabulary() = default;

  static NgramVocabulary build(const std::vector<std::string>& corpus,
                               size_t max_features = 7111, size_t max_n = 5);

  size_t size() const { return entries_.size(); }
  // Fixed width of the n-gram feature block (>= size()).
  size_t capacity() const { return capacity_; }
  size_t max_n() const { return max_n_; }
  const std::vector<std::string>& entries() const { return entries_; }
  std::optional<size_t> index_of(const std::string& ngram) const;

  nlohmann::json to_json() const;
  static NgramVocabulary from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> entries_;  // index -> tokens joined by ' '
  std::unordered_map<std::string, size_t> index_;
  size_t capacity_ = 0;
  size_t max_n_ = 5;
};

// Occurrence counts of each vocabulary n-gram, width vocab.capacity().
// Out-of-vocabulary n-grams are ignored.
std::vector<double> extract_ngrams(const std::string& doc, const NgramVocabulary& vocab);

struct EmbeddingTable {
  std::unordered_map<std::string, std::vector<double>> vectors;
  size_t dim = 300;

  bool empty() const { return vectors.empty(); }
};

// Plain text, one token per line: token followed by `dim` decimals.
EmbeddingTable load_embeddings(const std::string& path);

// Mean vector of the in-table tokens; zero vector when none match.
std::vector<double> embed_average(const std::vector<std::string>& tokens,
                                  const EmbeddingTable& table);

// Per-user topic rows loaded from CSV with header
// user_id,lsi_0..lsi_199,lda_0..lda_49
struct TopicTable {
  std::unordered_map<std::string, std::vector<double>> rows;
  size_t lsi_dim = 200;
  size_t lda_dim = 50;

  bool empty() const { return rows.empty(); }
  const std::vector<double>* find(const std::string& user_id) const;
};

TopicTable load_topics(const std::string& path);

struct FeatureBlocks {
  size_t ngram = 7111;
  size_t lsi = 200;
  size_t lda = 50;
  size_t embedding = 300;

  size_t total() const { return ngram + lsi + lda + embedding; }
};

struct AssembledFeatures {
  std::vector<double> values;
  bool topics_missing = false;
};

// Concatenates blocks in order (ngram, lsi, lda, embedding). Absent topic
// rows are zero-filled and flagged. The result width always equals
// blocks.total().
AssembledFeatures assemble(const std::string& user_text, const NgramVocabulary& vocab,
                           const std::vector<double>* topic_row, const EmbeddingTable& table,
                           const FeatureBlocks& blocks);

}  // namespace padp::text
