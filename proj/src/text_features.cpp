#include "padp/text_features.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace padp::text {

std::vector<std::string> tokenize(const std::string& raw) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : raw) {
    const unsigned char uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

// Appends every 1..max_n-gram of doc to visit(ngram).
template <typename Fn>
void for_each_ngram(const std::string& doc, size_t max_n, Fn&& visit) {
  const auto tokens = tokenize(doc);
  for (size_t i = 0; i < tokens.size(); ++i) {
    std::string gram;
    for (size_t n = 0; n < max_n && i + n < tokens.size(); ++n) {
      if (n > 0) gram.push_back(' ');
      gram += tokens[i + n];
      visit(gram);
    }
  }
}

}  // namespace

NgramVocabulary NgramVocabulary::build(const std::vector<std::string>& corpus,
                                       size_t max_features, size_t max_n) {
  if (corpus.empty()) throw std::invalid_argument("NgramVocabulary: empty corpus");
  if (max_features == 0) throw std::invalid_argument("NgramVocabulary: max_features must be positive");
  if (max_n == 0) throw std::invalid_argument("NgramVocabulary: max_n must be positive");

  std::unordered_map<std::string, uint64_t> counts;
  for (const auto& doc : corpus) {
    for_each_ngram(doc, max_n, [&](const std::string& gram) { ++counts[gram]; });
  }

  std::vector<std::pair<std::string, uint64_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > max_features) ranked.resize(max_features);

  NgramVocabulary vocab;
  vocab.capacity_ = max_features;
  vocab.max_n_ = max_n;
  vocab.entries_.reserve(ranked.size());
  for (size_t i = 0; i < ranked.size(); ++i) {
    vocab.entries_.push_back(ranked[i].first);
    vocab.index_.emplace(ranked[i].first, i);
  }
  return vocab;
}

std::optional<size_t> NgramVocabulary::index_of(const std::string& ngram) const {
  auto it = index_.find(ngram);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

nlohmann::json NgramVocabulary::to_json() const {
  return {{"capacity", capacity_}, {"max_n", max_n_}, {"entries", entries_}};
}

NgramVocabulary NgramVocabulary::from_json(const nlohmann::json& j) {
  NgramVocabulary vocab;
  vocab.capacity_ = j.at("capacity").get<size_t>();
  vocab.max_n_ = j.at("max_n").get<size_t>();
  vocab.entries_ = j.at("entries").get<std::vector<std::string>>();
  if (vocab.entries_.size() > vocab.capacity_) {
    throw std::invalid_argument("NgramVocabulary: more entries than capacity");
  }
  for (size_t i = 0; i < vocab.entries_.size(); ++i) vocab.index_.emplace(vocab.entries_[i], i);
  return vocab;
}

std::vector<double> extract_ngrams(const std::string& doc, const NgramVocabulary& vocab) {
  std::vector<double> counts(vocab.capacity(), 0.0);
  for_each_ngram(doc, vocab.max_n(), [&](const std::string& gram) {
    if (auto idx = vocab.index_of(gram)) counts[*idx] += 1.0;
  });
  return counts;
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_embeddings: cannot open '" + path + "'");

  EmbeddingTable table;
  table.dim = 0;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string token;
    if (!(ss >> token)) {
      throw std::runtime_error("load_embeddings: malformed line " + std::to_string(line_no));
    }
    std::vector<double> vec;
    double v;
    while (ss >> v) vec.push_back(v);
    if (!ss.eof()) {
      throw std::runtime_error("load_embeddings: malformed line " + std::to_string(line_no));
    }
    if (vec.empty()) {
      throw std::runtime_error("load_embeddings: no values on line " + std::to_string(line_no));
    }
    if (table.dim == 0) {
      table.dim = vec.size();
    } else if (vec.size() != table.dim) {
      throw std::runtime_error("load_embeddings: dimension mismatch on line " +
                               std::to_string(line_no));
    }
    table.vectors[token] = std::move(vec);
  }
  if (table.dim == 0) table.dim = 300;
  return table;
}

std::vector<double> embed_average(const std::vector<std::string>& tokens,
                                  const EmbeddingTable& table) {
  std::vector<double> mean(table.dim, 0.0);
  size_t hits = 0;
  for (const auto& token : tokens) {
    auto it = table.vectors.find(token);
    if (it == table.vectors.end()) continue;
    for (size_t i = 0; i < table.dim; ++i) mean[i] += it->second[i];
    ++hits;
  }
  if (hits > 0) {
    for (double& v : mean) v /= static_cast<double>(hits);
  }
  return mean;
}

const std::vector<double>* TopicTable::find(const std::string& user_id) const {
  auto it = rows.find(user_id);
  return it == rows.end() ? nullptr : &it->second;
}

TopicTable load_topics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_topics: cannot open '" + path + "'");

  TopicTable table;
  const size_t width = table.lsi_dim + table.lda_dim;
  std::string line;
  size_t line_no = 0;
  if (!std::getline(in, line)) throw std::runtime_error("load_topics: empty file");
  ++line_no;
  if (line.rfind("user_id,lsi_0", 0) != 0) {
    throw std::runtime_error("load_topics: unexpected header");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string user_id;
    if (!std::getline(ss, user_id, ',') || user_id.empty()) {
      throw std::runtime_error("load_topics: malformed row " + std::to_string(line_no));
    }
    std::vector<double> row;
    row.reserve(width);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw std::runtime_error("load_topics: bad number on row " + std::to_string(line_no));
      }
    }
    if (row.size() != width) {
      throw std::runtime_error("load_topics: row " + std::to_string(line_no) + " has " +
                               std::to_string(row.size()) + " values, expected " +
                               std::to_string(width));
    }
    table.rows[user_id] = std::move(row);
  }
  return table;
}

AssembledFeatures assemble(const std::string& user_text, const NgramVocabulary& vocab,
                           const std::vector<double>* topic_row, const EmbeddingTable& table,
                           const FeatureBlocks& blocks) {
  if (vocab.capacity() != blocks.ngram) {
    throw std::invalid_argument("assemble: vocabulary capacity does not match ngram block");
  }
  if (topic_row && topic_row->size() != blocks.lsi + blocks.lda) {
    throw std::invalid_argument("assemble: topic row width mismatch");
  }
  if (!table.empty() && table.dim != blocks.embedding) {
    throw std::invalid_argument("assemble: embedding dimension mismatch");
  }

  AssembledFeatures out;
  out.values.reserve(blocks.total());

  const auto ngram_counts = extract_ngrams(user_text, vocab);
  out.values.insert(out.values.end(), ngram_counts.begin(), ngram_counts.end());

  if (topic_row) {
    out.values.insert(out.values.end(), topic_row->begin(), topic_row->end());
  } else {
    out.values.insert(out.values.end(), blocks.lsi + blocks.lda, 0.0);
    out.topics_missing = true;
  }

  if (table.empty()) {
    out.values.insert(out.values.end(), blocks.embedding, 0.0);
  } else {
    const auto mean = embed_average(tokenize(user_text), table);
    out.values.insert(out.values.end(), mean.begin(), mean.end());
  }

  if (out.values.size() != blocks.total()) {
    throw std::logic_error("assemble: assembled width differs from declared total");
  }
  return out;
}

}  // namespace padp::text
