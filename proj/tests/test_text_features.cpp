#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "padp/text_features.hpp"

using namespace padp;
using namespace padp::text;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "padp_test_tmp_" + std::to_string(counter++) + ".txt";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("tokenize lowercases and splits on non-alphanumeric bytes") {
  CHECK(tokenize("Hello, World!") == std::vector<std::string>{"hello", "world"});
  CHECK(tokenize("a-b_c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize("  many   spaces ") == std::vector<std::string>{"many", "spaces"});
  CHECK(tokenize("digits123 stay4") == std::vector<std::string>{"digits123", "stay4"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("!!!...") == std::vector<std::string>{});
  CHECK(tokenize("don't") == std::vector<std::string>{"don", "t"});
}

TEST_CASE("vocabulary collects 1..n-grams ranked by frequency then text") {
  // Tokens: x x y. 1-grams: x(2), y(1). 2-grams: "x x"(1), "x y"(1).
  // 3-grams: "x x y"(1). Ties sort lexicographically.
  const auto vocab = NgramVocabulary::build({"x x y"}, 10, 3);
  CHECK(vocab.entries() ==
        std::vector<std::string>{"x", "x x", "x x y", "x y", "y"});
  CHECK(vocab.size() == 5);
  CHECK(vocab.capacity() == 10);  // fixed block width even when underfull
  CHECK(vocab.index_of("x") == 0);
  CHECK(vocab.index_of("x x y") == 2);
  CHECK_FALSE(vocab.index_of("z").has_value());
}

TEST_CASE("vocabulary truncates to the most frequent entries") {
  const auto vocab = NgramVocabulary::build({"a b", "a c", "a d"}, 1, 1);
  CHECK(vocab.entries() == std::vector<std::string>{"a"});
  CHECK(vocab.capacity() == 1);

  // Unigrams only when max_n is 1.
  const auto uni = NgramVocabulary::build({"x x y"}, 10, 1);
  CHECK(uni.entries() == std::vector<std::string>{"x", "y"});
}

TEST_CASE("vocabulary ignores empty documents and rejects an empty corpus") {
  const auto vocab = NgramVocabulary::build({"", "a b", "!!!"}, 10, 2);
  CHECK(vocab.size() == 3);  // a, b, "a b"
  CHECK_THROWS_AS(NgramVocabulary::build({}, 10, 2), std::invalid_argument);
  CHECK_THROWS_AS(NgramVocabulary::build({"a"}, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(NgramVocabulary::build({"a"}, 10, 0), std::invalid_argument);
}

TEST_CASE("ngram extraction counts occurrences at fixed width") {
  const auto vocab = NgramVocabulary::build({"x x y"}, 8, 3);
  const auto counts = extract_ngrams("x x x", vocab);
  REQUIRE(counts.size() == 8);  // capacity, not entry count
  CHECK(counts[0] == 3.0);  // "x"
  CHECK(counts[1] == 2.0);  // "x x"
  CHECK(counts[2] == 0.0);  // "x x y" absent
  CHECK(counts[4] == 0.0);  // "y" absent
  CHECK(counts[5] == 0.0);  // padding beyond the entries

  const auto empty = extract_ngrams("", vocab);
  for (double c : empty) CHECK(c == 0.0);

  // Out-of-vocabulary tokens contribute nothing.
  const auto oov = extract_ngrams("z z z", vocab);
  for (double c : oov) CHECK(c == 0.0);
}

TEST_CASE("ngram counts are additive across documents joined by a separator") {
  // An out-of-vocabulary separator token prevents bridge n-grams, so counting
  // the concatenation equals summing the parts.
  const auto vocab = NgramVocabulary::build({"the cat sat on the mat"}, 32, 3);
  const std::string a = "the cat sat";
  const std::string b = "on the mat";
  const auto ca = extract_ngrams(a, vocab);
  const auto cb = extract_ngrams(b, vocab);
  const auto joined = extract_ngrams(a + " zzzseparator " + b, vocab);
  REQUIRE(ca.size() == joined.size());
  for (size_t i = 0; i < joined.size(); ++i) CHECK(joined[i] == ca[i] + cb[i]);
}

TEST_CASE("vocabulary serialization round-trips") {
  const auto vocab = NgramVocabulary::build({"a b a", "b c"}, 6, 2);
  const auto restored = NgramVocabulary::from_json(vocab.to_json());
  CHECK(restored.entries() == vocab.entries());
  CHECK(restored.capacity() == vocab.capacity());
  CHECK(restored.max_n() == vocab.max_n());
  CHECK(restored.index_of("a b") == vocab.index_of("a b"));

  nlohmann::json bad = vocab.to_json();
  bad["capacity"] = 1;  // fewer slots than entries
  CHECK_THROWS_AS(NgramVocabulary::from_json(bad), std::invalid_argument);
}

TEST_CASE("embedding tables load token vectors with line diagnostics") {
  TempFile good("cat 1.0 2.0\ndog 3.0 4.0\n");
  const auto table = load_embeddings(good.path);
  CHECK(table.dim == 2);
  CHECK(table.vectors.at("cat") == std::vector<double>{1.0, 2.0});
  CHECK(table.vectors.at("dog") == std::vector<double>{3.0, 4.0});

  TempFile ragged("cat 1.0 2.0\ndog 3.0\n");
  try {
    load_embeddings(ragged.path);
    FAIL("expected a parse failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);  // names line 2
  }

  TempFile junk("cat 1.0 oops\n");
  CHECK_THROWS_AS(load_embeddings(junk.path), std::runtime_error);
  CHECK_THROWS_AS(load_embeddings("no_such_file_here.txt"), std::runtime_error);

  TempFile empty("");
  const auto none = load_embeddings(empty.path);
  CHECK(none.empty());
  CHECK(none.dim == 300);  // default width when no rows define one
}

TEST_CASE("embedding averages cover hits and fall back to zero") {
  EmbeddingTable table;
  table.dim = 2;
  table.vectors["cat"] = {1.0, 2.0};
  table.vectors["dog"] = {3.0, 6.0};

  CHECK(embed_average({"cat"}, table) == std::vector<double>{1.0, 2.0});
  CHECK(embed_average({"cat", "dog"}, table) == std::vector<double>{2.0, 4.0});
  // Unknown tokens are skipped, not averaged as zeros.
  CHECK(embed_average({"cat", "bird"}, table) == std::vector<double>{1.0, 2.0});
  CHECK(embed_average({"bird"}, table) == std::vector<double>{0.0, 0.0});
  CHECK(embed_average({}, table) == std::vector<double>{0.0, 0.0});
}

namespace {

std::string topic_header(size_t lsi = 200, size_t lda = 50) {
  std::string h = "user_id";
  for (size_t i = 0; i < lsi; ++i) h += ",lsi_" + std::to_string(i);
  for (size_t i = 0; i < lda; ++i) h += ",lda_" + std::to_string(i);
  return h;
}

std::string topic_row(const std::string& id, size_t width, double fill) {
  std::string row = id;
  for (size_t i = 0; i < width; ++i) row += "," + std::to_string(fill);
  return row;
}

}  // namespace

TEST_CASE("topic tables load per-user rows") {
  TempFile good(topic_header() + "\n" + topic_row("u1", 250, 0.5) + "\n" +
                topic_row("u2", 250, -0.25) + "\n");
  const auto table = load_topics(good.path);
  CHECK(table.rows.size() == 2);
  REQUIRE(table.find("u1") != nullptr);
  CHECK(table.find("u1")->size() == 250);
  CHECK((*table.find("u2"))[0] == -0.25);
  CHECK(table.find("ghost") == nullptr);

  TempFile bad_header("id,lsi_0\nu1,0.5\n");
  CHECK_THROWS_AS(load_topics(bad_header.path), std::runtime_error);

  TempFile short_row(topic_header() + "\n" + topic_row("u1", 249, 0.5) + "\n");
  try {
    load_topics(short_row.path);
    FAIL("expected a parse failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("row") != std::string::npos);
  }

  std::string junk_row = "u1,oops";
  for (size_t i = 0; i < 249; ++i) junk_row += ",0.5";
  TempFile junk(topic_header() + "\n" + junk_row + "\n");
  CHECK_THROWS_AS(load_topics(junk.path), std::runtime_error);
}

TEST_CASE("assembled features concatenate fixed-width blocks") {
  const auto vocab = NgramVocabulary::build({"a b a"}, 4, 2);
  EmbeddingTable table;
  table.dim = 3;
  table.vectors["a"] = {1.0, 1.0, 1.0};

  FeatureBlocks blocks;
  blocks.ngram = 4;
  blocks.lsi = 2;
  blocks.lda = 1;
  blocks.embedding = 3;
  REQUIRE(blocks.total() == 10);

  const std::vector<double> topics = {0.1, 0.2, 0.3};
  const auto with = assemble("a b", vocab, &topics, table, blocks);
  REQUIRE(with.values.size() == 10);
  CHECK_FALSE(with.topics_missing);
  CHECK(with.values[0] == 1.0);  // "a"
  CHECK(with.values[4] == 0.1);  // lsi_0
  CHECK(with.values[6] == 0.3);  // lda_0
  CHECK(with.values[7] == 1.0);  // embedding mean over {a}

  const auto without = assemble("a b", vocab, nullptr, table, blocks);
  REQUIRE(without.values.size() == 10);
  CHECK(without.topics_missing);
  for (size_t i = 4; i < 7; ++i) CHECK(without.values[i] == 0.0);

  const auto blank = assemble("", vocab, nullptr, EmbeddingTable{.vectors = {}, .dim = 3}, blocks);
  CHECK(blank.topics_missing);
  for (size_t i = 0; i < 10; ++i) CHECK(blank.values[i] == 0.0);
}

TEST_CASE("assemble validates block consistency") {
  const auto vocab = NgramVocabulary::build({"a"}, 4, 1);
  EmbeddingTable table;
  table.dim = 3;
  table.vectors["a"] = {1.0, 2.0, 3.0};  // a non-empty table pins its width

  FeatureBlocks mismatched;
  mismatched.ngram = 5;  // vocab capacity is 4
  mismatched.lsi = 2;
  mismatched.lda = 1;
  mismatched.embedding = 3;
  CHECK_THROWS_AS(assemble("a", vocab, nullptr, table, mismatched), std::invalid_argument);

  FeatureBlocks ok;
  ok.ngram = 4;
  ok.lsi = 2;
  ok.lda = 1;
  ok.embedding = 3;
  const std::vector<double> short_topics = {0.1};
  CHECK_THROWS_AS(assemble("a", vocab, &short_topics, table, ok), std::invalid_argument);

  FeatureBlocks wrong_dim = ok;
  wrong_dim.embedding = 7;  // table.dim is 3
  CHECK_THROWS_AS(assemble("a", vocab, nullptr, table, wrong_dim), std::invalid_argument);
}

TEST_CASE("default block sizes add up to the documented width") {
  FeatureBlocks blocks;
  CHECK(blocks.ngram == 7111);
  CHECK(blocks.lsi == 200);
  CHECK(blocks.lda == 50);
  CHECK(blocks.embedding == 300);
  CHECK(blocks.total() == 7661);
}
