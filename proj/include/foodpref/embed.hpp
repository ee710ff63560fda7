#pragma once

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "foodpref/textprep.hpp"

namespace foodpref {

class FnddsDatabase;

// Dense double-precision vector; phrase embeddings and query vectors.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dimension) : v_(dimension, 0.0) {}
  explicit Vector(std::vector<double> values) : v_(std::move(values)) {}
  Vector(std::initializer_list<double> values) : v_(values) {}

  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }
  std::span<const double> values() const { return v_; }
  std::span<double> values() { return v_; }

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> v_;
};

double norm(std::span<const double> x);

// x·y / (‖x‖‖y‖) in double precision. Throws Error(kDimensionMismatch) or
// Error(kZeroNorm).
double cosine(std::span<const double> x, std::span<const double> y);
inline double cosine(const Vector& x, const Vector& y) { return cosine(x.values(), y.values()); }

// Token -> vector map with single-precision row storage.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dimension = 0) : dim_(dimension) {}

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  std::optional<std::size_t> index_of(const Token& token) const;
  bool contains(const Token& token) const { return rows_.count(token) != 0; }
  // Empty span when the token is absent.
  std::span<const float> find(const Token& token) const;

  std::span<const float> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<float> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  const std::vector<Token>& tokens() const { return tokens_; }

  // Keeps the first vector for a token; returns false for a duplicate.
  // Throws Error(kDimensionMismatch) on wrong length.
  bool add(const Token& token, std::span<const float> values);

  // "count dimension" header followed by one "token v1 ... vd" line per
  // token in insertion order; floats are written in shortest round-trip form.
  void write(std::ostream& out) const;

  bool operator==(const EmbeddingStore& o) const {
    return dim_ == o.dim_ && tokens_ == o.tokens_ && data_ == o.data_;
  }

 private:
  std::size_t dim_;
  std::vector<Token> tokens_;
  std::unordered_map<Token, std::size_t> rows_;
  std::vector<float> data_;
};

// Word-vector text format: optional "count dimension" header, then
// "token v1 ... vd" lines. Tokens are lowercased; the first occurrence of a
// token wins.
EmbeddingStore load_vectors(std::istream& in);
EmbeddingStore load_vectors_file(const std::filesystem::path& path);
void write_vectors_file(const EmbeddingStore& store, const std::filesystem::path& path);

// Mean of the vectors of the tokens present in the store (repeats count);
// std::nullopt when none are present.
std::optional<Vector> embed_tokens(std::span<const Token> tokens, const EmbeddingStore& store);

// One sentence per food: description tokens followed by category tokens.
std::vector<std::vector<Token>> build_sentences(const FnddsDatabase& db);

}  // namespace foodpref
