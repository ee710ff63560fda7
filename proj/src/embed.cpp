#include "foodpref/embed.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "foodpref/error.hpp"
#include "foodpref/ingest.hpp"
#include "foodpref/simd.hpp"

namespace foodpref {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_count(std::string_view s, std::size_t& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

bool parse_float(std::string_view s, float& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

double norm(std::span<const double> x) { return std::sqrt(simd::dot(x, x)); }

double cosine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(Errc::kDimensionMismatch,
                "cosine of vectors of length " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  const double nx = norm(x);
  const double ny = norm(y);
  if (nx == 0.0 || ny == 0.0) throw Error(Errc::kZeroNorm, "cosine of a zero vector");
  double c = simd::dot(x, y) / (nx * ny);
  return c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
}

std::optional<std::size_t> EmbeddingStore::index_of(const Token& token) const {
  auto it = rows_.find(token);
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

std::span<const float> EmbeddingStore::find(const Token& token) const {
  auto it = rows_.find(token);
  if (it == rows_.end()) return {};
  return row(it->second);
}

bool EmbeddingStore::add(const Token& token, std::span<const float> values) {
  if (values.size() != dim_) {
    throw Error(Errc::kDimensionMismatch, "vector for '" + token + "' has " + std::to_string(values.size()) +
                                              " components, store dimension is " + std::to_string(dim_));
  }
  auto [it, inserted] = rows_.try_emplace(token, tokens_.size());
  if (!inserted) return false;
  tokens_.push_back(token);
  data_.insert(data_.end(), values.begin(), values.end());
  return true;
}

void EmbeddingStore::write(std::ostream& out) const {
  out << tokens_.size() << ' ' << dim_ << '\n';
  char buf[64];
  std::string line;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    line = tokens_[i];
    for (float v : row(i)) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
      line.push_back(' ');
      line.append(buf, p);
    }
    line.push_back('\n');
    out << line;
  }
}

EmbeddingStore load_vectors(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t header_dim = 0;
  bool first = true;
  std::optional<EmbeddingStore> store;
  std::vector<float> values;

  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    std::size_t count = 0, dim = 0;
    if (first && fields.size() == 2 && parse_count(fields[0], count) && parse_count(fields[1], dim)) {
      first = false;
      header_dim = dim;
      continue;
    }
    first = false;
    const std::size_t arity = fields.size() - 1;
    if (!store) {
      if (arity == 0 || (header_dim && arity != header_dim)) {
        throw Error(Errc::kDimensionMismatch, "line " + std::to_string(lineno) + " has " + std::to_string(arity) +
                                                  " components, header declares " + std::to_string(header_dim));
      }
      store.emplace(arity);
    }
    if (arity != store->dimension()) {
      throw Error(Errc::kDimensionMismatch, "line " + std::to_string(lineno) + " has " + std::to_string(arity) +
                                                " components, expected " + std::to_string(store->dimension()));
    }
    values.resize(arity);
    bool ok = true;
    for (std::size_t k = 0; k < arity && ok; ++k) ok = parse_float(fields[k + 1], values[k]);
    if (!ok) continue;
    std::string token(fields[0]);
    for (char& c : token) {
      if (static_cast<unsigned char>(c) < 128) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    store->add(token, values);
  }
  if (!store || store->empty()) throw Error(Errc::kEmptyStore, "no word vectors in input");
  return std::move(*store);
}

EmbeddingStore load_vectors_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open vectors " + path.string());
  return load_vectors(in);
}

void write_vectors_file(const EmbeddingStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write vectors " + path.string());
  store.write(out);
  if (!out) throw Error(Errc::kIo, "write failed for " + path.string());
}

std::optional<Vector> embed_tokens(std::span<const Token> tokens, const EmbeddingStore& store) {
  Vector sum(store.dimension());
  std::size_t found = 0;
  const auto& k = simd::active();
  for (const auto& t : tokens) {
    auto v = store.find(t);
    if (v.empty()) continue;
    k.accumulate_f32(v.data(), sum.values().data(), v.size());
    ++found;
  }
  if (found == 0) return std::nullopt;
  const double inv = 1.0 / static_cast<double>(found);
  for (double& x : sum.values()) x *= inv;
  return sum;
}

std::vector<std::vector<Token>> build_sentences(const FnddsDatabase& db) {
  std::vector<std::vector<Token>> out;
  out.reserve(db.foods().size());
  for (std::size_t i = 0; i < db.foods().size(); ++i) {
    auto sentence = db.food_tokens(i);
    auto cat = tokenize_flat(db.foods()[i].category_name);
    sentence.insert(sentence.end(), cat.begin(), cat.end());
    out.push_back(std::move(sentence));
  }
  return out;
}

}  // namespace foodpref
