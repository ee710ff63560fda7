#pragma once

#include <filesystem>
#include <fstream>
#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "foodpref/embed.hpp"
#include "foodpref/ingest.hpp"

namespace foodpref::support {

inline std::string data_path(const std::string& name) { return std::string(FOODPREF_DATA_DIR) + "/" + name; }

// The bundled FNDDS table, or the file named by FOODPREF_FNDDS.
inline std::string fndds_path() {
  if (const char* p = std::getenv("FOODPREF_FNDDS"); p && *p) return p;
  return data_path("fndds_survey_foods.tsv");
}

inline FnddsDatabase make_db(const std::vector<FnddsFood>& foods) {
  return FnddsDatabase::from_foods(foods, kDefaultExclusionTerms);
}

// Gaussian vectors for every token, seeded.
inline EmbeddingStore random_store(const std::vector<std::string>& tokens, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> n(0.0f, 1.0f);
  EmbeddingStore store(dim);
  std::vector<float> v(dim);
  for (const auto& t : tokens) {
    for (auto& x : v) x = n(rng);
    store.add(t, v);
  }
  return store;
}

inline EmbeddingStore random_store(const FnddsDatabase& db, std::size_t dim, std::uint64_t seed) {
  std::vector<std::string> tokens(db.vocabulary().begin(), db.vocabulary().end());
  std::sort(tokens.begin(), tokens.end());
  return random_store(tokens, dim, seed);
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("foodpref_test_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::string write(const std::string& name, const std::string& content) const {
    auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace foodpref::support
