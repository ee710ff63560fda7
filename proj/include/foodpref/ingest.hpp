#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "foodpref/textprep.hpp"

namespace foodpref {

using FoodCode = std::int64_t;
using CategoryId = int;

struct FoodLogEntry {
  std::optional<std::chrono::year_month_day> date;
  std::optional<std::chrono::minutes> time;  // since midnight
  std::string name_raw;
  std::size_t entry_id = 0;
};

struct FoodLog {
  std::string log_id;
  std::vector<FoodLogEntry> entries;
  std::size_t skipped_rows = 0;  // rows with an empty food name
};

// Column mapping for a food-log export. Defaults match Cronometer.
struct LogFormat {
  std::string date_column = "Day";
  std::string time_column = "Time";
  std::string name_column = "Food Name";
  bool time_required = false;

  static LogFormat from_json(const nlohmann::json& j);
  static LogFormat from_file(const std::filesystem::path& path);
};

FoodLog parse_food_log(std::istream& in, const LogFormat& format, std::string log_id = {});
// log_id defaults to the file stem.
FoodLog read_food_log(const std::filesystem::path& path, const LogFormat& format);

// Lenient date/time parsing; unrecognized input yields std::nullopt.
std::optional<std::chrono::year_month_day> parse_date(std::string_view text);
std::optional<std::chrono::minutes> parse_time(std::string_view text);

// Lowercase, trim, collapse internal whitespace.
std::string normalize_name(std::string_view name);

struct NameCount {
  std::string name;
  std::size_t count = 0;
  std::size_t first_entry = 0;  // index into FoodLog::entries

  bool operator==(const NameCount&) const = default;
};

// Distinct normalized names, descending count, ties by first appearance.
std::vector<NameCount> unique_entry_names(const FoodLog& log);

struct FnddsFood {
  FoodCode food_code = 0;
  std::string description;
  CategoryId category_id = 0;
  std::string category_name;

  bool operator==(const FnddsFood&) const = default;
};

inline const std::vector<std::string> kDefaultExclusionTerms = {"baby", "formula"};

class FnddsDatabase {
 public:
  const std::vector<FnddsFood>& foods() const { return foods_; }
  const std::map<CategoryId, std::string>& categories() const { return categories_; }
  const TokenSet& vocabulary() const { return vocabulary_; }
  const WordFreq& word_freq() const { return word_freq_; }

  // Flat tokenize() output of foods()[i].description.
  const std::vector<Token>& food_tokens(std::size_t i) const { return food_tokens_[i]; }
  // Categories having at least one food whose description contains `token`.
  const std::set<CategoryId>* categories_with_token(const Token& token) const;

  const std::string& category_name(CategoryId id) const;
  std::size_t excluded_count() const { return excluded_; }
  // Categories present in the input before exclusion.
  std::size_t source_category_count() const { return source_categories_; }

  bool empty() const { return foods_.empty(); }

  bool operator==(const FnddsDatabase& o) const {
    return foods_ == o.foods_ && categories_ == o.categories_ && word_freq_ == o.word_freq_ &&
           excluded_ == o.excluded_;
  }

  // Builds from already-parsed foods (order preserved); applies exclusion.
  static FnddsDatabase from_foods(std::vector<FnddsFood> foods,
                                  const std::vector<std::string>& exclusion_terms,
                                  std::size_t source_categories = 0);

 private:
  std::vector<FnddsFood> foods_;
  std::map<CategoryId, std::string> categories_;
  TokenSet vocabulary_;
  WordFreq word_freq_;
  std::vector<std::vector<Token>> food_tokens_;
  std::map<Token, std::set<CategoryId>> token_categories_;
  std::size_t excluded_ = 0;
  std::size_t source_categories_ = 0;
};

// CSV or TSV (detected from the header) with columns food_code,
// main_food_description, wweia_category_number, wweia_category_description.
// Header matching ignores case, spaces and punctuation, so the USDA
// spelling "Food code" is accepted.
FnddsDatabase load_fndds(std::istream& in,
                         const std::vector<std::string>& exclusion_terms = kDefaultExclusionTerms);
FnddsDatabase load_fndds_file(const std::filesystem::path& path,
                              const std::vector<std::string>& exclusion_terms = kDefaultExclusionTerms);

}  // namespace foodpref
