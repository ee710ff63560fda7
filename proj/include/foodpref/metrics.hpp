#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "foodpref/embed.hpp"
#include "foodpref/ingest.hpp"
#include "foodpref/label.hpp"
#include "foodpref/prefs.hpp"
#include "foodpref/textprep.hpp"

namespace foodpref {

// Partition of categories; two categories are synonymous when a chain of
// shared (non-stopword) name tokens connects them.
class SynonymGroups {
 public:
  SynonymGroups() = default;
  explicit SynonymGroups(std::map<CategoryId, std::size_t> group_of);

  std::size_t group_count() const { return group_count_; }
  std::optional<std::size_t> group_of(CategoryId id) const;
  // Reflexive for every id; categories unknown to the partition are only
  // synonymous with themselves.
  bool synonymous(CategoryId a, CategoryId b) const;
  // Groups as sets, ordered by smallest member.
  std::vector<std::set<CategoryId>> groups() const;

 private:
  std::map<CategoryId, std::size_t> group_of_;
  std::size_t group_count_ = 0;
};

inline const std::set<Token> kDefaultSynonymStopwords = {"and",       "other", "not", "further", "specified",
                                                         "dishes",    "than",  "as",  "ingredient"};

SynonymGroups build_synonym_groups(const std::map<CategoryId, std::string>& categories,
                                   const std::set<Token>& stopwords = kDefaultSynonymStopwords);

// Normalized food-log name -> true category.
class GoldAnnotation {
 public:
  void add(std::string_view name, CategoryId category);
  std::optional<CategoryId> find(std::string_view normalized_name) const;
  // Throws Error(kMissingAnnotation).
  CategoryId at(std::string_view normalized_name) const;
  std::size_t size() const { return labels_.size(); }

 private:
  std::unordered_map<std::string, CategoryId> labels_;
};

// CSV (normalized_name, category_id); a header row is optional.
GoldAnnotation load_gold(std::istream& in);
GoldAnnotation load_gold_file(const std::filesystem::path& path);

// One prediction per unique normalized name, taken from its first entry.
struct UniquePrediction {
  std::string name;
  std::size_t count = 0;
  RankedPrediction prediction;
};

std::vector<UniquePrediction> unique_predictions(const FoodLog& log, std::span<const RankedPrediction> predictions);

// Each throws Error(kMissingAnnotation) for an unannotated name and returns
// 0 for an empty input. Empty rankings count as wrong, and a gold category
// missing from a ranking contributes a reciprocal rank of 0.
double labeling_accuracy(std::span<const UniquePrediction> predictions, const GoldAnnotation& gold);
double synonymous_accuracy(std::span<const UniquePrediction> predictions, const GoldAnnotation& gold,
                           const SynonymGroups& groups);
double mean_reciprocal_rank(std::span<const UniquePrediction> predictions, const GoldAnnotation& gold);
double synonymous_mrr(std::span<const UniquePrediction> predictions, const GoldAnnotation& gold,
                      const SynonymGroups& groups);

// Gold category counts over every entry of the log.
CategoryCounts gold_frequencies(const FoodLog& log, const GoldAnnotation& gold);

struct StrictAndSynonymous {
  double strict = 0.0;
  double synonymous = 0.0;
};

// Share of the five food groups whose favorite agrees. Both favorites
// missing counts as agreement; exactly one missing as disagreement.
StrictAndSynonymous preference_accuracy(const PreferenceProfile& predicted, const PreferenceProfile& gold,
                                        const SynonymGroups& groups);

// Share of the gold top list found in the predicted top list (exactly, or
// through a synonymous category). The denominator is the gold list length.
StrictAndSynonymous top10_identified(const PreferenceProfile& predicted, const PreferenceProfile& gold,
                                     const SynonymGroups& groups);

struct MetricValues {
  double accuracy = 0.0;
  double syn_accuracy = 0.0;
  double mrr = 0.0;
  double smrr = 0.0;
  double pref_accuracy = 0.0;
  double syn_pref_accuracy = 0.0;
  double top10_pct = 0.0;
  double syn_top10_pct = 0.0;

  static constexpr std::array<std::string_view, 8> kNames = {
      "accuracy",         "synonymous_accuracy", "mrr",  "smrr", "preference_accuracy",
      "synonymous_preference_accuracy", "top10_identified", "synonymous_top10_identified"};
  std::array<double, 8> as_array() const;
  bool operator==(const MetricValues&) const = default;
};

struct LogEvaluation {
  std::string log_id;
  std::size_t entries = 0;
  std::size_t unique_names = 0;
  MetricValues values;
};

struct EvaluationReport {
  Method method = Method::kNoGeneric;
  std::vector<LogEvaluation> per_log;
  MetricValues averaged;           // arithmetic mean over per_log
  std::vector<std::string> skipped_logs;  // logs with no entries
};

struct EvaluationContext {
  const FnddsDatabase* db = nullptr;
  const EmbeddingStore* store = nullptr;
  const DbEmbeddingIndex* index = nullptr;
  const GenericWordList* generic = nullptr;
  const SynonymGroups* synonyms = nullptr;
  const GroupMap* groups = nullptr;
  std::size_t top_k = 10;
  std::size_t threads = 1;
};

// All eight metrics for one log given its predictions.
MetricValues evaluate_log(const FoodLog& log, const GoldAnnotation& gold,
                          std::span<const RankedPrediction> predictions, const SynonymGroups& synonyms,
                          const GroupMap& groups, std::size_t top_k = 10);

// `gold` holds one annotation shared by all logs or one per log.
EvaluationReport evaluate(std::span<const FoodLog> logs, std::span<const GoldAnnotation> gold, Method method,
                          const EvaluationContext& ctx);

}  // namespace foodpref
