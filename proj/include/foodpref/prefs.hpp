#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "foodpref/ingest.hpp"
#include "foodpref/label.hpp"

namespace foodpref {

enum class FoodGroup { kGrains, kVegetables, kProteins, kFruits, kDairy };

inline constexpr std::array<FoodGroup, 5> kFoodGroups = {FoodGroup::kGrains, FoodGroup::kVegetables,
                                                        FoodGroup::kProteins, FoodGroup::kFruits,
                                                        FoodGroup::kDairy};

std::string_view group_name(FoodGroup g);
// Throws Error(kUnknownGroup).
FoodGroup group_from_name(std::string_view name);

// Category -> food group assignment. A category belongs to at most one group.
class GroupMap {
 public:
  GroupMap() = default;

  // Throws Error(kInvalidArgument) if the category already has a group.
  void assign(FoodGroup group, CategoryId category);

  const std::set<CategoryId>& members(FoodGroup group) const { return groups_[static_cast<std::size_t>(group)]; }
  std::optional<FoodGroup> group_of(CategoryId category) const;

  // {"groups": {"dairy": {"ids": [..], "contains": [..], "excludes": [..]}, ...}}
  // Explicit ids are assigned first. Remaining categories go to the first
  // group, in the order dairy, fruits, vegetables, proteins, grains, whose
  // "contains" substrings match the lowercased category name and whose
  // "excludes" substrings do not.
  static GroupMap from_json(const nlohmann::json& j, const std::map<CategoryId, std::string>& categories);
  static GroupMap from_file(const std::filesystem::path& path, const std::map<CategoryId, std::string>& categories);

 private:
  std::array<std::set<CategoryId>, 5> groups_;
  std::map<CategoryId, FoodGroup> owner_;
};

using CategoryCounts = std::map<CategoryId, std::size_t>;

// Rank-1 category counts over every entry with a non-empty ranking.
CategoryCounts category_frequencies(std::span<const RankedPrediction> predictions);

// Highest counts first, ties by ascending category id.
std::vector<CategoryId> top_k(const CategoryCounts& counts, std::size_t k);

std::optional<CategoryId> group_favorite(const CategoryCounts& counts, const GroupMap& groups, FoodGroup group);
// Throws Error(kUnknownGroup) for a name outside the five groups.
std::optional<CategoryId> group_favorite(const CategoryCounts& counts, const GroupMap& groups,
                                         std::string_view group);

struct PreferenceProfile {
  CategoryCounts counts;
  std::vector<CategoryId> top;
  std::map<FoodGroup, std::optional<CategoryId>> favorites;

  bool operator==(const PreferenceProfile&) const = default;
};

PreferenceProfile build_profile(const CategoryCounts& counts, const GroupMap& groups, std::size_t k = 10);

}  // namespace foodpref
