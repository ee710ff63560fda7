#include "foodpref/prefs.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "foodpref/error.hpp"

namespace foodpref {
namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> string_list(const nlohmann::json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  for (const auto& v : j.at(key)) out.push_back(lower(v.get<std::string>()));
  return out;
}

bool contains_any(const std::string& name, const std::vector<std::string>& needles) {
  return std::any_of(needles.begin(), needles.end(),
                     [&](const std::string& n) { return name.find(n) != std::string::npos; });
}

}  // namespace

std::string_view group_name(FoodGroup g) {
  switch (g) {
    case FoodGroup::kGrains: return "grains";
    case FoodGroup::kVegetables: return "vegetables";
    case FoodGroup::kProteins: return "proteins";
    case FoodGroup::kFruits: return "fruits";
    case FoodGroup::kDairy: return "dairy";
  }
  return "";
}

FoodGroup group_from_name(std::string_view name) {
  for (FoodGroup g : kFoodGroups) {
    if (group_name(g) == name) return g;
  }
  throw Error(Errc::kUnknownGroup, "unknown food group '" + std::string(name) + "'");
}

void GroupMap::assign(FoodGroup group, CategoryId category) {
  auto [it, inserted] = owner_.try_emplace(category, group);
  if (!inserted && it->second != group) {
    throw Error(Errc::kInvalidArgument, "category " + std::to_string(category) + " is in both " +
                                            std::string(group_name(it->second)) + " and " +
                                            std::string(group_name(group)));
  }
  groups_[static_cast<std::size_t>(group)].insert(category);
}

std::optional<FoodGroup> GroupMap::group_of(CategoryId category) const {
  auto it = owner_.find(category);
  if (it == owner_.end()) return std::nullopt;
  return it->second;
}

GroupMap GroupMap::from_json(const nlohmann::json& j, const std::map<CategoryId, std::string>& categories) {
  GroupMap map;
  try {
    const auto& groups = j.at("groups");
    for (const auto& [name, spec] : groups.items()) {
      const FoodGroup g = group_from_name(name);
      if (spec.contains("ids")) {
        for (const auto& id : spec.at("ids")) map.assign(g, id.get<CategoryId>());
      }
    }
    constexpr FoodGroup kRuleOrder[] = {FoodGroup::kDairy, FoodGroup::kFruits, FoodGroup::kVegetables,
                                        FoodGroup::kProteins, FoodGroup::kGrains};
    for (const auto& [id, raw_name] : categories) {
      if (map.group_of(id)) continue;
      const std::string name = lower(raw_name);
      for (FoodGroup g : kRuleOrder) {
        const std::string key(group_name(g));
        if (!groups.contains(key)) continue;
        const auto& spec = groups.at(key);
        if (contains_any(name, string_list(spec, "contains")) && !contains_any(name, string_list(spec, "excludes"))) {
          map.assign(g, id);
          break;
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kInvalidArgument, std::string("group map: ") + e.what());
  }
  return map;
}

GroupMap GroupMap::from_file(const std::filesystem::path& path, const std::map<CategoryId, std::string>& categories) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open group map " + path.string());
  try {
    return from_json(nlohmann::json::parse(in), categories);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kInvalidArgument, "group map " + path.string() + ": " + e.what());
  }
}

CategoryCounts category_frequencies(std::span<const RankedPrediction> predictions) {
  CategoryCounts counts;
  for (const auto& p : predictions) {
    if (auto top = p.top()) ++counts[*top];
  }
  return counts;
}

std::vector<CategoryId> top_k(const CategoryCounts& counts, std::size_t k) {
  std::vector<std::pair<CategoryId, std::size_t>> ranked(counts.begin(), counts.end());
  // counts is ordered by id, so a stable sort on count keeps ids ascending within ties
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > k) ranked.resize(k);
  std::vector<CategoryId> out;
  out.reserve(ranked.size());
  for (const auto& [id, _] : ranked) out.push_back(id);
  return out;
}

std::optional<CategoryId> group_favorite(const CategoryCounts& counts, const GroupMap& groups, FoodGroup group) {
  std::optional<CategoryId> best;
  std::size_t best_count = 0;
  for (CategoryId id : groups.members(group)) {  // ascending ids
    auto it = counts.find(id);
    if (it == counts.end() || it->second == 0) continue;
    if (!best || it->second > best_count) {
      best = id;
      best_count = it->second;
    }
  }
  return best;
}

std::optional<CategoryId> group_favorite(const CategoryCounts& counts, const GroupMap& groups,
                                         std::string_view group) {
  return group_favorite(counts, groups, group_from_name(group));
}

PreferenceProfile build_profile(const CategoryCounts& counts, const GroupMap& groups, std::size_t k) {
  PreferenceProfile p;
  p.counts = counts;
  p.top = top_k(counts, k);
  for (FoodGroup g : kFoodGroups) p.favorites[g] = group_favorite(counts, groups, g);
  return p;
}

}  // namespace foodpref
