#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "foodpref/error.hpp"
#include "foodpref/prefs.hpp"
#include "support.hpp"

using namespace foodpref;

namespace {

RankedPrediction pred(std::optional<CategoryId> top, std::size_t id = 0) {
  RankedPrediction p;
  p.entry_id = id;
  if (top) p.ranking = {{*top, 1.0}, {*top + 1000, 0.5}};
  return p;
}

GroupMap dairy_map(std::set<CategoryId> dairy) {
  GroupMap g;
  for (auto c : dairy) g.assign(FoodGroup::kDairy, c);
  return g;
}

}  // namespace

TEST(CategoryFrequencies, CountsRankOneOnly) {
  std::vector<RankedPrediction> p{pred(1), pred(1), pred(2), pred(std::nullopt)};
  EXPECT_EQ(category_frequencies(p), (CategoryCounts{{1, 2}, {2, 1}}));
  std::vector<RankedPrediction> empty{pred(std::nullopt), pred(std::nullopt)};
  EXPECT_TRUE(category_frequencies(empty).empty());
}

TEST(CategoryFrequencies, ConservationOver150Entries) {
  std::vector<RankedPrediction> p;
  std::size_t blanks = 0;
  for (std::size_t i = 0; i < 150; ++i) {
    const bool blank = i % 11 == 0;
    blanks += blank;
    p.push_back(pred(blank ? std::nullopt : std::optional<CategoryId>(static_cast<CategoryId>(i % 7)), i));
  }
  std::size_t total = 0;
  for (const auto& [_, c] : category_frequencies(p)) total += c;
  EXPECT_EQ(total, 150 - blanks);
}

TEST(TopK, Examples) {
  EXPECT_EQ(top_k({{1, 5}, {2, 3}, {3, 1}}, 2), (std::vector<CategoryId>{1, 2}));
  EXPECT_EQ(top_k({{4, 2}, {9, 2}}, 1), (std::vector<CategoryId>{4}));
  EXPECT_TRUE(top_k({}, 3).empty());
  EXPECT_EQ(top_k({{1, 1}, {2, 1}, {3, 1}}, 10).size(), 3u);
}

TEST(TopK, PrefixProperty) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    CategoryCounts c;
    for (int n = rng() % 30; n > 0; --n) c[rng() % 50] = 1 + rng() % 6;
    const auto all = top_k(c, 100);
    for (std::size_t k = 1; k <= all.size(); ++k) {
      const auto t = top_k(c, k);
      ASSERT_EQ(t.size(), k);
      EXPECT_TRUE(std::equal(t.begin(), t.end(), all.begin()));
    }
    for (std::size_t i = 1; i < all.size(); ++i) {
      const auto a = c.at(all[i - 1]), b = c.at(all[i]);
      EXPECT_TRUE(a > b || (a == b && all[i - 1] < all[i]));
    }
  }
}

TEST(GroupFavorite, Examples) {
  const CategoryId yogurt = 1820, milk = 1002;
  auto g = dairy_map({yogurt, milk});
  EXPECT_EQ(group_favorite({{yogurt, 4}, {milk, 6}}, g, "dairy"), milk);
  EXPECT_EQ(group_favorite({{5, 4}}, g, FoodGroup::kDairy), std::nullopt);
  EXPECT_EQ(group_favorite({{yogurt, 1}}, dairy_map({yogurt}), "dairy"), yogurt);
  EXPECT_EQ(group_favorite({{yogurt, 3}, {milk, 3}}, g, "dairy"), milk);  // lower id wins ties
  try {
    group_favorite({}, g, "sweets");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kUnknownGroup);
  }
}

TEST(GroupFavorite, IgnoresCategoriesOutsideGroup) {
  auto g = dairy_map({1, 2});
  std::mt19937 rng(1);
  CategoryCounts c{{1, 3}, {2, 5}};
  const auto fav = group_favorite(c, g, FoodGroup::kDairy);
  for (int i = 0; i < 50; ++i) {
    c[10 + rng() % 20] = rng() % 100;
    EXPECT_EQ(group_favorite(c, g, FoodGroup::kDairy), fav);
  }
}

TEST(GroupMap, OneGroupPerCategory) {
  GroupMap g;
  g.assign(FoodGroup::kFruits, 1);
  EXPECT_THROW(g.assign(FoodGroup::kDairy, 1), Error);
  EXPECT_EQ(g.group_of(1), FoodGroup::kFruits);
  EXPECT_FALSE(g.group_of(2));
}

TEST(GroupMap, JsonRulesAndIds) {
  std::map<CategoryId, std::string> cats{{1, "Milk, whole"}, {2, "Yeast breads"}, {3, "Citrus fruits"},
                                         {4, "Fruit drinks"}, {5, "Candy"}};
  auto j = nlohmann::json::parse(R"({"groups": {
      "dairy": {"contains": ["milk"]},
      "grains": {"contains": ["bread"]},
      "fruits": {"contains": ["fruit"], "excludes": ["drink"]},
      "proteins": {"ids": [5]}}})");
  auto g = GroupMap::from_json(j, cats);
  EXPECT_EQ(g.group_of(1), FoodGroup::kDairy);
  EXPECT_EQ(g.group_of(2), FoodGroup::kGrains);
  EXPECT_EQ(g.group_of(3), FoodGroup::kFruits);
  EXPECT_FALSE(g.group_of(4));
  EXPECT_EQ(g.group_of(5), FoodGroup::kProteins);
  EXPECT_THROW(GroupMap::from_json(nlohmann::json::parse(R"({"groups": {"sweets": {}}})"), cats), Error);
}

TEST(GroupMap, ShippedMapCoversEveryGroup) {
  auto db = load_fndds_file(support::fndds_path());
  auto g = GroupMap::from_file(support::data_path("group_map.json"), db.categories());
  for (FoodGroup grp : kFoodGroups) EXPECT_FALSE(g.members(grp).empty()) << group_name(grp);
  std::set<CategoryId> seen;
  for (FoodGroup grp : kFoodGroups) {
    for (auto c : g.members(grp)) EXPECT_TRUE(seen.insert(c).second);
  }
}

TEST(BuildProfile, OrderIndependentAndConserving) {
  GroupMap g;
  g.assign(FoodGroup::kDairy, 1);
  g.assign(FoodGroup::kFruits, 2);
  std::vector<RankedPrediction> p;
  for (std::size_t i = 0; i < 40; ++i) p.push_back(pred(static_cast<CategoryId>(i % 5), i));
  p.push_back(pred(std::nullopt, 40));
  const auto base = build_profile(category_frequencies(p), g, 3);
  std::size_t total = 0;
  for (const auto& [_, c] : base.counts) total += c;
  EXPECT_EQ(total, 40u);
  EXPECT_EQ(base.top.size(), 3u);
  EXPECT_EQ(base.favorites.at(FoodGroup::kDairy), 1);
  EXPECT_EQ(base.favorites.at(FoodGroup::kGrains), std::nullopt);
  std::mt19937 rng(8);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(p.begin(), p.end(), rng);
    EXPECT_EQ(build_profile(category_frequencies(p), g, 3), base);
  }
}

TEST(BuildProfile, ThreeCategoriesTopTen) {
  std::vector<RankedPrediction> p{pred(1), pred(2), pred(3), pred(3)};
  EXPECT_EQ(build_profile(category_frequencies(p), GroupMap{}, 10).top, (std::vector<CategoryId>{3, 1, 2}));
}
