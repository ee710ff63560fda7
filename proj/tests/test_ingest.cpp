#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "foodpref/csv.hpp"
#include "foodpref/error.hpp"
#include "foodpref/ingest.hpp"
#include "support.hpp"

using namespace foodpref;

namespace {

FoodLog parse(const std::string& text, const LogFormat& format = {}) {
  std::istringstream in(text);
  return parse_food_log(in, format, "t");
}

Errc error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no foodpref::Error thrown";
  return Errc::kIo;
}

}  // namespace

TEST(Csv, QuotedFieldsAndEscapedQuotes) {
  std::istringstream in("a,b\n\"x, y\",\"say \"\"hi\"\"\"\n\"multi\nline\",z\n");
  csv::Reader r(in, ',');
  ASSERT_EQ(r.next()->size(), 2u);
  auto row = r.next();
  EXPECT_EQ((*row)[0], "x, y");
  EXPECT_EQ((*row)[1], "say \"hi\"");
  row = r.next();
  EXPECT_EQ((*row)[0], "multi\nline");
  EXPECT_FALSE(r.next());
}

TEST(Csv, UnbalancedQuoteIsMalformed) {
  std::istringstream in("a,b\n\"open,b\n");
  csv::Reader r(in, ',');
  r.next();
  EXPECT_EQ(error_of([&] { r.next(); }), Errc::kMalformedCsv);
}

TEST(Csv, EscapeRoundTrips) {
  for (std::string s : {"plain", "a,b", "say \"x\"", "line\nbreak", ""}) {
    std::istringstream in(csv::escape(s) + "\n");
    csv::Reader r(in, ',');
    auto row = r.next();
    ASSERT_TRUE(row);
    EXPECT_EQ((*row)[0], s);
  }
}

TEST(ParseFoodLog, QuotedBrandName) {
  auto log = parse("Day,Time,Food Name\n2021-03-01,08:15,\"Trader Joe's, Chicken Sausage, Sweet Italian Style\"\n");
  ASSERT_EQ(log.entries.size(), 1u);
  EXPECT_EQ(log.entries[0].name_raw, "Trader Joe's, Chicken Sausage, Sweet Italian Style");
  EXPECT_EQ(*log.entries[0].date, std::chrono::year_month_day(std::chrono::year(2021), std::chrono::month(3),
                                                              std::chrono::day(1)));
  EXPECT_EQ(log.entries[0].time->count(), 8 * 60 + 15);
}

TEST(ParseFoodLog, HeaderOnlyGivesEmptyLog) {
  auto log = parse("Day,Time,Food Name\n");
  EXPECT_TRUE(log.entries.empty());
  EXPECT_EQ(log.skipped_rows, 0u);
}

TEST(ParseFoodLog, EmptyNameRowsAreSkippedAndCounted) {
  auto log = parse("Day,Time,Food Name\n2021-03-01,8:00,Eggs\n2021-03-01,9:00,   \n2021-03-02,,Toast\n");
  ASSERT_EQ(log.entries.size(), 2u);
  EXPECT_EQ(log.skipped_rows, 1u);
  EXPECT_EQ(log.entries[0].entry_id, 0u);
  EXPECT_EQ(log.entries[1].entry_id, 1u);
  EXPECT_EQ(log.entries[1].name_raw, "Toast");
  EXPECT_FALSE(log.entries[1].time);
}

TEST(ParseFoodLog, MissingConfiguredColumn) {
  EXPECT_EQ(error_of([] { parse("Date,Food\n2021-01-01,x\n"); }), Errc::kMissingColumn);
}

TEST(ParseFoodLog, WrongColumnCountIsMalformed) {
  EXPECT_EQ(error_of([] { parse("Day,Time,Food Name\n2021-01-01,x\n"); }), Errc::kMalformedCsv);
}

TEST(ParseFoodLog, CustomColumnMapping) {
  auto fmt = LogFormat::from_json(nlohmann::json{{"date_column", "date"}, {"time_column", "when"},
                                                 {"name_column", "item"}});
  auto log = parse("item,date,when,kcal\nApple,03/01/2021,7:30 PM,95\n", fmt);
  ASSERT_EQ(log.entries.size(), 1u);
  EXPECT_EQ(log.entries[0].name_raw, "Apple");
  EXPECT_EQ(log.entries[0].time->count(), 19 * 60 + 30);
  EXPECT_TRUE(log.entries[0].date);
}

TEST(ParseDates, LenientFormatsNeverThrow) {
  EXPECT_TRUE(parse_date("2021-03-01"));
  EXPECT_TRUE(parse_date("03/01/2021"));
  EXPECT_FALSE(parse_date("yesterday"));
  EXPECT_FALSE(parse_date(""));
  EXPECT_FALSE(parse_time("25:99"));
  EXPECT_EQ(parse_time("12:05 AM")->count(), 5);
}

TEST(UniqueEntryNames, CaseFoldDedup) {
  auto log = parse("Day,Time,Food Name\n,,Eggs\n,,eggs\n,,Toast\n");
  auto names = unique_entry_names(log);
  ASSERT_EQ(names.size(), 2u);
  EXPECT_EQ(names[0].name, "eggs");
  EXPECT_EQ(names[0].count, 2u);
  EXPECT_EQ(names[1].name, "toast");
  EXPECT_EQ(names[1].count, 1u);
}

TEST(UniqueEntryNames, EmptyLog) { EXPECT_TRUE(unique_entry_names(FoodLog{}).empty()); }

TEST(UniqueEntryNames, CountsAreConserved) {
  FoodLog log;
  const char* names[] = {"a", "B", "c  d", "E", "a"};
  for (std::size_t i = 0; i < 34; ++i) log.entries.push_back({{}, {}, names[(i * 7) % 5], i});
  auto u = unique_entry_names(log);
  EXPECT_EQ(u.size(), 4u);  // "a" twice in the cycle
  std::size_t total = 0;
  for (const auto& n : u) total += n.count;
  EXPECT_EQ(total, 34u);
  for (std::size_t i = 1; i < u.size(); ++i) EXPECT_GE(u[i - 1].count, u[i].count);
}

TEST(UniqueEntryNames, TiesByFirstAppearance) {
  auto log = parse("Day,Time,Food Name\n,,b\n,,a\n,,a\n,,b\n,,c\n");
  auto u = unique_entry_names(log);
  EXPECT_EQ(u[0].name, "b");
  EXPECT_EQ(u[1].name, "a");
  EXPECT_EQ(u[2].name, "c");
}

TEST(LoadFndds, ExcludesBabyFoodCategories) {
  std::istringstream in(
      "food_code\tmain_food_description\twweia_category_number\twweia_category_description\n"
      "1\tCereal, rice\t9002\tBaby food: cereals\n"
      "2\tYogurt, Greek\t1820\tYogurt, Greek\n");
  auto db = load_fndds(in);
  ASSERT_EQ(db.foods().size(), 1u);
  EXPECT_EQ(db.excluded_count(), 1u);
  EXPECT_EQ(db.source_category_count(), 2u);
  EXPECT_FALSE(db.vocabulary().count("cereal"));
}

TEST(LoadFndds, WordFrequencies) {
  std::istringstream in(
      "Food code,Main food description,WWEIA Category number,WWEIA Category description\n"
      "1,\"Yogurt, Greek\",1820,Yogurt\n"
      "2,\"Yogurt, plain\",1820,Yogurt\n");
  auto db = load_fndds(in);
  EXPECT_EQ(db.word_freq().at("yogurt"), 2u);
  EXPECT_EQ(db.word_freq().size(), db.vocabulary().size());
  for (const auto& [w, c] : db.word_freq()) {
    EXPECT_GE(c, 1u);
    EXPECT_TRUE(db.vocabulary().count(w));
  }
}

TEST(LoadFndds, DuplicateFoodCode) {
  std::istringstream in("food_code,main_food_description,wweia_category_number,wweia_category_description\n"
                        "1,a,1,x\n1,b,1,x\n");
  EXPECT_EQ(error_of([&] { load_fndds(in); }), Errc::kDuplicateFoodCode);
}

TEST(LoadFndds, MalformedRow) {
  std::istringstream in("food_code,main_food_description,wweia_category_number,wweia_category_description\n"
                        "abc,a,1,x\n");
  EXPECT_EQ(error_of([&] { load_fndds(in); }), Errc::kMalformedRow);
}

TEST(LoadFndds, IdempotentAndVocabularyCoversRetainedFoodsOnly) {
  const auto a = load_fndds_file(support::fndds_path());
  const auto b = load_fndds_file(support::fndds_path());
  EXPECT_EQ(a, b);
  TokenSet seen;
  for (std::size_t i = 0; i < a.foods().size(); ++i) {
    seen.insert(a.food_tokens(i).begin(), a.food_tokens(i).end());
    for (const char* term : {"baby", "formula"}) {
      std::string lower = a.foods()[i].category_name;
      std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
      EXPECT_EQ(lower.find(term), std::string::npos);
    }
  }
  EXPECT_EQ(seen, a.vocabulary());
}

TEST(LoadFndds, CategoryNameConsistentPerId) {
  const auto db = load_fndds_file(support::fndds_path());
  for (const auto& f : db.foods()) EXPECT_EQ(f.category_name, db.category_name(f.category_id));
}
