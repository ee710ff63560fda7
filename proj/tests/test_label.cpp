#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "foodpref/error.hpp"
#include "foodpref/label.hpp"
#include "foodpref/simd.hpp"
#include "support.hpp"

using namespace foodpref;

namespace {

// Sort every item by (similarity desc, food code asc), keep the first
// occurrence of each category.
std::vector<RankedCategory> oracle(const Vector& q, const DbEmbeddingIndex& index, const std::set<int>* only) {
  struct Hit {
    double sim;
    FoodCode code;
    CategoryId cat;
  };
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (only && !only->count(index.items()[i].category_id)) continue;
    double dot = 0, nq = 0, nv = 0;
    const auto v = index.vector(i);
    for (std::size_t k = 0; k < q.size(); ++k) dot += q[k] * v[k], nq += q[k] * q[k], nv += v[k] * v[k];
    hits.push_back({dot / (std::sqrt(nq) * std::sqrt(nv)), index.items()[i].food_code, index.items()[i].category_id});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.sim != b.sim ? a.sim > b.sim : a.code < b.code;
  });
  std::vector<RankedCategory> out;
  std::set<CategoryId> seen;
  for (const auto& h : hits) {
    if (seen.insert(h.cat).second) out.push_back({h.cat, h.sim});
  }
  return out;
}

DbEmbeddingIndex random_index(std::size_t n, std::size_t dim, int categories, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<DbEmbeddingIndex::Item> items;
  std::vector<Vector> vecs;
  std::vector<FoodCode> codes(n);
  std::iota(codes.begin(), codes.end(), 10000);
  std::shuffle(codes.begin(), codes.end(), rng);
  for (std::size_t i = 0; i < n; ++i) {
    items.push_back({codes[i], static_cast<CategoryId>(rng() % categories)});
    Vector v(dim);
    for (std::size_t k = 0; k < dim; ++k) v[k] = nd(rng);
    vecs.push_back(std::move(v));
  }
  return DbEmbeddingIndex(std::move(items), std::move(vecs));
}

void expect_same_ranking(const std::vector<RankedCategory>& got, const std::vector<RankedCategory>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].category_id, want[i].category_id) << "position " << i;
    EXPECT_NEAR(got[i].similarity, want[i].similarity, 1e-9);
  }
}

FnddsDatabase three_foods() {
  return support::make_db({{30, "apple raw", 1, "Apples"}, {10, "bread white", 2, "Breads"},
                           {20, "zzz qqq", 3, "Other"}});
}

}  // namespace

TEST(BuildIndex, CountsAndOrder) {
  auto db = three_foods();
  auto store = support::random_store({"apple", "raw", "bread", "white", "zzz", "qqq"}, 8, 1);
  auto index = build_index(db, store);
  EXPECT_EQ(index.size(), 3u);
  EXPECT_EQ(index.items()[0].food_code, 10);
  EXPECT_EQ(index.items()[2].food_code, 30);

  auto partial = support::random_store({"apple", "bread"}, 8, 1);
  auto idx2 = build_index(db, partial);
  EXPECT_EQ(idx2.size(), 2u);
  EXPECT_EQ(idx2.excluded_count(), 1u);
}

TEST(BuildIndex, EmptyIndex) {
  auto store = support::random_store({"nothing"}, 4, 1);
  try {
    build_index(three_foods(), store);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEmptyIndex);
  }
}

TEST(LabelEntry, SelfRetrieval) {
  auto index = random_index(200, 16, 40, 3);
  for (std::size_t i = 0; i < index.size(); i += 17) {
    Vector q(std::vector<double>(index.vector(i).begin(), index.vector(i).end()));
    auto p = label_entry(q, index);
    EXPECT_EQ(*p.top(), index.items()[i].category_id);
    EXPECT_NEAR(p.ranking[0].similarity, 1.0, 1e-12);
  }
}

TEST(LabelEntry, TieGoesToLowerFoodCode) {
  DbEmbeddingIndex index({{7, 100}, {3, 200}, {5, 300}}, {Vector{1, 0}, Vector{1, 0}, Vector{0, 1}});
  auto p = label_entry(Vector{2, 0}, index);
  ASSERT_EQ(p.ranking.size(), 3u);
  EXPECT_EQ(p.ranking[0].category_id, 200);
  EXPECT_EQ(p.ranking[1].category_id, 100);
  EXPECT_EQ(*p.rank_of(300), 3u);
  EXPECT_FALSE(p.rank_of(999));
}

TEST(LabelEntry, Errors) {
  DbEmbeddingIndex index({{1, 1}}, {Vector{1, 0}});
  EXPECT_THROW(label_entry(Vector{0, 0}, index), Error);
  CategoryRestriction none{{42}, false};
  try {
    label_entry(Vector{1, 0}, index, &none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEmptyCandidateSet);
  }
  CategoryRestriction all{{}, true};
  EXPECT_EQ(label_entry(Vector{1, 0}, index, &all).ranking.size(), 1u);
}

TEST(LabelEntry, MatchesOracleOnBothBackends) {
  const auto index = random_index(1000, 32, 120, 9);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> nd;
  const auto before = simd::active().backend;
  for (auto backend : {simd::Backend::kScalar, simd::Backend::kAvx2}) {
    if (!simd::set_backend(backend)) continue;
    for (int q = 0; q < 100; ++q) {
      Vector v(32);
      for (std::size_t k = 0; k < 32; ++k) v[k] = nd(rng);
      expect_same_ranking(label_entry(v, index).ranking, oracle(v, index, nullptr));
    }
  }
  simd::set_backend(before);
}

TEST(LabelEntry, RankingInvariants) {
  const auto index = random_index(500, 16, 30, 11);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  for (int q = 0; q < 200; ++q) {
    Vector v(16);
    for (std::size_t k = 0; k < 16; ++k) v[k] = nd(rng);
    const auto full = label_entry(v, index);
    std::set<CategoryId> seen;
    for (std::size_t i = 0; i < full.ranking.size(); ++i) {
      EXPECT_TRUE(seen.insert(full.ranking[i].category_id).second);
      if (i) EXPECT_LE(full.ranking[i].similarity, full.ranking[i - 1].similarity);
    }
    CategoryRestriction r;
    for (int c = 0; c < 30; ++c) {
      if (rng() % 3 == 0) r.categories.insert(c);
    }
    if (r.categories.empty()) continue;
    const auto restricted = label_entry(v, index, &r);
    EXPECT_LE(restricted.ranking[0].similarity, full.ranking[0].similarity);
    expect_same_ranking(restricted.ranking, oracle(v, index, &r.categories));
  }
}

TEST(LabelLog, EmptyLogAndUnembeddableEntries) {
  auto db = three_foods();
  auto store = support::random_store({"apple", "raw", "bread", "white"}, 8, 2);
  EXPECT_TRUE(label_log(FoodLog{}, Method::kNoGeneric, db, store, GenericWordList{}).empty());
  FoodLog log{"x", {{{}, {}, "Apple", 0}, {{}, {}, "Unknown thing", 1}}, 0};
  auto preds = label_log(log, Method::kPhraseAndDetails, db, store, GenericWordList{});
  ASSERT_EQ(preds.size(), 2u);
  EXPECT_EQ(*preds[0].top(), 1);
  EXPECT_TRUE(preds[1].ranking.empty());
  EXPECT_EQ(preds[1].entry_id, 1u);
}

TEST(LabelLog, ParallelMatchesSequential) {
  auto db = load_fndds_file(support::fndds_path());
  auto store = support::random_store(db, 24, 5);
  auto index = build_index(db, store);
  FoodLog log;
  log.log_id = "p";
  for (std::size_t i = 0; i < db.foods().size(); i += 13) {
    log.entries.push_back({{}, {}, "Acme, " + db.foods()[i].description, log.entries.size()});
  }
  const GenericWordList generic({"with", "fresh"});
  for (Method m : {Method::kPhraseAndDetails, Method::kRestrictCategories}) {
    auto seq = label_log(log, m, db, store, index, generic, {1});
    EXPECT_EQ(seq, label_log(log, m, db, store, index, generic, {4}));
    EXPECT_EQ(seq, label_log(log, m, db, store, index, generic, {0}));
  }
}

TEST(ParallelFor, VisitsEveryIndexOnceAndPropagatesErrors) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  EXPECT_THROW(parallel_for(100, 3, [](std::size_t i) {
                 if (i == 50) throw std::runtime_error("x");
               }),
               std::runtime_error);
}
