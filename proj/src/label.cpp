#include "foodpref/label.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "foodpref/error.hpp"
#include "foodpref/simd.hpp"

namespace foodpref {

DbEmbeddingIndex::DbEmbeddingIndex(std::vector<Item> items, std::vector<Vector> vectors, std::size_t excluded)
    : excluded_(excluded) {
  if (items.size() != vectors.size()) {
    throw Error(Errc::kInvalidArgument, "index items and vectors differ in length");
  }
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return items[a].food_code < items[b].food_code; });
  dim_ = vectors.empty() ? 0 : vectors.front().size();
  items_.reserve(items.size());
  data_.reserve(items.size() * dim_);
  norms_.reserve(items.size());
  for (std::size_t i : order) {
    if (vectors[i].size() != dim_) throw Error(Errc::kDimensionMismatch, "index vectors differ in dimension");
    items_.push_back(items[i]);
    auto v = vectors[i].values();
    data_.insert(data_.end(), v.begin(), v.end());
    norms_.push_back(norm(v));
  }
}

DbEmbeddingIndex build_index(const FnddsDatabase& db, const EmbeddingStore& store) {
  std::vector<DbEmbeddingIndex::Item> items;
  std::vector<Vector> vectors;
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < db.foods().size(); ++i) {
    auto v = embed_tokens(db.food_tokens(i), store);
    if (!v || norm(v->values()) == 0.0) {
      ++excluded;
      continue;
    }
    items.push_back({db.foods()[i].food_code, db.foods()[i].category_id});
    vectors.push_back(std::move(*v));
  }
  if (items.empty()) throw Error(Errc::kEmptyIndex, "no database food has an embedding");
  return DbEmbeddingIndex(std::move(items), std::move(vectors), excluded);
}

std::optional<CategoryId> RankedPrediction::top() const {
  if (ranking.empty()) return std::nullopt;
  return ranking.front().category_id;
}

std::optional<std::size_t> RankedPrediction::rank_of(CategoryId category) const {
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (ranking[i].category_id == category) return i + 1;
  }
  return std::nullopt;
}

RankedPrediction label_entry(const Vector& entry, const DbEmbeddingIndex& index,
                             const CategoryRestriction* restriction) {
  if (entry.size() != index.dimension()) {
    throw Error(Errc::kDimensionMismatch, "query dimension " + std::to_string(entry.size()) +
                                              " does not match index dimension " + std::to_string(index.dimension()));
  }
  const double qnorm = norm(entry.values());
  if (qnorm == 0.0) throw Error(Errc::kZeroNorm, "query vector has zero norm");
  const bool restricted = restriction && !restriction->fallback_to_all;

  // Best food per category. Items are scanned in food-code order, so a
  // strictly greater similarity is needed to displace the current best.
  struct Best {
    double sim;
    FoodCode code;
  };
  std::unordered_map<CategoryId, Best> best;
  const auto& k = simd::active();
  const auto q = entry.values();
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto& item = index.items()[i];
    if (restricted && !restriction->categories.count(item.category_id)) continue;
    const double sim = k.dot_f64(q.data(), index.vector(i).data(), q.size()) / (qnorm * index.vector_norm(i));
    auto [it, inserted] = best.try_emplace(item.category_id, Best{sim, item.food_code});
    if (!inserted && sim > it->second.sim) it->second = {sim, item.food_code};
  }
  if (best.empty()) throw Error(Errc::kEmptyCandidateSet, "category restriction excludes every indexed food");

  std::vector<std::pair<CategoryId, Best>> ordered(best.begin(), best.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second.sim != b.second.sim) return a.second.sim > b.second.sim;
    return a.second.code < b.second.code;
  });
  RankedPrediction out;
  out.ranking.reserve(ordered.size());
  for (const auto& [cat, b] : ordered) out.ranking.push_back({cat, b.sim});
  return out;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<RankedPrediction> label_log(const FoodLog& log, Method method, const FnddsDatabase& db,
                                        const EmbeddingStore& store, const DbEmbeddingIndex& index,
                                        const GenericWordList& generic, const LabelOptions& options) {
  std::vector<RankedPrediction> out(log.entries.size());
  parallel_for(log.entries.size(), options.threads, [&](std::size_t i) {
    const auto& entry = log.entries[i];
    out[i].entry_id = entry.entry_id;
    auto prep = preprocess(tokenize(entry.name_raw), method, db, generic);
    auto vec = embed_tokens(prep.tokens, store);
    if (!vec || norm(vec->values()) == 0.0) return;
    const CategoryRestriction* r = prep.restriction ? &*prep.restriction : nullptr;
    try {
      out[i].ranking = label_entry(*vec, index, r).ranking;
    } catch (const Error& e) {
      // Restricted categories whose foods all lack embeddings.
      if (e.code() != Errc::kEmptyCandidateSet) throw;
      out[i].ranking = label_entry(*vec, index, nullptr).ranking;
    }
  });
  return out;
}

std::vector<RankedPrediction> label_log(const FoodLog& log, Method method, const FnddsDatabase& db,
                                        const EmbeddingStore& store, const GenericWordList& generic,
                                        const LabelOptions& options) {
  auto index = build_index(db, store);
  return label_log(log, method, db, store, index, generic, options);
}

}  // namespace foodpref
