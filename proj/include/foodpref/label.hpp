#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "foodpref/embed.hpp"
#include "foodpref/ingest.hpp"
#include "foodpref/textprep.hpp"

namespace foodpref {

// Embeddings of every embeddable database food, ordered by food code.
class DbEmbeddingIndex {
 public:
  struct Item {
    FoodCode food_code;
    CategoryId category_id;
  };

  DbEmbeddingIndex() = default;
  // Rows of `vectors` belong to `items`; both are reordered by food code.
  DbEmbeddingIndex(std::vector<Item> items, std::vector<Vector> vectors, std::size_t excluded = 0);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t dimension() const { return dim_; }
  const std::vector<Item>& items() const { return items_; }
  std::span<const double> vector(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  double vector_norm(std::size_t i) const { return norms_[i]; }
  // Foods left out because none of their tokens has a vector.
  std::size_t excluded_count() const { return excluded_; }

 private:
  std::vector<Item> items_;
  std::vector<double> data_;
  std::vector<double> norms_;
  std::size_t dim_ = 0;
  std::size_t excluded_ = 0;
};

// Throws Error(kEmptyIndex) when no food is embeddable.
DbEmbeddingIndex build_index(const FnddsDatabase& db, const EmbeddingStore& store);

struct RankedCategory {
  CategoryId category_id;
  double similarity;

  bool operator==(const RankedCategory&) const = default;
};

struct RankedPrediction {
  std::size_t entry_id = 0;
  // Distinct categories, best food similarity first. Empty when the entry
  // could not be embedded.
  std::vector<RankedCategory> ranking;

  std::optional<CategoryId> top() const;
  // 1-based position of `category`, std::nullopt when absent.
  std::optional<std::size_t> rank_of(CategoryId category) const;

  bool operator==(const RankedPrediction&) const = default;
};

// Exhaustive cosine scan over the index (restricted to the given categories
// unless the restriction falls back to all). Foods are ordered by similarity
// descending then food code ascending; each category takes the position of
// its first food. Throws Error(kZeroNorm) for a zero query and
// Error(kEmptyCandidateSet) when the restriction excludes every food.
RankedPrediction label_entry(const Vector& entry, const DbEmbeddingIndex& index,
                             const CategoryRestriction* restriction = nullptr);

struct LabelOptions {
  std::size_t threads = 1;  // 0: hardware concurrency
};

// tokenize -> preprocess -> embed_tokens -> label_entry for every entry.
// The result is identical for any thread count.
std::vector<RankedPrediction> label_log(const FoodLog& log, Method method, const FnddsDatabase& db,
                                        const EmbeddingStore& store, const DbEmbeddingIndex& index,
                                        const GenericWordList& generic, const LabelOptions& options = {});

std::vector<RankedPrediction> label_log(const FoodLog& log, Method method, const FnddsDatabase& db,
                                        const EmbeddingStore& store, const GenericWordList& generic,
                                        const LabelOptions& options = {});

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace foodpref
