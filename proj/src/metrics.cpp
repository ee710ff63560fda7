#include "foodpref/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "foodpref/csv.hpp"
#include "foodpref/error.hpp"
#include "foodpref/union_find.hpp"

namespace foodpref {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double mean_of(std::span<const UniquePrediction> predictions, auto&& term) {
  if (predictions.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : predictions) sum += term(p);
  return sum / static_cast<double>(predictions.size());
}

bool same(std::optional<CategoryId> a, std::optional<CategoryId> b) { return a == b; }

bool synonymous_opt(std::optional<CategoryId> a, std::optional<CategoryId> b, const SynonymGroups& groups) {
  if (!a || !b) return !a && !b;
  return groups.synonymous(*a, *b);
}

}  // namespace

SynonymGroups::SynonymGroups(std::map<CategoryId, std::size_t> group_of) : group_of_(std::move(group_of)) {
  std::set<std::size_t> distinct;
  for (const auto& [_, g] : group_of_) distinct.insert(g);
  group_count_ = distinct.size();
}

std::optional<std::size_t> SynonymGroups::group_of(CategoryId id) const {
  auto it = group_of_.find(id);
  if (it == group_of_.end()) return std::nullopt;
  return it->second;
}

bool SynonymGroups::synonymous(CategoryId a, CategoryId b) const {
  if (a == b) return true;
  auto ga = group_of(a);
  auto gb = group_of(b);
  return ga && gb && *ga == *gb;
}

std::vector<std::set<CategoryId>> SynonymGroups::groups() const {
  std::map<std::size_t, std::set<CategoryId>> by_group;
  for (const auto& [id, g] : group_of_) by_group[g].insert(id);
  std::vector<std::set<CategoryId>> out;
  for (auto& [_, members] : by_group) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
  return out;
}

SynonymGroups build_synonym_groups(const std::map<CategoryId, std::string>& categories,
                                   const std::set<Token>& stopwords) {
  std::vector<CategoryId> ids;
  for (const auto& [id, _] : categories) ids.push_back(id);
  UnionFind uf(ids.size());
  std::map<Token, std::size_t> first_owner;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (const auto& t : tokenize_flat(categories.at(ids[i]))) {
      if (stopwords.count(t)) continue;
      auto [it, inserted] = first_owner.try_emplace(t, i);
      if (!inserted) uf.unite(it->second, i);
    }
  }
  // Group number = position of the group's smallest id, so the numbering
  // does not depend on union order.
  std::map<std::size_t, std::size_t> root_to_group;
  std::map<CategoryId, std::size_t> group_of;
  for (std::size_t i = 0; i < ids.size(); ++i) {  // ids ascending
    auto [it, _] = root_to_group.try_emplace(uf.find(i), root_to_group.size());
    group_of[ids[i]] = it->second;
  }
  return SynonymGroups(std::move(group_of));
}

void GoldAnnotation::add(std::string_view name, CategoryId category) {
  labels_[normalize_name(name)] = category;
}

std::optional<CategoryId> GoldAnnotation::find(std::string_view normalized_name) const {
  auto it = labels_.find(std::string(normalized_name));
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

CategoryId GoldAnnotation::at(std::string_view normalized_name) const {
  if (auto c = find(normalized_name)) return *c;
  throw Error(Errc::kMissingAnnotation, "no gold category for '" + std::string(normalized_name) + "'");
}

GoldAnnotation load_gold(std::istream& in) {
  GoldAnnotation gold;
  csv::Reader reader(in);
  bool first = true;
  while (auto row = reader.next()) {
    if (row->size() == 1 && trim((*row)[0]).empty()) continue;
    if (row->size() < 2) {
      throw Error(Errc::kMalformedCsv, "annotation line " + std::to_string(reader.line()) + " needs name,category_id");
    }
    const std::string id_text = trim((*row)[1]);
    CategoryId id{};
    auto [p, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc{} || p != id_text.data() + id_text.size()) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw Error(Errc::kMalformedCsv, "annotation line " + std::to_string(reader.line()) + ": bad category id");
    }
    first = false;
    gold.add((*row)[0], id);
  }
  return gold;
}

GoldAnnotation load_gold_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open annotations " + path.string());
  return load_gold(in);
}

std::vector<UniquePrediction> unique_predictions(const FoodLog& log, std::span<const RankedPrediction> predictions) {
  if (predictions.size() != log.entries.size()) {
    throw Error(Errc::kInvalidArgument, "one prediction per log entry is required");
  }
  std::vector<UniquePrediction> out;
  for (const auto& n : unique_entry_names(log)) out.push_back({n.name, n.count, predictions[n.first_entry]});
  return out;
}

double labeling_accuracy(std::span<const UniquePrediction> predictions, const GoldAnnotation& gold) {
  return mean_of(predictions, [&](const UniquePrediction& p) {
    return p.prediction.top() == gold.at(p.name) ? 1.0 : 0.0;
  });
}

double synonymous_accuracy(std::span<const UniquePrediction> predictions, const GoldAnnotation& gold,
                           const SynonymGroups& groups) {
  return mean_of(predictions, [&](const UniquePrediction& p) {
    const CategoryId truth = gold.at(p.name);
    auto top = p.prediction.top();
    return top && groups.synonymous(*top, truth) ? 1.0 : 0.0;
  });
}

double mean_reciprocal_rank(std::span<const UniquePrediction> predictions, const GoldAnnotation& gold) {
  return mean_of(predictions, [&](const UniquePrediction& p) {
    auto rank = p.prediction.rank_of(gold.at(p.name));
    return rank ? 1.0 / static_cast<double>(*rank) : 0.0;
  });
}

double synonymous_mrr(std::span<const UniquePrediction> predictions, const GoldAnnotation& gold,
                      const SynonymGroups& groups) {
  return mean_of(predictions, [&](const UniquePrediction& p) {
    const CategoryId truth = gold.at(p.name);
    const auto& ranking = p.prediction.ranking;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      if (groups.synonymous(ranking[i].category_id, truth)) return 1.0 / static_cast<double>(i + 1);
    }
    return 0.0;
  });
}

CategoryCounts gold_frequencies(const FoodLog& log, const GoldAnnotation& gold) {
  CategoryCounts counts;
  for (const auto& e : log.entries) ++counts[gold.at(normalize_name(e.name_raw))];
  return counts;
}

StrictAndSynonymous preference_accuracy(const PreferenceProfile& predicted, const PreferenceProfile& gold,
                                        const SynonymGroups& groups) {
  StrictAndSynonymous r;
  for (FoodGroup g : kFoodGroups) {
    auto lookup = [g](const PreferenceProfile& p) {
      auto it = p.favorites.find(g);
      return it == p.favorites.end() ? std::nullopt : it->second;
    };
    auto a = lookup(predicted);
    auto b = lookup(gold);
    if (same(a, b)) r.strict += 1.0;
    if (synonymous_opt(a, b, groups)) r.synonymous += 1.0;
  }
  r.strict /= static_cast<double>(kFoodGroups.size());
  r.synonymous /= static_cast<double>(kFoodGroups.size());
  return r;
}

StrictAndSynonymous top10_identified(const PreferenceProfile& predicted, const PreferenceProfile& gold,
                                     const SynonymGroups& groups) {
  StrictAndSynonymous r;
  if (gold.top.empty()) return r;
  for (CategoryId g : gold.top) {
    bool exact = false, syn = false;
    for (CategoryId p : predicted.top) {
      exact = exact || p == g;
      syn = syn || groups.synonymous(p, g);
    }
    r.strict += exact ? 1.0 : 0.0;
    r.synonymous += syn ? 1.0 : 0.0;
  }
  r.strict /= static_cast<double>(gold.top.size());
  r.synonymous /= static_cast<double>(gold.top.size());
  return r;
}

std::array<double, 8> MetricValues::as_array() const {
  return {accuracy, syn_accuracy, mrr, smrr, pref_accuracy, syn_pref_accuracy, top10_pct, syn_top10_pct};
}

MetricValues evaluate_log(const FoodLog& log, const GoldAnnotation& gold,
                          std::span<const RankedPrediction> predictions, const SynonymGroups& synonyms,
                          const GroupMap& groups, std::size_t top_k) {
  const auto unique = unique_predictions(log, predictions);
  MetricValues m;
  m.accuracy = labeling_accuracy(unique, gold);
  m.syn_accuracy = synonymous_accuracy(unique, gold, synonyms);
  m.mrr = mean_reciprocal_rank(unique, gold);
  m.smrr = synonymous_mrr(unique, gold, synonyms);

  const auto predicted = build_profile(category_frequencies(predictions), groups, top_k);
  const auto truth = build_profile(gold_frequencies(log, gold), groups, top_k);
  const auto pref = preference_accuracy(predicted, truth, synonyms);
  const auto top = top10_identified(predicted, truth, synonyms);
  m.pref_accuracy = pref.strict;
  m.syn_pref_accuracy = pref.synonymous;
  m.top10_pct = top.strict;
  m.syn_top10_pct = top.synonymous;
  return m;
}

EvaluationReport evaluate(std::span<const FoodLog> logs, std::span<const GoldAnnotation> gold, Method method,
                          const EvaluationContext& ctx) {
  if (!ctx.db || !ctx.store || !ctx.index || !ctx.generic || !ctx.synonyms || !ctx.groups) {
    throw Error(Errc::kInvalidArgument, "evaluation context is incomplete");
  }
  if (gold.size() != 1 && gold.size() != logs.size()) {
    throw Error(Errc::kInvalidArgument, "need one annotation set, or one per log");
  }
  EvaluationReport report;
  report.method = method;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const FoodLog& log = logs[i];
    if (log.entries.empty()) {
      report.skipped_logs.push_back(log.log_id);
      continue;
    }
    const GoldAnnotation& g = gold.size() == 1 ? gold[0] : gold[i];
    const auto predictions =
        label_log(log, method, *ctx.db, *ctx.store, *ctx.index, *ctx.generic, LabelOptions{ctx.threads});
    LogEvaluation le;
    le.log_id = log.log_id;
    le.entries = log.entries.size();
    le.unique_names = unique_entry_names(log).size();
    le.values = evaluate_log(log, g, predictions, *ctx.synonyms, *ctx.groups, ctx.top_k);
    report.per_log.push_back(std::move(le));
  }
  if (!report.per_log.empty()) {
    std::array<double, 8> sum{};
    for (const auto& le : report.per_log) {
      auto a = le.values.as_array();
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += a[k];
    }
    const double n = static_cast<double>(report.per_log.size());
    auto& m = report.averaged;
    m.accuracy = sum[0] / n;
    m.syn_accuracy = sum[1] / n;
    m.mrr = sum[2] / n;
    m.smrr = sum[3] / n;
    m.pref_accuracy = sum[4] / n;
    m.syn_pref_accuracy = sum[5] / n;
    m.top10_pct = sum[6] / n;
    m.syn_top10_pct = sum[7] / n;
  }
  return report;
}

}  // namespace foodpref
