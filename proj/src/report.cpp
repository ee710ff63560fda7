#include "foodpref/report.hpp"

#include <cstdio>

#include "foodpref/csv.hpp"

namespace foodpref::report {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_labels_header(std::ostream& out, bool full_ranking) {
  out << "log_id,entry_id,name_raw,top_category_id,top_category_name,similarity";
  if (full_ranking) out << ",ranking";
  out << '\n';
}

void write_labels_csv(std::ostream& out, const FoodLog& log, std::span<const RankedPrediction> predictions,
                      const FnddsDatabase& db, bool full_ranking) {
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& p = predictions[i];
    out << csv::escape(log.log_id) << ',' << p.entry_id << ',' << csv::escape(log.entries[i].name_raw) << ',';
    if (auto top = p.top()) {
      out << *top << ',' << csv::escape(db.category_name(*top)) << ',' << fixed6(p.ranking.front().similarity);
    } else {
      out << ",,";
    }
    if (full_ranking) {
      std::string r;
      for (const auto& rc : p.ranking) {
        if (!r.empty()) r.push_back(';');
        r += std::to_string(rc.category_id) + ':' + fixed6(rc.similarity);
      }
      out << ',' << r;
    }
    out << '\n';
  }
}

nlohmann::ordered_json labels_json(const FoodLog& log, std::span<const RankedPrediction> predictions,
                                   const FnddsDatabase& db, bool full_ranking) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& p = predictions[i];
    nlohmann::ordered_json e;
    e["entry_id"] = p.entry_id;
    e["name_raw"] = log.entries[i].name_raw;
    if (auto top = p.top()) {
      e["top_category_id"] = *top;
      e["top_category_name"] = db.category_name(*top);
      e["similarity"] = p.ranking.front().similarity;
    } else {
      e["top_category_id"] = nullptr;
      e["top_category_name"] = nullptr;
      e["similarity"] = nullptr;
    }
    if (full_ranking) {
      auto& r = e["ranking"] = nlohmann::ordered_json::array();
      for (const auto& rc : p.ranking) r.push_back({{"category_id", rc.category_id}, {"similarity", rc.similarity}});
    }
    entries.push_back(std::move(e));
  }
  return {{"log_id", log.log_id}, {"entries", std::move(entries)}};
}

nlohmann::ordered_json profile_json(const std::string& log_id, const PreferenceProfile& profile,
                                    const FnddsDatabase& db) {
  nlohmann::ordered_json j;
  j["log_id"] = log_id;
  auto& counts = j["counts"] = nlohmann::ordered_json::array();
  for (const auto& [id, n] : profile.counts) {
    counts.push_back({{"category_id", id}, {"category_name", db.category_name(id)}, {"count", n}});
  }
  auto& top = j["top_k"] = nlohmann::ordered_json::array();
  for (CategoryId id : profile.top) {
    top.push_back({{"category_id", id}, {"category_name", db.category_name(id)}, {"count", profile.counts.at(id)}});
  }
  auto& fav = j["group_favorites"] = nlohmann::ordered_json::object();
  for (FoodGroup g : kFoodGroups) {
    auto it = profile.favorites.find(g);
    if (it == profile.favorites.end() || !it->second) {
      fav[std::string(group_name(g))] = nullptr;
    } else {
      fav[std::string(group_name(g))] = {{"category_id", *it->second},
                                         {"category_name", db.category_name(*it->second)}};
    }
  }
  return j;
}

nlohmann::ordered_json metrics_json(const MetricValues& m) {
  nlohmann::ordered_json j;
  const auto values = m.as_array();
  for (std::size_t k = 0; k < values.size(); ++k) j[std::string(MetricValues::kNames[k])] = values[k];
  return j;
}

nlohmann::ordered_json evaluation_json(std::span<const EvaluationReport> reports) {
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json jm;
    jm["method"] = to_int(r.method);
    jm["averaged"] = metrics_json(r.averaged);
    auto& per = jm["per_log"] = nlohmann::ordered_json::array();
    for (const auto& le : r.per_log) {
      per.push_back({{"log_id", le.log_id},
                     {"entries", le.entries},
                     {"unique_names", le.unique_names},
                     {"metrics", metrics_json(le.values)}});
    }
    jm["skipped_logs"] = r.skipped_logs;
    methods.push_back(std::move(jm));
  }
  return {{"methods", std::move(methods)}};
}

void write_evaluation_csv(std::ostream& out, std::span<const EvaluationReport> reports) {
  out << "method";
  for (auto name : MetricValues::kNames) out << ',' << name;
  out << '\n';
  for (const auto& r : reports) {
    out << to_int(r.method);
    for (double v : r.averaged.as_array()) out << ',' << fixed6(v);
    out << '\n';
  }
}

}  // namespace foodpref::report
