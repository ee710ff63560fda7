#pragma once

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "foodpref/ingest.hpp"
#include "foodpref/label.hpp"
#include "foodpref/metrics.hpp"
#include "foodpref/prefs.hpp"

// File formats written by the command-line tool.
namespace foodpref::report {

// Fixed six-decimal rendering used by every CSV writer.
std::string fixed6(double v);

// log_id,entry_id,name_raw,top_category_id,top_category_name,similarity[,ranking]
// The optional ranking column holds "id:similarity" pairs joined by ';'.
void write_labels_header(std::ostream& out, bool full_ranking);
void write_labels_csv(std::ostream& out, const FoodLog& log, std::span<const RankedPrediction> predictions,
                      const FnddsDatabase& db, bool full_ranking);
nlohmann::ordered_json labels_json(const FoodLog& log, std::span<const RankedPrediction> predictions,
                                   const FnddsDatabase& db, bool full_ranking);

nlohmann::ordered_json profile_json(const std::string& log_id, const PreferenceProfile& profile,
                                    const FnddsDatabase& db);

nlohmann::ordered_json metrics_json(const MetricValues& m);
nlohmann::ordered_json evaluation_json(std::span<const EvaluationReport> reports);
// One row per method: method followed by the eight averaged metrics.
void write_evaluation_csv(std::ostream& out, std::span<const EvaluationReport> reports);

}  // namespace foodpref::report
