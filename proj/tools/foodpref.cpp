// foodpref: label food logs with FNDDS categories and summarize preferences.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "foodpref/csv.hpp"
#include "foodpref/embed.hpp"
#include "foodpref/error.hpp"
#include "foodpref/finetune.hpp"
#include "foodpref/ingest.hpp"
#include "foodpref/label.hpp"
#include "foodpref/metrics.hpp"
#include "foodpref/prefs.hpp"
#include "foodpref/report.hpp"
#include "foodpref/textprep.hpp"

namespace fp = foodpref;

namespace {

struct RunConfig {
  std::string fndds = std::string(FOODPREF_DATA_DIR) + "/fndds_survey_foods.tsv";
  std::string embeddings;
  std::vector<std::string> logs;
  std::vector<std::string> annotations;
  std::string generic_words = std::string(FOODPREF_DATA_DIR) + "/generic_words.txt";
  std::string group_map = std::string(FOODPREF_DATA_DIR) + "/group_map.json";
  std::string synonym_stopwords = std::string(FOODPREF_DATA_DIR) + "/synonym_stopwords.txt";
  std::string exclusion_terms = std::string(FOODPREF_DATA_DIR) + "/exclusion_terms.txt";
  std::string log_format;
  std::string method = "4";
  std::size_t top_k = 10;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::size_t threads = 1;
  bool full_ranking = false;

  int epochs = 5;
  double learning_rate = 0.025;
  int negative = 5;
  int window = 0;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<fp::Method> parse_methods(const std::string& text, bool allow_all) {
  if (text == "all") {
    if (!allow_all) throw UsageError("--method all is only valid for evaluate");
    return {std::begin(fp::kAllMethods), std::end(fp::kAllMethods)};
  }
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used == text.size() && v >= 1 && v <= 6) return {fp::method_from_int(v)};
  } catch (const std::exception&) {
  }
  throw UsageError("--method must be 1..6" + std::string(allow_all ? " or all" : "") + ", got '" + text + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

// Inputs shared by the pipeline commands, loaded before anything runs.
struct Inputs {
  fp::FnddsDatabase db;
  std::optional<fp::EmbeddingStore> store;
  std::vector<fp::FoodLog> logs;
  fp::GenericWordList generic;
};

Inputs load_inputs(const RunConfig& cfg, bool need_store, bool need_logs) {
  Inputs in;
  std::vector<std::string> exclusion(fp::kDefaultExclusionTerms);
  if (!cfg.exclusion_terms.empty()) {
    auto words = fp::read_word_list_file(cfg.exclusion_terms);
    exclusion.assign(words.begin(), words.end());
  }
  in.db = fp::load_fndds_file(cfg.fndds, exclusion);
  in.generic = fp::derive_generic_words(in.db.word_freq(), fp::read_word_list_file(cfg.generic_words));
  if (need_store) {
    require(!cfg.embeddings.empty(), "--embeddings is required");
    in.store = fp::load_vectors_file(cfg.embeddings);
  }
  if (need_logs) require(!cfg.logs.empty(), "--logs is required");
  const fp::LogFormat format = cfg.log_format.empty() ? fp::LogFormat{} : fp::LogFormat::from_file(cfg.log_format);
  for (const auto& path : cfg.logs) {
    in.logs.push_back(fp::read_food_log(path, format));
    if (in.logs.back().skipped_rows) {
      std::cerr << "warning: " << path << ": skipped " << in.logs.back().skipped_rows
                << " rows with an empty food name\n";
    }
  }
  return in;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw fp::Error(fp::Errc::kIo, "cannot write " + cfg.out);
  out << text;
  if (!out) throw fp::Error(fp::Errc::kIo, "write failed for " + cfg.out);
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void cmd_label(const RunConfig& cfg) {
  const fp::Method method = parse_methods(cfg.method, false).front();
  Inputs in = load_inputs(cfg, true, true);
  const auto index = fp::build_index(in.db, *in.store);
  std::ostringstream text;
  nlohmann::ordered_json logs = nlohmann::ordered_json::array();
  if (cfg.format == "csv") fp::report::write_labels_header(text, cfg.full_ranking);
  for (const auto& log : in.logs) {
    auto preds = fp::label_log(log, method, in.db, *in.store, index, in.generic, {cfg.threads});
    if (cfg.format == "csv") {
      fp::report::write_labels_csv(text, log, preds, in.db, cfg.full_ranking);
    } else {
      logs.push_back(fp::report::labels_json(log, preds, in.db, cfg.full_ranking));
    }
  }
  if (cfg.format == "csv") {
    emit(cfg, text.str());
  } else {
    emit(cfg, dump({{"method", fp::to_int(method)}, {"logs", std::move(logs)}}));
  }
}

void cmd_prefs(const RunConfig& cfg) {
  const fp::Method method = parse_methods(cfg.method, false).front();
  Inputs in = load_inputs(cfg, true, true);
  const auto groups = fp::GroupMap::from_file(cfg.group_map, in.db.categories());
  const auto index = fp::build_index(in.db, *in.store);
  nlohmann::ordered_json profiles = nlohmann::ordered_json::array();
  std::ostringstream text;
  if (cfg.format == "csv") text << "log_id,rank,category_id,category_name,count\n";
  for (const auto& log : in.logs) {
    auto preds = fp::label_log(log, method, in.db, *in.store, index, in.generic, {cfg.threads});
    auto profile = fp::build_profile(fp::category_frequencies(preds), groups, cfg.top_k);
    if (cfg.format == "csv") {
      for (std::size_t r = 0; r < profile.top.size(); ++r) {
        const auto id = profile.top[r];
        text << fp::csv::escape(log.log_id) << ',' << r + 1 << ',' << id << ','
             << fp::csv::escape(in.db.category_name(id)) << ',' << profile.counts.at(id) << '\n';
      }
    } else {
      profiles.push_back(fp::report::profile_json(log.log_id, profile, in.db));
    }
  }
  if (cfg.format == "csv") {
    emit(cfg, text.str());
  } else {
    emit(cfg, dump({{"method", fp::to_int(method)}, {"top_k", cfg.top_k}, {"profiles", std::move(profiles)}}));
  }
}

void cmd_evaluate(const RunConfig& cfg) {
  const auto methods = parse_methods(cfg.method, true);
  require(!cfg.annotations.empty(), "--annotations is required for evaluate");
  require(cfg.annotations.size() == 1 || cfg.annotations.size() == cfg.logs.size(),
          "--annotations takes one file, or one per --logs file");
  Inputs in = load_inputs(cfg, true, true);
  std::vector<fp::GoldAnnotation> gold;
  for (const auto& path : cfg.annotations) gold.push_back(fp::load_gold_file(path));
  const auto groups = fp::GroupMap::from_file(cfg.group_map, in.db.categories());
  const auto synonyms = fp::build_synonym_groups(in.db.categories(), fp::read_word_list_file(cfg.synonym_stopwords));
  const auto index = fp::build_index(in.db, *in.store);

  fp::EvaluationContext ctx{&in.db, &*in.store, &index, &in.generic, &synonyms, &groups, cfg.top_k, cfg.threads};
  std::vector<fp::EvaluationReport> reports;
  for (fp::Method m : methods) reports.push_back(fp::evaluate(in.logs, gold, m, ctx));

  if (cfg.format == "csv") {
    std::ostringstream text;
    fp::report::write_evaluation_csv(text, reports);
    emit(cfg, text.str());
  } else {
    emit(cfg, dump(fp::report::evaluation_json(reports)));
  }
}

void cmd_finetune(const RunConfig& cfg) {
  fp::FinetuneConfig ft;
  ft.epochs = cfg.epochs;
  ft.learning_rate = cfg.learning_rate;
  ft.negative_samples = cfg.negative;
  ft.window = cfg.window;
  ft.seed = cfg.seed;
  try {
    ft.validate();
  } catch (const fp::Error& e) {
    throw UsageError(e.what());
  }
  Inputs in = load_inputs(cfg, true, false);
  fp::FinetuneStats stats;
  auto tuned = fp::finetune(*in.store, fp::build_sentences(in.db), ft, &stats);
  for (std::size_t e = 0; e < stats.epoch_loss.size(); ++e) {
    std::cerr << "epoch " << e + 1 << " mean loss " << fp::report::fixed6(stats.epoch_loss[e]) << '\n';
  }
  std::ostringstream text;
  tuned.write(text);
  emit(cfg, text.str());
}

void cmd_summary(const RunConfig& cfg) {
  Inputs in = load_inputs(cfg, false, false);
  std::map<fp::CategoryId, std::size_t> per_category;
  for (const auto& f : in.db.foods()) ++per_category[f.category_id];
  const double n = static_cast<double>(per_category.size());
  double mean = 0.0, sd = 0.0;
  std::size_t small = 0;
  for (const auto& [_, c] : per_category) {
    mean += static_cast<double>(c);
    if (c < 10) ++small;
  }
  if (n > 0) mean /= n;
  for (const auto& [_, c] : per_category) sd += (static_cast<double>(c) - mean) * (static_cast<double>(c) - mean);
  sd = n > 1 ? std::sqrt(sd / (n - 1)) : 0.0;

  struct LogRow {
    std::string id;
    std::size_t entries, days, unique, skipped;
  };
  std::vector<LogRow> rows;
  for (const auto& log : in.logs) {
    std::set<std::chrono::sys_days> days;
    for (const auto& e : log.entries) {
      if (e.date) days.insert(std::chrono::sys_days(*e.date));
    }
    rows.push_back({log.log_id, log.entries.size(), days.size(), fp::unique_entry_names(log).size(), log.skipped_rows});
  }

  if (cfg.format == "csv") {
    std::ostringstream text;
    text << "foods,categories,excluded_foods,mean_foods_per_category,sd_foods_per_category,"
            "categories_under_10_foods\n"
         << in.db.foods().size() << ',' << per_category.size() << ',' << in.db.excluded_count() << ','
         << fp::report::fixed6(mean) << ',' << fp::report::fixed6(sd) << ',' << small << '\n';
    if (!rows.empty()) {
      text << "\nlog_id,entries,days,unique_names,skipped_rows\n";
      for (const auto& r : rows) {
        text << fp::csv::escape(r.id) << ',' << r.entries << ',' << r.days << ',' << r.unique << ',' << r.skipped
             << '\n';
      }
    }
    emit(cfg, text.str());
    return;
  }
  nlohmann::ordered_json j;
  j["fndds"] = {{"foods", in.db.foods().size()},
                {"categories", per_category.size()},
                {"excluded_foods", in.db.excluded_count()},
                {"mean_foods_per_category", mean},
                {"sd_foods_per_category", sd},
                {"categories_under_10_foods", small}};
  auto& logs = j["logs"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    logs.push_back({{"log_id", r.id}, {"entries", r.entries}, {"days", r.days}, {"unique_names", r.unique},
                    {"skipped_rows", r.skipped}});
  }
  emit(cfg, dump(j));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn food preferences from food-log exports"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;

  const char* env_config = std::getenv("FOODPREF_CONFIG");
  app.set_config("--config", env_config ? env_config : "", "TOML config file (env FOODPREF_CONFIG); flags win");

  app.add_option("--fndds", cfg.fndds, "FNDDS foods file (CSV or TSV)")->check(CLI::ExistingFile);
  app.add_option("--embeddings", cfg.embeddings, "Word vectors in text format")->check(CLI::ExistingFile);
  app.add_option("--logs", cfg.logs, "Food-log CSV files")->check(CLI::ExistingFile);
  app.add_option("--annotations", cfg.annotations, "Gold annotation CSV (one, or one per log)")
      ->check(CLI::ExistingFile);
  app.add_option("--generic-words", cfg.generic_words, "Generic-word curation list")->check(CLI::ExistingFile);
  app.add_option("--group-map", cfg.group_map, "Food-group map (JSON)")->check(CLI::ExistingFile);
  app.add_option("--synonym-stopwords", cfg.synonym_stopwords, "Stopwords for synonymous categories")
      ->check(CLI::ExistingFile);
  app.add_option("--exclusion-terms", cfg.exclusion_terms, "Category terms excluded from FNDDS")
      ->check(CLI::ExistingFile);
  app.add_option("--log-format", cfg.log_format, "Food-log column mapping (JSON)")->check(CLI::ExistingFile);
  app.add_option("--method", cfg.method, "Preprocessing method 1..6 (evaluate also accepts all)");
  app.add_option("--top-k", cfg.top_k, "Number of top categories")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--out", cfg.out, "Output file (default stdout)");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  app.add_flag("--full-ranking", cfg.full_ranking, "Include every ranked category in label output");

  auto* label = app.add_subcommand("label", "Label each food-log entry with an FNDDS category");
  auto* prefs = app.add_subcommand("prefs", "Most frequent categories and food-group favorites per log");
  auto* evaluate = app.add_subcommand("evaluate", "Labeling and preference metrics against annotations");
  auto* finetune = app.add_subcommand("finetune", "Fine-tune word vectors on FNDDS sentences");
  auto* summary = app.add_subcommand("summary", "Dataset statistics");
  finetune->add_option("--epochs", cfg.epochs, "Training epochs")->check(CLI::PositiveNumber);
  finetune->add_option("--learning-rate", cfg.learning_rate, "Initial learning rate")
      ->check(CLI::Range(1e-12, 1.0));
  finetune->add_option("--negative", cfg.negative, "Negative samples per pair")->check(CLI::PositiveNumber);
  finetune->add_option("--window", cfg.window, "Context window (0 = whole sentence)")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (label->parsed()) cmd_label(cfg);
    else if (prefs->parsed()) cmd_prefs(cfg);
    else if (evaluate->parsed()) cmd_evaluate(cfg);
    else if (finetune->parsed()) cmd_finetune(cfg);
    else if (summary->parsed()) cmd_summary(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return 2;
  } catch (const fp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
