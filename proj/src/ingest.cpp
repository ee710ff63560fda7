#include "foodpref/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "foodpref/csv.hpp"
#include "foodpref/error.hpp"

namespace foodpref {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// "WWEIA Category number" -> "wweiacategorynumber"
std::string header_key(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

bool blank_row(const csv::Row& row) { return row.size() == 1 && trim(row[0]).empty(); }

std::optional<std::size_t> find_column(const csv::Row& header, const std::string& name) {
  const std::string want = lower(trim(name));
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (lower(trim(header[i])) == want) return i;
  }
  return std::nullopt;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

// Splits "2021-03-01" style text into numeric fields.
std::vector<int> numeric_fields(std::string_view s, char sep) {
  std::vector<int> out;
  std::size_t start = 0;
  for (;;) {
    auto end = s.find(sep, start);
    auto part = s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    auto v = parse_int<int>(part);
    if (!v) return {};
    out.push_back(*v);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

LogFormat LogFormat::from_json(const nlohmann::json& j) {
  LogFormat f;
  if (!j.is_object()) throw Error(Errc::kInvalidArgument, "log format must be a JSON object");
  f.date_column = j.value("date_column", f.date_column);
  f.time_column = j.value("time_column", f.time_column);
  f.name_column = j.value("name_column", f.name_column);
  f.time_required = j.value("time_required", f.time_required);
  return f;
}

LogFormat LogFormat::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open log format " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kInvalidArgument, "log format " + path.string() + ": " + e.what());
  }
}

std::optional<std::chrono::year_month_day> parse_date(std::string_view text) {
  std::string s = trim(text);
  if (auto sp = s.find_first_of(" T"); sp != std::string::npos) s.resize(sp);
  int y = 0, m = 0, d = 0;
  if (auto f = numeric_fields(s, '-'); f.size() == 3) {
    y = f[0], m = f[1], d = f[2];
  } else if (auto g = numeric_fields(s, '/'); g.size() == 3) {
    if (g[0] > 31) {
      y = g[0], m = g[1], d = g[2];
    } else {
      m = g[0], d = g[1], y = g[2] < 100 ? 2000 + g[2] : g[2];
    }
  } else if (s.size() == 8 && parse_int<int>(s)) {
    int v = *parse_int<int>(s);
    y = v / 10000, m = v / 100 % 100, d = v % 100;
  } else {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

std::optional<std::chrono::minutes> parse_time(std::string_view text) {
  std::string s = lower(trim(text));
  if (s.empty()) return std::nullopt;
  int offset = 0;
  bool meridiem = false;
  if (s.size() >= 2 && (s.ends_with("am") || s.ends_with("pm"))) {
    meridiem = true;
    offset = s.ends_with("pm") ? 12 : 0;
    s = trim(s.substr(0, s.size() - 2));
  }
  auto f = numeric_fields(s, ':');
  if (f.size() < 2 || f.size() > 3) return std::nullopt;
  int h = f[0], mi = f[1];
  if (meridiem) {
    if (h < 1 || h > 12) return std::nullopt;
    h = h % 12 + offset;
  }
  if (h < 0 || h > 23 || mi < 0 || mi > 59) return std::nullopt;
  return std::chrono::minutes{h * 60 + mi};
}

FoodLog parse_food_log(std::istream& in, const LogFormat& format, std::string log_id) {
  FoodLog log;
  log.log_id = std::move(log_id);
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw Error(Errc::kMalformedCsv, "food log has no header row");

  auto date_col = find_column(*header, format.date_column);
  auto name_col = find_column(*header, format.name_column);
  auto time_col = format.time_column.empty() ? std::nullopt : find_column(*header, format.time_column);
  if (!date_col) throw Error(Errc::kMissingColumn, "date column '" + format.date_column + "' not in header");
  if (!name_col) throw Error(Errc::kMissingColumn, "food-name column '" + format.name_column + "' not in header");
  if (!time_col && format.time_required) {
    throw Error(Errc::kMissingColumn, "time column '" + format.time_column + "' not in header");
  }

  while (auto row = reader.next()) {
    if (blank_row(*row)) continue;
    if (row->size() != header->size()) {
      throw Error(Errc::kMalformedCsv, "line " + std::to_string(reader.line()) + ": expected " +
                                           std::to_string(header->size()) + " fields, got " +
                                           std::to_string(row->size()));
    }
    std::string name = trim((*row)[*name_col]);
    if (name.empty()) {
      ++log.skipped_rows;
      continue;
    }
    FoodLogEntry e;
    e.entry_id = log.entries.size();
    e.name_raw = std::move(name);
    e.date = parse_date((*row)[*date_col]);
    if (time_col) e.time = parse_time((*row)[*time_col]);
    log.entries.push_back(std::move(e));
  }
  return log;
}

FoodLog read_food_log(const std::filesystem::path& path, const LogFormat& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open food log " + path.string());
  return parse_food_log(in, format, path.stem().string());
}

std::string normalize_name(std::string_view name) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : name) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::vector<NameCount> unique_entry_names(const FoodLog& log) {
  std::vector<NameCount> out;
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < log.entries.size(); ++i) {
    std::string n = normalize_name(log.entries[i].name_raw);
    auto [it, inserted] = slot.try_emplace(n, out.size());
    if (inserted) {
      out.push_back({std::move(n), 0, i});
    }
    ++out[it->second].count;
  }
  std::stable_sort(out.begin(), out.end(), [](const NameCount& a, const NameCount& b) { return a.count > b.count; });
  return out;
}

const std::set<CategoryId>* FnddsDatabase::categories_with_token(const Token& token) const {
  auto it = token_categories_.find(token);
  return it == token_categories_.end() ? nullptr : &it->second;
}

const std::string& FnddsDatabase::category_name(CategoryId id) const {
  static const std::string unknown;
  auto it = categories_.find(id);
  return it == categories_.end() ? unknown : it->second;
}

FnddsDatabase FnddsDatabase::from_foods(std::vector<FnddsFood> foods,
                                        const std::vector<std::string>& exclusion_terms,
                                        std::size_t source_categories) {
  FnddsDatabase db;
  std::vector<std::string> terms;
  for (const auto& t : exclusion_terms) {
    if (auto lt = lower(trim(t)); !lt.empty()) terms.push_back(std::move(lt));
  }
  std::set<FoodCode> codes;
  std::set<CategoryId> all_categories;
  for (auto& f : foods) {
    if (!codes.insert(f.food_code).second) {
      throw Error(Errc::kDuplicateFoodCode, "food code " + std::to_string(f.food_code) + " appears twice");
    }
    all_categories.insert(f.category_id);
    const std::string cat = lower(f.category_name);
    bool excluded = std::any_of(terms.begin(), terms.end(),
                                [&](const std::string& t) { return cat.find(t) != std::string::npos; });
    if (excluded) {
      ++db.excluded_;
      continue;
    }
    auto [it, inserted] = db.categories_.try_emplace(f.category_id, f.category_name);
    if (!inserted && it->second != f.category_name) {
      throw Error(Errc::kMalformedRow, "category " + std::to_string(f.category_id) + " has two names: '" +
                                           it->second + "' and '" + f.category_name + "'");
    }
    auto tokens = tokenize_flat(f.description);
    for (const auto& t : tokens) {
      ++db.word_freq_[t];
      db.vocabulary_.insert(t);
      db.token_categories_[t].insert(f.category_id);
    }
    db.food_tokens_.push_back(std::move(tokens));
    db.foods_.push_back(std::move(f));
  }
  db.source_categories_ = source_categories ? source_categories : all_categories.size();
  return db;
}

FnddsDatabase load_fndds(std::istream& in, const std::vector<std::string>& exclusion_terms) {
  std::string first_line;
  if (!std::getline(in, first_line)) throw Error(Errc::kMalformedRow, "FNDDS input is empty");
  const char delim = csv::sniff_delimiter(first_line);
  std::istringstream header_stream(first_line);
  csv::Reader header_reader(header_stream, delim);
  auto header = header_reader.next();

  std::optional<std::size_t> code_col, desc_col, num_col, cat_col;
  for (std::size_t i = 0; i < header->size(); ++i) {
    const std::string k = header_key((*header)[i]);
    if (k == "foodcode") code_col = i;
    else if (k == "mainfooddescription") desc_col = i;
    else if (k == "wweiacategorynumber" || k == "wweiacategorycode") num_col = i;
    else if (k == "wweiacategorydescription") cat_col = i;
  }
  if (!code_col || !desc_col || !num_col || !cat_col) {
    throw Error(Errc::kMissingColumn,
                "FNDDS header needs food_code, main_food_description, wweia_category_number, "
                "wweia_category_description");
  }

  std::vector<FnddsFood> foods;
  csv::Reader reader(in, delim);
  while (auto row = reader.next()) {
    if (blank_row(*row)) continue;
    const std::string where = "FNDDS line " + std::to_string(reader.line() + 1);
    if (row->size() != header->size()) {
      throw Error(Errc::kMalformedRow, where + ": expected " + std::to_string(header->size()) + " fields, got " +
                                           std::to_string(row->size()));
    }
    auto code = parse_int<FoodCode>(trim((*row)[*code_col]));
    auto cat = parse_int<CategoryId>(trim((*row)[*num_col]));
    FnddsFood f;
    f.description = trim((*row)[*desc_col]);
    f.category_name = trim((*row)[*cat_col]);
    if (!code || !cat || f.description.empty()) throw Error(Errc::kMalformedRow, where + ": bad food code, category or description");
    f.food_code = *code;
    f.category_id = *cat;
    foods.push_back(std::move(f));
  }
  return FnddsDatabase::from_foods(std::move(foods), exclusion_terms);
}

FnddsDatabase load_fndds_file(const std::filesystem::path& path, const std::vector<std::string>& exclusion_terms) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open FNDDS file " + path.string());
  return load_fndds(in, exclusion_terms);
}

}  // namespace foodpref
