#include "foodpref/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "foodpref/error.hpp"
#include "foodpref/ingest.hpp"

namespace foodpref {
namespace {

bool is_ascii_punct(unsigned char c) { return c < 128 && std::ispunct(c); }
bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

void strip_punct(std::string& t) {
  std::size_t b = 0, e = t.size();
  while (b < e && is_ascii_punct(static_cast<unsigned char>(t[b]))) ++b;
  while (e > b && is_ascii_punct(static_cast<unsigned char>(t[e - 1]))) --e;
  t = t.substr(b, e - b);
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string normalize_token(std::string_view raw) {
  std::string t(raw);
  for (char& c : t) {
    if (static_cast<unsigned char>(c) < 128) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (t == "&") return t;
  strip_punct(t);
  if (ends_with(t, "'s")) {
    t.resize(t.size() - 2);
  } else if (ends_with(t, "\xE2\x80\x99s")) {  // right single quotation mark
    t.resize(t.size() - 4);
  }
  strip_punct(t);
  return t;
}

std::vector<Token> split_phrase(std::string_view phrase) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < phrase.size()) {
    while (i < phrase.size() && is_space(static_cast<unsigned char>(phrase[i]))) ++i;
    std::size_t j = i;
    while (j < phrase.size() && !is_space(static_cast<unsigned char>(phrase[j]))) ++j;
    if (j > i) {
      std::string t = normalize_token(phrase.substr(i, j - i));
      if (!t.empty()) out.push_back(std::move(t));
    }
    i = j;
  }
  return out;
}

void append_filtered(std::vector<Token>& out, const std::vector<Token>& phrase, const TokenSet& vocab) {
  for (const auto& t : phrase) {
    if (vocab.count(t)) out.push_back(t);
  }
}

double phrase_score(const std::vector<Token>& phrase, Method method, const TokenSet& vocab) {
  if (to_int(method) <= 2) return static_cast<double>(vocab_count(phrase, vocab));
  if (phrase.empty()) return 0.0;
  return vocab_fraction(phrase, vocab);
}

}  // namespace

std::vector<Token> TokenizedName::flat() const {
  std::vector<Token> out;
  for (const auto& p : phrases) out.insert(out.end(), p.begin(), p.end());
  return out;
}

TokenizedName tokenize(std::string_view name) {
  TokenizedName out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = name.find(',', start);
    auto phrase = split_phrase(name.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!phrase.empty()) out.phrases.push_back(std::move(phrase));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.phrases.empty()) out.phrases.emplace_back();
  return out;
}

std::vector<Token> tokenize_flat(std::string_view name) { return tokenize(name).flat(); }

std::size_t vocab_count(std::span<const Token> phrase, const TokenSet& vocabulary) {
  return static_cast<std::size_t>(
      std::count_if(phrase.begin(), phrase.end(), [&](const Token& t) { return vocabulary.count(t) != 0; }));
}

double vocab_fraction(std::span<const Token> phrase, const TokenSet& vocabulary) {
  if (phrase.empty()) throw Error(Errc::kEmptyPhrase, "vocabulary fraction of an empty phrase");
  return static_cast<double>(vocab_count(phrase, vocabulary)) / static_cast<double>(phrase.size());
}

Method method_from_int(int value) {
  if (value < 1 || value > 6) {
    throw Error(Errc::kInvalidArgument, "preprocessing method must be 1..6, got " + std::to_string(value));
  }
  return static_cast<Method>(value);
}

std::vector<Token> top_words(const WordFreq& word_freq, std::size_t n) {
  std::vector<std::pair<Token, std::size_t>> ranked(word_freq.begin(), word_freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > n) ranked.resize(n);
  std::vector<Token> out;
  out.reserve(ranked.size());
  for (auto& [t, _] : ranked) out.push_back(std::move(t));
  return out;
}

GenericWordList derive_generic_words(const WordFreq& word_freq, const std::set<Token>& curation,
                                     std::size_t top_n) {
  std::set<Token> words;
  for (auto& t : top_words(word_freq, top_n)) {
    if (curation.count(t)) words.insert(std::move(t));
  }
  return GenericWordList(std::move(words));
}

std::set<Token> read_word_list(std::istream& in) {
  std::set<Token> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::size_t b = 0, e = line.size();
    while (b < e && is_space(static_cast<unsigned char>(line[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(line[e - 1]))) --e;
    if (b == e) continue;
    std::string t = line.substr(b, e - b);
    for (char& c : t) {
      if (static_cast<unsigned char>(c) < 128) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    out.insert(std::move(t));
  }
  return out;
}

std::set<Token> read_word_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open word list " + path);
  return read_word_list(in);
}

bool phrase_one_is_brand(const TokenizedName& name, Method method, const TokenSet& vocabulary) {
  if (name.phrases.size() < 2) return false;
  // Ties keep the first phrase.
  return phrase_score(name.phrases[1], method, vocabulary) > phrase_score(name.phrases[0], method, vocabulary);
}

PreprocessResult preprocess(const TokenizedName& name, Method method, const FnddsDatabase& db,
                            const GenericWordList& generic) {
  const TokenSet& vocab = db.vocabulary();
  PreprocessResult result;
  if (name.phrases.empty()) {
    if (method == Method::kRestrictCategories) result.restriction = CategoryRestriction{{}, true};
    return result;
  }
  const bool brand = phrase_one_is_brand(name, method, vocab);
  const std::size_t first = brand ? 1 : 0;

  if (method == Method::kBestPhrase) {
    append_filtered(result.tokens, name.phrases[first], vocab);
    return result;
  }

  if (brand && method == Method::kKeepBrandFood) append_filtered(result.tokens, name.phrases[0], vocab);
  for (std::size_t p = first; p < name.phrases.size(); ++p) append_filtered(result.tokens, name.phrases[p], vocab);

  if (to_int(method) >= 4) {
    std::erase_if(result.tokens, [&](const Token& t) { return generic.contains(t); });
  }

  if (method == Method::kRestrictCategories) {
    CategoryRestriction r;
    for (const auto& t : result.tokens) {
      if (const auto* cats = db.categories_with_token(t)) r.categories.insert(cats->begin(), cats->end());
    }
    r.fallback_to_all = r.categories.empty();
    result.restriction = std::move(r);
  }
  return result;
}

}  // namespace foodpref
