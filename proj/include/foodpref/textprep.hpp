#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace foodpref {

class FnddsDatabase;

using Token = std::string;
using TokenSet = std::unordered_set<std::string>;
using WordFreq = std::unordered_map<std::string, std::size_t>;

// A food name split into comma-separated phrases of normalized tokens.
struct TokenizedName {
  std::vector<std::vector<Token>> phrases;

  std::vector<Token> flat() const;
  bool operator==(const TokenizedName&) const = default;
};

// Splits on commas, then whitespace. Tokens are lowercased, surrounding
// punctuation is stripped, a trailing possessive 's is dropped, and a bare
// "&" is kept as its own token. Empty phrases are dropped; a name with no
// tokens at all yields a single empty phrase.
TokenizedName tokenize(std::string_view name);

std::vector<Token> tokenize_flat(std::string_view name);

std::size_t vocab_count(std::span<const Token> phrase, const TokenSet& vocabulary);

// Throws Error(kEmptyPhrase) for an empty phrase.
double vocab_fraction(std::span<const Token> phrase, const TokenSet& vocabulary);

// The six food-log name preprocessing strategies. Each builds on the
// previous one.
enum class Method : int {
  kBestPhrase = 1,        // keep the single phrase that looks like the food
  kPhraseAndDetails = 2,  // ... plus the detail phrases after it
  kFractionBrand = 3,     // brand test by vocabulary fraction instead of count
  kNoGeneric = 4,         // ... minus generic words
  kKeepBrandFood = 5,     // ... but keep vocabulary words of a brand phrase
  kRestrictCategories = 6 // Method 4 tokens, candidates limited by shared words
};

inline constexpr Method kAllMethods[] = {Method::kBestPhrase,    Method::kPhraseAndDetails,
                                         Method::kFractionBrand, Method::kNoGeneric,
                                         Method::kKeepBrandFood, Method::kRestrictCategories};

// Throws Error(kInvalidArgument) outside 1..6.
Method method_from_int(int value);
inline int to_int(Method m) { return static_cast<int>(m); }

struct CategoryRestriction {
  std::set<int> categories;
  // Set when no category shares a word with the tokens; labeling then
  // considers the whole database.
  bool fallback_to_all = false;

  bool operator==(const CategoryRestriction&) const = default;
};

struct PreprocessResult {
  std::vector<Token> tokens;
  std::optional<CategoryRestriction> restriction;  // Method 6 only

  bool operator==(const PreprocessResult&) const = default;
};

class GenericWordList {
 public:
  GenericWordList() = default;
  explicit GenericWordList(std::set<Token> words) : words_(std::move(words)) {}

  bool contains(const Token& t) const { return words_.count(t) != 0; }
  const std::set<Token>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<Token> words_;
};

// Tokens ranked by descending frequency, ties lexicographic.
std::vector<Token> top_words(const WordFreq& word_freq, std::size_t n);

// curation ∩ top-`top_n` words of word_freq.
GenericWordList derive_generic_words(const WordFreq& word_freq, const std::set<Token>& curation,
                                     std::size_t top_n = 250);

// One token per line; blank lines and "#" comments ignored. Tokens are
// lowercased and trimmed but otherwise kept verbatim ("&" stays "&").
std::set<Token> read_word_list(std::istream& in);
std::set<Token> read_word_list_file(const std::string& path);

bool phrase_one_is_brand(const TokenizedName& name, Method method, const TokenSet& vocabulary);

PreprocessResult preprocess(const TokenizedName& name, Method method, const FnddsDatabase& db,
                            const GenericWordList& generic);

}  // namespace foodpref
