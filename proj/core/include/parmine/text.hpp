#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace parmine {

using Tokens = std::vector<std::string>;

namespace utf8 {

// Malformed bytes decode to U+FFFD.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);
std::size_t length(std::string_view text);

}  // namespace utf8

bool is_letter(char32_t cp);
bool is_upper(char32_t cp);
bool is_digit(char32_t cp);
bool is_space(char32_t cp);

bool has_letter(std::string_view text);
bool has_digit(std::string_view text);
bool has_letter_or_digit(std::string_view text);

std::string to_lower(std::string_view text);

// Trims and collapses every run of Unicode whitespace into a single ASCII space.
std::string collapse_whitespace(std::string_view text);

std::string join(const Tokens& tokens, std::string_view separator = " ");

/// Tokens that end with a period but do not terminate a sentence ("Dr.",
/// "U.S.", "np."). Matching is exact, so the list stores the surface form.
class AbbreviationList {
 public:
  AbbreviationList() = default;
  explicit AbbreviationList(std::vector<std::string> entries);

  /// The list shipped with the library (English and Polish titles, Latin
  /// shorthands and common country acronyms).
  static const AbbreviationList& standard();
  static AbbreviationList load(const std::string& path);

  bool contains(std::string_view token) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

/// Strips markup from a raw article body: reference blocks, tables, figures,
/// templates, citation markers like "[12]" and any remaining angle-bracket
/// tags. Whitespace is normalized. The function is idempotent.
std::string clean_document(std::string_view raw);

struct Sentence {
  std::string text;
  Tokens tokens;
  std::size_t index = 0;
};

/// Rule-based segmentation: a run of . ! ? (plus closing quotes or brackets)
/// ends a sentence when followed by whitespace and an uppercase letter, a
/// digit, or an opening quote/bracket. A period closing an abbreviation,
/// an initial ("J.") or an acronym ("U.S.") does not end a sentence.
std::vector<Sentence> segment_sentences(
    std::string_view body,
    const AbbreviationList& abbreviations = AbbreviationList::standard());

/// Splits punctuation into separate tokens. Letters and digits form words;
/// hyphens and apostrophes inside words, and periods or commas inside numbers,
/// stay attached. Abbreviations and acronyms are kept whole.
Tokens tokenize(std::string_view text, bool lowercase,
                const AbbreviationList& abbreviations = AbbreviationList::standard());

}  // namespace parmine
