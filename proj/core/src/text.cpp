#include "parmine/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>

#include "parmine/error.hpp"

namespace parmine {

namespace utf8 {

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 cp;
    U8_NEXT(bytes, i, length, cp);
    out.push_back(cp < 0 ? U'�' : static_cast<char32_t>(cp));
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) append(out, cp);
  return out;
}

std::size_t length(std::string_view text) {
  std::size_t n = 0;
  for (char c : text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace utf8

bool is_letter(char32_t cp) { return u_isalpha(static_cast<UChar32>(cp)); }
bool is_upper(char32_t cp) { return u_isupper(static_cast<UChar32>(cp)); }
bool is_digit(char32_t cp) { return u_isdigit(static_cast<UChar32>(cp)); }
bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

namespace {

bool is_mark(char32_t cp) {
  auto type = u_charType(static_cast<UChar32>(cp));
  return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK ||
         type == U_ENCLOSING_MARK;
}

bool is_word_char(char32_t cp) { return is_letter(cp) || is_digit(cp) || is_mark(cp); }

template <typename Pred>
bool any_code_point(std::string_view text, Pred pred) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 cp;
    U8_NEXT(bytes, i, length, cp);
    if (cp >= 0 && pred(static_cast<char32_t>(cp))) return true;
  }
  return false;
}

}  // namespace

bool has_letter(std::string_view text) { return any_code_point(text, is_letter); }
bool has_digit(std::string_view text) { return any_code_point(text, is_digit); }
bool has_letter_or_digit(std::string_view text) {
  return any_code_point(text, [](char32_t cp) { return is_letter(cp) || is_digit(cp); });
}

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 cp;
    U8_NEXT(bytes, i, length, cp);
    utf8::append(out, cp < 0 ? U'�' : static_cast<char32_t>(u_tolower(cp)));
  }
  return out;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    int32_t start = i;
    UChar32 cp;
    U8_NEXT(bytes, i, length, cp);
    if (cp >= 0 && is_space(static_cast<char32_t>(cp))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.append(text.substr(start, i - start));
  }
  return out;
}

std::string join(const Tokens& tokens, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.append(separator);
    out.append(tokens[i]);
  }
  return out;
}

// ---- abbreviations ----

AbbreviationList::AbbreviationList(std::vector<std::string> entries) {
  for (auto& e : entries) {
    if (!e.empty()) entries_.insert(std::move(e));
  }
}

const AbbreviationList& AbbreviationList::standard() {
  static const AbbreviationList list({
      // English
      "Dr.", "Mr.", "Mrs.", "Ms.", "Prof.", "Sr.", "Jr.", "St.", "Mt.", "Gen.", "Col.",
      "Capt.", "Lt.", "Sgt.", "Rev.", "Hon.", "Inc.", "Ltd.", "Corp.", "Co.", "No.", "Nos.",
      "vs.", "approx.", "cf.", "e.g.", "i.e.", "viz.", "Fig.", "fig.", "Vol.", "vol.",
      "pp.", "ed.", "Jan.", "Feb.", "Mar.", "Apr.", "Jun.", "Jul.", "Aug.", "Sep.", "Sept.",
      "Oct.", "Nov.", "Dec.", "U.S.", "U.K.", "U.N.", "E.U.",
      // Polish
      "dr", "prof.", "Prof.", "np.", "tzn.", "tj.", "ul.", "al.", "pl.", "św.", "Św.",
      "gen.", "płk.", "ks.", "ok.", "m.in.", "tzw.", "wg.", "godz.", "r.", "w.", "ur.",
      "zm.", "im.", "nr", "Nr", "pkt.", "str.", "ds.", "jw.", "mgr", "inż.", "Inż.",
  });
  return list;
}

AbbreviationList AbbreviationList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open abbreviation list: " + path);
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    auto entry = collapse_whitespace(line);
    if (!entry.empty() && entry[0] != '#') entries.push_back(entry);
  }
  return AbbreviationList(std::move(entries));
}

bool AbbreviationList::contains(std::string_view token) const {
  return entries_.find(std::string(token)) != entries_.end();
}

namespace {

// "U.S.", "e.g.": two or more single letters each followed by a period.
bool is_acronym(std::u32string_view w) {
  if (w.size() < 4 || w.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < w.size(); i += 2) {
    if (!is_letter(w[i]) || w[i + 1] != U'.') return false;
  }
  return true;
}

bool is_initial(std::u32string_view w) {
  return w.size() == 2 && is_upper(w[0]) && w[1] == U'.';
}

// ---- cleaning ----

char ascii_lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(s[pos + i]) != prefix[i]) return false;
  }
  return true;
}

bool is_name_end(char c) {
  return c == '>' || c == '/' || std::isspace(static_cast<unsigned char>(c));
}

// Position just past the '>' that closes the tag opened at pos, or npos.
std::size_t tag_end(std::string_view s, std::size_t pos) {
  std::size_t end = s.find('>', pos);
  if (end == std::string_view::npos) return end;
  std::size_t next_open = s.find('<', pos + 1);
  if (next_open != std::string_view::npos && next_open < end) return std::string_view::npos;
  return end + 1;
}

constexpr std::array<std::string_view, 8> kBlockElements = {
    "ref", "table", "figure", "gallery", "script", "style", "math", "timeline"};

constexpr std::array<std::string_view, 22> kBreakingTags = {
    "p",  "br", "div", "li", "ul", "ol",  "tr", "td", "th",    "h1",  "h2",
    "h3", "h4", "h5",  "h6", "hr", "dl",  "dd", "dt", "blockquote", "section", "caption"};

bool opens_element(std::string_view s, std::size_t pos, std::string_view name) {
  return s[pos] == '<' && starts_with_ci(s, pos + 1, name) && pos + 1 + name.size() < s.size() &&
         is_name_end(s[pos + 1 + name.size()]);
}

bool closes_element(std::string_view s, std::size_t pos, std::string_view name) {
  return s[pos] == '<' && pos + 1 < s.size() && s[pos + 1] == '/' &&
         starts_with_ci(s, pos + 2, name) && pos + 2 + name.size() < s.size() &&
         is_name_end(s[pos + 2 + name.size()]);
}

// Removes <name ...>...</name> blocks (nesting aware) and self-closing
// <name .../> tags. An unclosed opening tag is removed on its own.
std::string drop_elements(std::string_view s, std::string_view name) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (!opens_element(s, i, name)) {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t open_end = tag_end(s, i);
    if (open_end == std::string_view::npos) {
      out.push_back(s[i++]);
      continue;
    }
    if (s[open_end - 2] == '/') {  // self-closing
      i = open_end;
      continue;
    }
    int depth = 1;
    std::size_t j = open_end;
    std::size_t block_end = std::string_view::npos;
    while (j < s.size()) {
      if (s[j] == '<' && opens_element(s, j, name)) {
        std::size_t e = tag_end(s, j);
        if (e != std::string_view::npos && s[e - 2] != '/') ++depth;
        j = e == std::string_view::npos ? j + 1 : e;
      } else if (s[j] == '<' && closes_element(s, j, name)) {
        std::size_t e = tag_end(s, j);
        j = e == std::string_view::npos ? j + 1 : e;
        if (--depth == 0) {
          block_end = j;
          break;
        }
      } else {
        ++j;
      }
    }
    out.push_back(' ');
    i = block_end == std::string_view::npos ? open_end : block_end;
  }
  return out;
}

// Removes balanced open...close spans such as "{| ... |}" or "{{ ... }}".
std::string drop_balanced(std::string_view s, std::string_view open, std::string_view close) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, open.size(), open) != 0) {
      out.push_back(s[i++]);
      continue;
    }
    int depth = 0;
    std::size_t j = i;
    std::size_t end = std::string_view::npos;
    while (j < s.size()) {
      if (s.compare(j, open.size(), open) == 0) {
        ++depth;
        j += open.size();
      } else if (s.compare(j, close.size(), close) == 0) {
        j += close.size();
        if (--depth == 0) {
          end = j;
          break;
        }
      } else {
        ++j;
      }
    }
    if (end == std::string_view::npos) {
      i += open.size();
    } else {
      out.push_back(' ');
      i = end;
    }
  }
  return out;
}

std::string drop_comments(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 4, "<!--") == 0) {
      std::size_t end = s.find("-->", i + 4);
      if (end != std::string_view::npos) {
        out.push_back(' ');
        i = end + 3;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

// "[12]" style citation markers.
std::string drop_citation_markers(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '[') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j > i + 1 && j < s.size() && s[j] == ']') {
        i = j + 1;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

bool is_breaking_tag(std::string_view s, std::size_t pos) {
  std::size_t name_start = pos + 1;
  if (name_start < s.size() && s[name_start] == '/') ++name_start;
  for (auto name : kBreakingTags) {
    if (starts_with_ci(s, name_start, name) && name_start + name.size() < s.size() &&
        is_name_end(s[name_start + name.size()])) {
      return true;
    }
  }
  return false;
}

std::string drop_tags(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<' && i + 1 < s.size() &&
        (std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '/' ||
         s[i + 1] == '!')) {
      std::size_t end = tag_end(s, i);
      if (end != std::string_view::npos) {
        if (is_breaking_tag(s, i)) out.push_back(' ');
        i = end;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::string clean_once(std::string_view raw) {
  std::string s = drop_comments(raw);
  for (auto name : kBlockElements) s = drop_elements(s, name);
  s = drop_balanced(s, "{|", "|}");
  s = drop_balanced(s, "{{", "}}");
  s = drop_citation_markers(s);
  s = drop_tags(s);
  return collapse_whitespace(s);
}

}  // namespace

std::string clean_document(std::string_view raw) {
  std::string current = clean_once(raw);
  // Each pass either changes nothing or makes the text strictly shorter.
  for (;;) {
    std::string next = clean_once(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

// ---- segmentation ----

namespace {

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }

bool is_closing(char32_t c) {
  return c == U')' || c == U']' || c == U'"' || c == U'\'' || c == U'”' ||
         c == U'’' || c == U'»';
}

bool is_opening(char32_t c) {
  return c == U'(' || c == U'[' || c == U'"' || c == U'\'' || c == U'“' ||
         c == U'„' || c == U'«';
}

bool starts_sentence(std::u32string_view s, std::size_t k) {
  if (is_upper(s[k]) || is_digit(s[k])) return true;
  return is_opening(s[k]) && k + 1 < s.size() && (is_upper(s[k + 1]) || is_digit(s[k + 1]));
}

// The whitespace-delimited word ending at `end` (inclusive), without
// leading opening punctuation.
std::u32string_view word_before(std::u32string_view s, std::size_t end) {
  std::size_t begin = end;
  while (begin > 0 && !is_space(s[begin - 1])) --begin;
  while (begin < end && is_opening(s[begin])) ++begin;
  return s.substr(begin, end + 1 - begin);
}

std::string trimmed(std::u32string_view s) { return collapse_whitespace(utf8::encode(s)); }

}  // namespace

std::vector<Sentence> segment_sentences(std::string_view body,
                                        const AbbreviationList& abbreviations) {
  std::vector<Sentence> sentences;
  const std::u32string s = utf8::decode(body);
  const std::u32string_view view(s);
  auto emit = [&](std::size_t from, std::size_t to) {
    std::string text = trimmed(view.substr(from, to - from));
    if (text.empty()) return;
    Sentence sentence;
    sentence.tokens = tokenize(text, false, abbreviations);
    sentence.text = std::move(text);
    sentence.index = sentences.size();
    sentences.push_back(std::move(sentence));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    if (!is_terminator(s[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && is_terminator(s[j])) ++j;
    const bool single_period = (j == i + 1 && s[i] == U'.');
    while (j < n && is_closing(s[j])) ++j;
    if (j >= n || !is_space(s[j])) {
      i = j;
      continue;
    }
    std::size_t k = j;
    while (k < n && is_space(s[k])) ++k;
    if (k >= n) break;
    bool boundary = starts_sentence(view, k);
    if (boundary && single_period) {
      auto word = word_before(view, i);
      if (abbreviations.contains(utf8::encode(word)) || is_acronym(word) || is_initial(word)) {
        boundary = false;
      }
    }
    if (boundary) {
      emit(start, j);
      start = k;
    }
    i = k;
  }
  emit(start, n);
  return sentences;
}

// ---- tokenization ----

namespace {

bool joins_word(char32_t c) { return c == U'-' || c == U'\'' || c == U'’'; }
bool joins_number(char32_t c) { return c == U'.' || c == U','; }

void push_token(Tokens& out, std::u32string_view token, bool lowercase) {
  if (token.empty()) return;
  std::string encoded = utf8::encode(token);
  out.push_back(lowercase ? to_lower(encoded) : std::move(encoded));
}

void split_core(Tokens& out, std::u32string_view core, bool lowercase) {
  std::size_t word_start = 0;
  bool in_word = false;
  for (std::size_t i = 0; i < core.size(); ++i) {
    char32_t c = core[i];
    if (is_word_char(c)) {
      if (!in_word) {
        word_start = i;
        in_word = true;
      }
      continue;
    }
    const bool between_words = in_word && i + 1 < core.size() && is_word_char(core[i + 1]);
    if (between_words && joins_word(c)) continue;
    if (between_words && joins_number(c) && is_digit(core[i - 1]) && is_digit(core[i + 1])) {
      continue;
    }
    if (in_word) {
      push_token(out, core.substr(word_start, i - word_start), lowercase);
      in_word = false;
    }
    push_token(out, core.substr(i, 1), lowercase);
  }
  if (in_word) push_token(out, core.substr(word_start), lowercase);
}

void tokenize_chunk(Tokens& out, std::u32string_view chunk, bool lowercase,
                    const AbbreviationList& abbreviations) {
  if (abbreviations.contains(utf8::encode(chunk))) {
    push_token(out, chunk, lowercase);
    return;
  }
  std::size_t begin = 0;
  while (begin < chunk.size() && !is_word_char(chunk[begin])) {
    push_token(out, chunk.substr(begin, 1), lowercase);
    ++begin;
  }
  std::size_t end = chunk.size();
  while (end > begin && !is_word_char(chunk[end - 1])) --end;
  if (begin == end) return;

  std::u32string_view core = chunk.substr(begin, end - begin);
  std::u32string_view tail = chunk.substr(end);
  if (!tail.empty() && tail[0] == U'.') {
    std::u32string_view candidate = chunk.substr(begin, end - begin + 1);
    if (abbreviations.contains(utf8::encode(candidate)) || is_acronym(candidate)) {
      push_token(out, candidate, lowercase);
      tail.remove_prefix(1);
      for (std::size_t i = 0; i < tail.size(); ++i) push_token(out, tail.substr(i, 1), lowercase);
      return;
    }
  }
  split_core(out, core, lowercase);
  for (std::size_t i = 0; i < tail.size(); ++i) push_token(out, tail.substr(i, 1), lowercase);
}

}  // namespace

Tokens tokenize(std::string_view text, bool lowercase, const AbbreviationList& abbreviations) {
  Tokens out;
  const std::u32string s = utf8::decode(text);
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) {
      tokenize_chunk(out, std::u32string_view(s).substr(i, j - i), lowercase, abbreviations);
    }
    i = j;
  }
  return out;
}

}  // namespace parmine
