#include "parmine/text.hpp"

#include <gtest/gtest.h>

#include <fstream>

#include "json.hpp"
#include "parmine/random.hpp"
#include "support.hpp"

namespace parmine {
namespace {

TEST(Utf8, RoundTripsMultiByteText) {
  const std::string text = "Zażółć gęślą jaźń €𝄞";
  auto cps = utf8::decode(text);
  EXPECT_EQ(cps.size(), 20u);
  EXPECT_EQ(utf8::encode(cps), text);
  EXPECT_EQ(utf8::length(text), 20u);
}

TEST(Utf8, MalformedBytesBecomeReplacementCharacters) {
  const std::string bad = std::string("a") + char(0xC3) + "b" + char(0xFF);
  auto cps = utf8::decode(bad);
  ASSERT_EQ(cps.size(), 4u);
  EXPECT_EQ(cps[0], U'a');
  EXPECT_EQ(cps[1], U'�');
  EXPECT_EQ(cps[2], U'b');
  EXPECT_EQ(cps[3], U'�');
}

TEST(CharClasses, UseUnicodeProperties) {
  EXPECT_TRUE(is_letter(U'ł'));
  EXPECT_TRUE(is_upper(U'Ż'));
  EXPECT_FALSE(is_upper(U'ż'));
  EXPECT_TRUE(is_digit(U'7'));
  EXPECT_TRUE(is_space(U' '));
  EXPECT_TRUE(has_letter("12 a"));
  EXPECT_FALSE(has_letter("12 34 !"));
  EXPECT_TRUE(has_digit("abc3"));
  EXPECT_FALSE(has_letter_or_digit("?!. -"));
  EXPECT_EQ(to_lower("ZAŻÓŁĆ Gęślą"), "zażółć gęślą");
}

TEST(CollapseWhitespace, TrimsAndJoinsRuns) {
  EXPECT_EQ(collapse_whitespace("  a \t\n b  c  "), "a b c");
  EXPECT_EQ(collapse_whitespace(" \n\t "), "");
  EXPECT_EQ(join({"a", "b", "c"}, "-"), "a-b-c");
}

// ---- cleaner ----

TEST(CleanDocument, HandWrittenFixture) {
  std::ifstream in(testing::data_path("clean_documents.jsonl"));
  ASSERT_TRUE(in);
  std::string line;
  std::size_t cases = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    const std::string raw = j["raw"];
    const std::string expected = j["expected"];
    EXPECT_EQ(clean_document(raw), expected) << j["name"];
    ++cases;
  }
  EXPECT_EQ(cases, 20u);
}

TEST(CleanDocument, IsIdempotentOnRandomMarkup) {
  const char* pieces[] = {"<ref>", "</ref>", "<ref name=\"x\" />", "{{", "}}", "{|", "|}",
                          "<p>", "</p>", "<b>", "</b>", "[1]", "[", "]", "<!--", "-->",
                          "<", ">", "Word", " ", ". ", "ł", "<table>", "</table>", "\n",
                          "<br/>", "2", "{", "}", "|", "<math>", "</math>"};
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string raw;
    const std::size_t n = 1 + rng.below(30);
    for (std::size_t k = 0; k < n; ++k) raw += pieces[rng.below(std::size(pieces))];
    const std::string once = clean_document(raw);
    EXPECT_EQ(clean_document(once), once) << raw;
  }
}

TEST(CleanDocument, LeavesNoMarkupFromBlocks) {
  const std::string cleaned =
      clean_document("<p>A.<ref>r</ref> B {{t|{{u}}}} C.</p>{|\n|x\n|} [12]D.");
  EXPECT_EQ(cleaned, "A. B C. D.");
}

// ---- tokenizer ----

std::vector<std::string> texts(const std::vector<Sentence>& sentences) {
  std::vector<std::string> out;
  for (const auto& s : sentences) out.push_back(s.text);
  return out;
}


TEST(Tokenize, HandWrittenFixture) {
  std::ifstream in(testing::data_path("tokenize_cases.txt"));
  ASSERT_TRUE(in);
  std::string line;
  std::size_t cases = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos) << line;
    const std::string text = line.substr(0, tab);
    Tokens expected;
    std::string rest = line.substr(tab + 1), tok;
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto space = rest.find(' ', start);
      if (space == std::string::npos) space = rest.size();
      if (space > start) expected.push_back(rest.substr(start, space - start));
      start = space + 1;
    }
    EXPECT_EQ(tokenize(text, false), expected) << text;
    ++cases;
  }
  EXPECT_EQ(cases, 100u);
}

TEST(Tokenize, LowercaseOption) {
  EXPECT_EQ(tokenize("Dr. ŻUK went.", true), (Tokens{"dr.", "żuk", "went", "."}));
}

TEST(Tokenize, CustomAbbreviationList) {
  AbbreviationList list({"zob."});
  EXPECT_EQ(tokenize("zob. tam", false, list), (Tokens{"zob.", "tam"}));
  EXPECT_EQ(tokenize("Dr. X", false, list), (Tokens{"Dr", ".", "X"}));
}

TEST(Tokenize, DocumentedExamples) {
  EXPECT_EQ(tokenize("Poproszę koc.", true), (Tokens{"poproszę", "koc", "."}));
  EXPECT_EQ(tokenize("U.S. Dept.", false), (Tokens{"U.S.", "Dept", "."}));
  EXPECT_EQ(clean_document("<b>Hello</b> world"), "Hello world");
  EXPECT_EQ(clean_document("A.<ref>x</ref> B {| table |} C"), "A. B C");
  EXPECT_EQ(texts(segment_sentences("A jest. B jest.")),
            (std::vector<std::string>{"A jest.", "B jest."}));
  EXPECT_EQ(texts(segment_sentences("Dr. Smith arrived. He left.")),
            (std::vector<std::string>{"Dr. Smith arrived.", "He left."}));
}

TEST(Tokenize, EmptyInput) {
  EXPECT_TRUE(tokenize("", false).empty());
  EXPECT_TRUE(tokenize("   \n", false).empty());
}

// ---- segmentation ----

TEST(Segment, SplitsOnTerminalPunctuation) {
  auto s = segment_sentences("First one. Second one! Third one? 4 is a number.");
  EXPECT_EQ(texts(s), (std::vector<std::string>{"First one.", "Second one!", "Third one?",
                                                "4 is a number."}));
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s[i].index, i);
  EXPECT_EQ(s[1].tokens, (Tokens{"Second", "one", "!"}));
}

TEST(Segment, KeepsAbbreviationsInitialsAndAcronyms) {
  EXPECT_EQ(texts(segment_sentences("Dr. Smith met J. Doe. They talked.")),
            (std::vector<std::string>{"Dr. Smith met J. Doe.", "They talked."}));
  EXPECT_EQ(texts(segment_sentences("He moved to the U.S. Later he left.")),
            (std::vector<std::string>{"He moved to the U.S. Later he left."}));
  EXPECT_EQ(texts(segment_sentences("Jest np. Kraków. Jest też Łódź.")),
            (std::vector<std::string>{"Jest np. Kraków.", "Jest też Łódź."}));
}

TEST(Segment, NeedsUppercaseOrDigitAfterBoundary) {
  EXPECT_EQ(texts(segment_sentences("It ends. then continues.")),
            (std::vector<std::string>{"It ends. then continues."}));
  EXPECT_EQ(texts(segment_sentences("Version 2.5 is out. Try it.")),
            (std::vector<std::string>{"Version 2.5 is out.", "Try it."}));
}

TEST(Segment, ClosingQuotesAndBracketsStayWithTheSentence) {
  EXPECT_EQ(texts(segment_sentences("He said \"Stop.\" Then left. (Really.) Yes.")),
            (std::vector<std::string>{"He said \"Stop.\"", "Then left.", "(Really.)", "Yes."}));
  EXPECT_EQ(texts(segment_sentences("Wait... Who? \"Me!\" she said.")),
            (std::vector<std::string>{"Wait...", "Who?", "\"Me!\" she said."}));
}

TEST(Segment, EmptyAndUnterminated) {
  EXPECT_TRUE(segment_sentences("").empty());
  EXPECT_TRUE(segment_sentences("   ").empty());
  EXPECT_EQ(texts(segment_sentences("no final stop")),
            (std::vector<std::string>{"no final stop"}));
}

TEST(Segment, SentencesCoverTheBody) {
  Rng rng(5);
  const char* words[] = {"Ala", "ma", "kota", "Dr.", "i", "U.S.", "psa", "2", "J.", "ok."};
  const char* stops[] = {".", "!", "?", "...", ""};
  for (int trial = 0; trial < 500; ++trial) {
    std::string body;
    for (int k = 0; k < 12; ++k) {
      if (!body.empty()) body += ' ';
      body += words[rng.below(std::size(words))];
      body += stops[rng.below(std::size(stops))];
    }
    auto seg = segment_sentences(body);
    std::string joined;
    for (const auto& s : seg) joined += (joined.empty() ? "" : " ") + s.text;
    EXPECT_EQ(joined, collapse_whitespace(body)) << body;
  }
}

TEST(AbbreviationList, LoadsFromFile) {
  testing::TempDir dir("abbr");
  testing::spit(dir.path() / "a.txt", "# comment\nzob.\n\n  rys.  \n");
  auto list = AbbreviationList::load(dir.file("a.txt"));
  EXPECT_EQ(list.size(), 2u);
  EXPECT_TRUE(list.contains("rys."));
  EXPECT_FALSE(list.contains("# comment"));
  EXPECT_THROW(AbbreviationList::load(dir.file("missing.txt")), Error);
}

}  // namespace
}  // namespace parmine
