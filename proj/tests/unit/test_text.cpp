#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "hierdoc/error.hpp"
#include "hierdoc/rng.hpp"
#include "hierdoc/text.hpp"

using namespace hierdoc;
using namespace hierdoc::text;
using Toks = std::vector<std::string>;

TEST(Subtokenize, CamelCaseClassName) { EXPECT_EQ(subtokenize("InfoAccessSyntax"), (Toks{"info", "access", "syntax"})); }

TEST(Subtokenize, SnakeCase) { EXPECT_EQ(subtokenize("snake_case"), (Toks{"snake", "case"})); }

TEST(Subtokenize, AcronymThenDigit) {
  EXPECT_EQ(subtokenize("parseHTTPResponse2"), (Toks{"parse", "http", "response", "2"}));
  EXPECT_EQ(subtokenize("ASN1Object"), (Toks{"asn", "1", "object"}));
}

TEST(Subtokenize, EdgeCases) {
  EXPECT_TRUE(subtokenize("").empty());
  EXPECT_TRUE(subtokenize("___").empty());
  EXPECT_EQ(subtokenize("X"), (Toks{"x"}));
  EXPECT_EQ(subtokenize("getURL"), (Toks{"get", "url"}));
}

// Random identifiers: concatenating the parts reproduces the lowercased input minus underscores.
TEST(Subtokenize, ConcatenationProperty) {
  Rng rng(11);
  const std::string alphabet = "abcXYZ019_";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string id;
    const auto len = 1 + rng.below(12);
    for (std::size_t i = 0; i < len; ++i) id += alphabet[rng.below(alphabet.size())];
    std::string expect;
    for (char c : id)
      if (c != '_') expect += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::string got;
    for (const auto& p : subtokenize(id)) {
      ASSERT_FALSE(p.empty()) << id;
      got += p;
    }
    ASSERT_EQ(got, expect) << id;
  }
}

TEST(TokenizeCode, Signature) {
  EXPECT_EQ(tokenize_code("public byte[] getEncoded()").tokens,
            (Toks{"public", "byte", "[", "]", "get", "encoded", "(", ")"}));
  EXPECT_TRUE(tokenize_code("").empty());
  EXPECT_EQ(tokenize_code("x=1;").tokens, (Toks{"x", "=", "1", ";"}));
}

// Every character of the input lands in exactly one token class: word runs or
// single punctuation.
TEST(TokenizeCode, CharacterClassOracle) {
  const std::string src = "if (a.b_c >= 10) { return fooBar[i]; }";
  std::string expect;
  for (char c : src)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '_') expect += static_cast<char>(std::tolower(c));
  std::string got;
  for (const auto& t : tokenize_code(src).tokens) got += t;
  EXPECT_EQ(got, expect);
}

TEST(TokenizeCode, IdempotentOnJoinedOutput) {
  Rng rng(5);
  const std::string alphabet = "aBc1_ ;.(){}=+xYz";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const auto len = rng.below(30);
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.below(alphabet.size())];
    const auto once = tokenize_code(s).tokens;
    const auto twice = tokenize_code(join(once)).tokens;
    ASSERT_EQ(once, twice) << s;
  }
}

TEST(TokenizeComment, GoldComment) {
  const auto t = tokenize_comment("returns asn . 1 encoded form of this info access syntax .");
  EXPECT_EQ(t.size(), 12u);
  EXPECT_EQ(t.origin, Origin::kComment);
  EXPECT_EQ(tokenize_comment("ASN.1 form").tokens, (Toks{"asn", ".", "1", "form"}));
  EXPECT_TRUE(tokenize_comment("").empty());
}

TEST(TokenizeClassName, Subtokens) {
  const auto t = tokenize_class_name("InfoAccessSyntax");
  EXPECT_EQ(t.tokens, (Toks{"info", "access", "syntax"}));
  EXPECT_EQ(t.origin, Origin::kClassName);
}

TEST(Vocabulary, FrequencyThenLexicographic) {
  std::vector<TokenSequence> seqs{{{"c", "b", "a", "a"}, Origin::kComment}};
  const auto v = Vocabulary::build(seqs, 10, 1);
  ASSERT_EQ(v.size(), 7u);
  EXPECT_EQ(v.token_of(4), "a");
  EXPECT_EQ(v.token_of(5), "b");
  EXPECT_EQ(v.token_of(6), "c");
}

TEST(Vocabulary, MinFreqAndCap) {
  std::vector<TokenSequence> seqs{{{"a", "a", "b"}, Origin::kComment}};
  const auto v = Vocabulary::build(seqs, 10, 2);
  EXPECT_TRUE(v.contains("a"));
  EXPECT_FALSE(v.contains("b"));

  TokenSequence many;
  for (int i = 0; i < 100; ++i) many.tokens.push_back("t" + std::to_string(i));
  std::vector<TokenSequence> big{many};
  EXPECT_EQ(Vocabulary::build(big, 5, 1).size(), 5u + kNumReserved);
  EXPECT_THROW(Vocabulary::build(big, 3, 1), UsageError);
}

TEST(Vocabulary, EncodeDecodeRoundtrip) {
  std::vector<TokenSequence> seqs{{{"x", "y", "z"}, Origin::kCode}};
  const auto v = Vocabulary::build(seqs, 10, 1);
  const Toks in{"z", "x", "y"};
  EXPECT_EQ(v.decode(v.encode(in)), in);
  const auto br = v.encode(in, true);
  EXPECT_EQ(br.front(), kBos);
  EXPECT_EQ(br.back(), kEos);
  EXPECT_THROW((void)v.token_of(99), UsageError);
}

TEST(Vocabulary, UnkPositionsMatchMembership) {
  std::vector<TokenSequence> seqs{{{"x", "y"}, Origin::kCode}};
  const auto v = Vocabulary::build(seqs, 10, 1);
  const Toks in{"x", "q", "y", "r", "x"};
  const auto ids = v.encode(in);
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_EQ(ids[i] == kUnk, !v.contains(in[i])) << i;
}

TEST(Vocabulary, DeterministicAndJsonRoundtrip) {
  std::vector<TokenSequence> seqs{{{"b", "a", "c", "a", "b"}, Origin::kComment}, {{"d", "c"}, Origin::kCode}};
  const auto a = Vocabulary::build(seqs, 100, 1);
  const auto b = Vocabulary::build(seqs, 100, 1);
  EXPECT_EQ(a, b);
  VocabConfig cfg{100, 1, true};
  VocabConfig back;
  const auto c = Vocabulary::from_json(a.to_json(cfg), &back);
  EXPECT_EQ(a, c);
  EXPECT_EQ(back.cap, 100u);
  EXPECT_EQ(back.min_freq, 1u);
}
