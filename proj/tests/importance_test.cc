// Copyright 2026 The Perturbkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <chrono>
#include <cmath>

#include "gtest/gtest.h"
#include "json.hpp"
#include "perturbkit/common/digest.h"
#include "perturbkit/common/error.h"
#include "perturbkit/common/file_util.h"
#include "perturbkit/importance/scorer.h"
#include "perturbkit/importance/sentences.h"
#include "perturbkit/importance/shapley.h"
#include "perturbkit/importance/tokenizer.h"
#include "test_util.h"

namespace perturbkit::importance {
namespace {

using nlohmann::json;
using perturbkit::testing::FixtureDir;
using perturbkit::testing::StubServer;

constexpr double kTol = 1e-9;

std::vector<json> ShapleyCases() {
  return json::parse(ReadFile(FixtureDir() / "shapley_cases.json")).at("cases");
}

// Worth of every coalition, by brute force.
std::pair<double, double> WorthRange(const std::string& prompt, const Scorer& scorer,
                                     const std::vector<Token>& tokens) {
  double lo = INFINITY, hi = -INFINITY;
  for (uint32_t mask = 0; mask < (1u << tokens.size()); ++mask) {
    std::vector<bool> in(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i) in[i] = mask >> i & 1;
    const double w = scorer.Score(CoalitionText(prompt, tokens, in));
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  return {lo, hi};
}

TEST(TokenizerTest, SpansAreByteOffsets) {
  const std::string s = "Sort thé list, then print_it!";
  const auto tokens = Tokenize(s);
  ASSERT_EQ(tokens.size(), 5u);
  EXPECT_EQ(tokens[1].text, "thé");
  EXPECT_EQ(tokens[1].span, (Span{5, 9}));
  EXPECT_EQ(tokens[4].text, "print_it");
  for (const auto& t : tokens) EXPECT_EQ(s.substr(t.span.start, t.span.size()), t.text);
  for (size_t i = 0; i < tokens.size(); ++i) EXPECT_EQ(tokens[i].index, i);
}

TEST(TokenizerTest, NoTokens) { EXPECT_TRUE(Tokenize(" ,.; ").empty()); }

TEST(SyntheticScorerTest, CountsOccurrencesPairsAndCap) {
  SyntheticScorer s({{"a", 1}, {"b", 2}}, {{"a", "b", 10}}, 0.5);
  EXPECT_DOUBLE_EQ(s.Score("a a"), 2.5);
  EXPECT_DOUBLE_EQ(s.Score("a b"), 13.5);
  SyntheticScorer capped({{"a", 1}}, {}, 0, 1.5);
  EXPECT_DOUBLE_EQ(capped.Score("a a a"), 1.5);
}

TEST(SyntheticScorerTest, IdDependsOnConfig) {
  auto a = SyntheticScorer::FromJson({{"weights", {{"x", 1}}}});
  auto b = SyntheticScorer::FromJson({{"weights", {{"x", 2}}}});
  EXPECT_NE(a->id(), b->id());
  EXPECT_TRUE(a->id().starts_with("synthetic_weights:"));
}

TEST(ScorerTest, ParseScalar) {
  EXPECT_EQ(ParseScalar(" 3.25\n"), 3.25);
  EXPECT_EQ(ParseScalar("-1e2"), -100);
  EXPECT_FALSE(ParseScalar("abc").has_value());
  EXPECT_FALSE(ParseScalar("1 2").has_value());
  EXPECT_FALSE(ParseScalar("").has_value());
}

TEST(ScorerTest, CommandScorer) {
  CommandScorer s("wc -w");
  EXPECT_DOUBLE_EQ(s.Score("one two three"), 3);
  CommandScorer failing("exit 1");
  EXPECT_THROW(failing.Score("x"), ScorerError);
  CommandScorer garbage("echo nope");
  EXPECT_THROW(garbage.Score("x"), ScorerError);
}

TEST(ScorerTest, HttpScorer) {
  StubServer server([](httplib::Server& s) {
    s.Post("/score", [](const httplib::Request& req, httplib::Response& res) {
      res.set_content(std::to_string(req.body.size()), "text/plain");
    });
    s.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
    });
  });
  HttpScorer s(server.url("/score"));
  EXPECT_DOUBLE_EQ(s.Score("abcd"), 4);
  HttpScorer broken(server.url("/broken"));
  EXPECT_THROW(broken.Score("x"), ScorerError);
}

TEST(ScorerTest, CachingScorerCallsInnerOncePerText) {
  testing::TempDir dir;
  const auto log = dir / "calls";
  auto inner = std::make_unique<CommandScorer>("echo x >> " + log.string() + "; echo 1");
  CachingScorer cache(std::move(inner));
  for (int i = 0; i < 3; ++i) cache.Score("same");
  cache.Score("other");
  EXPECT_EQ(ReadFile(log), "x\nx\n");
  EXPECT_EQ(cache.cache_size(), 2u);
}

TEST(ScorerTest, MakeScorerRejectsBadConfig) {
  EXPECT_THROW(MakeScorer({ScorerKind::kExternalCommand, json::object()}), ScorerError);
  EXPECT_THROW(MakeScorer({ScorerKind::kHttpEndpoint, {{"url", 3}}}), ScorerError);
  EXPECT_EQ(ParseScorerKind("synthetic_weights"), ScorerKind::kSyntheticWeights);
  EXPECT_FALSE(ParseScorerKind("magic").has_value());
}

TEST(ShapleyTest, CoalitionTextDeletesExcludedTokens) {
  const std::string p = "sort the list, quickly";
  const auto t = Tokenize(p);
  EXPECT_EQ(CoalitionText(p, t, {true, false, true, true}), "sort list, quickly");
  EXPECT_EQ(CoalitionText(p, t, {false, false, false, false}), ",");
  EXPECT_THROW(CoalitionText(p, t, {true}), PreconditionError);
}

TEST(ShapleyTest, ExactSatisfiesAxiomsOnFixtures) {
  for (const json& c : ShapleyCases()) {
    SCOPED_TRACE(c.at("name").get<std::string>());
    const std::string prompt = c.at("prompt");
    const auto scorer = SyntheticScorer::FromJson(c.at("scorer"));
    AttributionConfig cfg;
    const auto attr = ShapleyAttributions(prompt, *scorer, cfg);
    ASSERT_LE(attr.tokens.size(), 12u);
    EXPECT_EQ(attr.estimator, Estimator::kExact);
    double sum = 0;
    for (double v : attr.values) sum += v;
    EXPECT_NEAR(sum, attr.full_score - attr.empty_score, kTol);
    EXPECT_NEAR(attr.full_score, scorer->Score(prompt), kTol);
    for (const auto& pair : c.at("symmetric")) {
      EXPECT_NEAR(attr.values[pair[0].get<size_t>()], attr.values[pair[1].get<size_t>()], kTol);
    }
    for (const auto& idx : c.at("null")) EXPECT_NEAR(attr.values[idx.get<size_t>()], 0, kTol);
  }
}

TEST(ShapleyTest, AdditiveGameGivesWeights) {
  SyntheticScorer s({{"a", 2}, {"b", 5}}, {{"a", "b", 4}}, 1);
  const auto attr = ShapleyAttributions("a b c", s, {});
  EXPECT_NEAR(attr.values[0], 4, kTol);
  EXPECT_NEAR(attr.values[1], 7, kTol);
  EXPECT_NEAR(attr.values[2], 0, kTol);
}

TEST(ShapleyTest, MonteCarloMatchesExactWithinFivePercentOfSpread) {
  for (const json& c : ShapleyCases()) {
    SCOPED_TRACE(c.at("name").get<std::string>());
    const std::string prompt = c.at("prompt");
    const auto scorer = SyntheticScorer::FromJson(c.at("scorer"));
    const auto exact = ShapleyAttributions(prompt, *scorer, {});
    AttributionConfig mc_cfg;
    mc_cfg.exhaustive_limit = 0;
    mc_cfg.seed = 12345;
    const auto mc = ShapleyAttributions(prompt, *scorer, mc_cfg);
    ASSERT_EQ(mc.estimator, Estimator::kPermutationMonteCarlo);
    EXPECT_EQ(mc.samples, 200);
    const auto [lo, hi] = WorthRange(prompt, *scorer, exact.tokens);
    for (size_t i = 0; i < exact.values.size(); ++i) {
      EXPECT_LE(std::abs(mc.values[i] - exact.values[i]), 0.05 * (hi - lo)) << i;
    }
    double sum = 0;
    for (double v : mc.values) sum += v;
    EXPECT_NEAR(sum, mc.full_score - mc.empty_score, kTol);
  }
}

TEST(ShapleyTest, MonteCarloIsDeterministicAcrossWorkers) {
  const std::string prompt =
      "Write a function named jaccard that returns the size of the intersection divided by "
      "the size of the union of two word lists";
  SyntheticScorer s({{"intersection", 5}, {"union", 4}, {"jaccard", 2}},
                    {{"intersection", "union", 3}}, 0, 9);
  AttributionConfig one;
  one.seed = 9;
  AttributionConfig four = one;
  four.workers = 4;
  const auto a = ShapleyAttributions(prompt, s, one);
  const auto b = ShapleyAttributions(prompt, s, four);
  EXPECT_EQ(a.estimator, Estimator::kPermutationMonteCarlo);
  EXPECT_EQ(a, b);
  AttributionConfig other = one;
  other.seed = 10;
  EXPECT_NE(ShapleyAttributions(prompt, s, other).values, a.values);
}

TEST(ShapleyTest, RuntimeUnderFiveSecondsPerPrompt) {
  const std::string prompt = ReadFile(FixtureDir() / "corpus/problems/jaccard/prompt.txt");
  const auto scorer = SyntheticScorer::FromJson(json::parse(ReadFile(FixtureDir() / "weights.json")));
  const auto start = std::chrono::steady_clock::now();
  const auto attr = ShapleyAttributions(prompt, *scorer, {});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 5.0);
  EXPECT_GT(attr.tokens.size(), 12u);
}

TEST(ShapleyTest, EmptyPromptRejected) {
  SyntheticScorer s({}, {});
  EXPECT_THROW(ShapleyAttributions(" ... ", s, {}), PreconditionError);
}

TEST(ShapleyTest, ScorerErrorsPropagate) {
  CommandScorer failing("exit 2");
  EXPECT_THROW(ShapleyAttributions("a b", failing, {}), ScorerError);
}

TEST(ShapleyTest, JsonRoundTrip) {
  SyntheticScorer s({{"a", 2}}, {});
  const auto attr = ShapleyAttributions("a b a", s, {});
  EXPECT_EQ(AttributionFromJson(ToJson(attr)), attr);
}

TEST(TopKTest, RankOrderWithPositionTieBreak) {
  TokenAttribution attr;
  attr.tokens = Tokenize("a b c d");
  attr.values = {1, 3, 3, 0.5};
  const auto top = TopKTokens(attr, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].text, "b");
  EXPECT_EQ(top[1].text, "c");
  EXPECT_EQ(top[2].text, "a");
  EXPECT_EQ(TopKTokens(attr, 10).size(), 4u);
  EXPECT_THROW(TopKTokens(attr, 0), PreconditionError);
}

TEST(SentencesTest, SplitsOnTerminatorsAndBlankLines) {
  const std::string s = "First one. Second (really)! Third?\n\nFourth without end";
  const auto spans = SplitSentences(s);
  ASSERT_EQ(spans.size(), 4u);
  EXPECT_EQ(s.substr(spans[1].start, spans[1].size()), "Second (really)!");
  EXPECT_EQ(s.substr(spans[3].start, spans[3].size()), "Fourth without end");
}

TEST(SentencesTest, DecimalPointsAndFileNamesDoNotSplit) {
  const auto spans = SplitSentences("Return 1.0 here. Save as foo.py. Done.");
  EXPECT_EQ(spans.size(), 3u);
}

TEST(SentencesTest, JaccardFixtureHasSixSentences) {
  const std::string p = ReadFile(FixtureDir() / "corpus/problems/jaccard/prompt.txt");
  EXPECT_EQ(SplitSentences(p).size(), 6u);
}

TEST(SentencesTest, RankingSumsContainedTokens) {
  const std::string p = "Low words. High value here.";
  SyntheticScorer s({{"High", 5}, {"value", 1}, {"Low", 2}}, {});
  const auto attr = ShapleyAttributions(p, s, {});
  const auto ranking = RankSentences(p, attr);
  ASSERT_EQ(ranking.sentences.size(), 2u);
  EXPECT_EQ(ranking.sentences[0].position, 1u);
  EXPECT_NEAR(ranking.sentences[0].accumulated_value, 6, kTol);
  EXPECT_NEAR(ranking.sentences[1].accumulated_value, 2, kTol);
  EXPECT_EQ(RankingFromJson(ToJson(ranking)), ranking);
}

TEST(SentencesTest, RankingRejectsForeignAttribution) {
  SyntheticScorer s({}, {});
  const auto attr = ShapleyAttributions("one two", s, {});
  EXPECT_THROW(RankSentences("three four", attr), PreconditionError);
}

}  // namespace
}  // namespace perturbkit::importance
