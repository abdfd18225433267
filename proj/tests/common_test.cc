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

#include <atomic>
#include <set>
#include <stdexcept>

#include "gtest/gtest.h"
#include "perturbkit/common/digest.h"
#include "perturbkit/common/error.h"
#include "perturbkit/common/file_util.h"
#include "perturbkit/common/parallel.h"
#include "perturbkit/common/rng.h"
#include "perturbkit/common/subprocess.h"
#include "perturbkit/common/text.h"
#include "perturbkit/common/utf8.h"
#include "test_util.h"

namespace perturbkit {
namespace {

TEST(Utf8Test, BoundariesCoverMultibyteSequences) {
  const std::string s = "aà€😀";
  EXPECT_EQ(CodepointBoundaries(s), (std::vector<size_t>{0, 1, 3, 6, 10}));
  EXPECT_EQ(CodepointCount(s), 4u);
  EXPECT_EQ(DecodeUtf8(s), (std::u32string{U'a', U'à', U'€', U'😀'}));
  EXPECT_EQ(EncodeUtf8(DecodeUtf8(s)), s);
}

TEST(Utf8Test, MalformedBytesCountAsOne) {
  const std::string s = "a\xff" "b\xc3";
  EXPECT_EQ(CodepointCount(s), 4u);
  EXPECT_EQ(Utf8SequenceLength(s, 1), 1u);
  EXPECT_EQ(Utf8SequenceLength(s, 3), 1u);
}

TEST(DigestTest, KnownVector) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(RngTest, SameSeedSameStream) {
  SeededRng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.Uniform(1000), b.Uniform(1000));
}

TEST(RngTest, FrozenGolden) {
  // mt19937_64 output is standardized; the bounded draw is ours. Pinning
  // the values guards portability of every seeded artifact.
  SeededRng rng(7);
  std::vector<size_t> draws;
  for (int i = 0; i < 5; ++i) draws.push_back(rng.Uniform(10));
  SeededRng again(7);
  std::vector<int> items = {0, 1, 2, 3, 4, 5};
  again.Shuffle(items);
  EXPECT_EQ(std::set<int>(items.begin(), items.end()).size(), 6u);
  EXPECT_EQ(draws, (std::vector<size_t>{5, 0, 8, 6, 1}));
}

TEST(RngTest, UniformStaysInRange) {
  SeededRng rng(1);
  for (size_t n : {1u, 2u, 3u, 7u, 1000u}) {
    for (int i = 0; i < 200; ++i) EXPECT_LT(rng.Uniform(n), n);
  }
}

TEST(RngTest, DeriveSeedSeparatesStreams) {
  EXPECT_NE(DeriveSeed(1, "a"), DeriveSeed(1, "b"));
  EXPECT_NE(DeriveSeed(1, "a"), DeriveSeed(2, "a"));
  EXPECT_EQ(DeriveSeed(1, "a"), DeriveSeed(1, "a"));
}

TEST(ParallelTest, EveryIndexOnce) {
  std::vector<std::atomic<int>> hits(500);
  ParallelFor(hits.size(), 4, [&](size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelTest, RethrowsLowestFailingIndex) {
  try {
    ParallelFor(50, 4, [](size_t i) {
      if (i == 7 || i == 30) throw std::runtime_error("fail " + std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "fail 7");
  }
}

TEST(TextTest, DeleteSpansCollapsesWhitespace) {
  const std::string s = "Write a function named foo now.";
  EXPECT_EQ(DeleteSpans(s, std::vector<Span>{{6, 7}}), "Write function named foo now.");
  EXPECT_EQ(DeleteSpans(s, std::vector<Span>{{0, 5}}), "a function named foo now.");
  EXPECT_EQ(DeleteSpans("end word\nnext", std::vector<Span>{{4, 8}}), "end\nnext");
}

TEST(TextTest, FindWholeWordRespectsBoundaries) {
  const std::string s = "foo food foo_bar foo.";
  const auto hits = FindWholeWord(s, "foo");
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0], (Span{0, 3}));
  EXPECT_EQ(hits[1], (Span{17, 20}));
}

TEST(TextTest, SubstituteLongestFirstDoesNotRescan) {
  std::vector<std::pair<std::string, std::string>> map = {{"ab", "x"}, {"abc", "y"},
                                                          {"x", "ab"}};
  EXPECT_EQ(SubstituteLongestFirst("abcab x", map), "yx ab");
}

TEST(TextTest, WordCodepoints) {
  EXPECT_TRUE(IsWordCodepoint(U'a'));
  EXPECT_TRUE(IsWordCodepoint(U'_'));
  EXPECT_TRUE(IsWordCodepoint(U'à'));
  EXPECT_FALSE(IsWordCodepoint(U'-'));
  EXPECT_FALSE(IsWordCodepoint(U' '));
  EXPECT_FALSE(IsWordCodepoint(U'\u2014'));
}

TEST(SubprocessTest, CapturesOutputAndExitCode) {
  ProcessOptions opts = ShellCommand("cat; echo err >&2; exit 3");
  opts.stdin_data = "hello";
  const ProcessResult r = RunProcess(opts);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(r.stdout_data, "hello");
  EXPECT_EQ(r.stderr_data, "err\n");
  EXPECT_FALSE(r.Succeeded());
}

TEST(SubprocessTest, TimeoutKillsProcessGroup) {
  ProcessOptions opts = ShellCommand("sleep 30 & sleep 30");
  opts.timeout_seconds = 0.3;
  const ProcessResult r = RunProcess(opts);
  EXPECT_TRUE(r.timed_out);
}

TEST(SubprocessTest, EnvironmentIsReplaced) {
  ProcessOptions opts = ShellCommand("echo \"[$HOME][$ONLY]\"");
  opts.env = std::vector<std::string>{"ONLY=1", "PATH=/usr/bin:/bin"};
  EXPECT_EQ(RunProcess(opts).stdout_data, "[][1]\n");
}

TEST(SubprocessTest, ShellQuote) {
  ProcessOptions opts = ShellCommand("printf %s " + ShellQuote("it's $x"));
  EXPECT_EQ(RunProcess(opts).stdout_data, "it's $x");
}

TEST(FileUtilTest, WriteOnceAcceptsIdenticalContent) {
  testing::TempDir dir;
  const auto path = dir / "a/b/file.txt";
  WriteFileOnce(path, "one");
  EXPECT_NO_THROW(WriteFileOnce(path, "one"));
  EXPECT_THROW(WriteFileOnce(path, "two"), IoError);
  EXPECT_EQ(ReadFile(path), "one");
}

TEST(FileUtilTest, MissingFileThrows) {
  EXPECT_THROW(ReadFile("/nonexistent/perturbkit"), IoError);
}

}  // namespace
}  // namespace perturbkit
