// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "fixtures.h"
#include "imgeval/cli/config.h"
#include "imgeval/cli/exercise.h"
#include "imgeval/error.h"

namespace imgeval::cli {
namespace {

TEST(Config, ParsesScalarsArraysAndTables) {
  const Config c = ParseConfig(R"(# top comment
kind = "tradeoffs"   # trailing comment
seed = -7
scale = 2.5e1
flag = true
metrics = ["precision", "coverage"]
empty = []

[runs.flow-g0]
hp.guidance_scale = 7.50
path = "a # not a comment"
)");
  const ConfigTable& root = c.Root();
  EXPECT_EQ(root.at("kind").AsString("kind"), "tradeoffs");
  EXPECT_EQ(root.at("seed").AsInt("seed"), -7);
  EXPECT_EQ(root.at("scale").AsDouble("scale"), 25.0);
  EXPECT_TRUE(root.at("flag").AsBool("flag"));
  EXPECT_EQ(root.at("metrics").AsStringList("metrics"), (std::vector<std::string>{"precision", "coverage"}));
  EXPECT_TRUE(root.at("empty").items.empty());
  const auto runs = c.Children("runs");
  ASSERT_EQ(runs.size(), 1u);
  const ConfigTable& run = *runs.at("flow-g0");
  EXPECT_EQ(run.at("hp.guidance_scale").Display(), "7.50");
  EXPECT_EQ(run.at("path").AsString("path"), "a # not a comment");
}

TEST(Config, StringEscapes) {
  const Config c = ParseConfig("s = \"a\\\"b\\\\c\"\n");
  EXPECT_EQ(c.Root().at("s").AsString("s"), "a\"b\\c");
}

TEST(Config, TypeMismatchesNameTheKey) {
  const Config c = ParseConfig("seed = \"seven\"\nk = 2.5\n");
  try {
    c.Root().at("seed").AsInt("seed");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_NE(std::string(e.what()).find("seed"), std::string::npos);
  }
  EXPECT_THROW(c.Root().at("k").AsInt("k"), SpecError);
  EXPECT_THROW(c.Root().at("seed").AsBool("seed"), SpecError);
}

TEST(Config, SyntaxErrorsCarryTheLineNumber) {
  const char* const kBad[] = {
      "a = 1\na = 2\n",            // repeated key
      "[t]\nx = 1\n[t]\n",         // repeated table
      "a = \"open\n",              // unterminated string
      "a = 1 2\n",                 // trailing garbage
      "just words\n",              // no '='
      "a = [1, [2]]\n",            // nested array
      "a = nope\n",                // bare word value
      "[bad name]\n",              // space in table name
      "= 3\n",                     // empty key
  };
  for (const char* text : kBad) {
    try {
      ParseConfig(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const SpecError& e) {
      EXPECT_NE(std::string(e.what()).find("config line"), std::string::npos) << e.what();
    }
  }
}

TEST(ExerciseConfig, ReadsFixtureAndResolvesPaths) {
  const auto dir = testing::MakeTempDir("config_tradeoffs");
  const auto path = testing::WriteExerciseFixture(dir, ExerciseKind::kTradeoffs);
  const ExerciseConfig c = ExerciseConfigFromFile(LoadConfig(path));
  EXPECT_EQ(c.kind, ExerciseKind::kTradeoffs);
  EXPECT_EQ(c.seed, 7);
  EXPECT_EQ(c.out, dir / "out");
  ASSERT_EQ(c.runs.size(), 3u);
  EXPECT_EQ(c.runs[2].inputs.hyperparameters.at("guidance_scale"), "7.5");
  EXPECT_EQ(c.runs[0].inputs.real, dir / "coco_real.npy");
  EXPECT_EQ(c.metrics, DefaultExerciseMetrics(ExerciseKind::kTradeoffs));
  EXPECT_NO_THROW(ValidateExercise(c));
  EXPECT_THROW(ExerciseConfigFromFile(LoadConfig(path), ExerciseKind::kPromptTypes), SpecError);
}

TEST(ExerciseConfig, RejectsUnknownKeysAndBadValues) {
  const auto dir = testing::MakeTempDir("config_bad");
  const auto path = testing::WriteExerciseFixture(dir, ExerciseKind::kRankingRobustness);
  const Config good = LoadConfig(path);

  Config c = good;
  c.tables[""]["colour"] = ConfigValue{ConfigValue::Type::kString, "red"};
  EXPECT_THROW(ExerciseConfigFromFile(c), SpecError);

  c = good;
  c.tables["runs.a_coco"]["guidance"] = ConfigValue{ConfigValue::Type::kNumber, "2"};
  EXPECT_THROW(ExerciseConfigFromFile(c), SpecError);

  c = good;
  c.tables[""]["k"] = ConfigValue{ConfigValue::Type::kNumber, "0"};
  EXPECT_THROW(ValidateExercise(ExerciseConfigFromFile(c)), SpecError);

  c = good;
  c.tables["runs.a_coco"]["generated"] = ConfigValue{ConfigValue::Type::kString, "missing.npy"};
  EXPECT_ANY_THROW(ValidateExercise(ExerciseConfigFromFile(c)));

  c = good;
  c.tables["runs.b_coco"]["model"] = ConfigValue{ConfigValue::Type::kString, "model-a"};
  EXPECT_THROW(ValidateExercise(ExerciseConfigFromFile(c)), SpecError);
}

TEST(ExerciseConfig, GroupRepresentationNeedsGroupTags) {
  const auto dir = testing::MakeTempDir("config_groups");
  const auto path = testing::WriteExerciseFixture(dir, ExerciseKind::kRankingRobustness);
  Config c = LoadConfig(path);
  c.tables[""]["kind"] = ConfigValue{ConfigValue::Type::kString, "group_representation"};
  c.tables[""].erase("metrics");
  EXPECT_ANY_THROW(ValidateExercise(ExerciseConfigFromFile(c)));
}

}  // namespace
}  // namespace imgeval::cli
