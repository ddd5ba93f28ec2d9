// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <span>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "imgeval/consistency.h"
#include "imgeval/error.h"
#include "imgeval/metric_engine.h"
#include "oracles.h"

namespace imgeval {
namespace {

using testing::Rng;
using testing::ToEmbeddings;

std::vector<SampleRecord> GroupedRecords(Rng& rng, std::size_t n) {
  std::vector<SampleRecord> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i].index = i;
    r[i].groups = {i % 2 ? "odd" : "even"};
    if (rng.Below(4) == 0) r[i].groups.push_back("rare");
  }
  return r;
}

// Cut points splitting [0, n) into `parts` contiguous, possibly empty ranges.
std::vector<std::size_t> Cuts(Rng& rng, std::size_t n, std::size_t parts) {
  std::vector<std::size_t> cuts{0};
  for (std::size_t p = 1; p < parts; ++p) cuts.push_back(rng.Below(n + 1));
  cuts.push_back(n);
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

// Merges neighbouring states in random order until one remains; Merge keeps
// (a, b) order, so adjacency preserves the original row order.
MetricState MergeRandomly(Rng& rng, std::vector<MetricState> states) {
  while (states.size() > 1) {
    const std::size_t i = rng.Below(states.size() - 1);
    states[i] = Merge(std::move(states[i]), std::move(states[i + 1]));
    states.erase(states.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  }
  return std::move(states.front());
}

template <typename T>
std::span<const T> Range(const std::vector<T>& v, std::size_t b, std::size_t e) {
  return std::span<const T>(v).subspan(b, e - b);
}

void ExpectReportsEqual(const MetricReport& a, const MetricReport& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [metric, groups] : a) {
    ASSERT_EQ(groups.size(), b.at(metric).size()) << metric;
    for (const auto& [g, v] : groups) {
      if (tol == 0.0) {
        EXPECT_EQ(v, b.at(metric).at(g)) << metric << "/" << g;
      } else {
        EXPECT_NEAR(v, b.at(metric).at(g), tol) << metric << "/" << g;
      }
    }
  }
}

TEST(MetricSpec, ValidatesKnobs) {
  EXPECT_NO_THROW((MetricSpec{MetricKind::kPrdc, 5}.Validate()));
  EXPECT_THROW((MetricSpec{MetricKind::kPrdc, 0}.Validate()), SpecError);
  EXPECT_THROW((MetricSpec{MetricKind::kFid, 3}.Validate()), SpecError);
  EXPECT_THROW((MetricSpec{MetricKind::kFid, {}, 2.0}.Validate()), SpecError);
  EXPECT_THROW((MetricSpec{MetricKind::kPrdc, {}, {}, 50.0}.Validate()), SpecError);
  EXPECT_THROW((MetricSpec{MetricKind::kVqaScore, {}, {}, 120.0}.Validate()), SpecError);
  EXPECT_THROW(ParseMetricKind("inception"), SpecError);
}

TEST(MetricSpec, DefaultsAndOutputNames) {
  EXPECT_EQ(MetricSpec{MetricKind::kPrdc}.EffectiveK(), 3);
  EXPECT_EQ(MetricSpec{MetricKind::kClipScore}.EffectiveScale(), 100.0);
  EXPECT_EQ(MetricSpec{MetricKind::kPrdc}.OutputNames(),
            (std::vector<std::string>{"precision", "recall", "density", "coverage"}));
  EXPECT_EQ((MetricSpec{MetricKind::kClipScore, {}, {}, 90.0}.OutputNames()),
            std::vector<std::string>{"clipscore_p90"});
  for (auto kind : {MetricKind::kFid, MetricKind::kPrdc, MetricKind::kClipScore, MetricKind::kVqaScore,
                    MetricKind::kDsg}) {
    EXPECT_EQ(ParseMetricKind(MetricKindName(kind)), kind);
  }
}

TEST(MetricState, ContractErrorsForWrongUpdates) {
  const auto e = EmbeddingSet::FromValues(2, 1, std::vector<double>{0, 1});
  MetricState clip(MetricSpec{MetricKind::kClipScore});
  EXPECT_THROW(clip.UpdateReal(e, {}), ContractError);
  MetricState fid(MetricSpec{MetricKind::kFid});
  EXPECT_THROW(fid.UpdateScores(std::vector<double>{1.0}, {}), ContractError);
  EXPECT_THROW(fid.UpdateClip(e, e, {}), ContractError);
  MetricState vqa(MetricSpec{MetricKind::kVqaScore});
  EXPECT_THROW(vqa.UpdateScores(std::vector<double>{1.5}, {}), DataError);
  EXPECT_THROW(Merge(MetricState(MetricSpec{MetricKind::kFid}), MetricState(MetricSpec{MetricKind::kPrdc})),
               SpecError);
}

TEST(MetricState, GroupedUpdatesNeedAlignedRecords) {
  const auto e = EmbeddingSet::FromValues(2, 1, std::vector<double>{0, 1});
  MetricState s(MetricSpec{MetricKind::kFid, {}, {}, {}, true});
  EXPECT_THROW(s.UpdateReal(e, {}), ShapeError);
  std::vector<SampleRecord> one(1);
  EXPECT_THROW(s.UpdateReal(e, one), ShapeError);
}

TEST(MetricState, InsufficientSamplesNamesTheGroup) {
  Rng rng(31);
  const auto real = ToEmbeddings(testing::RandomRows(rng, 20, 3));
  std::vector<SampleRecord> real_records(20), gen_records(20);
  for (std::size_t i = 0; i < 20; ++i) {
    real_records[i].groups = {"common"};
    gen_records[i].groups = {"common"};
  }
  gen_records[0].groups.push_back("scarce");
  MetricState s(MetricSpec{MetricKind::kPrdc, 3, {}, {}, true});
  s.UpdateReal(real, real_records);
  s.UpdateGenerated(real, gen_records);
  try {
    s.Compute();
    FAIL() << "expected InsufficientSamples";
  } catch (const InsufficientSamples& e) {
    EXPECT_NE(std::string(e.what()).find("scarce"), std::string::npos) << e.what();
  }
}

TEST(MetricState, PrdcMatchesDirectComputationPerGroup) {
  Rng rng(32);
  const auto real = ToEmbeddings(testing::RandomRows(rng, 90, 4));
  const auto gen = ToEmbeddings(testing::RandomRows(rng, 80, 4, 1.2));
  const auto rr = GroupedRecords(rng, 90), gr = GroupedRecords(rng, 80);
  MetricState s(MetricSpec{MetricKind::kPrdc, 3, {}, {}, true});
  s.UpdateReal(real, rr);
  s.UpdateGenerated(gen, gr);
  const MetricReport report = s.Compute();
  auto rows_of = [](const EmbeddingSet& e, const std::vector<SampleRecord>& r, const std::string& g) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].InGroup(g)) idx.push_back(i);
    }
    return e.Select(idx);
  };
  for (const std::string g : {"ALL", "even", "odd", "rare"}) {
    const PrdcResult want = ComputePrdc(rows_of(real, rr, g), rows_of(gen, gr, g), 3);
    EXPECT_EQ(report.at("precision").at(g), want.precision) << g;
    EXPECT_EQ(report.at("recall").at(g), want.recall) << g;
    EXPECT_EQ(report.at("density").at(g), want.density) << g;
    EXPECT_EQ(report.at("coverage").at(g), want.coverage) << g;
  }
}

TEST(MetricState, ClipScoresAggregateByGroup) {
  Rng rng(33);
  const auto images = ToEmbeddings(testing::RandomRows(rng, 40, 5));
  const auto texts = ToEmbeddings(testing::RandomRows(rng, 40, 5));
  const auto records = GroupedRecords(rng, 40);
  MetricState s(MetricSpec{MetricKind::kClipScore, {}, 2.5, {}, true});
  s.UpdateClip(images, texts, records);
  const auto scores = ClipScores(images, texts, 2.5);
  std::vector<std::vector<std::string>> groups;
  for (const auto& r : records) groups.push_back(r.groups);
  const auto want = testing::OracleGroupMeans(scores, groups);
  const auto got = s.Compute().at("clipscore");
  for (const auto& [g, v] : want) EXPECT_NEAR(got.at(g), v, 1e-12) << g;
}

TEST(MetricState, UngroupedReportsOnlyAll) {
  MetricState s(MetricSpec{MetricKind::kVqaScore});
  s.UpdateScores(std::vector<double>{0.2, 0.4}, {});
  const auto report = s.Compute();
  EXPECT_EQ(report.at("vqascore").size(), 1u);
  EXPECT_DOUBLE_EQ(report.at("vqascore").at("ALL"), 0.3);
}

TEST(MetricState, FidOfIdenticalSidesIsZero) {
  Rng rng(34);
  const auto x = ToEmbeddings(testing::RandomRows(rng, 100, 6));
  MetricState s(MetricSpec{MetricKind::kFid});
  s.UpdateReal(x, {});
  s.UpdateGenerated(x, {});
  EXPECT_LE(s.Compute().at("fid").at("ALL"), 1e-9);
}

// Property: any contiguous row partition, accumulated in separate states and
// merged in any adjacency-preserving order, reproduces the single pass.
TEST(MergeInvariance, RandomPartitionsReproduceSinglePass) {
  Rng rng(35);
  const std::size_t n = 96, m = 88;
  const auto real = ToEmbeddings(testing::RandomRows(rng, n, 5));
  const auto gen = ToEmbeddings(testing::RandomRows(rng, m, 5, 1.1, 0.2));
  const auto rr = GroupedRecords(rng, n), gr = GroupedRecords(rng, m);
  std::vector<double> scores(m);
  for (auto& s : scores) s = rng.Uniform();

  for (bool grouped : {false, true}) {
    const MetricSpec specs[] = {{MetricKind::kFid, {}, {}, {}, grouped},
                                {MetricKind::kPrdc, 3, {}, {}, grouped},
                                {MetricKind::kVqaScore, {}, {}, {}, grouped},
                                {MetricKind::kVqaScore, {}, {}, 75.0, grouped}};
    for (const MetricSpec& spec : specs) {
      const bool marginal = IsMarginal(spec.kind);
      auto recs = [&](const std::vector<SampleRecord>& r, std::size_t b, std::size_t e) {
        return grouped ? Range(r, b, e) : std::span<const SampleRecord>{};
      };
      MetricState single(spec);
      if (marginal) {
        single.UpdateReal(real, recs(rr, 0, n));
        single.UpdateGenerated(gen, recs(gr, 0, m));
      } else {
        single.UpdateScores(scores, recs(gr, 0, m));
      }
      const MetricReport want = single.Compute();

      for (int trial = 0; trial < 50; ++trial) {
        const std::size_t parts = 1 + rng.Below(8);
        const auto rc = Cuts(rng, n, parts), gc = Cuts(rng, m, parts);
        std::vector<MetricState> states;
        for (std::size_t p = 0; p < parts; ++p) {
          MetricState s(spec);
          if (marginal) {
            if (rc[p + 1] > rc[p]) s.UpdateReal(real.Slice(rc[p], rc[p + 1] - rc[p]), recs(rr, rc[p], rc[p + 1]));
            if (gc[p + 1] > gc[p]) {
              s.UpdateGenerated(gen.Slice(gc[p], gc[p + 1] - gc[p]), recs(gr, gc[p], gc[p + 1]));
            }
          } else {
            s.UpdateScores(Range(scores, gc[p], gc[p + 1]), recs(gr, gc[p], gc[p + 1]));
          }
          states.push_back(std::move(s));
        }
        const MetricReport got = MergeRandomly(rng, std::move(states)).Compute();
        ExpectReportsEqual(got, want, spec.kind == MetricKind::kFid ? 1e-9 : 0.0);
      }
    }
  }
}

TEST(MomentAccumulator, MatchesDirectFit) {
  Rng rng(36);
  const auto x = ToEmbeddings(testing::RandomRows(rng, 200, 4, 2.0, 100.0));
  MomentAccumulator a, b;
  a.Add(x.Slice(0, 37).matrix());
  b.Add(x.Slice(37, 163).matrix());
  a.Merge(b);
  const GaussianMoments got = a.Moments(), want = FitGaussian(x);
  EXPECT_EQ(a.count(), 200u);
  EXPECT_LT((got.mean - want.mean).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((got.cov - want.cov).cwiseAbs().maxCoeff(), 1e-10);
}

}  // namespace
}  // namespace imgeval
