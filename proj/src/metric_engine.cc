// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/metric_engine.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "imgeval/consistency.h"
#include "imgeval/error.h"
#include "imgeval/io.h"

namespace imgeval {

std::string_view MetricKindName(MetricKind kind) {
  switch (kind) {
    case MetricKind::kFid:
      return "fid";
    case MetricKind::kPrdc:
      return "prdc";
    case MetricKind::kClipScore:
      return "clipscore";
    case MetricKind::kVqaScore:
      return "vqascore";
    case MetricKind::kDsg:
      return "dsg";
  }
  return "?";
}

MetricKind ParseMetricKind(std::string_view name) {
  for (auto kind : {MetricKind::kFid, MetricKind::kPrdc, MetricKind::kClipScore,
                    MetricKind::kVqaScore, MetricKind::kDsg}) {
    if (MetricKindName(kind) == name) return kind;
  }
  throw SpecError("unknown metric '" + std::string(name) +
                  "' (expected fid, prdc, clipscore, vqascore or dsg)");
}

bool IsMarginal(MetricKind kind) { return kind == MetricKind::kFid || kind == MetricKind::kPrdc; }

void MetricSpec::Validate() const {
  const std::string name(MetricKindName(kind));
  if (k) {
    if (kind != MetricKind::kPrdc) throw SpecError("k applies only to prdc, not " + name);
    if (*k < 1) throw SpecError("prdc k must be >= 1");
  }
  if (scale) {
    if (kind != MetricKind::kClipScore) throw SpecError("scale applies only to clipscore, not " + name);
    if (!(*scale > 0.0) || !std::isfinite(*scale)) throw SpecError("clipscore scale must be positive");
  }
  if (percentile) {
    if (IsMarginal(kind)) throw SpecError("percentile aggregation does not apply to " + name);
    if (!(*percentile >= 0.0 && *percentile <= 100.0)) {
      throw SpecError("percentile must be within [0, 100]");
    }
  }
}

double MetricSpec::EffectiveScale() const { return scale.value_or(kDefaultClipScale); }

std::vector<std::string> MetricSpec::OutputNames() const {
  switch (kind) {
    case MetricKind::kFid:
      return {"fid"};
    case MetricKind::kPrdc:
      return {"precision", "recall", "density", "coverage"};
    default:
      break;
  }
  std::string name(MetricKindName(kind));
  if (percentile) name += "_p" + FormatSig6(*percentile);
  return {name};
}

// ---------------------------------------------------------------------------

void MomentAccumulator::Add(const RowMatrix& rows) {
  if (rows.rows() == 0) return;
  MomentAccumulator batch;
  batch.n_ = static_cast<std::size_t>(rows.rows());
  batch.mean_ = rows.colwise().mean().transpose();
  Eigen::MatrixXd centered = rows.rowwise() - batch.mean_.transpose();
  batch.comoment_ = centered.transpose() * centered;
  Merge(batch);
}

void MomentAccumulator::Merge(const MomentAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_), nb = static_cast<double>(other.n_);
  const double n = na + nb;
  Eigen::VectorXd delta = other.mean_ - mean_;
  mean_ += delta * (nb / n);
  comoment_ += other.comoment_ + (delta * delta.transpose()) * (na * nb / n);
  n_ += other.n_;
}

GaussianMoments MomentAccumulator::Moments() const {
  if (n_ < 2) throw InsufficientSamples("moments need at least 2 rows");
  GaussianMoments m;
  m.n = n_;
  m.mean = mean_;
  Eigen::MatrixXd cov = comoment_ / static_cast<double>(n_ - 1);
  m.cov = 0.5 * (cov + cov.transpose());
  return m;
}

// ---------------------------------------------------------------------------

MetricState::MetricState(MetricSpec spec) : spec_(std::move(spec)) { spec_.Validate(); }

MetricState NewState(MetricSpec spec) { return MetricState(std::move(spec)); }

void MetricState::CheckRecords(std::size_t rows, std::span<const SampleRecord> records) const {
  if (records.empty() && !spec_.grouped) return;
  if (records.size() != rows) {
    throw ShapeError("batch has " + std::to_string(rows) + " rows but " +
                     std::to_string(records.size()) + " metadata records" +
                     (spec_.grouped ? " (grouped metrics need aligned metadata)" : ""));
  }
}

void MetricState::AddEmbeddings(Side& side, const EmbeddingSet& embeddings,
                                std::span<const SampleRecord> records) {
  CheckRecords(embeddings.n(), records);
  if (dim_ == 0) {
    dim_ = embeddings.d();
  } else if (embeddings.d() != dim_) {
    throw ShapeError("batch dimension " + std::to_string(embeddings.d()) +
                     " differs from earlier batches (" + std::to_string(dim_) + ")");
  }
  if (spec_.kind == MetricKind::kFid) {
    side.moments[std::string(kAllGroup)].Add(embeddings.matrix());
    if (spec_.grouped) {
      std::map<std::string, std::vector<std::size_t>> members;
      for (std::size_t i = 0; i < records.size(); ++i) {
        for (const auto& g : records[i].groups) members[g].push_back(i);
      }
      for (const auto& [g, idx] : members) side.moments[g].Add(embeddings.Select(idx).matrix());
    }
  } else {
    const auto& m = embeddings.matrix();
    side.rows.insert(side.rows.end(), m.data(), m.data() + m.size());
    for (std::size_t i = 0; i < embeddings.n(); ++i) {
      side.groups.push_back(spec_.grouped ? records[i].groups : std::vector<std::string>{});
    }
  }
}

void MetricState::UpdateReal(const EmbeddingSet& embeddings,
                             std::span<const SampleRecord> records) {
  if (!IsMarginal(spec_.kind)) {
    throw ContractError(std::string(MetricKindName(spec_.kind)) +
                        " is a conditional metric and takes no real references");
  }
  AddEmbeddings(real_, embeddings, records);
  real_count_ += embeddings.n();
}

void MetricState::UpdateGenerated(const EmbeddingSet& embeddings,
                                  std::span<const SampleRecord> records) {
  if (!IsMarginal(spec_.kind)) {
    throw ContractError(std::string(MetricKindName(spec_.kind)) +
                        " consumes per-sample scores, not generated embeddings");
  }
  AddEmbeddings(generated_, embeddings, records);
  generated_count_ += embeddings.n();
}

void MetricState::AppendScores(std::span<const double> scores,
                               std::span<const SampleRecord> records) {
  CheckRecords(scores.size(), records);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw DataError("non-finite score at batch row " + std::to_string(i));
    scores_.push_back(scores[i]);
    score_groups_.push_back(spec_.grouped ? records[i].groups : std::vector<std::string>{});
  }
  generated_count_ += scores.size();
}

void MetricState::UpdateScores(std::span<const double> scores,
                               std::span<const SampleRecord> records) {
  if (IsMarginal(spec_.kind)) {
    throw ContractError(std::string(MetricKindName(spec_.kind)) +
                        " is a marginal metric and needs embeddings, not scores");
  }
  if (spec_.kind == MetricKind::kVqaScore || spec_.kind == MetricKind::kDsg) {
    AppendScores(VqaScores(scores), records);  // both live in [0, 1]
  } else {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] < 0.0) throw DataError("negative CLIPScore at batch row " + std::to_string(i));
    }
    AppendScores(scores, records);
  }
}

void MetricState::UpdateClip(const EmbeddingSet& images, const EmbeddingSet& texts,
                             std::span<const SampleRecord> records) {
  if (spec_.kind != MetricKind::kClipScore) {
    throw ContractError(std::string(MetricKindName(spec_.kind)) + " does not take CLIP embeddings");
  }
  AppendScores(ClipScores(images, texts, spec_.EffectiveScale()), records);
}

void MetricState::UpdateDsg(std::span<const DsgAnswerRow> answers,
                            std::span<const SampleRecord> records) {
  if (spec_.kind != MetricKind::kDsg) {
    throw ContractError(std::string(MetricKindName(spec_.kind)) + " does not take DSG answers");
  }
  auto scores = DsgScores(answers, records);
  AppendScores(scores, records);
}

MetricState Merge(MetricState a, MetricState b) {
  if (!(a.spec_ == b.spec_)) throw SpecError("cannot merge states with different metric specs");
  if (a.dim_ != 0 && b.dim_ != 0 && a.dim_ != b.dim_) {
    throw ShapeError("cannot merge states with different embedding dimensions");
  }
  if (a.dim_ == 0) a.dim_ = b.dim_;
  auto merge_side = [](MetricState::Side& into, MetricState::Side& from) {
    for (auto& [g, acc] : from.moments) into.moments[g].Merge(acc);
    into.rows.insert(into.rows.end(), from.rows.begin(), from.rows.end());
    std::move(from.groups.begin(), from.groups.end(), std::back_inserter(into.groups));
  };
  merge_side(a.real_, b.real_);
  merge_side(a.generated_, b.generated_);
  a.scores_.insert(a.scores_.end(), b.scores_.begin(), b.scores_.end());
  std::move(b.score_groups_.begin(), b.score_groups_.end(), std::back_inserter(a.score_groups_));
  a.real_count_ += b.real_count_;
  a.generated_count_ += b.generated_count_;
  return a;
}

// ---------------------------------------------------------------------------

namespace {

std::string GroupLabel(std::string_view group) { return "group '" + std::string(group) + "'"; }

std::set<std::string> GroupsOf(const std::vector<std::vector<std::string>>& groups) {
  std::set<std::string> out;
  for (const auto& gs : groups) out.insert(gs.begin(), gs.end());
  return out;
}

}  // namespace

EmbeddingSet MetricState::GroupRows(const Side& side, std::string_view group,
                                    std::size_t count) const {
  RowMatrix m(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim_));
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < side.groups.size(); ++i) {
    const auto& gs = side.groups[i];
    if (group == kAllGroup || std::find(gs.begin(), gs.end(), group) != gs.end()) {
      m.row(at++) = Eigen::Map<const Eigen::RowVectorXd>(side.rows.data() + i * dim_,
                                                         static_cast<Eigen::Index>(dim_));
    }
  }
  return EmbeddingSet(std::move(m));
}

MetricReport MetricState::ComputeFid() const {
  std::set<std::string> groups{std::string(kAllGroup)};
  for (const auto& [g, _] : real_.moments) groups.insert(g);
  for (const auto& [g, _] : generated_.moments) groups.insert(g);
  MetricReport report;
  for (const auto& g : groups) {
    auto r = real_.moments.find(g);
    auto s = generated_.moments.find(g);
    const std::size_t nr = r == real_.moments.end() ? 0 : r->second.count();
    const std::size_t ng = s == generated_.moments.end() ? 0 : s->second.count();
    if (nr < 2 || ng < 2) {
      throw InsufficientSamples(GroupLabel(g) + " has " + std::to_string(nr) + " real and " +
                                std::to_string(ng) + " generated rows; fid needs at least 2 each");
    }
    report["fid"][g] = FrechetDistance(r->second.Moments(), s->second.Moments());
  }
  return report;
}

MetricReport MetricState::ComputePrdc(int workers) const {
  const int k = spec_.EffectiveK();
  std::set<std::string> groups{std::string(kAllGroup)};
  for (const auto& g : GroupsOf(real_.groups)) groups.insert(g);
  for (const auto& g : GroupsOf(generated_.groups)) groups.insert(g);

  auto count_in = [](const Side& side, const std::string& g) {
    if (g == kAllGroup) return side.groups.size();
    std::size_t c = 0;
    for (const auto& gs : side.groups) c += std::find(gs.begin(), gs.end(), g) != gs.end();
    return c;
  };

  MetricReport report;
  for (const auto& g : groups) {
    const std::size_t nr = count_in(real_, g), ng = count_in(generated_, g);
    const auto need = static_cast<std::size_t>(k) + 1;
    if (nr < need || ng < need) {
      throw InsufficientSamples(GroupLabel(g) + " has " + std::to_string(nr) + " real and " +
                                std::to_string(ng) + " generated rows; prdc with k=" +
                                std::to_string(k) + " needs at least " + std::to_string(need) +
                                " each");
    }
    PrdcResult r = imgeval::ComputePrdc(GroupRows(real_, g, nr), GroupRows(generated_, g, ng), k,
                                        workers);
    report["precision"][g] = r.precision;
    report["recall"][g] = r.recall;
    report["density"][g] = r.density;
    report["coverage"][g] = r.coverage;
  }
  return report;
}

MetricReport MetricState::ComputeConsistency() const {
  if (scores_.empty()) throw InsufficientSamples(GroupLabel(kAllGroup) + " has no scored samples");
  std::vector<SampleRecord> records(scores_.size());
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    records[i].index = i;
    records[i].groups = score_groups_[i];
  }
  ScoreTable table{ScoreKind::kClip, scores_};
  if (spec_.kind == MetricKind::kVqaScore) table.kind = ScoreKind::kVqa;
  if (spec_.kind == MetricKind::kDsg) table.kind = ScoreKind::kDsg;
  MetricReport report;
  report[spec_.OutputNames().front()] =
      AggregateScores(table, records, Aggregation{spec_.percentile});
  return report;
}

MetricReport MetricState::Compute(int workers) const {
  switch (spec_.kind) {
    case MetricKind::kFid:
      return ComputeFid();
    case MetricKind::kPrdc:
      return ComputePrdc(workers);
    default:
      return ComputeConsistency();
  }
}

}  // namespace imgeval
