// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.h"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "imgeval/scores.h"

namespace imgeval::testing {

namespace fs = std::filesystem;

double Rng::Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::Normal() {
  double u = Uniform();
  while (u <= 0.0) u = Uniform();
  const double v = Uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

std::size_t Rng::Below(std::size_t bound) { return static_cast<std::size_t>(Uniform() * bound); }

int Rng::Between(int lo, int hi) { return lo + static_cast<int>(Below(static_cast<std::size_t>(hi - lo + 1))); }

std::vector<std::vector<double>> RandomRows(Rng& rng, std::size_t n, std::size_t d, double scale,
                                            double offset) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& row : rows) {
    for (auto& v : row) v = offset + scale * rng.Normal();
  }
  return rows;
}

EmbeddingSet ToEmbeddings(const std::vector<std::vector<double>>& rows) {
  std::vector<double> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return EmbeddingSet::FromValues(rows.size(), rows.empty() ? 0 : rows[0].size(), flat);
}

std::vector<std::vector<double>> ToRows(const EmbeddingSet& e) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < e.n(); ++i) {
    auto r = e.row(i);
    rows.emplace_back(r.begin(), r.end());
  }
  return rows;
}

fs::path MakeTempDir(std::string_view name) {
  static std::atomic<int> counter{0};
  fs::path dir = fs::temp_directory_path() /
                 ("imgeval_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
                  "_" + std::string(name));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void WriteText(const fs::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

namespace {

constexpr std::size_t kDim = 8;
constexpr std::size_t kClipDim = 6;
const char* const kRegions[] = {"africa", "americas", "east_asia"};
const char* const kObjects[] = {"bag", "car", "tree"};

struct Quality {
  double shift = 0.0;    // mean offset from the real distribution
  double spread = 1.0;   // noise scale relative to real
  double neglect = 0.0;  // extra shift for the last region
  double align = 0.8;    // image-text agreement
  double vqa = 0.0;      // logit offset for VQAScore
  bool replicate = false;  // generated embeddings are a copy of the real set
};

std::vector<SampleRecord> Records(std::size_t n, std::string_view dataset, bool grouped) {
  std::vector<SampleRecord> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].index = i;
    out[i].prompt = "a photo of a " + std::string(kObjects[(i / 3) % 3]) + " (" + std::string(dataset) + ")";
    if (grouped) {
      out[i].groups = {kRegions[i % 3]};
      out[i].class_label = kObjects[(i / 3) % 3];
    }
  }
  return out;
}

std::vector<std::vector<double>> Embed(Rng& rng, std::size_t n, const Quality& q) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(kDim));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t region = i % 3;
    for (std::size_t d = 0; d < kDim; ++d) {
      double center = d == 0 ? 1.5 * static_cast<double>(region) : 0.0;
      center += q.shift / std::sqrt(static_cast<double>(kDim));
      if (region == 2 && d == 1) center += q.neglect;
      rows[i][d] = center + q.spread * rng.Normal();
    }
  }
  return rows;
}

struct DatasetFiles {
  std::string real, real_metadata, clip_text;
};

DatasetFiles WriteDataset(const fs::path& dir, const std::string& name, std::size_t n, bool grouped,
                          std::uint64_t seed) {
  Rng rng(seed);
  DatasetFiles f{name + "_real.npy", name + "_real_meta.jsonl", name + "_clip_text.npy"};
  WriteEmbeddings(ToEmbeddings(Embed(rng, n, Quality{})), dir / f.real);
  WriteMetadata(Records(n, name, grouped), dir / f.real_metadata);
  WriteEmbeddings(ToEmbeddings(RandomRows(rng, n, kClipDim)), dir / f.clip_text);
  return f;
}

struct RunFiles {
  std::string generated, metadata, clip_image, vqa_scores;
};

RunFiles WriteRun(const fs::path& dir, const std::string& stem, const std::string& dataset,
                  std::size_t n, bool grouped, const Quality& q, std::uint64_t seed) {
  Rng rng(seed);
  RunFiles f{stem + "_gen.npy", stem + "_meta.jsonl", stem + "_clip_image.npy", stem + "_vqa.csv"};
  if (q.replicate) {
    fs::copy_file(dir / (dataset + "_real.npy"), dir / f.generated);
  } else {
    WriteEmbeddings(ToEmbeddings(Embed(rng, n, q)), dir / f.generated);
  }
  WriteMetadata(Records(n, dataset, grouped), dir / f.metadata);
  const EmbeddingSet text = LoadEmbeddings(dir / (dataset + "_clip_text.npy"));
  std::vector<std::vector<double>> image(n, std::vector<double>(kClipDim));
  std::vector<double> vqa(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < kClipDim; ++d) {
      image[i][d] = q.align * text.row(i)[d] + (1.0 - q.align) * rng.Normal();
    }
    vqa[i] = 1.0 / (1.0 + std::exp(-(q.vqa + 0.5 * rng.Normal())));
  }
  WriteEmbeddings(ToEmbeddings(image), dir / f.clip_image);
  WriteText(dir / f.vqa_scores, EncodeScoreCsv(vqa));
  return f;
}

void AppendRun(std::ostringstream& cfg, const std::string& name, const std::string& model,
               const std::string& dataset, const DatasetFiles& d, const RunFiles& r,
               const std::string& hp_line = "") {
  cfg << "\n[runs." << name << "]\n"
      << "model = \"" << model << "\"\n"
      << "dataset = \"" << dataset << "\"\n"
      << "real = \"" << d.real << "\"\n"
      << "real_metadata = \"" << d.real_metadata << "\"\n"
      << "generated = \"" << r.generated << "\"\n"
      << "metadata = \"" << r.metadata << "\"\n"
      << "clip_image = \"" << r.clip_image << "\"\n"
      << "clip_text = \"" << d.clip_text << "\"\n"
      << "vqa_scores = \"" << r.vqa_scores << "\"\n";
  if (!hp_line.empty()) cfg << hp_line << "\n";
}

}  // namespace

fs::path WriteExerciseFixture(const fs::path& dir, cli::ExerciseKind kind) {
  fs::create_directories(dir);
  std::ostringstream cfg;
  cfg << "# synthetic " << cli::ExerciseKindName(kind) << " fixture\n"
      << "kind = \"" << cli::ExerciseKindName(kind) << "\"\n"
      << "seed = 7\n"
      << "out = \"out\"\n";
  switch (kind) {
    case cli::ExerciseKind::kTradeoffs: {
      cfg << "axis = \"guidance_scale\"\n";
      const auto d = WriteDataset(dir, "coco", 400, false, 11);
      const double scales[] = {2.0, 5.0, 7.5};
      const char* const spellings[] = {"2.0", "5.0", "7.5"};
      for (int i = 0; i < 3; ++i) {
        const double g = scales[i];
        Quality q{0.9 - 0.1 * g, 1.25 - 0.07 * g, 0.0, 0.5 + 0.05 * g, -0.5 + 0.3 * g};
        const std::string stem = std::string("flow_g") + std::to_string(i);
        const auto r = WriteRun(dir, stem, "coco", 400, false, q, 100 + i);
        AppendRun(cfg, stem, "flow", "coco", d, r, std::string("hp.guidance_scale = ") + spellings[i]);
      }
      break;
    }
    case cli::ExerciseKind::kGroupRepresentation: {
      const auto d = WriteDataset(dir, "geode", 360, true, 21);
      AppendRun(cfg, "balanced", "balanced", "geode", d,
                WriteRun(dir, "balanced", "geode", 360, true, Quality{0.2, 1.0, 0.0, 0.8, 1.0}, 201));
      AppendRun(cfg, "skewed", "skewed", "geode", d,
                WriteRun(dir, "skewed", "geode", 360, true, Quality{0.1, 0.9, 2.5, 0.7, 0.5}, 202));
      break;
    }
    case cli::ExerciseKind::kRankingRobustness: {
      cfg << "metrics = [\"fid\", \"precision\", \"coverage\", \"clipscore\", \"vqascore\"]\n";
      const Quality models[] = {{0.0, 1.0, 0.0, 0.9, 1.5, true}, {0.6, 0.8, 0.0, 0.7, 0.8}, {1.2, 1.3, 0.0, 0.5, 0.2}};
      const char* const names[] = {"model-a", "model-b", "model-c"};
      const char* const datasets[] = {"coco", "imagenet"};
      for (int di = 0; di < 2; ++di) {
        const auto d = WriteDataset(dir, datasets[di], 300, false, 31 + di);
        for (int m = 0; m < 3; ++m) {
          const std::string stem = std::string(names[m]) + "_" + datasets[di];
          const std::string run = std::string(1, static_cast<char>('a' + m)) + "_" + datasets[di];
          AppendRun(cfg, run, names[m], datasets[di], d,
                    WriteRun(dir, stem, datasets[di], 300, false, models[m], 300 + 10 * di + m));
        }
      }
      break;
    }
    case cli::ExerciseKind::kPromptTypes: {
      const char* const datasets[] = {"long_captions", "short_prompts", "compositional"};
      const std::size_t sizes[] = {200, 150, 120};
      const Quality models[] = {{0.2, 1.0, 0.0, 0.85, 1.0}, {0.7, 0.9, 0.0, 0.6, 0.4}};
      const char* const names[] = {"model-a", "model-b"};
      for (int di = 0; di < 3; ++di) {
        const auto d = WriteDataset(dir, datasets[di], sizes[di], false, 41 + di);
        for (int m = 0; m < 2; ++m) {
          const std::string stem = std::string(names[m]) + "_" + datasets[di];
          AppendRun(cfg, stem, names[m], datasets[di], d,
                    WriteRun(dir, stem, datasets[di], sizes[di], false, models[m], 400 + 10 * di + m));
        }
      }
      break;
    }
  }
  const fs::path path = dir / "config.toml";
  WriteText(path, cfg.str());
  return path;
}

void WriteUnitSquareFixture(const fs::path& dir) {
  fs::create_directories(dir);
  WriteEmbeddings(ToEmbeddings({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), dir / "real.npy");
  WriteEmbeddings(ToEmbeddings({{0.1, 0}, {2, 2}}), dir / "gen.npy");
}

}  // namespace imgeval::testing
