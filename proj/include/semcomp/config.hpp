#pragma once

#include "semcomp/benchmark_data.hpp"
#include "semcomp/clustering.hpp"
#include "semcomp/synth_oracle.hpp"
#include "semcomp/tradeoff.hpp"
#include "semcomp/typicality.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace semcomp {

enum class Experiment { rq1, rq2, rq3, synth };
std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view text);

struct ModelSpec {
  std::string id;
  std::filesystem::path path;
  std::string family;
  double parameters = 0.0;  // parameter count, for plotting only
  bool unit_normalize = false;
};

struct DatasetSpec {
  std::string name;
  std::filesystem::path path;
  std::optional<Source> source;
  std::optional<Orientation> orientation;
  std::optional<std::filesystem::path> skip_list;
};

struct AlignmentSettings {
  std::size_t baseline_repetitions = 100;
  double coverage_floor = 0.8;
};

struct TypicalitySettings {
  std::vector<SimilarityMode> modes{SimilarityMode::to_category_label, SimilarityMode::to_centroid};
  bool per_category = true;
};

struct SynthSettings {
  MixtureSpec mixture{};
  double perturb_fraction = 0.2;  // applied to the labels written as the "human" benchmark
  std::string model_id = "synthetic";
  std::string family = "synthetic";
  double parameters = 1.0e6;
};

/// One run: inputs, analysis settings, and output location.
///
/// Relative paths in a config file resolve against the file's directory.
struct ExperimentConfig {
  std::vector<ModelSpec> models;
  std::vector<DatasetSpec> datasets;
  KMeansConfig kmeans{};  // k is set per job
  TradeoffConfig tradeoff{};
  AlignmentSettings alignment{};
  TypicalitySettings typicality{};
  SynthSettings synth{};
  std::filesystem::path output_dir = "semcomp_out";
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::set<Experiment> experiments{Experiment::rq1, Experiment::rq2, Experiment::rq3};

  /// Throws InputError when a selected experiment lacks inputs.
  void validate() const;
  /// Deterministic JSON rendering of every setting; hashed into the manifest.
  std::string canonical_json() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& yaml_text, const std::filesystem::path& base_dir);

}  // namespace semcomp
