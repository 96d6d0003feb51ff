#pragma once

#include "semcomp/config.hpp"
#include "semcomp/partition_metrics.hpp"
#include "semcomp/tradeoff.hpp"
#include "semcomp/typicality.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace semcomp {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

/// Something left out of an analysis, always listed in the manifest.
struct SkipRecord {
  std::string model;
  std::string dataset;
  std::string kind;  // "item", "category" or "dataset"
  std::string name;
  std::string reason;
};

struct OutputFile {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string config_hash;
  std::string toolkit_version{kToolkitVersion};
  std::vector<std::string> experiments;
  std::vector<OutputFile> outputs;
  std::vector<SkipRecord> skipped;
  std::vector<std::string> diagnostics;
  double seconds = 0.0;
};

struct AlignmentRow {
  std::string model_id;
  std::string family;
  double parameters = 0.0;
  std::string dataset;
  std::size_t n_items = 0;
  std::size_t k = 0;
  MeanStd mi, nmi, ami, ari;  // over restarts
  BaselineScores baseline;
};

struct CorrelationRow {
  std::string model_id;
  std::string family;
  std::string dataset;
  SimilarityMode mode;
  CorrelationResult result;
  std::string orientation;  // "canonical:higher_more_typical" or "raw:<source orientation>"
};

struct CurveSet {
  std::string model_id;
  std::string family;
  std::string dataset;
  TradeoffCurve curve;
};

/// Runs the selected experiments and writes every table, figure and the
/// manifest into config.output_dir. Output bytes depend only on the config
/// (including its seed), never on `jobs`.
class Pipeline {
 public:
  explicit Pipeline(ExperimentConfig config);
  ~Pipeline();
  Pipeline(Pipeline&&) noexcept;

  std::vector<AlignmentRow> run_rq1();
  std::vector<CorrelationRow> run_rq2();
  std::vector<CurveSet> run_rq3();
  /// Writes the synthetic world files and registers them as a model and dataset.
  void run_synth();

  /// Runs every experiment in config.experiments (synth first) and the manifest.
  RunManifest run_all();

  RunManifest emit_manifest();

  const ExperimentConfig& config() const noexcept { return config_; }
  const std::vector<SkipRecord>& skipped() const noexcept { return skipped_; }

 private:
  struct Job;
  const std::vector<Job>& jobs();
  void record_output(const std::filesystem::path& relative);
  void write_text(const std::filesystem::path& relative, const std::string& text);

  ExperimentConfig config_;
  std::string config_hash_;  // of the config as given, before synth adds inputs
  std::vector<std::filesystem::path> outputs_;
  std::vector<SkipRecord> skipped_;
  std::vector<std::string> diagnostics_;
  std::vector<Job> jobs_;
  bool jobs_ready_ = false;
  bool synth_done_ = false;
  double started_ = 0.0;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// File-name-safe version of an identifier.
std::string slug(const std::string& text);

}  // namespace semcomp
