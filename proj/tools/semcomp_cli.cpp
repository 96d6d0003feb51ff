#include "semcomp/errors.hpp"
#include "semcomp/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace semcomp;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "YAML experiment config");
  cmd->add_option("--seed", flags.seed, "global seed (overrides config)");
  cmd->add_option("--out", flags.out, "output directory (overrides config)");
  cmd->add_option("--jobs", flags.jobs, "worker threads (overrides config)");
}

// Flag > file > default.
ExperimentConfig resolve_config(const CommonFlags& flags) {
  ExperimentConfig cfg = flags.config.empty() ? ExperimentConfig{} : load_config(flags.config);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.out) cfg.output_dir = *flags.out;
  if (flags.jobs) cfg.jobs = *flags.jobs;
  return cfg;
}

int run_experiments(const CommonFlags& flags, std::optional<Experiment> only) {
  ExperimentConfig cfg = resolve_config(flags);
  if (only) {
    const bool with_synth = cfg.experiments.contains(Experiment::synth);
    cfg.experiments = {*only};
    if (with_synth) cfg.experiments.insert(Experiment::synth);
  }
  Pipeline pipeline(std::move(cfg));
  const RunManifest m = pipeline.run_all();
  std::cout << "wrote " << m.outputs.size() << " files to " << pipeline.config().output_dir.string()
            << " (config " << m.config_hash.substr(0, 12) << ")\n";
  for (const auto& s : m.skipped) {
    if (s.kind != "item") {
      std::cerr << "skipped " << s.kind << " " << s.name << " [" << s.model << "/" << s.dataset
                << "]: " << s.reason << '\n';
    }
  }
  return 0;
}

int run_validate(const CommonFlags& flags, const std::vector<std::string>& embeddings,
                 const std::vector<std::string>& benchmarks) {
  std::vector<std::string> emb_paths = embeddings;
  std::vector<std::string> bench_paths = benchmarks;
  std::vector<std::pair<std::string, std::optional<Source>>> bench_specs;
  std::vector<std::optional<Orientation>> bench_orient;
  for (const auto& b : bench_paths) {
    bench_specs.emplace_back(b, std::nullopt);
    bench_orient.emplace_back(std::nullopt);
  }
  if (!flags.config.empty()) {
    const ExperimentConfig cfg = resolve_config(flags);
    cfg.validate();
    std::cout << "ok config " << flags.config << '\n';
    for (const auto& m : cfg.models) emb_paths.push_back(m.path.string());
    for (const auto& d : cfg.datasets) {
      bench_specs.emplace_back(d.path.string(), d.source);
      bench_orient.push_back(d.orientation);
    }
  }
  if (emb_paths.empty() && bench_specs.empty()) {
    throw InputError("validate needs --config, --embeddings or --benchmark");
  }
  for (const auto& p : emb_paths) {
    const EmbeddingMatrix m = load_embeddings(p);
    m.validate();
    std::cout << "ok embeddings " << p << ": " << m.size() << " items, dim " << m.dim() << ", model "
              << m.model_id() << '\n';
  }
  for (std::size_t i = 0; i < bench_specs.size(); ++i) {
    const BenchmarkTable t = load_benchmark_csv(bench_specs[i].first, bench_specs[i].second, bench_orient[i]);
    t.validate();
    std::cout << "ok benchmark " << bench_specs[i].first << ": " << t.item_count() << " items, "
              << t.categories().size() << " categories\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compression-meaning trade-off analysis of embedding clusterings"};
  app.set_version_flag("--version", std::string(semcomp::kToolkitVersion));
  app.require_subcommand(1);

  CommonFlags flags;
  struct Sub {
    const char* name;
    const char* help;
    std::optional<Experiment> experiment;
  };
  const Sub subs[] = {{"align", "RQ1: k-means vs human categories (AMI/NMI/ARI)", Experiment::rq1},
                      {"typicality", "RQ2: similarity vs human typicality (Spearman)", Experiment::rq2},
                      {"tradeoff", "RQ3: complexity, distortion and L over a K sweep", Experiment::rq3},
                      {"synth", "write synthetic embedding and benchmark fixtures", Experiment::synth},
                      {"run", "every experiment listed in the config", std::nullopt}};
  std::vector<std::pair<CLI::App*, std::optional<Experiment>>> commands;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, flags);
    commands.emplace_back(cmd, s.experiment);
  }
  auto* validate = app.add_subcommand("validate", "check config, embedding and benchmark files");
  add_common(validate, flags);
  std::vector<std::string> embeddings, benchmarks;
  validate->add_option("--embeddings", embeddings, "cemb-jsonl file(s)");
  validate->add_option("--benchmark", benchmarks, "benchmark CSV file(s)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) return run_validate(flags, embeddings, benchmarks);
    for (const auto& [cmd, experiment] : commands) {
      if (cmd->parsed()) return run_experiments(flags, experiment);
    }
    return 1;
  } catch (const semcomp::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const semcomp::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
