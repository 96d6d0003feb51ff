#include "semcomp/pipeline.hpp"

#include "semcomp/csv.hpp"
#include "semcomp/errors.hpp"
#include "semcomp/random.hpp"
#include "semcomp/svg.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace semcomp {

namespace fs = std::filesystem;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_double(*v) : "undefined";
}

MeanStd mean_std_of(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(xs.size()));
  return out;
}

// Families in first-appearance order across the models list.
std::vector<std::string> families_of(const std::vector<ModelSpec>& models) {
  std::vector<std::string> out;
  for (const auto& m : models) {
    if (std::find(out.begin(), out.end(), m.family) == out.end()) out.push_back(m.family);
  }
  return out;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw InvariantError("SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

std::string slug(const std::string& text) {
  std::string out;
  for (char c : text) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

struct Pipeline::Job {
  const ModelSpec* model;
  const DatasetSpec* dataset;
  std::shared_ptr<const EmbeddingMatrix> full;  // every row of the model file
  BenchmarkTable table;                         // rows left after the skip-list
  Partition human;
  EmbeddingMatrix restricted;  // rows of `human`'s items, same order
};

Pipeline::Pipeline(ExperimentConfig config) : config_(std::move(config)), started_(now_seconds()) {
  config_.validate();
  config_hash_ = sha256_hex(config_.canonical_json());
}

Pipeline::~Pipeline() = default;
Pipeline::Pipeline(Pipeline&&) noexcept = default;

void Pipeline::record_output(const fs::path& relative) {
  if (std::find(outputs_.begin(), outputs_.end(), relative) == outputs_.end()) {
    outputs_.push_back(relative);
  }
}

void Pipeline::write_text(const fs::path& relative, const std::string& text) {
  const fs::path full = config_.output_dir / relative;
  fs::create_directories(full.parent_path());
  std::ofstream out(full, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + full.string());
  out << text;
  if (!out) throw InputError("write failed for " + full.string());
  record_output(relative);
}

void Pipeline::run_synth() {
  if (synth_done_) return;
  const auto& s = config_.synth;
  MixtureSpec spec = s.mixture;
  spec.seed = mix_seed(config_.seed) ^ s.mixture.seed;
  const SyntheticWorld world = generate_mixture(spec);
  const Partition human = perturb_labels(world.truth, s.perturb_fraction, mix_seed(spec.seed + 1));

  std::vector<BenchmarkRow> rows = world.table.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].category = human.name(human.label(i));
  const BenchmarkTable table(std::move(rows));

  const fs::path dir = "synth";
  fs::create_directories(config_.output_dir / dir);
  const fs::path emb_rel = dir / (slug(s.model_id) + ".cemb.jsonl");
  save_embeddings(world_embedding_file(world, s.model_id), config_.output_dir / emb_rel);
  record_output(emb_rel);
  const fs::path bench_rel = dir / "benchmark.csv";
  save_benchmark_csv(table, config_.output_dir / bench_rel);
  record_output(bench_rel);
  const fs::path truth_rel = dir / "truth.csv";
  write_partition_csv(world.truth, config_.output_dir / truth_rel);
  record_output(truth_rel);

  config_.models.push_back({s.model_id, config_.output_dir / emb_rel, s.family, s.parameters, false});
  config_.datasets.push_back({"synthetic", config_.output_dir / bench_rel, Source::synthetic,
                              Orientation::higher_more_typical, std::nullopt});
  jobs_ready_ = false;
  jobs_.clear();
  synth_done_ = true;
}

const std::vector<Pipeline::Job>& Pipeline::jobs() {
  if (jobs_ready_) return jobs_;
  jobs_.clear();
  skipped_.clear();
  for (const auto& model : config_.models) {
    auto full = std::make_shared<const EmbeddingMatrix>(load_embeddings(model.path, model.unit_normalize));
    for (const auto& dataset : config_.datasets) {
      const BenchmarkTable table = load_benchmark_csv(dataset.path, dataset.source, dataset.orientation);
      std::set<std::string> listed;
      if (dataset.skip_list) listed = load_skip_list(*dataset.skip_list);

      std::set<std::string> skip;
      std::size_t covered = 0;
      std::set<std::string> noted;
      for (const auto& row : table.rows()) {
        if (listed.contains(row.item)) {
          skip.insert(row.item);
          if (noted.insert(row.item).second) {
            skipped_.push_back({model.id, dataset.name, "item", row.item, "listed in skip-list"});
          }
        } else if (!full->contains(row.item)) {
          skip.insert(row.item);
          if (noted.insert(row.item).second) {
            skipped_.push_back({model.id, dataset.name, "item", row.item, "no embedding"});
          }
        } else {
          ++covered;
        }
      }
      const double coverage =
          table.empty() ? 0.0 : static_cast<double>(covered) / static_cast<double>(table.size());
      if (coverage < config_.alignment.coverage_floor) {
        skipped_.push_back({model.id, dataset.name, "dataset", dataset.name,
                            "coverage " + format_double(coverage) + " below floor " +
                                format_double(config_.alignment.coverage_floor)});
        continue;
      }
      BenchmarkTable kept = table.without(skip);
      for (const auto& c : table.categories()) {
        if (std::find(kept.categories().begin(), kept.categories().end(), c) == kept.categories().end()) {
          skipped_.push_back({model.id, dataset.name, "category", c, "no covered items"});
        }
      }
      HumanPartition hp = human_partition(kept, *full);
      if (hp.partition.size() < 2 || hp.partition.num_clusters() < 1) {
        skipped_.push_back({model.id, dataset.name, "dataset", dataset.name, "fewer than 2 covered items"});
        continue;
      }
      EmbeddingMatrix restricted = full->restrict_to(hp.partition.items());
      jobs_.push_back(Job{&model, &dataset, full, std::move(kept), std::move(hp.partition),
                          std::move(restricted)});
    }
  }
  jobs_ready_ = true;
  return jobs_;
}

std::vector<AlignmentRow> Pipeline::run_rq1() {
  std::vector<AlignmentRow> rows;
  for (const auto& job : jobs()) {
    KMeansConfig cfg = config_.kmeans;
    cfg.k = job.human.num_clusters();
    cfg.seed = config_.seed;
    const auto results = kmeans(job.restricted, cfg, config_.jobs);

    std::vector<double> mi, nmi, ami, ari;
    for (const auto& r : results) {
      const auto s = alignment_scores(job.human, r.partition);
      mi.push_back(s.mi);
      nmi.push_back(s.nmi);
      ami.push_back(s.ami);
      ari.push_back(s.ari);
    }
    const auto& best = best_of_restarts(results);
    AlignmentRow row;
    row.model_id = job.model->id;
    row.family = job.model->family;
    row.parameters = job.model->parameters;
    row.dataset = job.dataset->name;
    row.n_items = job.human.size();
    row.k = cfg.k;
    row.mi = mean_std_of(mi);
    row.nmi = mean_std_of(nmi);
    row.ami = mean_std_of(ami);
    row.ari = mean_std_of(ari);
    row.baseline = random_baseline(job.human, best.partition, config_.alignment.baseline_repetitions,
                                   config_.seed);
    rows.push_back(row);

    fs::path rel = fs::path("rq1") / ("partition_" + slug(row.model_id) + "_" + slug(row.dataset) + ".csv");
    fs::create_directories(config_.output_dir / rel.parent_path());
    write_partition_csv(best.partition, config_.output_dir / rel);
    record_output(rel);
  }

  CsvWriter csv({"model_id", "family", "parameters", "dataset", "n_items", "k", "metric", "mean", "std",
                 "baseline_mean", "baseline_std", "normalizer", "log_base"});
  for (const auto& r : rows) {
    const std::pair<const char*, std::pair<MeanStd, MeanStd>> metrics[] = {
        {"ami", {r.ami, r.baseline.ami}},
        {"nmi", {r.nmi, r.baseline.nmi}},
        {"ari", {r.ari, r.baseline.ari}},
        {"mi", {r.mi, r.baseline.mi}}};
    for (const auto& [name, values] : metrics) {
      csv.row({r.model_id, r.family, format_double(r.parameters), r.dataset, std::to_string(r.n_items),
               std::to_string(r.k), name, format_double(values.first.mean), format_double(values.first.std),
               format_double(values.second.mean), format_double(values.second.std),
               std::string(kNormalizerVariant), std::to_string(kLogBase)});
    }
  }
  write_text("rq1_alignment.csv", csv.str());

  // AMI averaged over datasets, per model, against parameter count.
  CsvWriter fig({"model_id", "family", "parameters", "mean_ami", "mean_baseline_ami", "datasets"});
  std::map<std::string, svg::Series> by_family;
  svg::Series baseline{"random baseline", {}, false, svg::Marker::triangle, "#555555"};
  for (const auto& model : config_.models) {
    double sum = 0.0, base = 0.0;
    std::size_t count = 0;
    for (const auto& r : rows) {
      if (r.model_id != model.id) continue;
      sum += r.ami.mean;
      base += r.baseline.ami.mean;
      ++count;
    }
    if (count == 0) continue;
    const double mean = sum / static_cast<double>(count);
    const double base_mean = base / static_cast<double>(count);
    fig.row({model.id, model.family, format_double(model.parameters), format_double(mean),
             format_double(base_mean), std::to_string(count)});
    auto& series = by_family[model.family];
    series.name = model.family;
    series.draw_line = false;
    series.points.emplace_back(model.parameters, mean);
    baseline.points.emplace_back(model.parameters, base_mean);
  }
  write_text("fig1_ami_vs_params.csv", fig.str());
  svg::XYChart chart;
  chart.title = "AMI between human categories and k-means clusters";
  chart.x_label = "model parameters (log scale)";
  chart.y_label = "AMI (mean over datasets and restarts)";
  chart.log_x = true;
  chart.description = "x-axis: log10 parameter count from config metadata; models without a positive count are not drawn";
  for (const auto& family : families_of(config_.models)) {
    if (auto it = by_family.find(family); it != by_family.end()) chart.series.push_back(it->second);
  }
  chart.series.push_back(baseline);
  write_text("fig1_ami_vs_params.svg", svg::render(chart));
  return rows;
}

std::vector<CorrelationRow> Pipeline::run_rq2() {
  std::vector<CorrelationRow> rows;
  for (const auto& job : jobs()) {
    std::string raw_orientation;
    for (const auto& r : job.table.rows()) {
      const std::string o(to_string(r.orientation));
      if (raw_orientation.empty()) raw_orientation = o;
      else if (raw_orientation != o) raw_orientation = "mixed";
    }
    for (auto mode : config_.typicality.modes) {
      SimilaritySeries series;
      try {
        series = mode == SimilarityMode::to_category_label
                     ? item_to_label_similarity(*job.full, job.table)
                     : item_to_centroid_similarity(job.restricted, job.human);
      } catch (const InputError& e) {
        diagnostics_.push_back(job.model->id + "/" + job.dataset->name + "/" +
                               std::string(to_string(mode)) + ": " + e.what());
        continue;
      }
      for (const auto& note : series.skipped) {
        diagnostics_.push_back(job.model->id + "/" + job.dataset->name + "/" +
                               std::string(to_string(mode)) + ": " + note);
      }
      std::vector<CorrelationScope> scopes{CorrelationScope::pooled};
      if (config_.typicality.per_category) scopes.push_back(CorrelationScope::per_category);
      for (auto scope : scopes) {
        std::vector<std::string> notes;
        for (auto& result : typicality_correlations(series, job.table, scope, &notes)) {
          CorrelationRow row{job.model->id, job.model->family, job.dataset->name, mode, result, ""};
          row.orientation = result.scale == TypicalityScale::canonical
                                ? "canonical:higher_more_typical"
                                : "raw:" + raw_orientation;
          rows.push_back(std::move(row));
        }
        for (const auto& note : notes) {
          diagnostics_.push_back(job.model->id + "/" + job.dataset->name + "/" +
                                 std::string(to_string(mode)) + ": " + note);
        }
      }
    }
  }

  CsvWriter csv({"model_id", "dataset", "scope", "mode", "orientation", "rho", "p_value", "n"});
  for (const auto& r : rows) {
    const std::string scope = r.result.scope == CorrelationScope::pooled
                                  ? std::string("pooled")
                                  : "per_category:" + r.result.category;
    csv.row({r.model_id, r.dataset, scope, std::string(to_string(r.mode)), r.orientation,
             optional_number(r.result.rho), optional_number(r.result.p_value), std::to_string(r.result.n)});
  }
  write_text("rq2_correlations.csv", csv.str());

  // Mean pooled canonical rho per family and dataset, one chart per mode.
  const auto families = families_of(config_.models);
  for (auto mode : config_.typicality.modes) {
    CsvWriter data({"mode", "dataset", "family", "mean_rho", "models", "significant"});
    svg::BarChart chart;
    chart.title = "Mean Spearman rho, similarity vs typicality (" + std::string(to_string(mode)) + ")";
    chart.y_label = "mean rho (canonical: higher = more typical)";
    chart.series_names = families;
    chart.description = "significant counts models with p < 0.05";
    for (const auto& dataset : config_.datasets) {
      svg::BarGroup group{dataset.name, {}};
      for (const auto& family : families) {
        double sum = 0.0;
        std::size_t count = 0, significant = 0;
        for (const auto& r : rows) {
          if (r.mode != mode || r.dataset != dataset.name || r.family != family ||
              r.result.scope != CorrelationScope::pooled || r.result.scale != TypicalityScale::canonical ||
              !r.result.defined()) {
            continue;
          }
          sum += *r.result.rho;
          ++count;
          if (r.result.p_value && *r.result.p_value < 0.05) ++significant;
        }
        const double mean = count ? sum / static_cast<double>(count) : std::nan("");
        group.values.push_back(mean);
        if (count) {
          data.row({std::string(to_string(mode)), dataset.name, family, format_double(mean),
                    std::to_string(count), std::to_string(significant)});
        }
      }
      chart.groups.push_back(std::move(group));
    }
    write_text("rq2_mean_rho_" + std::string(to_string(mode)) + ".csv", data.str());
    write_text("rq2_mean_rho_" + std::string(to_string(mode)) + ".svg", svg::render(chart));
  }
  return rows;
}

std::vector<CurveSet> Pipeline::run_rq3() {
  std::vector<CurveSet> sets;
  for (const auto& job : jobs()) {
    TradeoffConfig tcfg = config_.tradeoff;
    const std::size_t n = job.restricted.size();
    if (tcfg.k_sweep.empty()) tcfg.k_sweep = {2, 4, 8, 16, 32, 64, job.human.num_clusters()};
    std::vector<std::size_t> ks;
    for (std::size_t k : tcfg.k_sweep) {
      if (k <= n) {
        ks.push_back(k);
      } else {
        diagnostics_.push_back(job.model->id + "/" + job.dataset->name + ": K=" + std::to_string(k) +
                               " exceeds " + std::to_string(n) + " items, dropped from sweep");
      }
    }
    if (ks.empty()) {
      skipped_.push_back({job.model->id, job.dataset->name, "dataset", job.dataset->name,
                          "no K in k_sweep fits the item count"});
      continue;
    }
    tcfg.k_sweep = ks;
    KMeansConfig km = config_.kmeans;
    km.seed = config_.seed;
    CurveSet set{job.model->id, job.model->family, job.dataset->name,
                 sweep(job.restricted, job.human, tcfg, km, config_.jobs)};
    write_text(fs::path("rq3") / ("curve_" + slug(set.model_id) + "_" + slug(set.dataset) + ".csv"),
               curve_csv(set.curve));
    sets.push_back(std::move(set));
  }

  const auto families = families_of(config_.models);
  for (const auto& dataset : config_.datasets) {
    CsvWriter data({"dataset", "family", "source", "K", "mean_cluster_entropy", "l_value", "models"});
    svg::XYChart entropy_chart, l_chart;
    entropy_chart.title = "Mean cluster entropy vs K (" + dataset.name + ")";
    entropy_chart.y_label = "mean cluster entropy S_alpha (bits)";
    l_chart.title = "L = complexity + beta * distortion vs K (" + dataset.name + ")";
    l_chart.y_label = "L";
    entropy_chart.x_label = l_chart.x_label = "number of clusters K";
    entropy_chart.description = l_chart.description =
        "lines: best-of-restarts k-means per model family; stars: human categories at their fixed K";
    bool any = false;
    for (std::size_t f = 0; f < families.size(); ++f) {
      // (source, K) -> sums over the family's models
      std::map<std::pair<int, std::size_t>, std::array<double, 3>> acc;
      for (const auto& set : sets) {
        if (set.dataset != dataset.name || set.family != families[f]) continue;
        for (const auto& r : set.curve.rows) {
          if (r.source == CurveSource::kmeans_mean) continue;
          auto& a = acc[{static_cast<int>(r.source), r.k}];
          a[0] += r.mean_cluster_entropy;
          a[1] += r.l_value;
          a[2] += 1.0;
        }
      }
      if (acc.empty()) continue;
      any = true;
      svg::Series ent{families[f], {}, true, svg::Marker::circle, ""};
      svg::Series lv{families[f], {}, true, svg::Marker::circle, ""};
      svg::Series ent_h{families[f] + " human", {}, false, svg::Marker::star, ""};
      svg::Series lv_h{families[f] + " human", {}, false, svg::Marker::star, ""};
      for (const auto& [key, a] : acc) {
        const double e = a[0] / a[2], l = a[1] / a[2];
        const auto source = static_cast<CurveSource>(key.first);
        data.row({dataset.name, families[f], std::string(to_string(source)), std::to_string(key.second),
                  format_double(e), format_double(l), format_double(a[2])});
        auto& es = source == CurveSource::human ? ent_h : ent;
        auto& ls = source == CurveSource::human ? lv_h : lv;
        es.points.emplace_back(static_cast<double>(key.second), e);
        ls.points.emplace_back(static_cast<double>(key.second), l);
      }
      const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
      for (auto* s : {&ent, &lv, &ent_h, &lv_h}) s->color = palette[f % 10];
      entropy_chart.series.push_back(ent);
      entropy_chart.series.push_back(ent_h);
      l_chart.series.push_back(lv);
      l_chart.series.push_back(lv_h);
    }
    if (!any) continue;
    write_text("fig2_" + slug(dataset.name) + ".csv", data.str());
    write_text("fig2_entropy_" + slug(dataset.name) + ".svg", svg::render(entropy_chart));
    write_text("fig2_l_" + slug(dataset.name) + ".svg", svg::render(l_chart));
  }
  return sets;
}

RunManifest Pipeline::run_all() {
  fs::create_directories(config_.output_dir);
  if (config_.experiments.contains(Experiment::synth)) run_synth();
  if (config_.experiments.contains(Experiment::rq1)) run_rq1();
  if (config_.experiments.contains(Experiment::rq2)) run_rq2();
  if (config_.experiments.contains(Experiment::rq3)) run_rq3();
  return emit_manifest();
}

RunManifest Pipeline::emit_manifest() {
  RunManifest m;
  m.config_hash = config_hash_;
  for (auto e : config_.experiments) m.experiments.emplace_back(to_string(e));
  std::vector<fs::path> sorted = outputs_;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& rel : sorted) {
    const fs::path full = config_.output_dir / rel;
    m.outputs.push_back({rel.generic_string(), sha256_file(full), fs::file_size(full)});
  }
  m.skipped = skipped_;
  m.diagnostics = diagnostics_;
  m.seconds = now_seconds() - started_;

  nlohmann::ordered_json j;
  j["toolkit"] = "semcomp";
  j["toolkit_version"] = m.toolkit_version;
  j["config_hash"] = m.config_hash;
  j["seed"] = config_.seed;
  j["experiments"] = m.experiments;
  j["metadata"] = {{"log_base", kLogBase},
                   {"mi_normalizer", kNormalizerVariant},
                   {"entropy_alpha", config_.tradeoff.alpha},
                   {"kernel", "gaussian"},
                   {"bandwidth", config_.tradeoff.bandwidth.describe()},
                   {"beta", config_.tradeoff.beta},
                   {"fig1_x_axis", "log10(parameters)"}};
  auto& outs = j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& o : m.outputs) outs.push_back({{"path", o.path}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  auto& skips = j["skipped"] = nlohmann::ordered_json::array();
  for (const auto& s : m.skipped) {
    skips.push_back({{"model", s.model}, {"dataset", s.dataset}, {"kind", s.kind}, {"name", s.name},
                     {"reason", s.reason}});
  }
  j["diagnostics"] = m.diagnostics;
  j["timing_seconds"] = m.seconds;

  fs::create_directories(config_.output_dir);
  std::ofstream out(config_.output_dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write manifest in " + config_.output_dir.string());
  out << j.dump(2) << '\n';
  return m;
}

}  // namespace semcomp
