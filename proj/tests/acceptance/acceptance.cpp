// Runs every primary acceptance criterion at its tolerance and runtime limit
// and prints one PASS/FAIL line per criterion. Exit status is nonzero when any
// criterion fails.

#include "semcomp/benchmark_data.hpp"
#include "semcomp/clustering.hpp"
#include "semcomp/csv.hpp"
#include "semcomp/errors.hpp"
#include "semcomp/partition_metrics.hpp"
#include "semcomp/pipeline.hpp"
#include "semcomp/synth_oracle.hpp"
#include "semcomp/tradeoff.hpp"
#include "semcomp/typicality.hpp"
#include "test_support.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace semcomp;
using namespace semcomp::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

std::vector<long long> to_ll(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

// Random labels renumbered to first-appearance order.
std::vector<long long> random_rgs(std::size_t n, std::size_t max_k, Rng& rng) {
  return to_ll(Partition::from_ints(random_labels(n, max_k, rng)).labels());
}

Outcome appendix_a_endpoints() {
  const double tol = 1e-9;
  const auto emb = gaussian_matrix(64, 8, 2024);
  const double var = oracle::total_variance(emb.vectors());
  std::vector<long long> singletons(64), one(64, 0);
  std::iota(singletons.begin(), singletons.end(), 0);
  double worst = 0.0;
  for (double beta : {0.0, 0.5, 1.0, 2.0}) {
    const double ln = l_objective(emb, Partition::from_ints(emb.items(), singletons), beta).l_value;
    const double l1 = l_objective(emb, Partition::from_ints(emb.items(), one), beta).l_value;
    worst = std::max({worst, std::abs(ln - std::log2(64.0)), std::abs(l1 - beta * var)});
  }
  // The sweep endpoints agree with the direct evaluation.
  TradeoffConfig cfg;
  cfg.k_sweep = {1, 64};
  KMeansConfig km;
  km.restarts = 3;
  for (const auto& r : sweep(emb, Partition::from_ints(emb.items(), one), cfg, km).rows) {
    if (r.source != CurveSource::kmeans_best) continue;
    const double expected = r.k == 1 ? cfg.beta * var : std::log2(64.0);
    worst = std::max(worst, std::abs(r.l_value - expected));
  }
  return {worst < tol, "max |error| " + fmt(worst) + " (tol 1e-9)"};
}

Outcome complexity_is_item_label_mi() {
  Rng rng(mix_seed(11));
  std::uniform_int_distribution<std::size_t> size(2, 50);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = size(rng);
    const auto labels = random_labels(n, 1 + n / 3 + static_cast<std::size_t>(t % 7), rng);
    std::vector<long long> identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    const double mi = oracle::mutual_information(identity, labels);
    const double lib_table = alignment_scores(Partition::from_ints(identity), Partition::from_ints(labels)).mi;
    const double c = complexity(Partition::from_ints(labels));
    worst = std::max({worst, std::abs(c - mi), std::abs(c - lib_table)});
  }
  return {worst < 1e-9, "200 partitions, max |error| " + fmt(worst)};
}

Outcome metric_oracles() {
  Rng rng(mix_seed(12));
  std::uniform_int_distribution<std::size_t> size(2, 8);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = size(rng);
    const auto u = random_rgs(n, n, rng);
    const auto v = random_rgs(n, n, rng);
    const auto s = alignment_scores(Partition::from_ints(u), Partition::from_ints(v));
    worst = std::max({worst, std::abs(s.ami - oracle::ami(u, v)), std::abs(s.nmi - oracle::nmi(u, v)),
                      std::abs(s.ari - oracle::ari(u, v))});
  }

  // Exact E[MI] against a Monte-Carlo shuffle estimate.
  double worst_emi = 0.0;
  std::uniform_int_distribution<std::size_t> big(10, 60);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = big(rng);
    const auto u = random_labels(n, 2 + static_cast<std::size_t>(t % 5), rng);
    auto v = random_labels(n, 2 + static_cast<std::size_t>((t * 3) % 6), rng);
    const double exact = expected_mutual_information(contingency(Partition::from_ints(u), Partition::from_ints(v)));
    double sum = 0.0;
    const int shuffles = 100000;
    for (int s = 0; s < shuffles; ++s) {
      std::shuffle(v.begin(), v.end(), rng);
      sum += oracle::mutual_information(u, v);
    }
    worst_emi = std::max(worst_emi, std::abs(exact - sum / shuffles));
  }
  return {worst < 1e-12 && worst_emi < 0.01,
          "500 pairs max |error| " + fmt(worst) + " (tol 1e-12); E[MI] vs 1e5 shuffles max |error| " +
              fmt(worst_emi) + " bits (tol 0.01)"};
}

Outcome brute_force_clustering() {
  Rng rng(mix_seed(13));
  std::uniform_int_distribution<std::size_t> size(5, 10), dim(1, 3);
  int equal = 0, below = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = size(rng);
    const std::size_t k = 2 + static_cast<std::size_t>(t % 3);
    const auto emb = gaussian_matrix(n, dim(rng), 1000 + static_cast<std::uint64_t>(t));
    const double optimum = brute_force_best_partition(emb, k, BruteForceObjective::distortion()).objective;
    KMeansConfig cfg;
    cfg.k = k;
    cfg.restarts = 100;
    cfg.seed = static_cast<std::uint64_t>(t);
    const double found = best_of_restarts(kmeans(emb, cfg)).distortion;
    below += found < optimum - 1e-9 ? 1 : 0;
    equal += std::abs(found - optimum) <= 1e-6 ? 1 : 0;
  }
  return {below == 0 && equal >= 95,
          std::to_string(equal) + "/100 at optimum (need 95), " + std::to_string(below) + " below optimum"};
}

Outcome spearman_ties() {
  std::size_t vectors = 0, rank_mismatch = 0, pairs = 0, undefined_mismatch = 0;
  double worst = 0.0;
  std::vector<std::vector<double>> inputs;
  for (std::size_t n = 3; n <= 8; ++n) {
    inputs.clear();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<double> x(n);
      for (std::size_t i = 0, c = code; i < n; ++i, c /= 3) x[i] = static_cast<double>(1 + c % 3);
      ++vectors;
      if (average_ranks(x) != oracle::average_ranks(x)) ++rank_mismatch;
      inputs.push_back(std::move(x));
    }
    // Every (x, y) pair: exhaustive up to n = 6, a fixed stride beyond.
    const std::size_t stride = n <= 6 ? 1 : (n == 7 ? 7 : 61);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      for (std::size_t j = i % stride; j < inputs.size(); j += stride) {
        const auto r = spearman(inputs[i], inputs[j]);
        const auto o = oracle::spearman(inputs[i], inputs[j]);
        ++pairs;
        if (r.rho.has_value() != o.has_value()) {
          ++undefined_mismatch;
        } else if (o) {
          worst = std::max(worst, std::abs(*r.rho - *o));
        }
      }
    }
  }
  return {rank_mismatch == 0 && undefined_mismatch == 0 && worst <= 1e-12,
          std::to_string(vectors) + " vectors, rank mismatches " + std::to_string(rank_mismatch) + "; " +
              std::to_string(pairs) + " pairs, undefined mismatches " + std::to_string(undefined_mismatch) +
              ", max |rho error| " + fmt(worst)};
}

Outcome monotonicity() {
  Rng rng(mix_seed(14));
  std::uniform_int_distribution<std::size_t> size(4, 50);
  int split_bad = 0, merge_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = size(rng);
    const auto emb = gaussian_matrix(n, 4, 5000 + static_cast<std::uint64_t>(t));
    auto labels = random_rgs(n, std::max<std::size_t>(1, n / 4), rng);
    const auto before = Partition::from_ints(emb.items(), labels);
    const double c0 = complexity(before), d0 = distortion(emb, before);

    // Split: move a random nonempty proper subset of a cluster with >= 2 members.
    std::map<long long, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(i);
    std::vector<long long> splittable;
    for (const auto& [l, m] : members) if (m.size() >= 2) splittable.push_back(l);
    if (splittable.empty()) {
      labels.assign(n, 0);
      members = {{0, {}}};
      for (std::size_t i = 0; i < n; ++i) members[0].push_back(i);
      splittable = {0};
    }
    const auto target = splittable[std::uniform_int_distribution<std::size_t>(0, splittable.size() - 1)(rng)];
    auto m = members[target];
    std::shuffle(m.begin(), m.end(), rng);
    const std::size_t moved = std::uniform_int_distribution<std::size_t>(1, m.size() - 1)(rng);
    auto split = labels;
    for (std::size_t i = 0; i < moved; ++i) split[m[i]] = 1000;
    const auto coarse = Partition::from_ints(emb.items(), labels);
    const auto fine = Partition::from_ints(emb.items(), split);
    if (!(complexity(fine) > complexity(coarse) + 1e-9) || distortion(emb, fine) > distortion(emb, coarse) + 1e-9)
      ++split_bad;

    // Merge two distinct clusters of the original partition.
    if (before.num_clusters() >= 2) {
      auto a = std::uniform_int_distribution<std::size_t>(0, before.num_clusters() - 1)(rng);
      auto b = std::uniform_int_distribution<std::size_t>(0, before.num_clusters() - 2)(rng);
      if (b >= a) ++b;
      auto merged = labels;
      for (auto& l : merged) if (l == static_cast<long long>(b)) l = static_cast<long long>(a);
      if (distortion(emb, Partition::from_ints(emb.items(), merged)) < d0 - 1e-9) ++merge_bad;
    } else {
      // Merge the split back.
      if (d0 < distortion(emb, fine) - 1e-9 || c0 > complexity(fine)) ++merge_bad;
    }
  }
  return {split_bad == 0 && merge_bad == 0,
          "1000 splits, " + std::to_string(split_bad) + " violations; 1000 merges, " + std::to_string(merge_bad) +
              " violations"};
}

// Synthetic fixture config for the pipeline criteria.
ExperimentConfig synth_config(const fs::path& out, std::uint64_t seed, const std::string& experiments,
                              double perturb, std::size_t jobs = 1) {
  std::ostringstream y;
  y << "seed: " << seed << "\njobs: " << jobs << "\nexperiments: [" << experiments << "]\n"
    << "synth: {components: 3, points_per_component: 50, dim: 8, separation: 10, component_std: 1, "
    << "perturb_fraction: " << perturb << "}\n";
  auto cfg = parse_config(y.str(), out);
  cfg.output_dir = out;
  return cfg;
}

CsvTable run_and_read(const ExperimentConfig& cfg, const std::string& file) {
  Pipeline(cfg).run_all();
  return read_csv(cfg.output_dir / file);
}

Outcome fig2_qualitative() {
  int passed = 0;
  std::string failures;
  double min_l_gap = 1e300, min_e_gap = 1e300;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TempDir dir;
    auto cfg = synth_config(dir.path(), seed, "synth, rq3", 0.2);
    cfg.tradeoff.k_sweep = {3};
    const auto t = run_and_read(cfg, "rq3/curve_synthetic_synthetic.csv");
    std::map<std::string, std::pair<double, double>> at3;  // source -> (L, entropy)
    for (const auto& r : t.rows) {
      if (r[t.column("K")] != "3") continue;
      at3[r[t.column("source")]] = {std::stod(r[t.column("l_value")]), std::stod(r[t.column("mean_cluster_entropy")])};
    }
    if (!at3.contains("human") || !at3.contains("kmeans_best")) {
      failures += " seed" + std::to_string(seed) + ":missing rows";
      continue;
    }
    const double l_gap = at3["human"].first - at3["kmeans_best"].first;
    const double e_gap = at3["human"].second - at3["kmeans_best"].second;
    min_l_gap = std::min(min_l_gap, l_gap);
    min_e_gap = std::min(min_e_gap, e_gap);
    if (l_gap > 0.0 && e_gap > 0.0) ++passed;
    else failures += " seed" + std::to_string(seed);
  }
  return {passed == 10, std::to_string(passed) + "/10 seeds with human L and entropy above kmeans_best at K=3; "
                            "min L gap " + fmt(min_l_gap) + ", min entropy gap " + fmt(min_e_gap) + failures};
}

Outcome rq1_qualitative() {
  int passed = 0;
  double min_ami = 1.0, worst_base = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TempDir dir;
    const auto t = run_and_read(synth_config(dir.path(), seed, "synth, rq1", 0.0), "rq1_alignment.csv");
    for (const auto& r : t.rows) {
      if (r[t.column("metric")] != "ami") continue;
      const double ami = std::stod(r[t.column("mean")]);
      const double base = std::stod(r[t.column("baseline_mean")]);
      const double base_std = std::stod(r[t.column("baseline_std")]);
      min_ami = std::min(min_ami, ami);
      worst_base = std::max(worst_base, std::abs(base));
      if (ami >= 0.99 && std::abs(base) < 0.01 && std::abs(base) <= 3.0 * base_std) ++passed;
    }
  }
  return {passed == 10, std::to_string(passed) + "/10 seeds; min mean AMI " + fmt(min_ami) +
                            ", max |baseline mean AMI| " + fmt(worst_base)};
}

Outcome benchmark_counts() {
  const fs::path dir = fs::path(SEMCOMP_DATA_DIR) / "benchmarks";
  struct Expect {
    const char* file;
    std::size_t items, categories;
  };
  const Expect expect[] = {{"rosch1973.csv", 48, 8}, {"rosch1975.csv", 552, 10}, {"mccloskey1978.csv", 449, 18}};
  std::vector<BenchmarkTable> tables;
  std::string detail;
  bool ok = true;
  for (const auto& e : expect) {
    const fs::path p = dir / e.file;
    if (!fs::exists(p)) {
      ok = false;
      detail += std::string(e.file) + " not found; ";
      continue;
    }
    try {
      tables.push_back(load_benchmark_csv(p));
    } catch (const InputError& err) {
      ok = false;
      detail += std::string(e.file) + ": " + err.what() + "; ";
      continue;
    }
    const auto& t = tables.back();
    detail += std::string(e.file) + " " + std::to_string(t.item_count()) + "/" +
              std::to_string(t.categories().size()) + "; ";
    ok &= t.item_count() == e.items && t.categories().size() == e.categories;
  }
  if (tables.size() == 3) {
    const auto m = merge(tables);
    detail += "merged " + std::to_string(m.item_count()) + "/" + std::to_string(m.categories().size());
    ok &= m.item_count() == 1049 && m.categories().size() == 34;
  } else {
    detail += "expected under " + dir.string();
  }
  return {ok, detail};
}

Outcome determinism() {
  TempDir a, b, c;
  const std::string all = "synth, rq1, rq2, rq3";
  Pipeline(synth_config(a.path(), 7, all, 0.2, 1)).run_all();
  Pipeline(synth_config(b.path(), 7, all, 0.2, 1)).run_all();
  Pipeline(synth_config(c.path(), 7, all, 0.2, 4)).run_all();
  std::size_t files = 0, differ = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a.path())) {
    if (entry.path().extension() != ".csv") continue;
    const auto rel = fs::relative(entry.path(), a.path());
    ++files;
    const auto text = read_file(entry.path());
    if (!fs::exists(b.path() / rel) || read_file(b.path() / rel) != text) ++differ;
    if (!fs::exists(c.path() / rel) || read_file(c.path() / rel) != text) ++differ;
  }
  return {files > 0 && differ == 0, std::to_string(files) + " CSV files compared across 2 runs and jobs=4, " +
                                        std::to_string(differ) + " differ"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"appendix_a_endpoints", 1.0, appendix_a_endpoints},
      {"complexity_equals_item_label_mi", 5.0, complexity_is_item_label_mi},
      {"metric_oracles", 60.0, metric_oracles},
      {"brute_force_clustering_oracle", 60.0, brute_force_clustering},
      {"spearman_tie_oracle", 30.0, spearman_ties},
      {"monotonicity_suite", 30.0, monotonicity},
      {"fig2_qualitative_synthetic", 120.0, fig2_qualitative},
      {"rq1_qualitative_synthetic", 120.0, rq1_qualitative},
      {"benchmark_ingestion_counts", 1.0, benchmark_counts},
      {"determinism", 300.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool ok = o.ok && in_time;
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS " : "FAIL ") << c.name << ": " << o.detail << " [" << fmt(secs) << " s, limit "
              << fmt(c.limit_seconds) << " s" << (in_time ? "" : ", over time") << "]" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
