#include "semcomp/tradeoff.hpp"

#include "semcomp/csv.hpp"
#include "semcomp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace semcomp {

namespace {

using Eigen::Index;

void require_same_items(const EmbeddingMatrix& embeddings, const Partition& partition) {
  if (partition.items() != embeddings.items()) {
    throw InputError("partition does not cover exactly the embedding matrix items (" +
                     std::to_string(partition.size()) + " vs " +
                     std::to_string(embeddings.size()) + ")");
  }
}

double median_of(std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  const double upper = xs[mid];
  if (xs.size() % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::vector<double> pair_distances(const RowMatrix& x, const std::vector<std::size_t>& rows) {
  std::vector<double> d;
  d.reserve(rows.size() * (rows.size() - (rows.empty() ? 0 : 1)) / 2);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      d.push_back((x.row(static_cast<Index>(rows[a])) - x.row(static_cast<Index>(rows[b]))).norm());
    }
  }
  return d;
}

double kernel(double dist, double bandwidth) {
  if (dist == 0.0) return 1.0;
  if (bandwidth == 0.0) return 0.0;
  return std::exp(-(dist * dist) / (2.0 * bandwidth * bandwidth));
}

// Per-cluster variances in cluster order, and their size-weighted mean.
std::vector<double> cluster_variances(const RowMatrix& x,
                                      const std::vector<std::vector<std::size_t>>& members) {
  std::vector<double> out;
  out.reserve(members.size());
  for (const auto& m : members) {
    Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(x.cols());
    for (std::size_t i : m) centroid += x.row(static_cast<Index>(i));
    centroid /= static_cast<double>(m.size());
    double ss = 0.0;
    for (std::size_t i : m) ss += (x.row(static_cast<Index>(i)) - centroid).squaredNorm();
    out.push_back(ss / static_cast<double>(m.size()));
  }
  return out;
}

}  // namespace

std::string BandwidthRule::describe() const {
  return kind == Kind::median_heuristic ? "median_heuristic" : "fixed(" + format_double(value) + ")";
}

void TradeoffConfig::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InputError("beta must be a finite value >= 0");
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
    throw InputError("alpha must be positive and different from 1");
  }
  if (bandwidth.kind == BandwidthRule::Kind::fixed && !(bandwidth.value > 0.0)) {
    throw InputError("kernel bandwidth must be positive");
  }
  for (std::size_t k : k_sweep) {
    if (k == 0) throw InputError("k_sweep entries must be >= 1");
  }
}

double complexity(const Partition& partition) {
  if (partition.size() == 0) throw InputError("complexity of an empty partition");
  const auto n = static_cast<double>(partition.size());
  double weighted = 0.0;
  for (std::size_t s : partition.cluster_sizes()) {
    const auto size = static_cast<double>(s);
    weighted += size * std::log2(size);
  }
  // Rounding can leave -1e-16 for a single cluster.
  return std::max(0.0, std::log2(n) - weighted / n);
}

double distortion(const EmbeddingMatrix& embeddings, const Partition& partition) {
  require_same_items(embeddings, partition);
  const auto members = partition.members();
  const auto variances = cluster_variances(embeddings.vectors(), members);
  double total = 0.0;
  for (std::size_t c = 0; c < members.size(); ++c) {
    total += static_cast<double>(members[c].size()) * variances[c];
  }
  return total / static_cast<double>(partition.size());
}

double renyi_entropy_of_gram(const Eigen::MatrixXd& gram, double alpha) {
  const double trace = gram.trace();
  if (!(trace > 0.0)) throw InputError("Gram matrix has non-positive trace");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram / trace, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InvariantError("eigen-decomposition failed");
  double sum = 0.0;
  for (Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double lambda = std::max(solver.eigenvalues()(k), 0.0);
    if (lambda > 0.0) sum += std::pow(lambda, alpha);
  }
  const double s = std::log2(sum) / (1.0 - alpha);
  // A rank-one spectrum can come out a few ulps below zero.
  return std::max(s, 0.0);
}

double median_pairwise_distance(const EmbeddingMatrix& embeddings) {
  std::vector<std::size_t> all(embeddings.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto d = pair_distances(embeddings.vectors(), all);
  return median_of(d);
}

ClusterEntropy cluster_entropy(const EmbeddingMatrix& embeddings, const Partition& partition,
                               const TradeoffConfig& config, std::optional<double> global_median) {
  config.validate();
  require_same_items(embeddings, partition);
  const RowMatrix& x = embeddings.vectors();
  const auto members = partition.members();
  const auto variances = cluster_variances(x, members);

  ClusterEntropy out;
  double weighted = 0.0;
  for (std::size_t c = 0; c < members.size(); ++c) {
    const auto& m = members[c];
    ClusterStats stats{partition.name(c), m.size(), variances[c], 0.0};
    if (m.size() >= 2) {
      auto dists = pair_distances(x, m);
      double h = 0.0;
      if (config.bandwidth.kind == BandwidthRule::Kind::fixed) {
        h = config.bandwidth.value;
      } else {
        std::vector<double> scratch = dists;
        h = scratch.size() >= 2 ? median_of(scratch) : 0.0;
        if (h == 0.0) {
          if (!global_median) global_median = median_pairwise_distance(embeddings);
          h = *global_median;
        }
      }
      const auto size = static_cast<Index>(m.size());
      Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(size, size);
      std::size_t p = 0;
      for (Index a = 0; a < size; ++a) {
        for (Index b = a + 1; b < size; ++b) {
          gram(a, b) = gram(b, a) = kernel(dists[p++], h);
        }
      }
      stats.entropy = renyi_entropy_of_gram(gram, config.alpha);
    }
    weighted += static_cast<double>(m.size()) * stats.entropy;
    out.per_cluster.push_back(std::move(stats));
  }
  out.mean = weighted / static_cast<double>(partition.size());
  return out;
}

TradeoffReport l_objective(const EmbeddingMatrix& embeddings, const Partition& partition,
                           double beta, const TradeoffConfig& entropy_config,
                           std::optional<double> global_median) {
  if (!(beta >= 0.0)) throw InputError("beta must be >= 0");
  TradeoffReport r;
  r.beta = beta;
  r.complexity = complexity(partition);
  r.distortion = distortion(embeddings, partition);
  r.l_value = r.complexity + beta * r.distortion;
  auto entropy = cluster_entropy(embeddings, partition, entropy_config, global_median);
  r.mean_cluster_entropy = entropy.mean;
  r.per_cluster = std::move(entropy.per_cluster);
  return r;
}

std::string_view to_string(CurveSource s) {
  switch (s) {
    case CurveSource::kmeans_best: return "kmeans_best";
    case CurveSource::kmeans_mean: return "kmeans_mean";
    case CurveSource::human: return "human";
  }
  return "?";
}

TradeoffCurve sweep(const EmbeddingMatrix& embeddings, const Partition& human,
                    const TradeoffConfig& config, const KMeansConfig& kmeans_template,
                    std::size_t threads) {
  config.validate();
  if (config.k_sweep.empty()) throw InputError("k_sweep is empty");
  require_same_items(embeddings, human);
  for (std::size_t k : config.k_sweep) {
    if (k > embeddings.size()) {
      throw InputError("k_sweep value " + std::to_string(k) + " exceeds item count " +
                       std::to_string(embeddings.size()));
    }
  }

  std::optional<double> global_median;
  if (config.bandwidth.kind == BandwidthRule::Kind::median_heuristic) {
    global_median = median_pairwise_distance(embeddings);
  }

  TradeoffCurve curve;
  curve.beta = config.beta;
  curve.alpha = config.alpha;
  const std::set<std::size_t> ks(config.k_sweep.begin(), config.k_sweep.end());
  for (std::size_t k : ks) {
    KMeansConfig cfg = kmeans_template;
    cfg.k = k;
    const auto results = kmeans(embeddings, cfg, threads);
    const auto& best = best_of_restarts(results);
    const auto best_report = l_objective(embeddings, best.partition, config.beta, config, global_median);
    curve.rows.push_back({k, CurveSource::kmeans_best, best_report.complexity,
                          best_report.distortion, best_report.l_value,
                          best_report.mean_cluster_entropy});

    CurveRow mean{k, CurveSource::kmeans_mean, 0.0, 0.0, 0.0, 0.0};
    for (const auto& res : results) {
      const auto rep = l_objective(embeddings, res.partition, config.beta, config, global_median);
      mean.complexity += rep.complexity;
      mean.distortion += rep.distortion;
      mean.l_value += rep.l_value;
      mean.mean_cluster_entropy += rep.mean_cluster_entropy;
    }
    const auto count = static_cast<double>(results.size());
    mean.complexity /= count;
    mean.distortion /= count;
    mean.l_value /= count;
    mean.mean_cluster_entropy /= count;
    curve.rows.push_back(mean);
  }

  const auto human_report = l_objective(embeddings, human, config.beta, config, global_median);
  curve.rows.push_back({human.num_clusters(), CurveSource::human, human_report.complexity,
                        human_report.distortion, human_report.l_value,
                        human_report.mean_cluster_entropy});
  std::stable_sort(curve.rows.begin(), curve.rows.end(), [](const CurveRow& a, const CurveRow& b) {
    return a.k != b.k ? a.k < b.k : static_cast<int>(a.source) < static_cast<int>(b.source);
  });
  return curve;
}

std::string curve_csv(const TradeoffCurve& curve) {
  CsvWriter csv({"K", "source", "complexity", "distortion", "l_value", "mean_cluster_entropy",
                 "beta", "alpha"});
  for (const auto& r : curve.rows) {
    csv.row({std::to_string(r.k), std::string(to_string(r.source)), format_double(r.complexity),
             format_double(r.distortion), format_double(r.l_value),
             format_double(r.mean_cluster_entropy), format_double(curve.beta),
             format_double(curve.alpha)});
  }
  return csv.str();
}

}  // namespace semcomp
