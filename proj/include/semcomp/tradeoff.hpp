#pragma once

#include "semcomp/clustering.hpp"
#include "semcomp/embedding_store.hpp"
#include "semcomp/partition.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semcomp {

/// Gaussian kernel bandwidth: per-cluster median pairwise distance, or a fixed value.
struct BandwidthRule {
  enum class Kind { median_heuristic, fixed } kind = Kind::median_heuristic;
  double value = 0.0;

  static BandwidthRule median() { return {}; }
  static BandwidthRule fixed_value(double v) { return {Kind::fixed, v}; }
  std::string describe() const;
};

struct TradeoffConfig {
  double beta = 1.0;
  double alpha = 2.0;
  BandwidthRule bandwidth;
  std::vector<std::size_t> k_sweep;

  void validate() const;
};

struct ClusterStats {
  std::string label;
  std::size_t size = 0;
  double variance = 0.0;  // mean squared distance to the centroid
  double entropy = 0.0;   // matrix-based Renyi entropy, bits
};

struct TradeoffReport {
  double complexity = 0.0;  // I(X;C), bits
  double distortion = 0.0;  // size-weighted mean intra-cluster variance
  double beta = 1.0;
  double l_value = 0.0;     // complexity + beta * distortion
  double mean_cluster_entropy = 0.0;
  std::vector<ClusterStats> per_cluster;
};

struct ClusterEntropy {
  double mean = 0.0;  // size-weighted over clusters, bits
  std::vector<ClusterStats> per_cluster;
};

/// log2|X| - (1/|X|) sum_c |C_c| log2 |C_c|, in bits.
double complexity(const Partition& partition);

/// (1/|X|) sum_c |C_c| sigma_c^2 with sigma_c^2 the mean squared distance to
/// the cluster mean. The partition must list exactly the matrix's items, in order.
double distortion(const EmbeddingMatrix& embeddings, const Partition& partition);

/// Order-alpha entropy (bits) of a trace-normalized PSD Gram matrix.
double renyi_entropy_of_gram(const Eigen::MatrixXd& gram, double alpha);

/// Median Euclidean distance over all item pairs (0 for a single item).
double median_pairwise_distance(const EmbeddingMatrix& embeddings);

/// Per-cluster matrix-based entropy with a Gaussian kernel
/// k(x, y) = exp(-|x - y|^2 / (2 h^2)). Under the median rule h is the median
/// pairwise distance inside the cluster; clusters with fewer than two pairs, or
/// whose median is zero, use `global_median` (computed when not supplied).
/// Singleton clusters have entropy 0.
ClusterEntropy cluster_entropy(const EmbeddingMatrix& embeddings, const Partition& partition,
                               const TradeoffConfig& config,
                               std::optional<double> global_median = std::nullopt);

/// Complexity, distortion, L and the entropy summary for one partition.
TradeoffReport l_objective(const EmbeddingMatrix& embeddings, const Partition& partition,
                           double beta, const TradeoffConfig& entropy_config = {},
                           std::optional<double> global_median = std::nullopt);

enum class CurveSource { kmeans_best, kmeans_mean, human };
std::string_view to_string(CurveSource s);

struct CurveRow {
  std::size_t k = 0;
  CurveSource source = CurveSource::kmeans_best;
  double complexity = 0.0;
  double distortion = 0.0;
  double l_value = 0.0;
  double mean_cluster_entropy = 0.0;
};

struct TradeoffCurve {
  std::vector<CurveRow> rows;  // sorted by (K, source)
  double beta = 1.0;
  double alpha = 2.0;
};

/// For each K: k-means with `kmeans_template` (its K is replaced), one row for
/// the best restart and one for the restart mean; plus one row for `human` at
/// its own K. Every partition is evaluated in `embeddings`' space.
TradeoffCurve sweep(const EmbeddingMatrix& embeddings, const Partition& human,
                    const TradeoffConfig& config, const KMeansConfig& kmeans_template,
                    std::size_t threads = 1);

/// CSV columns K,source,complexity,distortion,l_value,mean_cluster_entropy,beta,alpha.
std::string curve_csv(const TradeoffCurve& curve);

}  // namespace semcomp
