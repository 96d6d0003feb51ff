#pragma once

#include "semcomp/embedding_store.hpp"
#include "semcomp/partition.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace semcomp {

// kmeanspp is greedy D^2 seeding with 2 + floor(ln K) candidates per center.
enum class KMeansInit { kmeanspp, uniform_random };

std::string_view to_string(KMeansInit init);
KMeansInit parse_kmeans_init(std::string_view text);

struct KMeansConfig {
  std::size_t k = 2;
  std::size_t restarts = 100;
  std::size_t max_iterations = 300;
  double tolerance = 1e-6;  // max-norm centroid shift
  std::uint64_t seed = 0;
  KMeansInit init = KMeansInit::kmeanspp;
};

/// K centroids (rows) and the number of items behind each.
struct CentroidSet {
  RowMatrix centroids;
  std::vector<std::size_t> sizes;

  std::size_t size() const noexcept { return static_cast<std::size_t>(centroids.rows()); }
};

struct KMeansResult {
  Partition partition;
  CentroidSet centroids;  // exact means of `partition`
  double distortion = 0.0;
  std::size_t restart = 0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Mean squared distance to own centroid after each Lloyd iteration.
  std::vector<double> distortion_trace;
};

/// Lloyd's algorithm, one result per restart. Restart r draws from its own
/// stream derived from (seed, r), so results do not depend on `threads`.
/// A cluster left empty by assignment is reseeded with the item farthest from
/// its current centroid, keeping K clusters.
std::vector<KMeansResult> kmeans(const EmbeddingMatrix& embeddings, const KMeansConfig& config,
                                 std::size_t threads = 1);

/// Minimal distortion; ties go to the lower restart index.
const KMeansResult& best_of_restarts(const std::vector<KMeansResult>& results);

/// Nearest centroid by squared Euclidean distance, ties to the lower index.
/// Clusters that receive no items are dropped from the returned partition.
Partition assign_to_centroids(const EmbeddingMatrix& embeddings, const CentroidSet& centroids);

/// Means (and sizes) of the clusters of `partition` over `embeddings` rows.
CentroidSet centroids_of(const EmbeddingMatrix& embeddings, const Partition& partition);

}  // namespace semcomp
