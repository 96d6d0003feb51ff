#include "semcomp/clustering.hpp"

#include "semcomp/errors.hpp"
#include "semcomp/parallel.hpp"
#include "semcomp/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace semcomp {

std::string_view to_string(KMeansInit init) {
  return init == KMeansInit::kmeanspp ? "kmeanspp" : "uniform_random";
}

KMeansInit parse_kmeans_init(std::string_view text) {
  if (text == "kmeanspp" || text == "k-means++") return KMeansInit::kmeanspp;
  if (text == "uniform_random" || text == "random") return KMeansInit::uniform_random;
  throw InputError("unknown k-means init '" + std::string(text) + "'");
}

namespace {

using Eigen::Index;

std::vector<std::string> index_names(std::size_t k) {
  std::vector<std::string> names;
  names.reserve(k);
  for (std::size_t c = 0; c < k; ++c) names.push_back(std::to_string(c));
  return names;
}

RowMatrix init_centroids(const RowMatrix& x, std::size_t k, KMeansInit init, Rng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  RowMatrix centers(static_cast<Index>(k), x.cols());
  std::vector<std::size_t> chosen;
  chosen.reserve(k);

  if (init == KMeansInit::uniform_random) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t c = 0; c < k; ++c) {
      std::uniform_int_distribution<std::size_t> pick(c, n - 1);
      std::swap(idx[c], idx[pick(rng)]);
      chosen.push_back(idx[c]);
    }
  } else {
    // Greedy k-means++: sample 2 + floor(ln k) candidates per step by D^2 and
    // keep the one that lowers the potential most (first sampled on ties).
    const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    chosen.push_back(first(rng));
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::vector<bool> taken(n, false);
    taken[chosen[0]] = true;
    while (chosen.size() < k) {
      const auto last = x.row(static_cast<Index>(chosen.back()));
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d2[i] = std::min(d2[i], (x.row(static_cast<Index>(i)) - last).squaredNorm());
        total += d2[i];
      }
      std::size_t next = n;
      if (total > 0.0) {
        std::uniform_real_distribution<double> u(0.0, total);
        double best_potential = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < trials; ++t) {
          double target = u(rng);
          std::size_t candidate = n;
          for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            candidate = i;
            target -= d2[i];
            if (target < 0.0) break;
          }
          const auto c = x.row(static_cast<Index>(candidate));
          double potential = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            potential += std::min(d2[i], (x.row(static_cast<Index>(i)) - c).squaredNorm());
          }
          if (potential < best_potential) {
            best_potential = potential;
            next = candidate;
          }
        }
      }
      if (next == n || taken[next]) {
        // Every remaining point coincides with a chosen center; pick any unused one.
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n; ++i) {
          if (!taken[i]) free.push_back(i);
        }
        std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
        next = free[pick(rng)];
      }
      taken[next] = true;
      chosen.push_back(next);
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    centers.row(static_cast<Index>(c)) = x.row(static_cast<Index>(chosen[c]));
  }
  return centers;
}

std::size_t nearest(const RowMatrix& centers, const auto& point, double& best_d2) {
  std::size_t best = 0;
  best_d2 = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < centers.rows(); ++c) {
    const double d = (point - centers.row(c)).squaredNorm();
    if (d < best_d2) {
      best_d2 = d;
      best = static_cast<std::size_t>(c);
    }
  }
  return best;
}

RowMatrix cluster_means(const RowMatrix& x, const std::vector<std::size_t>& labels, std::size_t k,
                        std::vector<std::size_t>& sizes) {
  RowMatrix sums = RowMatrix::Zero(static_cast<Index>(k), x.cols());
  sizes.assign(k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sums.row(static_cast<Index>(labels[i])) += x.row(static_cast<Index>(i));
    ++sizes[labels[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] > 0) sums.row(static_cast<Index>(c)) /= static_cast<double>(sizes[c]);
  }
  return sums;
}

double mean_sq_to_centroids(const RowMatrix& x, const std::vector<std::size_t>& labels,
                            const RowMatrix& means) {
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    total += (x.row(static_cast<Index>(i)) - means.row(static_cast<Index>(labels[i]))).squaredNorm();
  }
  return total / static_cast<double>(labels.size());
}

KMeansResult run_restart(const EmbeddingMatrix& embeddings, const KMeansConfig& cfg,
                         std::size_t restart) {
  const RowMatrix& x = embeddings.vectors();
  const auto n = embeddings.size();
  const auto k = cfg.k;
  Rng rng = derived_rng(cfg.seed, restart);

  RowMatrix centers = init_centroids(x, k, cfg.init, rng);
  std::vector<std::size_t> labels(n, 0), sizes(k, 0);
  std::vector<double> d2(n, 0.0);

  KMeansResult result;
  result.restart = restart;
  RowMatrix means;
  for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
    sizes.assign(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = nearest(centers, x.row(static_cast<Index>(i)), d2[i]);
      ++sizes[labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[labels[i]] > 1 && (far == n || d2[i] > d2[far])) far = i;
      }
      if (far == n) throw InvariantError("k-means empty-cluster repair found no donor");
      --sizes[labels[far]];
      labels[far] = c;
      d2[far] = 0.0;
      sizes[c] = 1;
      centers.row(static_cast<Index>(c)) = x.row(static_cast<Index>(far));
    }

    means = cluster_means(x, labels, k, sizes);
    result.distortion_trace.push_back(mean_sq_to_centroids(x, labels, means));
    const double shift = (means - centers).cwiseAbs().maxCoeff();
    centers = means;
    result.iterations = iter;
    if (shift == 0.0 || shift < cfg.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.partition = Partition(embeddings.items(), labels, index_names(k));
  result.centroids = CentroidSet{std::move(means), sizes};
  result.distortion = result.distortion_trace.back();
  return result;
}

}  // namespace

std::vector<KMeansResult> kmeans(const EmbeddingMatrix& embeddings, const KMeansConfig& config,
                                 std::size_t threads) {
  if (config.k == 0) throw InputError("k-means needs K >= 1");
  if (config.restarts == 0) throw InputError("k-means needs at least one restart");
  if (config.max_iterations == 0) throw InputError("k-means needs max_iterations >= 1");
  if (!(config.tolerance >= 0.0)) throw InputError("k-means tolerance must be nonnegative");
  if (config.k > embeddings.size()) {
    throw InputError("K = " + std::to_string(config.k) + " exceeds item count " +
                     std::to_string(embeddings.size()));
  }
  std::vector<KMeansResult> results(config.restarts);
  parallel_for(config.restarts, threads,
               [&](std::size_t r) { results[r] = run_restart(embeddings, config, r); });
  return results;
}

const KMeansResult& best_of_restarts(const std::vector<KMeansResult>& results) {
  if (results.empty()) throw InputError("best_of_restarts needs at least one result");
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].distortion < results[best].distortion) best = r;
  }
  return results[best];
}

Partition assign_to_centroids(const EmbeddingMatrix& embeddings, const CentroidSet& centroids) {
  if (centroids.centroids.rows() == 0) throw InputError("no centroids to assign to");
  if (static_cast<std::size_t>(centroids.centroids.cols()) != embeddings.dim()) {
    throw InputError("centroid dimension " + std::to_string(centroids.centroids.cols()) +
                     " does not match embedding dimension " + std::to_string(embeddings.dim()));
  }
  std::vector<long long> raw(embeddings.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    raw[i] = static_cast<long long>(
        nearest(centroids.centroids, embeddings.vectors().row(static_cast<Index>(i)), d2));
  }
  return Partition::from_ints(embeddings.items(), raw);
}

CentroidSet centroids_of(const EmbeddingMatrix& embeddings, const Partition& partition) {
  if (partition.items() != embeddings.items()) {
    throw InputError("partition items do not match the embedding matrix");
  }
  CentroidSet out;
  out.centroids = cluster_means(embeddings.vectors(), partition.labels(), partition.num_clusters(),
                                out.sizes);
  return out;
}

}  // namespace semcomp
