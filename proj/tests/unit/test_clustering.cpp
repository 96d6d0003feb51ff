#include "semcomp/clustering.hpp"
#include "semcomp/errors.hpp"
#include "semcomp/partition_metrics.hpp"
#include "semcomp/synth_oracle.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace semcomp;
using namespace semcomp::testing;

namespace {

EmbeddingMatrix line_points(const std::vector<double>& xs) {
  RowMatrix v(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i), 0) = xs[i];
  return EmbeddingMatrix(numbered_items(xs.size()), v);
}

KMeansConfig config(std::size_t k, std::size_t restarts = 10, std::uint64_t seed = 1) {
  KMeansConfig c;
  c.k = k;
  c.restarts = restarts;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Clustering, FourPointLine) {
  const auto emb = line_points({0, 1, 10, 11});
  const auto results = kmeans(emb, config(2));
  const auto& best = best_of_restarts(results);
  EXPECT_TRUE(best.partition.same_grouping(Partition::from_ints(emb.items(), {0, 0, 1, 1})));
  EXPECT_NEAR(best.distortion, 0.25, 1e-12);
  std::vector<double> c{best.centroids.centroids(0, 0), best.centroids.centroids(1, 0)};
  std::sort(c.begin(), c.end());
  EXPECT_NEAR(c[0], 0.5, 1e-12);
  EXPECT_NEAR(c[1], 10.5, 1e-12);
  // The brute-force optimum agrees.
  EXPECT_NEAR(brute_force_best_partition(emb, 2, BruteForceObjective::distortion()).objective, 0.25, 1e-12);
  // A Lloyd fixed point is stable under re-assignment.
  EXPECT_EQ(assign_to_centroids(emb, best.centroids).labels(), best.partition.labels());
}

TEST(Clustering, ExtremeK) {
  const auto emb = gaussian_matrix(12, 3, 2);
  const auto all = best_of_restarts(kmeans(emb, config(12)));
  EXPECT_EQ(all.partition.num_clusters(), 12u);
  EXPECT_NEAR(all.distortion, 0.0, 1e-12);
  const auto one = best_of_restarts(kmeans(emb, config(1)));
  EXPECT_EQ(one.partition.num_clusters(), 1u);
  EXPECT_NEAR(one.distortion, oracle::total_variance(emb.vectors()), 1e-12);
  EXPECT_LE((one.centroids.centroids.row(0) - emb.vectors().colwise().mean()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Clustering, ResultsAreValidAndMonotone) {
  for (auto init : {KMeansInit::kmeanspp, KMeansInit::uniform_random}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto emb = gaussian_matrix(60, 4, seed);
      auto cfg = config(5, 8, seed);
      cfg.init = init;
      const auto results = kmeans(emb, cfg);
      ASSERT_EQ(results.size(), 8u);
      for (std::size_t r = 0; r < results.size(); ++r) {
        const auto& res = results[r];
        EXPECT_EQ(res.restart, r);
        EXPECT_EQ(res.partition.num_clusters(), 5u);
        EXPECT_NEAR(res.distortion, oracle::distortion(emb.vectors(), {res.partition.labels().begin(),
                                                                       res.partition.labels().end()}),
                    1e-9);
        for (std::size_t i = 1; i < res.distortion_trace.size(); ++i) {
          EXPECT_LE(res.distortion_trace[i], res.distortion_trace[i - 1] + 1e-12);
        }
        // Centroids are exact cluster means.
        const auto means = centroids_of(emb, res.partition);
        EXPECT_LE((means.centroids - res.centroids.centroids).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_EQ(means.sizes, res.centroids.sizes);
      }
    }
  }
}

TEST(Clustering, DeterministicAcrossThreadCounts) {
  const auto emb = gaussian_matrix(80, 5, 9);
  const auto a = kmeans(emb, config(4, 16, 3), 1);
  const auto b = kmeans(emb, config(4, 16, 3), 4);
  const auto c = kmeans(emb, config(4, 16, 4), 1);
  ASSERT_EQ(a.size(), b.size());
  bool any_differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].partition, b[i].partition);
    EXPECT_EQ(a[i].distortion, b[i].distortion);
    any_differs |= !(a[i].partition == c[i].partition);
  }
  EXPECT_TRUE(any_differs);
}

TEST(Clustering, RecoversWellSeparatedMixture) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    MixtureSpec spec;
    spec.seed = seed;
    const auto world = generate_mixture(spec);
    const auto best = best_of_restarts(kmeans(world.embeddings, config(3, 100, seed)));
    EXPECT_GE(alignment_scores(world.truth, best.partition).ami, 0.99);
  }
}

TEST(Clustering, PermutationEquivariance) {
  const auto emb = gaussian_matrix(30, 3, 12);
  std::vector<std::size_t> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), Rng(5));
  RowMatrix pv(30, 3);
  std::vector<std::string> items;
  for (std::size_t i = 0; i < 30; ++i) {
    pv.row(static_cast<Eigen::Index>(i)) = emb.vectors().row(static_cast<Eigen::Index>(perm[i]));
    items.push_back(emb.items()[perm[i]]);
  }
  const auto base = best_of_restarts(kmeans(emb, config(3, 30)));
  // Assigning permuted points to the same centroids permutes the labels.
  const auto permuted = assign_to_centroids(EmbeddingMatrix(items, pv), base.centroids);
  for (std::size_t i = 0; i < 30; ++i) EXPECT_EQ(permuted.label(i), base.partition.label(perm[i]));
}

TEST(Clustering, BestOfRestartsTieBreak) {
  std::vector<KMeansResult> results(8);
  for (std::size_t i = 0; i < results.size(); ++i) {
    results[i].restart = i;
    results[i].distortion = 1.0;
  }
  results[3].distortion = 0.25;
  results[7].distortion = 0.25;
  results[5].distortion = 0.30;
  EXPECT_EQ(best_of_restarts(results).restart, 3u);
  EXPECT_EQ(best_of_restarts({results[5]}).restart, 5u);
  EXPECT_THROW(best_of_restarts({}), InputError);
}

TEST(Clustering, AssignmentTiesGoToLowestIndex) {
  CentroidSet c;
  c.centroids = RowMatrix(3, 1);
  c.centroids << -1, 5, 1;
  c.sizes = {1, 1, 1};
  const auto p = assign_to_centroids(line_points({0, -1, 5}), c);
  // 0 is equidistant to centroids 0 and 2.
  EXPECT_EQ(p.name(p.label(0)), "0");
  EXPECT_EQ(p.name(p.label(1)), "0");
  EXPECT_EQ(p.name(p.label(2)), "1");
  EXPECT_THROW(assign_to_centroids(gaussian_matrix(3, 2, 0), c), InputError);
}

TEST(Clustering, EmptyClusterRepairKeepsK) {
  // Many duplicates force empty clusters during Lloyd iterations.
  const auto emb = line_points({0, 0, 0, 0, 0, 0, 1, 1, 1, 50});
  for (auto init : {KMeansInit::kmeanspp, KMeansInit::uniform_random}) {
    auto cfg = config(3, 20, 2);
    cfg.init = init;
    for (const auto& r : kmeans(emb, cfg)) EXPECT_EQ(r.partition.num_clusters(), 3u);
  }
}

TEST(Clustering, RejectsInvalidConfig) {
  const auto emb = gaussian_matrix(4, 2, 0);
  EXPECT_THROW(kmeans(emb, config(5)), InputError);
  EXPECT_THROW(kmeans(emb, config(0)), InputError);
  EXPECT_THROW(kmeans(emb, config(2, 0)), InputError);
  auto cfg = config(2);
  cfg.tolerance = -1.0;
  EXPECT_THROW(kmeans(emb, cfg), InputError);
  EXPECT_EQ(parse_kmeans_init("uniform_random"), KMeansInit::uniform_random);
  EXPECT_THROW(parse_kmeans_init("forgy"), InputError);
}
