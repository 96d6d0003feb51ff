#include "semcomp/errors.hpp"
#include "semcomp/partition_metrics.hpp"
#include "semcomp/synth_oracle.hpp"
#include "semcomp/tradeoff.hpp"
#include "semcomp/typicality.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace semcomp;
using namespace semcomp::testing;

namespace {

// Bell numbers restricted to at most k blocks: sum of Stirling numbers S(n, j), j <= k.
std::size_t partitions_up_to(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> s(n + 1, std::vector<std::size_t>(n + 1, 0));
  s[0][0] = 1;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= i; ++j) s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
  std::size_t total = 0;
  for (std::size_t j = 1; j <= std::min(n, k); ++j) total += s[n][j];
  return total;
}

}  // namespace

TEST(SynthOracle, SetPartitionEnumerationCountsAndOrder) {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      std::set<std::vector<std::size_t>> seen;
      std::vector<std::size_t> prev;
      for_each_set_partition(n, k, [&](const std::vector<std::size_t>& rgs) {
        ASSERT_EQ(rgs.size(), n);
        EXPECT_EQ(rgs[0], 0u);
        std::size_t max_label = 0;
        for (std::size_t i = 1; i < n; ++i) {
          EXPECT_LE(rgs[i], max_label + 1);
          max_label = std::max(max_label, rgs[i]);
        }
        EXPECT_LT(max_label, k);
        if (!prev.empty()) EXPECT_LT(prev, rgs);
        prev = rgs;
        seen.insert(rgs);
      });
      EXPECT_EQ(seen.size(), partitions_up_to(n, k)) << n << "," << k;
    }
  }
}

TEST(SynthOracle, BruteForceExamples) {
  RowMatrix v(4, 1);
  v << 0, 1, 10, 11;
  const EmbeddingMatrix emb(numbered_items(4), v);
  const auto two = brute_force_best_partition(emb, 2, BruteForceObjective::distortion());
  EXPECT_EQ(two.partition.labels(), (std::vector<std::size_t>{0, 0, 1, 1}));
  EXPECT_NEAR(two.objective, 0.25, 1e-12);
  const auto all = brute_force_best_partition(emb, 4, BruteForceObjective::distortion());
  EXPECT_EQ(all.partition.num_clusters(), 4u);
  EXPECT_EQ(all.objective, 0.0);
  const auto one = brute_force_best_partition(emb, 1, BruteForceObjective::distortion());
  EXPECT_EQ(one.partition.num_clusters(), 1u);
  EXPECT_THROW(brute_force_best_partition(gaussian_matrix(13, 1, 0), 2, BruteForceObjective::distortion()),
               InputError);
}

TEST(SynthOracle, BruteForceTiesPickLexicographicallySmallest) {
  // Four identical points: every partition has distortion 0.
  RowMatrix v = RowMatrix::Zero(4, 2);
  const auto r = brute_force_best_partition(EmbeddingMatrix(numbered_items(4), v), 3,
                                            BruteForceObjective::distortion());
  EXPECT_EQ(r.partition.labels(), (std::vector<std::size_t>{0, 0, 0, 0}));
}

TEST(SynthOracle, BruteForceLObjectiveMatchesDirectEvaluation) {
  const auto emb = gaussian_matrix(7, 2, 3);
  for (double beta : {0.0, 0.3, 3.0}) {
    const auto r = brute_force_best_partition(emb, 7, BruteForceObjective::l_value(beta));
    EXPECT_NEAR(r.objective, l_objective(emb, r.partition, beta).l_value, 1e-12);
    // No partition beats it.
    for_each_set_partition(7, 7, [&](const std::vector<std::size_t>& rgs) {
      const std::vector<long long> labels(rgs.begin(), rgs.end());
      const double l = l_objective(emb, Partition::from_ints(emb.items(), labels), beta).l_value;
      EXPECT_GE(l, r.objective - 1e-12);
    });
  }
  // With beta = 0 the single block is optimal.
  EXPECT_EQ(brute_force_best_partition(emb, 7, BruteForceObjective::l_value(0.0)).partition.num_clusters(), 1u);
}

TEST(SynthOracle, MixtureShapeAndDeterminism) {
  MixtureSpec spec;
  spec.seed = 5;
  const auto a = generate_mixture(spec);
  const auto b = generate_mixture(spec);
  EXPECT_EQ(a.embeddings.size(), 150u);
  EXPECT_EQ(a.embeddings.dim(), 8u);
  EXPECT_EQ(a.truth.num_clusters(), 3u);
  EXPECT_EQ(a.table.item_count(), 150u);
  EXPECT_EQ(a.prototypes.items(), (std::vector<std::string>{"cat0", "cat1", "cat2"}));
  EXPECT_EQ(a.embeddings.vectors(), b.embeddings.vectors());
  spec.seed = 6;
  EXPECT_NE(generate_mixture(spec).embeddings.vectors(), a.embeddings.vectors());
  // Component means are `separation` std units apart.
  const auto& c = a.prototypes.vectors();
  EXPECT_NEAR((c.row(0) - c.row(1)).norm(), 10.0, 1e-12);
  EXPECT_NEAR((c.row(1) - c.row(2)).norm(), 10.0, 1e-12);
}

TEST(SynthOracle, DegenerateMixture) {
  MixtureSpec spec;
  spec.components = 1;
  spec.separation = 0.0;
  const auto w = generate_mixture(spec);
  EXPECT_EQ(w.truth.num_clusters(), 1u);
  spec.components = 0;
  EXPECT_THROW(generate_mixture(spec), InputError);
  spec.components = 12;  // more components than dimensions
  spec.dim = 3;
  EXPECT_EQ(generate_mixture(spec).truth.num_clusters(), 12u);
}

TEST(SynthOracle, TypicalityIsNegatedDistance) {
  MixtureSpec spec;
  spec.typicality_gradient = true;
  spec.seed = 8;
  const auto w = generate_mixture(spec);
  for (std::size_t i = 0; i < w.embeddings.size(); ++i) {
    const auto& r = w.table.rows()[i];
    const double d = (w.embeddings.lookup(r.item) - w.prototypes.lookup(r.category)).norm();
    EXPECT_NEAR(r.typicality, -d, 1e-9);
    EXPECT_EQ(r.orientation, Orientation::higher_more_typical);
  }
  // Similarity = -distance to the generating mean correlates perfectly per category.
  SimilaritySeries s;
  for (const auto& r : w.table.rows()) {
    s.entries.push_back({std::nullopt, r.item, r.category,
                         -(w.embeddings.lookup(r.item) - w.prototypes.lookup(r.category)).norm()});
  }
  for (const auto& r : typicality_correlations(s, w.table, CorrelationScope::per_category)) {
    if (r.scale == TypicalityScale::canonical) EXPECT_NEAR(*r.rho, 1.0, 1e-12);
  }
}

TEST(SynthOracle, PerturbLabels) {
  MixtureSpec spec;
  spec.seed = 2;
  const auto w = generate_mixture(spec);
  EXPECT_EQ(perturb_labels(w.truth, 0.0, 1), w.truth);
  const auto p = perturb_labels(w.truth, 0.2, 1);
  std::size_t moved = 0;
  for (std::size_t i = 0; i < p.size(); ++i) moved += p.label(i) != w.truth.label(i) ? 1 : 0;
  EXPECT_EQ(moved, 30u);
  EXPECT_EQ(p.num_clusters(), 3u);
  EXPECT_EQ(p.label_names(), w.truth.label_names());
  EXPECT_GE(distortion(w.embeddings, p), distortion(w.embeddings, w.truth));
  EXPECT_EQ(perturb_labels(w.truth, 0.2, 1), p);
  EXPECT_THROW(perturb_labels(w.truth, 1.5, 1), InputError);
}

TEST(SynthOracle, FullPerturbationOfTwoClustersSwapsThem) {
  // Moving every item to the other label of a 2-cluster partition swaps the
  // clusters, so the grouping (and AMI = 1) is preserved.
  const auto items = numbered_items(60);
  std::vector<long long> two(60);
  for (std::size_t i = 0; i < 60; ++i) two[i] = i < 30 ? 0 : 1;
  const auto truth = Partition::from_ints(items, two);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = perturb_labels(truth, 1.0, seed);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NE(p.label(i), truth.label(i));
    EXPECT_NEAR(alignment_scores(truth, p).ami, 1.0, 1e-12);
  }
  // With three clusters each original cluster is split across the other two.
  std::vector<long long> three(60);
  for (std::size_t i = 0; i < 60; ++i) three[i] = static_cast<long long>(i / 20);
  const auto truth3 = Partition::from_ints(items, three);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) total += alignment_scores(truth3, perturb_labels(truth3, 1.0, seed)).ami;
  EXPECT_LT(total / 50.0, 0.6);
}
