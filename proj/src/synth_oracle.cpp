#include "semcomp/synth_oracle.hpp"

#include "semcomp/errors.hpp"
#include "semcomp/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace semcomp {

namespace {

using Eigen::Index;

Eigen::RowVectorXd random_direction(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::RowVectorXd v(static_cast<Index>(dim));
  do {
    for (Index j = 0; j < v.size(); ++j) v(j) = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

}  // namespace

void MixtureSpec::validate() const {
  if (components < 1 || points_per_component < 1 || dim < 1) {
    throw InputError("mixture counts must all be >= 1");
  }
  if (!(separation >= 0.0)) throw InputError("mixture separation must be >= 0");
  if (!(component_std >= 0.0)) throw InputError("mixture component std must be >= 0");
}

SyntheticWorld generate_mixture(const MixtureSpec& spec) {
  spec.validate();
  Rng rng = derived_rng(spec.seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);

  const std::size_t k = spec.components;
  const std::size_t m = spec.points_per_component;
  const double spacing = spec.separation * spec.component_std;
  RowMatrix centers = RowMatrix::Zero(static_cast<Index>(k), static_cast<Index>(spec.dim));
  for (std::size_t c = 0; c < k; ++c) {
    if (k <= spec.dim) {
      centers(static_cast<Index>(c), static_cast<Index>(c)) = spacing / std::sqrt(2.0);
    } else {
      centers.row(static_cast<Index>(c)) = random_direction(spec.dim, rng) * (spacing / std::sqrt(2.0));
    }
  }

  RowMatrix points(static_cast<Index>(k * m), static_cast<Index>(spec.dim));
  std::vector<std::string> items;
  std::vector<std::string> names;
  std::vector<BenchmarkRow> rows;
  items.reserve(k * m);
  const double typical_radius = spec.component_std * std::sqrt(static_cast<double>(spec.dim));
  for (std::size_t c = 0; c < k; ++c) {
    const std::string category = "cat" + std::to_string(c);
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = static_cast<Index>(c * m + i);
      Eigen::RowVectorXd offset(static_cast<Index>(spec.dim));
      if (spec.typicality_gradient) {
        const double radius = 2.0 * typical_radius * (static_cast<double>(i) + 0.5) / static_cast<double>(m);
        offset = random_direction(spec.dim, rng) * radius;
      } else {
        for (Index j = 0; j < offset.size(); ++j) offset(j) = spec.component_std * normal(rng);
      }
      points.row(row) = centers.row(static_cast<Index>(c)) + offset;
      std::string item = "c" + std::to_string(c) + "_" + std::to_string(i);
      rows.push_back({Source::synthetic, item, category, -offset.norm(),
                      Orientation::higher_more_typical});
      items.push_back(std::move(item));
      names.push_back(category);
    }
  }

  std::vector<std::string> proto_items;
  for (std::size_t c = 0; c < k; ++c) proto_items.push_back("cat" + std::to_string(c));

  return SyntheticWorld{
      EmbeddingMatrix(items, std::move(points), "synthetic"),
      Partition::from_names(items, names),
      BenchmarkTable(std::move(rows)),
      EmbeddingMatrix(std::move(proto_items), std::move(centers), "synthetic"),
  };
}

EmbeddingMatrix world_embedding_file(const SyntheticWorld& world, const std::string& model_id) {
  const auto& pts = world.embeddings;
  const auto& protos = world.prototypes;
  RowMatrix all(static_cast<Index>(pts.size() + protos.size()), static_cast<Index>(pts.dim()));
  all.topRows(static_cast<Index>(pts.size())) = pts.vectors();
  all.bottomRows(static_cast<Index>(protos.size())) = protos.vectors();
  std::vector<std::string> items = pts.items();
  items.insert(items.end(), protos.items().begin(), protos.items().end());
  return EmbeddingMatrix(std::move(items), std::move(all), model_id, false, "synthetic");
}

Partition perturb_labels(const Partition& partition, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw InputError("perturb fraction must be in [0, 1]");
  const std::size_t n = partition.size();
  const std::size_t k = partition.num_clusters();
  // The epsilon keeps e.g. 0.2 * 150 = 30.000000000000004 from rounding up to 31.
  const auto target = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));

  std::vector<std::size_t> labels = partition.labels();
  if (target == 0 || k < 2) return partition;

  Rng rng = derived_rng(seed, 0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> sizes = partition.cluster_sizes();
  std::uniform_int_distribution<std::size_t> other(0, k - 2);

  std::size_t moved = 0;
  for (std::size_t i : order) {
    if (moved == target) break;
    const std::size_t from = labels[i];
    if (sizes[from] <= 1) continue;
    std::size_t to = other(rng);
    if (to >= from) ++to;
    labels[i] = to;
    --sizes[from];
    ++sizes[to];
    ++moved;
  }
  return Partition(partition.items(), std::move(labels), partition.label_names());
}

void for_each_set_partition(std::size_t n, std::size_t max_blocks,
                            const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (n == 0 || max_blocks == 0) return;
  std::vector<std::size_t> rgs(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);  // max of rgs[0..i]
  while (true) {
    visit(rgs);
    // Advance: find the rightmost position that can still be incremented.
    std::size_t i = n - 1;
    while (i > 0) {
      const std::size_t limit = std::min(prefix_max[i - 1] + 1, max_blocks - 1);
      if (rgs[i] < limit) break;
      --i;
    }
    if (i == 0) return;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[j - 1];
    }
  }
}

BruteForceResult brute_force_best_partition(const EmbeddingMatrix& embeddings, std::size_t k,
                                            BruteForceObjective objective) {
  const std::size_t n = embeddings.size();
  if (n > kBruteForceMaxItems) {
    throw InputError("brute force is limited to " + std::to_string(kBruteForceMaxItems) +
                     " items, got " + std::to_string(n));
  }
  if (k == 0) throw InputError("brute force needs K >= 1");
  const RowMatrix& x = embeddings.vectors();
  const auto d = x.cols();

  auto evaluate = [&](const std::vector<std::size_t>& rgs, std::size_t blocks) {
    RowMatrix means = RowMatrix::Zero(static_cast<Index>(blocks), d);
    std::vector<std::size_t> count(blocks, 0);
    for (std::size_t i = 0; i < n; ++i) {
      means.row(static_cast<Index>(rgs[i])) += x.row(static_cast<Index>(i));
      ++count[rgs[i]];
    }
    for (std::size_t c = 0; c < blocks; ++c) means.row(static_cast<Index>(c)) /= static_cast<double>(count[c]);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ss += (x.row(static_cast<Index>(i)) - means.row(static_cast<Index>(rgs[i]))).squaredNorm();
    }
    double value = ss / static_cast<double>(n);
    if (objective.kind == BruteForceObjective::Kind::l_with_beta) {
      double h = 0.0;
      for (std::size_t c : count) h += static_cast<double>(c) * std::log2(static_cast<double>(c));
      value = (std::log2(static_cast<double>(n)) - h / static_cast<double>(n)) + objective.beta * value;
    }
    return value;
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_rgs;
  for_each_set_partition(n, k, [&](const std::vector<std::size_t>& rgs) {
    std::size_t blocks = 0;
    for (std::size_t r : rgs) blocks = std::max(blocks, r + 1);
    const double value = evaluate(rgs, blocks);
    if (value < best) {
      best = value;
      best_rgs = rgs;
    }
  });

  std::vector<long long> raw(best_rgs.begin(), best_rgs.end());
  Partition p = Partition::from_ints(embeddings.items(), raw);
  const double value = best;
  return {std::move(p), value};
}

}  // namespace semcomp
