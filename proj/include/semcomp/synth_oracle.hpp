#pragma once

#include "semcomp/benchmark_data.hpp"
#include "semcomp/embedding_store.hpp"
#include "semcomp/partition.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>

namespace semcomp {

/// Gaussian mixture world with known labels.
struct MixtureSpec {
  std::size_t components = 3;
  std::size_t points_per_component = 50;
  std::size_t dim = 8;
  double separation = 10.0;  // distance between component means, in component std units
  double component_std = 1.0;
  bool typicality_gradient = false;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticWorld {
  EmbeddingMatrix embeddings;  // points only, items "c<k>_<i>"
  Partition truth;             // generating component per point, named "cat<k>"
  BenchmarkTable table;        // typicality = -distance to the generating mean
  EmbeddingMatrix prototypes;  // one row per category name at the generating mean
};

/// Component means sit on scaled coordinate axes when components <= dim (so
/// every pair is exactly `separation * component_std` apart) and on random
/// directions otherwise. With `typicality_gradient` point i of a component is
/// placed at radius proportional to (i + 0.5) along a random direction, so
/// typicality varies smoothly within each category.
SyntheticWorld generate_mixture(const MixtureSpec& spec);

/// Points plus category prototypes in one matrix, the form written to disk.
EmbeddingMatrix world_embedding_file(const SyntheticWorld& world, const std::string& model_id);

/// Reassigns ceil(fraction * |X|) distinct, uniformly chosen items to a
/// uniformly chosen different label. Items in singleton clusters are passed
/// over so K stays the same.
Partition perturb_labels(const Partition& partition, double fraction, std::uint64_t seed);

/// Calls visit(rgs) for every restricted growth string of length n with at
/// most max_blocks blocks, in lexicographic order. Each string is one set
/// partition: rgs[0] = 0 and rgs[i] <= 1 + max(rgs[0..i)).
void for_each_set_partition(std::size_t n, std::size_t max_blocks,
                            const std::function<void(const std::vector<std::size_t>&)>& visit);

struct BruteForceObjective {
  enum class Kind { distortion, l_with_beta } kind = Kind::distortion;
  double beta = 1.0;

  static BruteForceObjective distortion() { return {}; }
  static BruteForceObjective l_value(double beta) { return {Kind::l_with_beta, beta}; }
};

inline constexpr std::size_t kBruteForceMaxItems = 12;

struct BruteForceResult {
  Partition partition;
  double objective = 0.0;
};

/// Exhaustive minimum over every partition into at most K nonempty blocks.
/// Ties keep the lexicographically smallest label vector. |X| <= 12.
BruteForceResult brute_force_best_partition(const EmbeddingMatrix& embeddings, std::size_t k,
                                            BruteForceObjective objective);

}  // namespace semcomp
