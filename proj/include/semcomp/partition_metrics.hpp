#pragma once

#include "semcomp/partition.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace semcomp {

/// Counts n_ij of items in cluster i of U and cluster j of V, with marginals.
struct ContingencyTable {
  std::vector<std::vector<std::size_t>> counts;  // rows: U clusters, cols: V clusters
  std::vector<std::size_t> row_sums;             // a_i
  std::vector<std::size_t> col_sums;             // b_j
  std::size_t total = 0;                         // n

  static ContingencyTable from_counts(std::vector<std::vector<std::size_t>> counts);
};

/// Agreement between two partitions. Information quantities are in bits;
/// NMI and AMI normalize by the arithmetic mean of the two entropies.
struct AlignmentScores {
  double mi = 0.0;
  double nmi = 0.0;
  double ami = 0.0;
  double ari = 0.0;
  double entropy_u = 0.0;
  double entropy_v = 0.0;
  double expected_mi = 0.0;
};

inline constexpr std::string_view kNormalizerVariant = "arithmetic";
inline constexpr int kLogBase = 2;

/// Throws InputError unless u and v list the same items in the same order.
ContingencyTable contingency(const Partition& u, const Partition& v);

/// Expected MI (bits) under the hypergeometric permutation model with the
/// table's marginals, summed exactly.
double expected_mutual_information(const ContingencyTable& table);

/// MI, entropies, NMI, AMI and ARI. Requires n >= 2.
///
/// Degenerate conventions: when the normalizer of NMI, AMI or ARI is zero the
/// score is 1 if the two partitions are identical (each row and column of the
/// table holds a single nonzero cell) and 0 otherwise.
AlignmentScores alignment_scores(const ContingencyTable& table);
AlignmentScores alignment_scores(const Partition& u, const Partition& v);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct BaselineScores {
  MeanStd mi, nmi, ami, ari, entropy_u, entropy_v;
  std::size_t repetitions = 0;
};

/// Scores of u against uniformly shuffled copies of v's labels. Repetition r
/// uses its own stream derived from (seed, r).
BaselineScores random_baseline(const Partition& u, const Partition& v, std::size_t repetitions,
                               std::uint64_t seed);

}  // namespace semcomp
