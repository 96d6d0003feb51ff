#pragma once

#include "semcomp/benchmark_data.hpp"
#include "semcomp/embedding_store.hpp"
#include "semcomp/partition.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semcomp {

enum class SimilarityMode { to_category_label, to_centroid };
enum class CorrelationScope { pooled, per_category };
enum class TypicalityScale { raw, canonical };

std::string_view to_string(SimilarityMode m);
std::string_view to_string(CorrelationScope s);
std::string_view to_string(TypicalityScale s);
SimilarityMode parse_similarity_mode(std::string_view text);
CorrelationScope parse_correlation_scope(std::string_view text);

struct SimilarityEntry {
  std::optional<Source> source;  // unset: matches the item under any source
  std::string item;
  std::string category;
  double similarity = 0.0;
};

struct SimilaritySeries {
  SimilarityMode mode = SimilarityMode::to_category_label;
  std::vector<SimilarityEntry> entries;
  /// Human-readable notes about rows that were left out.
  std::vector<std::string> skipped;
};

/// Cosine of two vectors; throws InputError when either is zero.
double cosine_similarity(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b);

/// Cosine between each covered item and the embedding of its category name.
/// Categories whose name has no embedding are skipped and listed; so are items
/// missing from the matrix.
SimilaritySeries item_to_label_similarity(const EmbeddingMatrix& embeddings,
                                          const BenchmarkTable& table);

/// Cosine between each item and the mean vector of its cluster. The partition
/// must list exactly the matrix items. Throws InputError naming the cluster
/// when a centroid is the zero vector.
SimilaritySeries item_to_centroid_similarity(const EmbeddingMatrix& embeddings,
                                             const Partition& partition);

struct CorrelationResult {
  std::optional<double> rho;      // unset when either side is constant
  std::optional<double> p_value;  // two-sided, Student-t approximation
  std::size_t n = 0;
  CorrelationScope scope = CorrelationScope::pooled;
  std::string category;  // per-category scope only
  TypicalityScale scale = TypicalityScale::canonical;

  bool defined() const noexcept { return rho.has_value(); }
};

/// Average ranks (1-based) with ties sharing the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values);

/// Spearman's rho as the Pearson correlation of average ranks. Requires equal
/// lengths and n >= 3; a constant input gives an undefined result.
CorrelationResult spearman(const std::vector<double>& xs, const std::vector<double>& ys);

/// Spearman between similarity and both raw and canonical typicality, joined
/// on (source, item, category). Scopes with fewer than 3 pairs are skipped and
/// noted in `skipped` when given.
std::vector<CorrelationResult> typicality_correlations(const SimilaritySeries& series,
                                                       const BenchmarkTable& table,
                                                       CorrelationScope scope,
                                                       std::vector<std::string>* skipped = nullptr);

}  // namespace semcomp
