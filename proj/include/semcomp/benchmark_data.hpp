#pragma once

#include "semcomp/embedding_store.hpp"
#include "semcomp/partition.hpp"

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semcomp {

enum class Source { rosch1973, rosch1975, mccloskey1978, synthetic };
enum class Orientation { higher_more_typical, lower_more_typical };

std::string_view to_string(Source s);
std::string_view to_string(Orientation o);
Source parse_source(std::string_view text);
Orientation parse_orientation(std::string_view text);

struct BenchmarkRow {
  Source source;
  std::string item;
  std::string category;
  double typicality;
  Orientation orientation;
};

/// Lowercase and trim surrounding ASCII whitespace.
std::string canonical_text(std::string_view text);

/// Typicality with "higher = more typical" regardless of the source's scale.
double canonical_typicality(const BenchmarkRow& row);

/// Merged human categorization data. Rows keep file order.
class BenchmarkTable {
 public:
  BenchmarkTable() = default;
  explicit BenchmarkTable(std::vector<BenchmarkRow> rows);

  const std::vector<BenchmarkRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  /// Unique categories in first-appearance order.
  const std::vector<std::string>& categories() const noexcept { return categories_; }
  /// Unique item strings in first-appearance order.
  const std::vector<std::string>& items() const noexcept { return items_; }
  /// Number of distinct (source, item) rows; duplicates across sources count separately.
  std::size_t item_count() const noexcept { return rows_.size(); }

  /// Throws InputError on duplicate (source, item) or a category with fewer than 2 items.
  void validate() const;

  /// Rows whose item is not in `skip`.
  BenchmarkTable without(const std::set<std::string>& skip) const;

 private:
  std::vector<BenchmarkRow> rows_;
  std::vector<std::string> categories_;
  std::vector<std::string> items_;
};

/// Reads `source,item,category,typicality,orientation`. The source and
/// orientation columns may be omitted, in which case the defaults apply;
/// when present they win over the defaults.
BenchmarkTable load_benchmark_csv(const std::filesystem::path& path,
                                  std::optional<Source> source = std::nullopt,
                                  std::optional<Orientation> orientation = std::nullopt);

void save_benchmark_csv(const BenchmarkTable& table, const std::filesystem::path& path);

BenchmarkTable merge(const std::vector<BenchmarkTable>& tables);

/// One item per line; blank lines and lines starting with '#' ignored.
std::set<std::string> load_skip_list(const std::filesystem::path& path);

struct HumanPartition {
  Partition partition;
  std::vector<std::string> skipped;  // table items left out via the skip-list
  double coverage = 0.0;             // covered rows / table rows
};

/// Human categories over the embedding rows that carry benchmark items, in
/// embedding-matrix order. Items missing from `embeddings` must be listed in
/// `skip`, otherwise UnknownItemError names the first one. An item listed in
/// several categories (possible only in merged tables) keeps its first category.
HumanPartition human_partition(const BenchmarkTable& table, const EmbeddingMatrix& embeddings,
                               const std::set<std::string>& skip = {});

}  // namespace semcomp
