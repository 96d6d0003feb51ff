#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace semcomp {

/// Hard assignment of items to clusters.
///
/// Labels are dense indices 0..K-1 and every index is used, so K always counts
/// nonempty clusters. Each index has a display name (a category string for human
/// partitions, the decimal index for k-means output).
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<std::string> items, std::vector<std::size_t> labels,
            std::vector<std::string> label_names);

  /// Labels numbered by first appearance; names are the given strings.
  static Partition from_names(std::vector<std::string> items,
                              const std::vector<std::string>& names);
  /// Arbitrary integer labels, compacted in ascending numeric order.
  static Partition from_ints(std::vector<std::string> items, const std::vector<long long>& raw);
  /// Items named "0".."n-1"; for tests and oracles that have no vocabulary.
  static Partition from_ints(const std::vector<long long>& raw);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t num_clusters() const noexcept { return names_.size(); }

  const std::vector<std::string>& items() const noexcept { return items_; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& label_names() const noexcept { return names_; }
  std::size_t label(std::size_t item) const { return labels_.at(item); }
  const std::string& name(std::size_t cluster) const { return names_.at(cluster); }

  std::vector<std::size_t> cluster_sizes() const;
  /// Item indices per cluster, ascending.
  std::vector<std::vector<std::size_t>> members() const;

  /// Same items and same grouping, ignoring label numbering and names.
  bool same_grouping(const Partition& other) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::string> items_;
  std::vector<std::size_t> labels_;
  std::vector<std::string> names_;
};

/// CSV `item,label` with the label's display name.
void write_partition_csv(const Partition& partition, const std::filesystem::path& path);

}  // namespace semcomp
