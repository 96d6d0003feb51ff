#include "semcomp/partition.hpp"

#include "semcomp/csv.hpp"
#include "semcomp/errors.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>

namespace semcomp {

Partition::Partition(std::vector<std::string> items, std::vector<std::size_t> labels,
                     std::vector<std::string> label_names)
    : items_(std::move(items)), labels_(std::move(labels)), names_(std::move(label_names)) {
  if (items_.size() != labels_.size()) {
    throw InputError("partition has " + std::to_string(labels_.size()) + " labels for " +
                     std::to_string(items_.size()) + " items");
  }
  std::vector<bool> used(names_.size(), false);
  for (std::size_t l : labels_) {
    if (l >= names_.size()) throw InputError("partition label out of range");
    used[l] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw InputError("partition declares an empty cluster");
  }
}

Partition Partition::from_names(std::vector<std::string> items,
                                const std::vector<std::string>& names) {
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<std::string> label_names;
  std::vector<std::size_t> labels;
  labels.reserve(names.size());
  for (const auto& n : names) {
    auto [it, fresh] = ids.emplace(n, label_names.size());
    if (fresh) label_names.push_back(n);
    labels.push_back(it->second);
  }
  return Partition(std::move(items), std::move(labels), std::move(label_names));
}

Partition Partition::from_ints(std::vector<std::string> items, const std::vector<long long>& raw) {
  std::map<long long, std::size_t> ids;
  for (long long r : raw) ids.emplace(r, 0);
  std::vector<std::string> label_names;
  for (auto& [value, id] : ids) {
    id = label_names.size();
    label_names.push_back(std::to_string(value));
  }
  std::vector<std::size_t> labels;
  labels.reserve(raw.size());
  for (long long r : raw) labels.push_back(ids[r]);
  return Partition(std::move(items), std::move(labels), std::move(label_names));
}

Partition Partition::from_ints(const std::vector<long long>& raw) {
  std::vector<std::string> items;
  items.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) items.push_back(std::to_string(i));
  return from_ints(std::move(items), raw);
}

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> sizes(names_.size(), 0);
  for (std::size_t l : labels_) ++sizes[l];
  return sizes;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> out(names_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
  return out;
}

bool Partition::same_grouping(const Partition& other) const {
  if (items_ != other.items_ || num_clusters() != other.num_clusters()) return false;
  std::vector<std::size_t> map(num_clusters(), num_clusters());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto& m = map[labels_[i]];
    if (m == num_clusters()) m = other.labels_[i];
    else if (m != other.labels_[i]) return false;
  }
  return true;
}

void write_partition_csv(const Partition& partition, const std::filesystem::path& path) {
  CsvWriter csv({"item", "label"});
  for (std::size_t i = 0; i < partition.size(); ++i) {
    csv.row({partition.items()[i], partition.name(partition.label(i))});
  }
  csv.save(path);
}

}  // namespace semcomp
