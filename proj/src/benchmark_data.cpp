#include "semcomp/benchmark_data.hpp"

#include "semcomp/csv.hpp"
#include "semcomp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace semcomp {

std::string_view to_string(Source s) {
  switch (s) {
    case Source::rosch1973: return "rosch1973";
    case Source::rosch1975: return "rosch1975";
    case Source::mccloskey1978: return "mccloskey1978";
    case Source::synthetic: return "synthetic";
  }
  return "?";
}

std::string_view to_string(Orientation o) {
  return o == Orientation::higher_more_typical ? "higher_more_typical" : "lower_more_typical";
}

Source parse_source(std::string_view text) {
  const std::string t = canonical_text(text);
  for (auto s : {Source::rosch1973, Source::rosch1975, Source::mccloskey1978, Source::synthetic}) {
    if (t == to_string(s)) return s;
  }
  throw InputError("unknown benchmark source '" + std::string(text) + "'");
}

Orientation parse_orientation(std::string_view text) {
  const std::string t = canonical_text(text);
  if (t == "higher_more_typical") return Orientation::higher_more_typical;
  if (t == "lower_more_typical") return Orientation::lower_more_typical;
  throw InputError("unknown orientation '" + std::string(text) + "'");
}

std::string canonical_text(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!text.empty() && is_space(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && is_space(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double canonical_typicality(const BenchmarkRow& row) {
  return row.orientation == Orientation::higher_more_typical ? row.typicality : -row.typicality;
}

BenchmarkTable::BenchmarkTable(std::vector<BenchmarkRow> rows) : rows_(std::move(rows)) {
  std::unordered_set<std::string> cats, items;
  for (const auto& r : rows_) {
    if (cats.insert(r.category).second) categories_.push_back(r.category);
    if (items.insert(r.item).second) items_.push_back(r.item);
  }
}

void BenchmarkTable::validate() const {
  std::map<std::pair<Source, std::string>, std::size_t> seen;
  std::unordered_map<std::string, std::size_t> per_category;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (r.item.empty() || r.category.empty()) {
      throw InputError("benchmark row " + std::to_string(i) + " has an empty item or category");
    }
    if (!std::isfinite(r.typicality)) {
      throw InputError("benchmark row '" + r.item + "' has non-finite typicality");
    }
    if (!seen.emplace(std::pair{r.source, r.item}, i).second) {
      throw InputError("duplicate item '" + r.item + "' in source " +
                       std::string(to_string(r.source)));
    }
    ++per_category[r.category];
  }
  for (const auto& c : categories_) {
    if (per_category[c] < 2) throw InputError("category '" + c + "' has fewer than 2 items");
  }
}

BenchmarkTable BenchmarkTable::without(const std::set<std::string>& skip) const {
  std::vector<BenchmarkRow> kept;
  for (const auto& r : rows_) {
    if (!skip.contains(r.item)) kept.push_back(r);
  }
  return BenchmarkTable(std::move(kept));
}

BenchmarkTable load_benchmark_csv(const std::filesystem::path& path, std::optional<Source> source,
                                  std::optional<Orientation> orientation) {
  const CsvTable csv = read_csv(path);
  std::vector<std::string> header;
  for (const auto& h : csv.header) header.push_back(canonical_text(h));
  auto col = [&](std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_source = col("source");
  const int c_item = col("item");
  const int c_category = col("category");
  const int c_typ = col("typicality");
  const int c_orient = col("orientation");

  auto where = [&](std::size_t r) { return path.string() + ":" + std::to_string(csv.lines[r]) + ": "; };
  for (auto [name, idx] : {std::pair{"item", c_item}, std::pair{"category", c_category},
                           std::pair{"typicality", c_typ}}) {
    if (idx < 0) throw InputError(path.string() + ": missing column '" + name + "'");
  }
  if (c_source < 0 && !source) throw InputError(path.string() + ": missing column 'source'");
  if (c_orient < 0 && !orientation) {
    throw InputError(path.string() + ": missing column 'orientation'");
  }

  std::vector<BenchmarkRow> rows;
  rows.reserve(csv.rows.size());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& f = csv.rows[r];
    BenchmarkRow row{};
    try {
      row.source = c_source >= 0 && !canonical_text(f[c_source]).empty() ? parse_source(f[c_source])
                                                                         : *source;
      row.orientation = c_orient >= 0 && !canonical_text(f[c_orient]).empty()
                            ? parse_orientation(f[c_orient])
                            : *orientation;
    } catch (const InputError& e) {
      throw InputError(where(r) + e.what());
    } catch (const std::bad_optional_access&) {
      throw InputError(where(r) + "empty source or orientation with no default");
    }
    row.item = canonical_text(f[c_item]);
    row.category = canonical_text(f[c_category]);
    if (row.item.empty() || row.category.empty()) {
      throw InputError(where(r) + "empty item or category");
    }
    const std::string t = canonical_text(f[c_typ]);
    double value = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() || !std::isfinite(value)) {
      throw InputError(where(r) + "non-numeric typicality '" + f[c_typ] + "'");
    }
    row.typicality = value;
    rows.push_back(std::move(row));
  }

  BenchmarkTable table(std::move(rows));
  try {
    table.validate();
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return table;
}

void save_benchmark_csv(const BenchmarkTable& table, const std::filesystem::path& path) {
  CsvWriter csv({"source", "item", "category", "typicality", "orientation"});
  for (const auto& r : table.rows()) {
    csv.row({std::string(to_string(r.source)), r.item, r.category, format_double(r.typicality),
             std::string(to_string(r.orientation))});
  }
  csv.save(path);
}

BenchmarkTable merge(const std::vector<BenchmarkTable>& tables) {
  std::vector<BenchmarkRow> rows;
  for (const auto& t : tables) rows.insert(rows.end(), t.rows().begin(), t.rows().end());
  BenchmarkTable merged(std::move(rows));
  merged.validate();
  return merged;
}

std::set<std::string> load_skip_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open skip-list " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto item = canonical_text(line);
    if (item.empty() || item.front() == '#') continue;
    out.insert(std::move(item));
  }
  return out;
}

HumanPartition human_partition(const BenchmarkTable& table, const EmbeddingMatrix& embeddings,
                               const std::set<std::string>& skip) {
  std::unordered_map<std::string, std::string> category_of;
  std::size_t covered_rows = 0;
  std::vector<std::string> skipped;
  std::unordered_set<std::string> skipped_seen;
  for (const auto& r : table.rows()) {
    if (skip.contains(r.item)) {
      if (skipped_seen.insert(r.item).second) skipped.push_back(r.item);
      continue;
    }
    if (!embeddings.contains(r.item)) throw UnknownItemError(r.item);
    ++covered_rows;
    category_of.emplace(r.item, r.category);
  }

  std::vector<std::string> items;
  std::vector<std::string> names;
  for (const auto& item : embeddings.items()) {
    auto it = category_of.find(item);
    if (it == category_of.end()) continue;
    items.push_back(item);
    names.push_back(it->second);
  }

  HumanPartition out;
  out.partition = Partition::from_names(std::move(items), names);
  out.skipped = std::move(skipped);
  out.coverage = table.empty() ? 0.0
                               : static_cast<double>(covered_rows) / static_cast<double>(table.size());
  return out;
}

}  // namespace semcomp
