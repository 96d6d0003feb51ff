#include "semcomp/typicality.hpp"

#include "semcomp/clustering.hpp"
#include "semcomp/errors.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace semcomp {

std::string_view to_string(SimilarityMode m) {
  return m == SimilarityMode::to_category_label ? "to_category_label" : "to_centroid";
}

std::string_view to_string(CorrelationScope s) {
  return s == CorrelationScope::pooled ? "pooled" : "per_category";
}

std::string_view to_string(TypicalityScale s) {
  return s == TypicalityScale::raw ? "raw" : "canonical";
}

SimilarityMode parse_similarity_mode(std::string_view text) {
  if (text == "to_category_label") return SimilarityMode::to_category_label;
  if (text == "to_centroid") return SimilarityMode::to_centroid;
  throw InputError("unknown similarity mode '" + std::string(text) + "'");
}

CorrelationScope parse_correlation_scope(std::string_view text) {
  if (text == "pooled") return CorrelationScope::pooled;
  if (text == "per_category") return CorrelationScope::per_category;
  throw InputError("unknown correlation scope '" + std::string(text) + "'");
}

double cosine_similarity(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw InputError("cosine similarity of a zero vector");
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

SimilaritySeries item_to_label_similarity(const EmbeddingMatrix& embeddings,
                                          const BenchmarkTable& table) {
  SimilaritySeries out;
  out.mode = SimilarityMode::to_category_label;
  for (const auto& category : table.categories()) {
    if (!embeddings.contains(category)) {
      out.skipped.push_back("category '" + category + "': no embedding for the category name");
    }
  }
  for (const auto& row : table.rows()) {
    auto cat = embeddings.index_of(row.category);
    if (!cat) continue;
    auto item = embeddings.index_of(row.item);
    if (!item) {
      out.skipped.push_back("item '" + row.item + "': no embedding");
      continue;
    }
    const Eigen::RowVectorXd a = embeddings.vectors().row(static_cast<Eigen::Index>(*item));
    const Eigen::RowVectorXd b = embeddings.vectors().row(static_cast<Eigen::Index>(*cat));
    if (a.norm() == 0.0 || b.norm() == 0.0) {
      out.skipped.push_back("item '" + row.item + "': zero vector");
      continue;
    }
    out.entries.push_back({row.source, row.item, row.category, cosine_similarity(a, b)});
  }
  return out;
}

SimilaritySeries item_to_centroid_similarity(const EmbeddingMatrix& embeddings,
                                             const Partition& partition) {
  const CentroidSet centroids = centroids_of(embeddings, partition);
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (centroids.centroids.row(static_cast<Eigen::Index>(c)).norm() == 0.0) {
      throw InputError("cluster '" + partition.name(c) + "' has a zero centroid");
    }
  }
  SimilaritySeries out;
  out.mode = SimilarityMode::to_centroid;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const Eigen::RowVectorXd x = embeddings.vectors().row(static_cast<Eigen::Index>(i));
    if (x.norm() == 0.0) throw InputError("item '" + partition.items()[i] + "' is a zero vector");
    const std::size_t c = partition.label(i);
    const Eigen::RowVectorXd centroid = centroids.centroids.row(static_cast<Eigen::Index>(c));
    out.entries.push_back({std::nullopt, partition.items()[i], partition.name(c),
                           cosine_similarity(x, centroid)});
  }
  return out;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share rank ((i+1) + (j+1)) / 2.
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

CorrelationResult spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw InputError("spearman inputs differ in length");
  if (xs.size() < 3) throw InputError("spearman needs at least 3 pairs");
  CorrelationResult res;
  res.n = xs.size();

  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const auto n = static_cast<double>(res.n);
  const double mean = (n + 1.0) / 2.0;  // mean of average ranks is always (n+1)/2
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < res.n; ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return res;

  const double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  res.rho = rho;
  if (std::abs(rho) == 1.0) {
    res.p_value = 0.0;
  } else {
    const double df = n - 2.0;
    const double t = rho * std::sqrt(df / (1.0 - rho * rho));
    boost::math::students_t dist(df);
    res.p_value = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0, 1.0);
  }
  return res;
}

std::vector<CorrelationResult> typicality_correlations(const SimilaritySeries& series,
                                                       const BenchmarkTable& table,
                                                       CorrelationScope scope,
                                                       std::vector<std::string>* skipped) {
  std::multimap<std::pair<std::string, std::string>, const SimilarityEntry*> by_key;
  for (const auto& e : series.entries) by_key.emplace(std::pair{e.item, e.category}, &e);

  struct Joined {
    double similarity, raw, canonical;
    const std::string* category;
  };
  std::vector<Joined> joined;
  for (const auto& row : table.rows()) {
    auto [lo, hi] = by_key.equal_range({row.item, row.category});
    for (auto it = lo; it != hi; ++it) {
      const auto* e = it->second;
      if (e->source && *e->source != row.source) continue;
      joined.push_back({e->similarity, row.typicality, canonical_typicality(row), &row.category});
      break;
    }
  }

  std::vector<CorrelationResult> out;
  auto correlate = [&](const std::vector<const Joined*>& group, const std::string& category) {
    if (group.size() < 3) {
      if (skipped) {
        skipped->push_back((category.empty() ? std::string("pooled scope") : "category '" + category + "'") +
                           ": only " + std::to_string(group.size()) + " joined pairs");
      }
      return;
    }
    std::vector<double> sim, raw, canon;
    for (const auto* j : group) {
      sim.push_back(j->similarity);
      raw.push_back(j->raw);
      canon.push_back(j->canonical);
    }
    for (auto [scale, values] : {std::pair{TypicalityScale::raw, &raw},
                                 std::pair{TypicalityScale::canonical, &canon}}) {
      auto r = spearman(sim, *values);
      r.scope = scope;
      r.category = category;
      r.scale = scale;
      out.push_back(std::move(r));
    }
  };

  if (scope == CorrelationScope::pooled) {
    std::vector<const Joined*> all;
    for (const auto& j : joined) all.push_back(&j);
    correlate(all, "");
  } else {
    for (const auto& category : table.categories()) {
      std::vector<const Joined*> group;
      for (const auto& j : joined) {
        if (*j.category == category) group.push_back(&j);
      }
      correlate(group, category);
    }
  }
  return out;
}

}  // namespace semcomp
