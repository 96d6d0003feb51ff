#include "semcomp/partition_metrics.hpp"

#include "semcomp/errors.hpp"
#include "semcomp/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace semcomp {

namespace {

double choose2(std::size_t x) {
  const auto d = static_cast<double>(x);
  return d * (d - 1.0) / 2.0;
}

double entropy_bits(const std::vector<std::size_t>& sizes, std::size_t n) {
  double h = 0.0;
  const auto total = static_cast<double>(n);
  for (std::size_t s : sizes) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / total;
    h -= p * std::log2(p);
  }
  return h;
}

bool is_matching(const ContingencyTable& t) {
  std::vector<int> col_nonzero(t.col_sums.size(), 0);
  for (const auto& row : t.counts) {
    int nz = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0) {
        ++nz;
        ++col_nonzero[j];
      }
    }
    if (nz > 1) return false;
  }
  return std::all_of(col_nonzero.begin(), col_nonzero.end(), [](int c) { return c <= 1; });
}

AlignmentScores scores_with_emi(const ContingencyTable& t, double emi) {
  if (t.total < 2) throw InputError("alignment scores need at least 2 items");
  const auto n = static_cast<double>(t.total);

  AlignmentScores s;
  s.entropy_u = entropy_bits(t.row_sums, t.total);
  s.entropy_v = entropy_bits(t.col_sums, t.total);
  s.expected_mi = emi;

  double mi = 0.0;
  double sum_pairs = 0.0;
  for (std::size_t i = 0; i < t.counts.size(); ++i) {
    for (std::size_t j = 0; j < t.counts[i].size(); ++j) {
      const std::size_t nij = t.counts[i][j];
      if (nij == 0) continue;
      const auto c = static_cast<double>(nij);
      mi += (c / n) *
            std::log2(n * c / (static_cast<double>(t.row_sums[i]) * static_cast<double>(t.col_sums[j])));
      sum_pairs += choose2(nij);
    }
  }
  s.mi = std::max(mi, 0.0);

  const bool identical = is_matching(t);
  const double mean_h = 0.5 * (s.entropy_u + s.entropy_v);
  s.nmi = mean_h > 0.0 ? s.mi / mean_h : (identical ? 1.0 : 0.0);

  const double ami_den = mean_h - emi;
  if (std::abs(ami_den) <= 1e-12 * std::max(1.0, mean_h)) {
    s.ami = identical ? 1.0 : 0.0;
  } else {
    s.ami = (s.mi - emi) / ami_den;
  }

  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t a : t.row_sums) sum_a += choose2(a);
  for (std::size_t b : t.col_sums) sum_b += choose2(b);
  const double expected = sum_a * sum_b / choose2(t.total);
  const double ari_den = 0.5 * (sum_a + sum_b) - expected;
  if (std::abs(ari_den) <= 1e-12 * std::max(1.0, 0.5 * (sum_a + sum_b))) {
    s.ari = identical ? 1.0 : 0.0;
  } else {
    s.ari = (sum_pairs - expected) / ari_den;
  }
  return s;
}

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(xs.size()));
  return out;
}

}  // namespace

ContingencyTable ContingencyTable::from_counts(std::vector<std::vector<std::size_t>> counts) {
  ContingencyTable t;
  const std::size_t cols = counts.empty() ? 0 : counts.front().size();
  t.row_sums.assign(counts.size(), 0);
  t.col_sums.assign(cols, 0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].size() != cols) throw InputError("ragged contingency table");
    for (std::size_t j = 0; j < cols; ++j) {
      t.row_sums[i] += counts[i][j];
      t.col_sums[j] += counts[i][j];
      t.total += counts[i][j];
    }
  }
  t.counts = std::move(counts);
  return t;
}

ContingencyTable contingency(const Partition& u, const Partition& v) {
  if (u.items() != v.items()) {
    throw InputError("partitions cover different items (" + std::to_string(u.size()) + " vs " +
                     std::to_string(v.size()) + ")");
  }
  std::vector<std::vector<std::size_t>> counts(u.num_clusters(),
                                               std::vector<std::size_t>(v.num_clusters(), 0));
  for (std::size_t i = 0; i < u.size(); ++i) ++counts[u.label(i)][v.label(i)];
  return ContingencyTable::from_counts(std::move(counts));
}

double expected_mutual_information(const ContingencyTable& table) {
  const std::size_t n = table.total;
  if (n == 0) return 0.0;
  std::vector<double> lf(n + 1);
  for (std::size_t k = 0; k <= n; ++k) lf[k] = std::lgamma(static_cast<double>(k) + 1.0);

  const auto nd = static_cast<double>(n);
  double emi = 0.0;
  for (std::size_t a : table.row_sums) {
    for (std::size_t b : table.col_sums) {
      if (a == 0 || b == 0) continue;
      const double log_const = lf[a] + lf[b] + lf[n - a] + lf[n - b] - lf[n];
      const std::size_t lo = std::max<std::size_t>(1, a + b > n ? a + b - n : 0);
      const std::size_t hi = std::min(a, b);
      for (std::size_t nij = lo; nij <= hi; ++nij) {
        const double log_p =
            log_const - lf[nij] - lf[a - nij] - lf[b - nij] - lf[n - a - b + nij];
        const auto c = static_cast<double>(nij);
        emi += (c / nd) * std::log(nd * c / (static_cast<double>(a) * static_cast<double>(b))) *
               std::exp(log_p);
      }
    }
  }
  return emi / std::numbers::ln2;
}

AlignmentScores alignment_scores(const ContingencyTable& table) {
  if (table.total < 2) throw InputError("alignment scores need at least 2 items");
  return scores_with_emi(table, expected_mutual_information(table));
}

AlignmentScores alignment_scores(const Partition& u, const Partition& v) {
  return alignment_scores(contingency(u, v));
}

BaselineScores random_baseline(const Partition& u, const Partition& v, std::size_t repetitions,
                               std::uint64_t seed) {
  if (repetitions == 0) throw InputError("random baseline needs at least one repetition");
  const ContingencyTable base = contingency(u, v);
  if (base.total < 2) throw InputError("alignment scores need at least 2 items");
  // Shuffling v keeps both marginals, so E[MI] is shared by every repetition.
  const double emi = expected_mutual_information(base);

  std::vector<double> mi, nmi, ami, ari, hu, hv;
  std::vector<std::size_t> labels = v.labels();
  for (std::size_t r = 0; r < repetitions; ++r) {
    Rng rng = derived_rng(seed, r);
    std::vector<std::size_t> shuffled = labels;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<std::vector<std::size_t>> counts(u.num_clusters(),
                                                 std::vector<std::size_t>(v.num_clusters(), 0));
    for (std::size_t i = 0; i < u.size(); ++i) ++counts[u.label(i)][shuffled[i]];
    const auto s = scores_with_emi(ContingencyTable::from_counts(std::move(counts)), emi);
    mi.push_back(s.mi);
    nmi.push_back(s.nmi);
    ami.push_back(s.ami);
    ari.push_back(s.ari);
    hu.push_back(s.entropy_u);
    hv.push_back(s.entropy_v);
  }
  BaselineScores out;
  out.mi = mean_std(mi);
  out.nmi = mean_std(nmi);
  out.ami = mean_std(ami);
  out.ari = mean_std(ari);
  out.entropy_u = mean_std(hu);
  out.entropy_v = mean_std(hv);
  out.repetitions = repetitions;
  return out;
}

}  // namespace semcomp
