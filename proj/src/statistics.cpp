#include "pmaps/statistics.hpp"

#include <functional>

namespace pmaps {

namespace {

mpz_class falling(long x, int k) {
  mpz_class r = 1;
  for (int i = 0; i < k; ++i) r *= x - i;
  return r;
}

// Unordered k-subsets of occurrences whose intersection graph restricted to
// the subset has maximum degree <= 1.
unsigned long sparse_subsets(const std::vector<std::vector<char>>& meets, int k) {
  const int m = static_cast<int>(meets.size());
  std::vector<int> chosen;
  unsigned long count = 0;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(chosen.size()) == k) {
      ++count;
      return;
    }
    for (int i = start; i < m; ++i) {
      int hits = 0;
      bool ok = true;
      for (int c : chosen)
        if (meets[i][c]) {
          ++hits;
          int deg = 0;
          for (int d : chosen) deg += meets[c][d];
          if (deg >= 1) ok = false;
        }
      if (!ok || hits > 1) continue;
      chosen.push_back(i);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return count;
}

mpz_class factorial(int k) {
  mpz_class r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

mpz_class DistributionTable::falling_factorial_sum(int k) const {
  mpz_class s = 0;
  for (const auto& [x, c] : histogram) s += c * falling(x, k);
  return s;
}

mpq_class DistributionTable::factorial_moment(int k) const {
  if (total == 0) throw UsageError("empty distribution");
  mpq_class q(falling_factorial_sum(k), total);
  q.canonicalize();
  return q;
}

mpq_class DistributionTable::mean() const { return factorial_moment(1); }

mpq_class DistributionTable::variance() const {
  const mpq_class mu = mean();
  return factorial_moment(2) + mu - mu * mu;
}

PatternStatistics pattern_statistics(Enumerator& enumerator, int n, MapClass cls, const Pattern& p, int kmax) {
  if (kmax < 0) throw UsageError("k must be non-negative");
  const EnumerationRun& run = enumerator.generate(n, cls);
  struct Local {
    std::map<long, mpz_class> hist;
    std::vector<mpz_class> cross;
  };
  std::vector<Local> local(enumerator.threads());
  for (auto& l : local) l.cross.assign(kmax + 1, 0);
  enumerator.for_each(run, [&](int t, std::size_t, const RootedMap& m) {
    auto occ = find_occurrences(m, p);
    const long x = static_cast<long>(occ.size());
    Local& l = local[t];
    l.hist[x] += 1;
    if (kmax < 3 || x < 3) return;
    std::vector<std::vector<char>> meets(x, std::vector<char>(x, 0));
    for (long i = 0; i < x; ++i)
      for (long j = i + 1; j < x; ++j) meets[i][j] = meets[j][i] = occurrences_intersect(m, occ[i], occ[j]);
    for (int k = 3; k <= kmax; ++k) l.cross[k] += sparse_subsets(meets, k);
  });
  PatternStatistics out;
  out.distribution.n = n;
  out.distribution.cls = cls;
  out.distribution.total = run.total();
  std::vector<mpz_class> cross(kmax + 1, 0);
  for (const auto& l : local) {
    for (const auto& [x, c] : l.hist) out.distribution.histogram[x] += c;
    for (int k = 0; k <= kmax; ++k) cross[k] += l.cross[k];
  }
  for (int k = 0; k <= kmax; ++k) {
    LabeledConfigCounts c{n, k, out.distribution.falling_factorial_sum(k), 0};
    // at most two labeled occurrences can never violate the degree bound
    c.m_circ_cross = k <= 2 ? c.m_circ : mpz_class(cross[k] * factorial(k));
    out.labeled.push_back(c);
  }
  return out;
}

DistributionTable exact_distribution(Enumerator& enumerator, int n, MapClass cls, const Pattern& p) {
  return pattern_statistics(enumerator, n, cls, p, 0).distribution;
}

LabeledConfigCounts labeled_config_counts(Enumerator& enumerator, int n, int k, MapClass cls, const Pattern& p) {
  return pattern_statistics(enumerator, n, cls, p, k).labeled.at(k);
}

mpq_class DegreeStats::mean() const {
  mpz_class s = 0;
  for (const auto& [d, c] : histogram) s += c * d;
  mpq_class q(s, total);
  q.canonicalize();
  return q;
}

DegreeStats degree_stats(Enumerator& enumerator, int n, MapClass cls) {
  const EnumerationRun& run = enumerator.generate(n, cls);
  std::vector<std::map<int, mpz_class>> local(enumerator.threads());
  enumerator.for_each(run, [&](int t, std::size_t, const RootedMap& m) { local[t][m.max_degree()] += 1; });
  DegreeStats out{n, cls, run.total(), {}};
  for (const auto& l : local)
    for (const auto& [d, c] : l) out.histogram[d] += c;
  return out;
}

}  // namespace pmaps
