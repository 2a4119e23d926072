#pragma once

#include <map>
#include <vector>

#include <gmpxx.h>

#include "pmaps/enumerate.hpp"
#include "pmaps/pattern.hpp"

namespace pmaps {

// Exact law of the number X_n of occurrences of a pattern in a uniform
// random map of the class with n edges.
struct DistributionTable {
  int n = 0;
  MapClass cls = MapClass::All;
  mpz_class total;                        // m_n
  std::map<long, mpz_class> histogram;    // occurrences -> number of maps

  mpq_class mean() const;
  mpq_class variance() const;
  // E[(X_n)_k]
  mpq_class factorial_moment(int k) const;
  // sum over maps of (X)_k, i.e. k! [z^n x^k] of the pattern series
  mpz_class falling_factorial_sum(int k) const;
};

// Maps with k labeled occurrences: ordered k-tuples of distinct occurrences,
// summed over all maps. m_circ_cross only counts tuples in which every
// occurrence intersects at most one other occurrence of the tuple.
struct LabeledConfigCounts {
  int n = 0, k = 0;
  mpz_class m_circ, m_circ_cross;
};

struct PatternStatistics {
  DistributionTable distribution;
  std::vector<LabeledConfigCounts> labeled;  // k = 0 .. kmax
};

// One pass over all maps of size n: occurrence histogram and labeled
// configuration counts for k <= kmax.
PatternStatistics pattern_statistics(Enumerator& enumerator, int n, MapClass cls, const Pattern& p, int kmax);

DistributionTable exact_distribution(Enumerator& enumerator, int n, MapClass cls, const Pattern& p);
LabeledConfigCounts labeled_config_counts(Enumerator& enumerator, int n, int k, MapClass cls, const Pattern& p);

// Exact law of the maximum vertex degree.
struct DegreeStats {
  int n = 0;
  MapClass cls = MapClass::All;
  mpz_class total;
  std::map<int, mpz_class> histogram;  // max degree -> number of maps
  mpq_class mean() const;
};
DegreeStats degree_stats(Enumerator& enumerator, int n, MapClass cls);

}  // namespace pmaps
