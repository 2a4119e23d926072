#pragma once

#include <map>
#include <vector>

#include "pmaps/map.hpp"
#include "pmaps/pattern.hpp"
#include "pmaps/series.hpp"

namespace pmaps {

// The right-hand side of the class's plain functional equation (no pattern
// terms), evaluated at F. u marks the root-face valency (valency / 2 for
// bipartite maps).
//   all:        1 + z u^2 F^2 + z u (u F(u) - F(1)) / (u - 1)
//   bipartite:  1 + z u F^2 + z u (F(1) - F(u)) / (1 - u)
//   2conn:      z u D / (1 - D),  D = z u + (u F(1) - F(u)) / (1 - u)
Series plain_rhs(MapClass cls, const Series& F);

// Solution of the plain equation to z^nz (x-truncation nx, x absent).
Series solve_tutte(MapClass cls, int nz, int nx = 0);

// P_0 .. P_imax: maps of the class with a partial simple boundary of length
// i, built from the class series `base` (all maps or bipartite maps).
//   all:       P_0 = M, P_l = M_{>l-1} - sum_{j<l} P_j u^{l-j} [u^{l-j}] M^{j+1}
//   bipartite: the parity-split recursion, u marking half the valency.
std::vector<Series> partial_boundary_series(int imax, MapClass cls, const Series& base);

// Generating function of fillings of a deep face of valency j, divided by
// z^j (the face's boundary edges are counted by the intersection type).
//   all / bipartite: [u^j] P_{j-1} / z^j (u^{j/2} for bipartite)
//   2conn:           n_j / z^j
Series deep_face_filling(int j, MapClass cls, const Series& base, const std::vector<Series>& partial);

// 2-connected maps: the non-empty sequences of edges or 2-connected blocks
// that together provide b - 1 boundary edges of an isolated occurrence whose
// boundary has length b: [w^{b-1}] G / (1 - G), G = z u^2 w + (w N(u) - N(uw)) / (1 - w).
Series sequence_block_extract(const Series& N, int b);

struct TypeConstants {
  int r = 0, e = 0, v = 0;
  std::map<int, int> deep_faces;  // valency -> multiplicity
};

class PatternEquation {
 public:
  MapClass cls = MapClass::All;
  int e = 0, v = 0, r = 0;
  std::vector<TypeConstants> types;

  static PatternEquation build(const Pattern& p, const std::vector<IntersectionType>& types, MapClass cls);

  // Full right-hand side evaluated at F.
  Series rhs(const Series& F) const;
  void validate() const;
};

Series solve_pattern_equation(const PatternEquation& eq, int nz, int nx);

// [z^n x^k] at u = 1, times k!.
struct LabeledCoefficients {
  std::vector<mpz_class> A, B, C2;  // A_n, 1!·B_n, 2!·C_n
};
LabeledCoefficients labeled_coefficients(const Series& F);

// Checks stored coefficients against the class invariants: u-degree bound per
// z-power and non-negativity. Throws SeriesError on violation.
void check_series_invariants(MapClass cls, const Series& F);

}  // namespace pmaps
