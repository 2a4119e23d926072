#include "pmaps/equations.hpp"

namespace pmaps {

namespace {

Series z_u(const Truncation& t, int j) { return Series::monomial(t, 1, j, 0); }

// (u F(1) - F(u)) / (1 - u) = DD(F) - F(1), with DD(F) = (F(u) - F(1)) / (u - 1).
Series shifted_difference(const Series& F) { return F.divided_difference_u() - F.at_u1(); }

Series two_connected_rhs(const Series& F) {
  const Truncation t = F.truncation();
  Series D = z_u(t, 1) + shifted_difference(F);
  // Y = D / (1 - D) as the fixed point Y = D + D Y.
  Series Y = Series::fixed_point(t, "2conn block sequence", [D](const Series& y) { return D + D * y; });
  return Y.shifted(1, 1, 0);
}

int u_shift_for(MapClass cls, int v) {
  if (cls == MapClass::Bipartite) {
    if (v % 2) throw UsageError("bipartite pattern with odd boundary length " + std::to_string(v));
    return -(v - 2) / 2;
  }
  return -(v - 2);
}

}  // namespace

Series plain_rhs(MapClass cls, const Series& F) {
  const Truncation t = F.truncation();
  const Series one = Series::constant(t);
  switch (cls) {
    case MapClass::All:
      return one + (F * F).shifted(1, 2, 0) + (F.divided_difference_u().shifted(0, 1, 0) + F.at_u1()).shifted(1, 1, 0);
    case MapClass::Bipartite:
      return one + (F * F).shifted(1, 1, 0) + F.divided_difference_u().shifted(1, 1, 0);
    case MapClass::TwoConnected:
      return two_connected_rhs(F);
  }
  throw SeriesError("unknown map class");
}

Series solve_tutte(MapClass cls, int nz, int nx) {
  if (nz < 0) throw UsageError("negative truncation order");
  const Truncation t{nz, nx};
  return Series::fixed_point(t, to_string(cls), [cls](const Series& F) { return plain_rhs(cls, F); });
}

std::vector<Series> partial_boundary_series(int imax, MapClass cls, const Series& base) {
  if (imax < 0) throw UsageError("partial simple boundary length must be non-negative");
  std::vector<Series> P{base};
  if (imax == 0) return P;
  const Truncation t = base.truncation();
  std::vector<Series> pw{Series::constant(t), base};
  auto power = [&](int k) -> const Series& {
    while (static_cast<int>(pw.size()) <= k) pw.push_back(pw.back() * base);
    return pw[k];
  };
  auto term = [&](const Series& Pj, int k, int pw_exp) { return Pj * power(pw_exp).coeff_u(k).shifted(0, k, 0); };
  switch (cls) {
    case MapClass::All:
      for (int l = 1; l <= imax; ++l) {
        Series acc = base.u_above(l - 1);
        for (int j = 0; j < l; ++j) acc = acc - term(P[j], l - j, j + 1);
        P.push_back(acc);
      }
      return P;
    case MapClass::Bipartite:
      for (int l = 1; l <= imax; ++l) {
        const int i = (l + 1) / 2;
        const int half = l / 2;
        Series acc = base.u_above((l % 2 ? i : half) - 1);
        if (l % 2) {
          for (int j = 1; j < i; ++j) acc = acc - term(P[2 * j - 1], i - j, 2 * j);
        } else {
          for (int j = 0; j < half; ++j) acc = acc - term(P[2 * j], half - j, 2 * j + 1);
        }
        P.push_back(acc);
      }
      return P;
    case MapClass::TwoConnected:
      throw UsageError("2-connected maps always have a simple boundary; partial boundaries are not used");
  }
  throw SeriesError("unknown map class");
}

Series deep_face_filling(int j, MapClass cls, const Series& base, const std::vector<Series>& partial) {
  if (j < 1) throw UsageError("deep face valency must be positive");
  switch (cls) {
    case MapClass::All:
      if (static_cast<int>(partial.size()) < j) throw SeriesError("partial boundary series missing for deep face");
      return partial[j - 1].coeff_u(j).shifted(-j, 0, 0);
    case MapClass::Bipartite:
      if (j % 2) throw UsageError("bipartite deep face of odd valency");
      if (static_cast<int>(partial.size()) < j) throw SeriesError("partial boundary series missing for deep face");
      return partial[j - 1].coeff_u(j / 2).shifted(-j, 0, 0);
    case MapClass::TwoConnected:
      return base.coeff_u(j).shifted(-j, 0, 0);
  }
  throw SeriesError("unknown map class");
}

Series sequence_block_extract(const Series& N, int b) {
  if (b < 2) throw UsageError("boundary length must be at least 2");
  const Truncation t = N.truncation();
  const int m = b - 1;
  // G = sum_l w^l G_l, G_1 = z u^2 + N_{>1}, G_l = N_{>l}
  std::vector<Series> G(m + 1);
  G[1] = z_u(t, 2) + N.u_above(1);
  for (int l = 2; l <= m; ++l) G[l] = N.u_above(l);
  // H_a = [w^a] 1/(1-G); [w^m] G/(1-G) = H_m for m >= 1
  std::vector<Series> H{Series::constant(t)};
  for (int a = 1; a <= m; ++a) {
    Series s = G[1] * H[a - 1];
    for (int l = 2; l <= a; ++l) s = s + G[l] * H[a - l];
    H.push_back(s);
  }
  return H[m];
}

PatternEquation PatternEquation::build(const Pattern& p, const std::vector<IntersectionType>& types, MapClass cls) {
  PatternEquation eq;
  eq.cls = cls;
  eq.e = p.edges;
  eq.v = p.boundary_length;
  eq.r = p.rotations;
  for (const auto& it : types) eq.types.push_back({it.rotations, it.edges, it.root_valency, it.deep_faces});
  eq.validate();
  return eq;
}

void PatternEquation::validate() const {
  if (e < 1 || v < 1 || r < 1) throw UsageError("pattern constants must be positive");
  if (e - v + 1 < 1) throw UsageError("pattern has fewer than v - 1 edges off its boundary path");
  if (cls == MapClass::Bipartite && v % 2) throw UsageError("bipartite pattern with odd boundary");
  if (cls == MapClass::TwoConnected && v < 2) throw UsageError("2-connected pattern needs boundary length >= 2");
  for (const auto& t : types) {
    if (t.e > 2 * e || t.e < e) throw UsageError("intersection type edge count inconsistent with the pattern");
    if (t.r < 1 || t.v < 1 || t.e - t.v + 1 < 1) throw UsageError("intersection type constants inconsistent");
    for (const auto& [j, d] : t.deep_faces)
      if (j < 1 || d < 0) throw UsageError("bad deep face entry");
  }
}

Series PatternEquation::rhs(const Series& F) const {
  const Truncation t = F.truncation();
  Series out = plain_rhs(cls, F);
  if (t.nx < 1) return out;

  int imax = v - 1;
  for (const auto& ty : types) {
    imax = std::max(imax, ty.v - 1);
    for (const auto& [j, d] : ty.deep_faces) imax = std::max(imax, j - 1);
  }
  std::vector<Series> P;
  if (cls != MapClass::TwoConnected) P = partial_boundary_series(imax, cls, F);
  auto glue_base = [&](int b) {
    return cls == MapClass::TwoConnected ? sequence_block_extract(F, b) : P[b - 1];
  };

  out = out + glue_base(v).scaled(r).shifted(e - v + 1, u_shift_for(cls, v), 1);
  if (t.nx < 2) return out;
  std::map<int, Series> fill;
  for (const auto& ty : types) {
    Series term = glue_base(ty.v).scaled(ty.r).shifted(ty.e - ty.v + 1, u_shift_for(cls, ty.v), 2);
    for (const auto& [j, d] : ty.deep_faces) {
      if (!fill.count(j)) fill.emplace(j, deep_face_filling(j, cls, F, P));
      for (int i = 0; i < d; ++i) term = term * fill.at(j);
    }
    out = out + term;
  }
  return out;
}

Series solve_pattern_equation(const PatternEquation& eq, int nz, int nx) {
  eq.validate();
  if (nz < 0 || nx < 0) throw UsageError("negative truncation order");
  const Truncation t{nz, nx};
  return Series::fixed_point(t, to_string(eq.cls) + " pattern equation", [&eq](const Series& F) { return eq.rhs(F); });
}

LabeledCoefficients labeled_coefficients(const Series& F) {
  LabeledCoefficients out;
  for (int n = 0; n <= F.nz(); ++n) {
    out.A.push_back(F.at_u1(n, 0));
    out.B.push_back(F.nx() >= 1 ? F.at_u1(n, 1) : mpz_class(0));
    out.C2.push_back(F.nx() >= 2 ? mpz_class(2 * F.at_u1(n, 2)) : mpz_class(0));
  }
  return out;
}

void check_series_invariants(MapClass cls, const Series& F) {
  for (int n = 0; n <= F.nz(); ++n) {
    const PolyUX& c = F.coeff(n);
    const int bound = cls == MapClass::All ? 2 * n : n;
    if (c.u_degree() > bound)
      throw SeriesError("u-degree " + std::to_string(c.u_degree()) + " exceeds the bound at z^" + std::to_string(n));
    for (int k = 0; k <= c.nx(); ++k)
      for (const auto& v : c.x_slice(k))
        if (sgn(v) < 0) throw SeriesError("negative coefficient at z^" + std::to_string(n));
  }
}

}  // namespace pmaps
