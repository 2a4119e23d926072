#include "pmaps/asymptotics.hpp"

#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace pmaps {

namespace {

using Real = boost::multiprecision::mpfr_float_100;

constexpr int kMinLength = 30;
constexpr int kMaxOrder = 10;

// Neville extrapolation of s(h) to h = 0 from the last points, keeping the
// order whose change from the previous order is smallest.
Extrapolation extrapolate(const std::vector<Real>& h, const std::vector<Real>& s) {
  const int m = static_cast<int>(s.size());
  if (m < 2) throw UsageError("too few points to extrapolate");
  const int top = std::min(kMaxOrder, m - 1);
  std::vector<Real> prev;
  Extrapolation best{static_cast<double>(s.back()), std::numeric_limits<double>::infinity(), 0};
  Real last = s.back();
  for (int order = 1; order <= top; ++order) {
    // polynomial through the last order + 1 points, evaluated at 0
    const int base = m - 1 - order;
    std::vector<Real> p(s.begin() + base, s.end());
    for (int w = 1; w <= order; ++w)
      for (int i = 0; i + w <= order; ++i) {
        const Real& hi = h[base + i];
        const Real& hj = h[base + i + w];
        p[i] = (hj * p[i] - hi * p[i + 1]) / (hj - hi);
      }
    const double res = static_cast<double>(abs(p[0] - last));
    if (order >= 2 && res < best.residual) best = {static_cast<double>(p[0]), res, order};
    last = p[0];
  }
  if (best.order == 0) best = {static_cast<double>(last), static_cast<double>(abs(last - s.back())), 1};
  return best;
}

Real to_real(const mpz_class& z) { return Real(z.get_str()); }

struct Tail {
  std::vector<Real> h, s;
  void add(int n, const Real& v) {
    h.push_back(Real(1) / n);
    s.push_back(v);
  }
};

GrowthEstimate estimate(const std::vector<Real>& A, const std::vector<Real>& B, const std::vector<Real>& C2) {
  const int len = static_cast<int>(A.size());
  if (len < kMinLength) throw UsageError("at least " + std::to_string(kMinLength) + " coefficients are needed");
  const int lo = len - 1 - 2 * kMaxOrder;
  for (int n = lo - 2; n < len; ++n)
    if (A[n] <= 0) throw UsageError("non-positive coefficient A_" + std::to_string(n));

  GrowthEstimate g;
  Tail ratio;
  for (int n = lo; n < len; ++n) {
    Real r = A[n] / A[n - 1] * pow(Real(n) / (n - 1), Real(5) / 2);
    ratio.add(n, r);
    g.ratio_sequence.push_back(static_cast<double>(r));
  }
  g.ratio = extrapolate(ratio.h, ratio.s);
  g.rho0 = g.ratio.value;

  Tail alpha;
  const Real rho = Real(g.rho0);
  for (int n = lo; n < len; ++n) alpha.add(n, n * (A[n] / A[n - 1] / rho - 1));
  g.alpha_free = extrapolate(alpha.h, alpha.s).value;

  if (!B.empty()) {
    if (static_cast<int>(B.size()) != len) throw UsageError("A and B lengths differ");
    auto E = [&](int n) { return B[n] / A[n]; };
    Tail slope, intercept;
    for (int n = lo; n < len; ++n) {
      Real d = E(n) - E(n - 1);
      slope.add(n, d);
      intercept.add(n, E(n) - n * d);
    }
    g.slope = extrapolate(slope.h, slope.s);
    g.intercept = extrapolate(intercept.h, intercept.s);
    g.rho1 = g.rho0 * g.slope.value;
    g.c_log_deriv = g.intercept.value;
    g.has_first = true;
    if (!C2.empty()) {
      if (static_cast<int>(C2.size()) != len) throw UsageError("A and C lengths differ");
      auto V = [&](int n) { return C2[n] / A[n] - E(n) * E(n); };
      Tail curv;
      for (int n = lo; n < len; ++n) curv.add(n, V(n) - V(n - 1));
      g.curvature = extrapolate(curv.h, curv.s);
      // kappa = rho''/rho - (rho'/rho)^2
      g.rho2 = g.rho0 * (g.curvature.value + g.slope.value * g.slope.value);
      g.has_second = true;
    }
  }
  return g;
}

template <class T>
std::vector<Real> convert(const std::vector<T>& v) {
  std::vector<Real> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if constexpr (std::is_same_v<T, mpz_class>)
      out.push_back(to_real(x));
    else
      out.push_back(Real(x));
  }
  return out;
}

template <unsigned Digits>
ContourResult contour_impl(const std::vector<double>& f, const std::vector<double>& g, double n, double k,
                           double tol) {
  using R = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<Digits>>;
  const std::size_t deg = std::max(f.size(), g.size());
  std::vector<R> p(deg, R(0));
  for (std::size_t j = 0; j < f.size(); ++j) p[j] += R(n) * R(f[j]);
  for (std::size_t j = 0; j < g.size(); ++j) p[j] += R(g[j]);
  if (k == 0) return {static_cast<double>(p.empty() ? R(0) : p[0]), 1, 0};
  if (f.size() < 2 || f[1] <= 0) throw UsageError("contour radius needs f'(0) > 0");
  const R radius = R(k) / (R(n) * R(f[1]));
  R h_r = 0;
  for (std::size_t j = deg; j-- > 0;) h_r = h_r * radius + p[j];
  const R two_pi = R(2) * boost::math::constants::pi<R>();
  auto mean_at = [&](int nodes) {
    R sum = 0;
    for (int m = 0; m < nodes; ++m) {
      const R theta = two_pi * m / nodes;
      const R c = cos(theta), s = sin(theta);
      // z = radius * e^{i theta}; evaluate p(z) by Horner in complex arithmetic
      R re = 0, im = 0;
      const R zr = radius * c, zi = radius * s;
      for (std::size_t j = deg; j-- > 0;) {
        const R nr = re * zr - im * zi + p[j];
        im = re * zi + im * zr;
        re = nr;
      }
      sum += exp(re - h_r) * cos(im - R(k) * theta);
    }
    return R(sum / nodes);
  };
  int nodes = 16;
  R prev = mean_at(nodes);
  for (;;) {
    nodes *= 2;
    if (nodes > (1 << 22)) throw NumericError("contour quadrature did not converge");
    R cur = mean_at(nodes);
    const R change = abs(cur - prev) / abs(cur);
    if (change < tol) {
      if (cur <= 0) throw NumericError("contour quadrature gave a non-positive coefficient");
      return {static_cast<double>(h_r - R(k) * log(radius) + log(cur)), nodes, static_cast<double>(change)};
    }
    prev = cur;
  }
}

double fraction(const mpz_class& a, const mpz_class& b) {
  mpq_class q(a, b);
  q.canonicalize();
  return q.get_d();
}

double log_factorial(double k) { return std::lgamma(k + 1); }

}  // namespace

GrowthEstimate estimate_growth(const std::vector<mpz_class>& A, const std::vector<mpz_class>& B,
                               const std::vector<mpz_class>& C2) {
  return estimate(convert(A), convert(B), convert(C2));
}

GrowthEstimate estimate_growth_decimal(const std::vector<std::string>& A, const std::vector<std::string>& B,
                                       const std::vector<std::string>& C2) {
  return estimate(convert(A), convert(B), convert(C2));
}

MomentConstants moment_constants(const GrowthEstimate& g) {
  if (g.rho0 <= 0) throw UsageError("growth estimate has no positive rho(0)");
  MomentConstants m;
  m.c1 = g.rho1 / g.rho0;
  m.c2_sq = (g.rho2 * g.rho0 + g.rho1 * g.rho0 - g.rho1 * g.rho1) / (g.rho0 * g.rho0);
  return m;
}

double saddle_factorial_moment(const SaddleInput& s) {
  if (s.f1 <= 0) throw UsageError("saddle radius k / (n f'(0)) needs f'(0) > 0");
  if (s.n <= 0 || s.k < 0) throw UsageError("saddle input needs n > 0 and k >= 0");
  double v = s.g0 + s.n * s.f0 - 2.5 * std::log(s.n);
  if (s.k > 0) v += s.k * std::log(s.n) + s.k * std::log(s.f1) + s.k * s.k * s.f2 / (2 * s.n * s.f1 * s.f1);
  return v;
}

ContourResult contour_oracle(const std::vector<double>& f, const std::vector<double>& g, double n, double k,
                             int digits, double tol) {
  if (n <= 0 || k < 0 || k != std::floor(k)) throw UsageError("contour oracle needs n > 0 and integer k >= 0");
  if (digits <= 30) return contour_impl<30>(f, g, n, k, tol);
  if (digits <= 50) return contour_impl<50>(f, g, n, k, tol);
  if (digits <= 100) return contour_impl<100>(f, g, n, k, tol);
  if (digits <= 200) return contour_impl<200>(f, g, n, k, tol);
  throw UsageError("working precision above 200 digits is not supported");
}

double contour_factorial_moment(const std::vector<double>& f, const std::vector<double>& g, double n, double k,
                                int digits) {
  return contour_oracle(f, g, n, k, digits).log_value + log_factorial(k) - 2.5 * std::log(n);
}

std::vector<GwRow> gw_condition_check(const std::vector<DistributionTable>& dists, int kmax) {
  std::vector<GwRow> rows;
  for (const auto& d : dists) {
    const mpq_class mu = d.mean(), var = d.variance();
    const bool degenerate = mu == 0 || var == 0;
    for (int k = 0; k <= kmax; ++k) {
      GwRow r{d.n, k, 0, 0, degenerate};
      if (k == 0) {
        r.ratio = r.ratio_k_squared = 1;
      } else if (!degenerate) {
        const mpq_class fm = d.factorial_moment(k);
        const double m = mu.get_d();
        const double t = mpq_class((var - mu) / (mu * mu)).get_d();
        const double base = fm == 0 ? -std::numeric_limits<double>::infinity()
                                    : std::log(fm.get_d()) - k * std::log(m);
        r.ratio = k == 1 ? mpq_class(fm / mu).get_d() : std::exp(base - 0.5 * k * (k - 1) * t);
        r.ratio_k_squared = std::exp(base - 0.5 * k * k * t);
      }
      rows.push_back(r);
    }
  }
  return rows;
}

std::vector<SandwichRow> sandwich_check(const std::vector<LabeledConfigCounts>& rows,
                                        const std::vector<DistributionTable>& dists) {
  std::vector<SandwichRow> out;
  for (const auto& c : rows) {
    const DistributionTable* d = nullptr;
    for (const auto& t : dists)
      if (t.n == c.n) d = &t;
    if (!d) throw UsageError("no distribution for n = " + std::to_string(c.n));
    SandwichRow r{c.n, c.k, c.m_circ_cross, c.m_circ};
    const double mu = d->mean().get_d();
    r.right = c.m_circ_cross.get_d() + std::pow(mu / 2, c.k) * d->total.get_d();
    r.residual = c.m_circ.get_d() - r.right;
    r.left_holds = c.m_circ_cross <= c.m_circ;
    r.left_equal = c.m_circ_cross == c.m_circ;
    out.push_back(r);
  }
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

KsResult ks_normality(const DistributionTable& dist) {
  if (dist.total == 0) throw UsageError("empty distribution");
  const mpq_class var = dist.variance();
  if (var == 0) return {0.5, true};
  const double mu = dist.mean().get_d();
  const double sigma = std::sqrt(var.get_d());
  KsResult r;
  mpz_class below = 0;
  for (const auto& [x, c] : dist.histogram) {
    const double y = (x - mu) / sigma;
    const double phi = normal_cdf(y);
    const double before = fraction(below, dist.total);
    below += c;
    const double after = fraction(below, dist.total);
    r.distance = std::max({r.distance, std::abs(before - phi), std::abs(after - phi)});
  }
  return r;
}

}  // namespace pmaps
