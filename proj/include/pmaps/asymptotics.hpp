#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pmaps/statistics.hpp"

namespace pmaps {

// A numerical procedure failed to converge or produced an impossible value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Result of a sequence extrapolation: limit, the difference between the two
// highest orders used, and the order that was kept.
struct Extrapolation {
  double value = 0;
  double residual = 0;
  int order = 0;
};

// Coefficients a_n(x) = [z^n] F(z, 1, x) are assumed to behave like
// c(x) n^(-5/2) rho(x)^n. Inputs are A_n = a_n(0), B_n = a_n'(0),
// C2_n = a_n''(0) (that is 1! [x] and 2! [x^2]).
struct GrowthEstimate {
  double rho0 = 0, rho1 = 0, rho2 = 0;
  double c_log_deriv = 0;                 // c'(0) / c(0)
  double alpha_free = 0;                  // exponent estimated without imposing -5/2
  Extrapolation ratio, slope, intercept, curvature;
  std::vector<double> ratio_sequence;     // corrected ratios r_n
  bool has_first = false, has_second = false;
};

// Plain inputs (mpz) or synthetic inputs (decimal strings parsed at 100 digits).
GrowthEstimate estimate_growth(const std::vector<mpz_class>& A, const std::vector<mpz_class>& B = {},
                               const std::vector<mpz_class>& C2 = {});
GrowthEstimate estimate_growth_decimal(const std::vector<std::string>& A, const std::vector<std::string>& B = {},
                                       const std::vector<std::string>& C2 = {});

struct MomentConstants {
  double c1 = 0;      // rho'(0) / rho(0)
  double c2_sq = 0;   // (rho'' rho + rho' rho - rho'^2) / rho^2
};
MomentConstants moment_constants(const GrowthEstimate& g);

struct SaddleInput {
  double n = 0, k = 0;
  double f0 = 0, f1 = 0, f2 = 0;  // f = log rho and its first two derivatives at 0
  double g0 = 0;                  // g = log c at 0
};
// log of c0 n^(k-5/2) rho(0)^n (rho'/rho)^k exp(k^2/(2n) (rho'' rho / rho'^2 - 1)),
// written with f: n f0 + g0 + (k - 5/2) log n + k log f1 + k^2 f2 / (2 n f1^2).
double saddle_factorial_moment(const SaddleInput& s);

// log [x^k] exp(n f(x) + g(x)) for polynomials f, g (coefficients of x^0..),
// by the trapezoidal rule on the circle of radius k / (n f'(0)) at the given
// working precision, doubling the node count until two successive values
// agree to tol (relative).
struct ContourResult {
  double log_value = 0;
  int nodes = 0;
  double last_change = 0;
};
ContourResult contour_oracle(const std::vector<double>& f, const std::vector<double>& g, double n, double k,
                             int digits = 50, double tol = 1e-12);
// log of k! n^(-5/2) [x^k] exp(n f + g): the quantity the saddle formula approximates.
double contour_factorial_moment(const std::vector<double>& f, const std::vector<double>& g, double n, double k,
                                int digits = 50);

// Gao-Wormald condition: E[(X_n)_k] / (mu^k exp(e(k) (sigma^2 - mu) / mu^2)).
// `ratio` uses e(k) = k(k-1)/2, which is exact to first order and equals 1 at
// k = 0, 1; `ratio_k_squared` uses the literal e(k) = k^2/2.
struct GwRow {
  int n = 0, k = 0;
  double ratio = 0, ratio_k_squared = 0;
  bool degenerate = false;
};
std::vector<GwRow> gw_condition_check(const std::vector<DistributionTable>& dists, int kmax);

struct SandwichRow {
  int n = 0, k = 0;
  mpz_class m_circ_cross, m_circ;
  double right = 0;      // m_circ_cross + (mu_n / 2)^k m_n
  double residual = 0;   // m_circ - right (the unasserted o(m_{n,k}) part)
  bool left_holds = false;
  bool left_equal = false;
};
std::vector<SandwichRow> sandwich_check(const std::vector<LabeledConfigCounts>& rows,
                                        const std::vector<DistributionTable>& dists);

// Kolmogorov distance between (X - mu) / sigma and N(0, 1). A point mass is
// reported as degenerate with distance 1/2 (its standardised law is taken at 0).
struct KsResult {
  double distance = 0;
  bool degenerate = false;
};
KsResult ks_normality(const DistributionTable& dist);
double normal_cdf(double x);

}  // namespace pmaps
