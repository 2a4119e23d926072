#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace pmaps {

// Raised when a series computation breaks one of its own invariants
// (non-zero remainder, a fixed point that refers to itself at the same order,
// a request past the truncation order).
class SeriesError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Coefficient of one power of z: a polynomial in u and x with integer
// coefficients, stored densely as c[k][j] for x^k u^j. The x-degree is
// truncated at nx.
class PolyUX {
 public:
  PolyUX() = default;
  explicit PolyUX(int nx) : c_(nx + 1) {}

  int nx() const { return static_cast<int>(c_.size()) - 1; }
  // Largest u-degree with a non-zero coefficient, -1 for the zero polynomial.
  int u_degree() const;
  int u_degree(int k) const;
  bool is_zero() const { return u_degree() < 0; }

  const mpz_class& at(int j, int k) const;
  mpz_class& ref(int j, int k);  // grows as needed; k must be <= nx
  const std::vector<mpz_class>& x_slice(int k) const { return c_[k]; }
  std::vector<mpz_class>& x_slice(int k) { return c_[k]; }

  // Sum over u (evaluation at u = 1) of the x^k part.
  mpz_class sum_u(int k) const;

  void trim();
  PolyUX& operator+=(const PolyUX& o);
  PolyUX& operator-=(const PolyUX& o);
  PolyUX& operator*=(const mpz_class& s);
  friend bool operator==(const PolyUX& a, const PolyUX& b);

  static PolyUX monomial(int nx, int j, int k, const mpz_class& c = 1);

 private:
  std::vector<std::vector<mpz_class>> c_;
};

// acc += a * b, truncated at acc.nx(). Uses Kronecker substitution for large
// u-degrees, schoolbook otherwise; both give identical results.
void mul_accumulate(PolyUX& acc, const PolyUX& a, const PolyUX& b);
// acc += sum_i a[i] * b[i] in one pass (all terms packed into one product sum).
void mul_accumulate_many(PolyUX& acc, const std::vector<const PolyUX*>& a, const std::vector<const PolyUX*>& b);

struct Truncation {
  int nz = 0;  // highest z power kept
  int nx = 0;  // highest x power kept
  friend bool operator==(const Truncation&, const Truncation&) = default;
};

namespace detail {
class Node;
}

// A power series in z whose coefficients are PolyUX values. Coefficients are
// computed lazily and memoised, so a fixed point can be defined in terms of
// itself as long as the coefficient of z^n only depends on lower orders.
// Values are immutable; copies share the underlying node. Not thread-safe.
class Series {
 public:
  Series() = default;

  Truncation truncation() const;
  int nz() const { return truncation().nz; }
  int nx() const { return truncation().nx; }
  bool valid() const { return node_ != nullptr; }

  const PolyUX& coeff(int n) const;
  // [z^n u^j x^k]
  mpz_class at(int n, int j, int k) const { return coeff(n).at(j, k); }
  // [z^n x^k] at u = 1
  mpz_class at_u1(int n, int k) const { return coeff(n).sum_u(k); }

  static Series zero(Truncation t);
  static Series constant(Truncation t, const mpz_class& c = 1);
  static Series monomial(Truncation t, int n, int j, int k, const mpz_class& c = 1);
  // Fixed point F = rhs(F); the coefficient of z^n of rhs(F) must only use
  // coefficients of F of order < n, otherwise SeriesError is thrown.
  static Series fixed_point(Truncation t, const std::string& name, const std::function<Series(const Series&)>& rhs);

  friend Series operator+(const Series& a, const Series& b);
  friend Series operator-(const Series& a, const Series& b);
  friend Series operator*(const Series& a, const Series& b);
  Series scaled(const mpz_class& s) const;
  Series pow(int k) const;

  // Multiply by z^dn u^du x^dx. Negative dn reads higher coefficients (must
  // stay within the truncation); negative du requires that no coefficient of
  // u-degree < -du is non-zero (checked).
  Series shifted(int dn, int du, int dx) const;
  // [u^j] F, as a series with u-degree 0.
  Series coeff_u(int j) const;
  // F(z, 1, x), as a series with u-degree 0.
  Series at_u1() const;
  // (F(u) - F(1)) / (u - 1), exact polynomial division.
  Series divided_difference_u() const;
  // Terms of u-degree > j only.
  Series u_above(int j) const;
  // Terms of u-degree <= j only.
  Series u_upto(int j) const;
  // Drop all but the x^k part (kept at x^k).
  Series x_part(int k) const;

  // Build a series from a coefficient function (used for custom operators).
  static Series from_function(Truncation t, const std::string& name, std::function<PolyUX(int n)> fn);

 private:
  explicit Series(std::shared_ptr<detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<detail::Node> node_;
};

}  // namespace pmaps
