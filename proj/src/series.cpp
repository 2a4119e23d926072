#include "pmaps/series.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

namespace pmaps {

namespace {

const mpz_class& zero_mpz() {
  static const mpz_class z;
  return z;
}

}  // namespace

// ---------------------------------------------------------------- PolyUX

int PolyUX::u_degree(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return -1;
  const auto& s = c_[k];
  for (int j = static_cast<int>(s.size()) - 1; j >= 0; --j)
    if (sgn(s[j]) != 0) return j;
  return -1;
}

int PolyUX::u_degree() const {
  int d = -1;
  for (int k = 0; k < static_cast<int>(c_.size()); ++k) d = std::max(d, u_degree(k));
  return d;
}

const mpz_class& PolyUX::at(int j, int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size()) || j < 0 || j >= static_cast<int>(c_[k].size())) return zero_mpz();
  return c_[k][j];
}

mpz_class& PolyUX::ref(int j, int k) {
  if (k < 0 || k >= static_cast<int>(c_.size()) || j < 0) throw SeriesError("PolyUX index out of range");
  auto& s = c_[k];
  if (j >= static_cast<int>(s.size())) s.resize(j + 1);
  return s[j];
}

mpz_class PolyUX::sum_u(int k) const {
  mpz_class s;
  if (k < 0 || k >= static_cast<int>(c_.size())) return s;
  for (const auto& v : c_[k]) s += v;
  return s;
}

void PolyUX::trim() {
  for (auto& s : c_) {
    std::size_t n = s.size();
    while (n > 0 && sgn(s[n - 1]) == 0) --n;
    s.resize(n);
  }
}

PolyUX& PolyUX::operator+=(const PolyUX& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) {
    auto& s = c_[k];
    const auto& t = o.c_[k];
    if (s.size() < t.size()) s.resize(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) s[j] += t[j];
  }
  trim();
  return *this;
}

PolyUX& PolyUX::operator-=(const PolyUX& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) {
    auto& s = c_[k];
    const auto& t = o.c_[k];
    if (s.size() < t.size()) s.resize(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) s[j] -= t[j];
  }
  trim();
  return *this;
}

PolyUX& PolyUX::operator*=(const mpz_class& s) {
  for (auto& v : c_)
    for (auto& x : v) x *= s;
  trim();
  return *this;
}

bool operator==(const PolyUX& a, const PolyUX& b) {
  const int nk = std::max(a.nx(), b.nx());
  for (int k = 0; k <= nk; ++k) {
    const int d = std::max(a.u_degree(k), b.u_degree(k));
    for (int j = 0; j <= d; ++j)
      if (a.at(j, k) != b.at(j, k)) return false;
  }
  return true;
}

PolyUX PolyUX::monomial(int nx, int j, int k, const mpz_class& c) {
  PolyUX p(nx);
  if (k <= nx && sgn(c) != 0) p.ref(j, k) = c;
  return p;
}

// ---------------------------------------------------------------- multiplication

namespace {

constexpr int kKroneckerThreshold = 12;

using Limb = mp_limb_t;
constexpr int kLimbBits = GMP_NUMB_BITS;

std::size_t bit_size(const mpz_class& v) { return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2); }

// OR the limbs of |v| into buf at bit offset off.
void or_bits(std::vector<Limb>& buf, std::size_t off, const mpz_class& v) {
  const std::size_t m = mpz_size(v.get_mpz_t());
  const Limb* src = mpz_limbs_read(v.get_mpz_t());
  const std::size_t idx = off / kLimbBits;
  const unsigned sh = off % kLimbBits;
  for (std::size_t i = 0; i < m; ++i) {
    buf[idx + i] |= src[i] << sh;
    if (sh) buf[idx + i + 1] |= src[i] >> (kLimbBits - sh);
  }
}

void extract_bits(const Limb* src, std::size_t ns, std::size_t off, std::size_t bits, mpz_class& out) {
  const std::size_t nw = (bits + kLimbBits - 1) / kLimbBits;
  Limb* dst = mpz_limbs_write(out.get_mpz_t(), static_cast<mp_size_t>(nw));
  for (std::size_t w = 0; w < nw; ++w) {
    const std::size_t pos = off + w * kLimbBits;
    const std::size_t idx = pos / kLimbBits;
    const unsigned sh = pos % kLimbBits;
    Limb lo = idx < ns ? src[idx] >> sh : 0;
    if (sh && idx + 1 < ns) lo |= src[idx + 1] << (kLimbBits - sh);
    dst[w] = lo;
  }
  const std::size_t rem = bits % kLimbBits;
  if (rem) dst[nw - 1] &= (Limb(1) << rem) - 1;
  mp_size_t n = static_cast<mp_size_t>(nw);
  while (n > 0 && dst[n - 1] == 0) --n;
  mpz_limbs_finish(out.get_mpz_t(), n);
}

struct Packed {
  mpz_class pos, neg;
  bool has_neg = false;
};

// Kronecker packing: slot (k, j) at bit offset (k * stride + j) * bits.
Packed pack(const PolyUX& p, int nx, int stride, std::size_t bits) {
  Packed out;
  std::size_t total = 0;
  for (int k = 0; k <= nx; ++k) {
    const int d = p.u_degree(k);
    if (d >= 0) total = std::max(total, (static_cast<std::size_t>(k) * stride + d + 1) * bits);
  }
  const std::size_t nl = total / kLimbBits + 2;
  std::vector<Limb> bp(nl, 0), bn;
  for (int k = 0; k <= nx; ++k) {
    const auto& s = p.x_slice(k);
    for (int j = 0; j < static_cast<int>(s.size()); ++j) {
      const int sg = sgn(s[j]);
      if (sg == 0) continue;
      const std::size_t off = (static_cast<std::size_t>(k) * stride + j) * bits;
      if (sg > 0) {
        or_bits(bp, off, s[j]);
      } else {
        if (bn.empty()) bn.assign(nl, 0);
        out.has_neg = true;
        or_bits(bn, off, mpz_class(-s[j]));
      }
    }
  }
  auto finish = [](mpz_class& z, const std::vector<Limb>& b) {
    mp_size_t n = static_cast<mp_size_t>(b.size());
    while (n > 0 && b[n - 1] == 0) --n;
    Limb* d = mpz_limbs_write(z.get_mpz_t(), std::max<mp_size_t>(n, 1));
    std::copy(b.begin(), b.begin() + n, d);
    mpz_limbs_finish(z.get_mpz_t(), n);
  };
  finish(out.pos, bp);
  if (out.has_neg) finish(out.neg, bn);
  return out;
}

void unpack_add(PolyUX& acc, const mpz_class& v, int sign, int stride, std::size_t bits) {
  if (sgn(v) == 0) return;
  const Limb* src = mpz_limbs_read(v.get_mpz_t());
  const std::size_t ns = mpz_size(v.get_mpz_t());
  const std::size_t slots = (ns * kLimbBits + bits - 1) / bits;
  mpz_class t;
  for (std::size_t s = 0; s < slots; ++s) {
    const int k = static_cast<int>(s / stride);
    if (k > acc.nx()) break;
    extract_bits(src, ns, s * bits, bits, t);
    if (sgn(t) == 0) continue;
    const int j = static_cast<int>(s % stride);
    if (sign > 0)
      acc.ref(j, k) += t;
    else
      acc.ref(j, k) -= t;
  }
}

std::size_t max_bits(const PolyUX& p) {
  std::size_t b = 0;
  for (int k = 0; k <= p.nx(); ++k)
    for (const auto& v : p.x_slice(k)) b = std::max(b, bit_size(v));
  return b;
}

void schoolbook(PolyUX& acc, const PolyUX& a, const PolyUX& b) {
  const int nx = acc.nx();
  for (int ka = 0; ka <= std::min(a.nx(), nx); ++ka) {
    const auto& sa = a.x_slice(ka);
    if (sa.empty()) continue;
    for (int kb = 0; kb <= std::min(b.nx(), nx - ka); ++kb) {
      const auto& sb = b.x_slice(kb);
      if (sb.empty()) continue;
      auto& out = acc.x_slice(ka + kb);
      if (out.size() < sa.size() + sb.size() - 1) out.resize(sa.size() + sb.size() - 1);
      for (std::size_t i = 0; i < sa.size(); ++i) {
        if (sgn(sa[i]) == 0) continue;
        for (std::size_t j = 0; j < sb.size(); ++j)
          mpz_addmul(out[i + j].get_mpz_t(), sa[i].get_mpz_t(), sb[j].get_mpz_t());
      }
    }
  }
}

}  // namespace

void mul_accumulate_many(PolyUX& acc, const std::vector<const PolyUX*>& a, const std::vector<const PolyUX*>& b) {
  if (a.size() != b.size()) throw SeriesError("mul_accumulate_many: operand count mismatch");
  const int nx = acc.nx();
  int da = -1, db = -1, small = 1 << 30;
  std::size_t ba = 0, bb = 0;
  std::size_t terms = 0;
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int x = a[i]->u_degree(), y = b[i]->u_degree();
    if (x < 0 || y < 0) continue;
    live.push_back(i);
    da = std::max(da, x);
    db = std::max(db, y);
    small = std::min(small, std::min(x, y));
    ba = std::max(ba, max_bits(*a[i]));
    bb = std::max(bb, max_bits(*b[i]));
    terms += static_cast<std::size_t>(std::min(x, y) + 1) * (nx + 1);
  }
  if (live.empty()) return;
  if (small + 1 < kKroneckerThreshold) {
    for (std::size_t i : live) schoolbook(acc, *a[i], *b[i]);
    acc.trim();
    return;
  }
  std::size_t lg = 1;
  while ((std::size_t(1) << lg) < terms + 1) ++lg;
  const std::size_t bits = ba + bb + lg + 1;
  const int stride = da + db + 1;
  mpz_class sum_pos, sum_neg, t;
  for (std::size_t i : live) {
    Packed pa = pack(*a[i], nx, stride, bits);
    Packed pb = pack(*b[i], nx, stride, bits);
    mpz_mul(t.get_mpz_t(), pa.pos.get_mpz_t(), pb.pos.get_mpz_t());
    sum_pos += t;
    if (pa.has_neg && pb.has_neg) {
      mpz_mul(t.get_mpz_t(), pa.neg.get_mpz_t(), pb.neg.get_mpz_t());
      sum_pos += t;
    }
    if (pa.has_neg) {
      mpz_mul(t.get_mpz_t(), pa.neg.get_mpz_t(), pb.pos.get_mpz_t());
      sum_neg += t;
    }
    if (pb.has_neg) {
      mpz_mul(t.get_mpz_t(), pa.pos.get_mpz_t(), pb.neg.get_mpz_t());
      sum_neg += t;
    }
  }
  unpack_add(acc, sum_pos, +1, stride, bits);
  unpack_add(acc, sum_neg, -1, stride, bits);
  acc.trim();
}

void mul_accumulate(PolyUX& acc, const PolyUX& a, const PolyUX& b) { mul_accumulate_many(acc, {&a}, {&b}); }

// ---------------------------------------------------------------- nodes

namespace detail {

class Node {
 public:
  Node(Truncation t, std::string name, int valuation) : t_(t), name_(std::move(name)), valuation_(valuation) {}
  virtual ~Node() = default;

  const Truncation& truncation() const { return t_; }
  int valuation() const { return valuation_; }
  const std::string& name() const { return name_; }

  const PolyUX& coeff(int n) {
    if (n < valuation_ || n < 0) return zero();
    if (n > t_.nz) throw SeriesError(name_ + ": coefficient z^" + std::to_string(n) + " beyond truncation order " + std::to_string(t_.nz));
    if (memo_.size() <= static_cast<std::size_t>(n)) {
      memo_.resize(n + 1);
      busy_.resize(n + 1, 0);
    }
    if (memo_[n]) return *memo_[n];
    if (busy_[n]) throw SeriesError(name_ + ": coefficient z^" + std::to_string(n) + " depends on itself");
    busy_[n] = 1;
    PolyUX v = compute(n);
    busy_[n] = 0;
    v.trim();
    memo_[n] = std::make_unique<PolyUX>(std::move(v));
    return *memo_[n];
  }

  const PolyUX& zero() {
    if (!zero_) zero_ = PolyUX(t_.nx);
    return *zero_;
  }

 protected:
  virtual PolyUX compute(int n) = 0;

 private:
  Truncation t_;
  std::string name_;
  int valuation_;
  std::vector<std::unique_ptr<PolyUX>> memo_;  // stable addresses: callers keep references
  std::vector<char> busy_;
  std::optional<PolyUX> zero_;
};

}  // namespace detail

namespace {

using detail::Node;
using NodePtr = std::shared_ptr<Node>;

class FunctionNode : public Node {
 public:
  FunctionNode(Truncation t, std::string name, int val, std::function<PolyUX(int)> fn)
      : Node(t, std::move(name), val), fn_(std::move(fn)) {}

 protected:
  PolyUX compute(int n) override { return fn_(n); }

 private:
  std::function<PolyUX(int)> fn_;
};

class FixedNode : public Node {
 public:
  FixedNode(Truncation t, std::string name) : Node(t, std::move(name), 0) {}
  NodePtr rhs;

 protected:
  PolyUX compute(int n) override {
    if (!rhs) throw SeriesError(name() + ": fixed point used before its equation was set");
    return rhs->coeff(n);
  }
};

// Weak reference to a fixed point, handed to the equation builder so the
// equation does not keep its own solution alive (no reference cycle).
class RefNode : public Node {
 public:
  RefNode(const std::shared_ptr<FixedNode>& target)
      : Node(target->truncation(), target->name(), 0), target_(target) {}

 protected:
  PolyUX compute(int n) override {
    auto t = target_.lock();
    if (!t) throw SeriesError(name() + ": fixed point no longer alive");
    return t->coeff(n);
  }

 private:
  std::weak_ptr<FixedNode> target_;
};

void check_compatible(const Series& a, const Series& b) {
  if (!a.valid() || !b.valid()) throw SeriesError("operation on an empty series");
  if (!(a.truncation() == b.truncation())) throw SeriesError("series with different truncations combined");
}

}  // namespace

Truncation Series::truncation() const {
  if (!node_) throw SeriesError("empty series");
  return node_->truncation();
}

const PolyUX& Series::coeff(int n) const {
  if (!node_) throw SeriesError("empty series");
  return node_->coeff(n);
}

Series Series::from_function(Truncation t, const std::string& name, std::function<PolyUX(int)> fn) {
  return Series(std::make_shared<FunctionNode>(t, name, 0, std::move(fn)));
}

Series Series::zero(Truncation t) {
  return Series(std::make_shared<FunctionNode>(t, "0", 1 << 30, [t](int) { return PolyUX(t.nx); }));
}

Series Series::constant(Truncation t, const mpz_class& c) { return monomial(t, 0, 0, 0, c); }

Series Series::monomial(Truncation t, int n, int j, int k, const mpz_class& c) {
  if (n < 0 || j < 0 || k < 0) throw SeriesError("monomial with negative exponent");
  if (n > t.nz || k > t.nx || sgn(c) == 0) return zero(t);
  return Series(std::make_shared<FunctionNode>(t, "monomial", n, [t, n, j, k, c](int m) {
    return m == n ? PolyUX::monomial(t.nx, j, k, c) : PolyUX(t.nx);
  }));
}

Series Series::fixed_point(Truncation t, const std::string& name, const std::function<Series(const Series&)>& rhs) {
  auto fixed = std::make_shared<FixedNode>(t, name);
  Series self(std::make_shared<RefNode>(fixed));
  Series r = rhs(self);
  check_compatible(self, r);
  fixed->rhs = r.node_;
  return Series(fixed);
}

Series operator+(const Series& a, const Series& b) {
  check_compatible(a, b);
  auto na = a.node_, nb = b.node_;
  const int val = std::min(na->valuation(), nb->valuation());
  return Series(std::make_shared<FunctionNode>(a.truncation(), "sum", val, [na, nb](int n) {
    PolyUX r = na->coeff(n);
    r += nb->coeff(n);
    return r;
  }));
}

Series operator-(const Series& a, const Series& b) {
  check_compatible(a, b);
  auto na = a.node_, nb = b.node_;
  const int val = std::min(na->valuation(), nb->valuation());
  return Series(std::make_shared<FunctionNode>(a.truncation(), "difference", val, [na, nb](int n) {
    PolyUX r = na->coeff(n);
    r -= nb->coeff(n);
    return r;
  }));
}

Series operator*(const Series& a, const Series& b) {
  check_compatible(a, b);
  auto na = a.node_, nb = b.node_;
  const int va = na->valuation(), vb = nb->valuation();
  const Truncation t = a.truncation();
  return Series(std::make_shared<FunctionNode>(t, "product", va + vb, [na, nb, va, vb, t](int n) {
    PolyUX r(t.nx);
    std::vector<const PolyUX*> xs, ys;
    if (na == nb) {
      // square: pair i with n - i once, double, then add the middle term
      for (int i = va; 2 * i < n; ++i) {
        const PolyUX& x = na->coeff(i);
        if (x.is_zero()) continue;
        const PolyUX& y = na->coeff(n - i);
        if (y.is_zero()) continue;
        xs.push_back(&x);
        ys.push_back(&y);
      }
      mul_accumulate_many(r, xs, ys);
      r *= 2;
      if (n % 2 == 0 && n / 2 >= va) {
        const PolyUX& x = na->coeff(n / 2);
        mul_accumulate(r, x, x);
      }
      return r;
    }
    for (int i = va; i <= n - vb; ++i) {
      const PolyUX& x = na->coeff(i);
      if (x.is_zero()) continue;
      const PolyUX& y = nb->coeff(n - i);
      if (y.is_zero()) continue;
      xs.push_back(&x);
      ys.push_back(&y);
    }
    mul_accumulate_many(r, xs, ys);
    return r;
  }));
}

Series Series::scaled(const mpz_class& s) const {
  auto na = node_;
  return Series(std::make_shared<FunctionNode>(truncation(), "scaled", na->valuation(), [na, s](int n) {
    PolyUX r = na->coeff(n);
    r *= s;
    return r;
  }));
}

Series Series::pow(int k) const {
  if (k < 0) throw SeriesError("negative power");
  Series r = constant(truncation(), 1);
  for (int i = 0; i < k; ++i) r = i == 0 ? *this : r * *this;
  return r;
}

Series Series::shifted(int dn, int du, int dx) const {
  auto na = node_;
  const Truncation t = truncation();
  const int val = std::max(0, na->valuation() + dn);
  return Series(std::make_shared<FunctionNode>(t, "shifted", val, [na, dn, du, dx, t](int n) {
    PolyUX r(t.nx);
    const int src = n - dn;
    if (src < 0) return r;
    if (src > t.nz) throw SeriesError("z-shift reads beyond the truncation order");
    const PolyUX& a = na->coeff(src);
    for (int k = 0; k <= t.nx; ++k) {
      const int kk = k + dx;
      if (kk < 0 || kk > t.nx) continue;
      const auto& s = a.x_slice(k);
      for (int j = 0; j < static_cast<int>(s.size()); ++j) {
        if (sgn(s[j]) == 0) continue;
        if (j + du < 0) throw SeriesError("u-shift by " + std::to_string(du) + " meets a non-zero coefficient of u^" + std::to_string(j));
        r.ref(j + du, kk) = s[j];
      }
    }
    return r;
  }));
}

Series Series::coeff_u(int j) const {
  auto na = node_;
  const Truncation t = truncation();
  return Series(std::make_shared<FunctionNode>(t, "coeff_u", na->valuation(), [na, j, t](int n) {
    PolyUX r(t.nx);
    const PolyUX& a = na->coeff(n);
    for (int k = 0; k <= t.nx; ++k)
      if (sgn(a.at(j, k)) != 0) r.ref(0, k) = a.at(j, k);
    return r;
  }));
}

Series Series::at_u1() const {
  auto na = node_;
  const Truncation t = truncation();
  return Series(std::make_shared<FunctionNode>(t, "at_u1", na->valuation(), [na, t](int n) {
    PolyUX r(t.nx);
    const PolyUX& a = na->coeff(n);
    for (int k = 0; k <= t.nx; ++k) {
      mpz_class s = a.sum_u(k);
      if (sgn(s) != 0) r.ref(0, k) = s;
    }
    return r;
  }));
}

Series Series::divided_difference_u() const {
  auto na = node_;
  const Truncation t = truncation();
  return Series(std::make_shared<FunctionNode>(t, "divided_difference", na->valuation(), [na, t](int n) {
    PolyUX r(t.nx);
    const PolyUX& a = na->coeff(n);
    for (int k = 0; k <= t.nx; ++k) {
      const int d = a.u_degree(k);
      if (d < 1) continue;
      // numerator F(u) - F(1), divided by (u - 1) synthetically from the top
      std::vector<mpz_class> num(a.x_slice(k).begin(), a.x_slice(k).begin() + d + 1);
      num[0] -= a.sum_u(k);
      mpz_class carry;
      for (int j = d; j >= 1; --j) {
        carry += num[j];
        r.ref(j - 1, k) = carry;
      }
      if (carry + num[0] != 0) throw SeriesError("divided difference left a non-zero remainder");
    }
    return r;
  }));
}

Series Series::u_above(int j) const {
  auto na = node_;
  const Truncation t = truncation();
  return Series(std::make_shared<FunctionNode>(t, "u_above", na->valuation(), [na, j, t](int n) {
    PolyUX r = na->coeff(n);
    for (int k = 0; k <= t.nx; ++k) {
      auto& s = r.x_slice(k);
      for (int i = 0; i <= j && i < static_cast<int>(s.size()); ++i) s[i] = 0;
    }
    return r;
  }));
}

Series Series::u_upto(int j) const {
  auto na = node_;
  const Truncation t = truncation();
  return Series(std::make_shared<FunctionNode>(t, "u_upto", na->valuation(), [na, j, t](int n) {
    PolyUX r = na->coeff(n);
    for (int k = 0; k <= t.nx; ++k) {
      auto& s = r.x_slice(k);
      if (static_cast<int>(s.size()) > j + 1) s.resize(std::max(0, j + 1));
    }
    return r;
  }));
}

Series Series::x_part(int k0) const {
  auto na = node_;
  const Truncation t = truncation();
  return Series(std::make_shared<FunctionNode>(t, "x_part", na->valuation(), [na, k0, t](int n) {
    PolyUX r(t.nx);
    if (k0 <= t.nx) r.x_slice(k0) = na->coeff(n).x_slice(k0);
    return r;
  }));
}

}  // namespace pmaps
