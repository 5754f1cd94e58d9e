#pragma once

// Exact elements of Z[zeta_N], coordinates in the power basis
// 1, zeta, ..., zeta^{phi(N)-1} (reduced modulo the N-th cyclotomic polynomial).

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "group.hpp"

namespace zzlab {

namespace detail {

struct CycloCtx {
  std::uint32_t N = 1;
  std::vector<std::int64_t> phi_poly;                // monic Phi_N, constant first
  std::vector<std::vector<std::int64_t>> power;      // zeta^a reduced, a in [0, N)
  std::size_t dim() const { return phi_poly.size() - 1; }
};

inline std::vector<std::int64_t> int_poly_div_exact(std::vector<std::int64_t> a, const std::vector<std::int64_t>& b) {
  // b monic.
  std::size_t db = b.size() - 1;
  std::vector<std::int64_t> q(a.size() - db, 0);
  for (std::size_t i = a.size(); i-- > db;) {
    std::int64_t c = a[i];
    q[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  return q;
}

inline std::shared_ptr<const CycloCtx> build_cyclo(std::uint32_t N) {
  auto ctx = std::make_shared<CycloCtx>();
  ctx->N = N;
  // Phi_N = (x^N - 1) / prod_{d | N, d < N} Phi_d.
  std::vector<std::int64_t> num(N + 1, 0);
  num[0] = -1;
  num[N] = 1;
  for (std::uint32_t d = 1; d < N; ++d) {
    if (N % d) continue;
    auto sub = build_cyclo(d);
    num = int_poly_div_exact(num, sub->phi_poly);
  }
  ctx->phi_poly = num;
  const std::size_t k = ctx->dim();
  std::vector<std::int64_t> cur(k, 0);
  cur[0] = 1;
  if (k == 0) throw ConsistencyError("degenerate cyclotomic polynomial");
  for (std::uint32_t a = 0; a < N; ++a) {
    ctx->power.push_back(cur);
    // multiply by x and reduce
    std::int64_t top = cur[k - 1];
    for (std::size_t i = k - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    for (std::size_t i = 0; i < k; ++i) cur[i] -= top * ctx->phi_poly[i];
  }
  return ctx;
}

inline std::shared_ptr<const CycloCtx> cyclo_ctx(std::uint32_t N) {
  static std::mutex mu;
  static std::map<std::uint32_t, std::shared_ptr<const CycloCtx>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  auto ctx = build_cyclo(N);
  cache.emplace(N, ctx);
  return ctx;
}

}  // namespace detail

class CyclotomicInt {
 public:
  CyclotomicInt() : CyclotomicInt(1) {}
  explicit CyclotomicInt(std::uint32_t N) {
    if (N == 0) throw DomainError("cyclotomic modulus 0");
    ctx_ = detail::cyclo_ctx(N);
    c_.assign(ctx_->dim(), BigInt(0));
  }
  static CyclotomicInt from_int(std::uint32_t N, const BigInt& v) {
    CyclotomicInt r(N);
    r.c_[0] = v;
    return r;
  }
  static CyclotomicInt root(std::uint32_t N, std::uint32_t a) {
    CyclotomicInt r(N);
    r.add_root(a, 1);
    return r;
  }
  static CyclotomicInt root(const RootOfUnity& z) { return root(z.modulus(), z.exponent()); }

  /// sum_a counts[a] zeta^a.
  static CyclotomicInt from_histogram(std::uint32_t N, const std::vector<std::int64_t>& counts) {
    CyclotomicInt r(N);
    for (std::size_t a = 0; a < counts.size(); ++a)
      if (counts[a]) r.add_root(static_cast<std::uint32_t>(a % N), counts[a]);
    return r;
  }

  /// *this += mult * zeta^a.
  void add_root(std::uint32_t a, std::int64_t mult) {
    const auto& p = ctx_->power[a % ctx_->N];
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (p[i]) c_[i] += BigInt(p[i]) * mult;
  }

  std::uint32_t modulus() const noexcept { return ctx_->N; }
  const std::vector<BigInt>& coords() const noexcept { return c_; }
  bool is_zero() const {
    for (const auto& v : c_)
      if (v != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  const BigInt& rational_part() const {
    if (!is_rational()) throw DomainError("cyclotomic integer is not rational");
    return c_[0];
  }

  CyclotomicInt& operator+=(const CyclotomicInt& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  CyclotomicInt& operator-=(const CyclotomicInt& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend CyclotomicInt operator+(CyclotomicInt a, const CyclotomicInt& b) { return a += b; }
  friend CyclotomicInt operator-(CyclotomicInt a, const CyclotomicInt& b) { return a -= b; }
  CyclotomicInt operator-() const {
    CyclotomicInt r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  friend CyclotomicInt operator*(const CyclotomicInt& a, const CyclotomicInt& b) {
    a.check(b);
    const std::size_t k = a.c_.size();
    std::vector<BigInt> prod(2 * k - 1, BigInt(0));
    for (std::size_t i = 0; i < k; ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < k; ++j)
        if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
    }
    const auto& phi = a.ctx_->phi_poly;
    for (std::size_t i = prod.size(); i-- > k;) {
      if (prod[i] == 0) continue;
      BigInt t = prod[i];
      for (std::size_t j = 0; j <= k; ++j)
        if (phi[j]) prod[i - k + j] -= t * phi[j];
    }
    CyclotomicInt r(a.modulus());
    for (std::size_t i = 0; i < k; ++i) r.c_[i] = std::move(prod[i]);
    return r;
  }
  CyclotomicInt& operator*=(const CyclotomicInt& o) { return *this = *this * o; }

  CyclotomicInt scaled(const BigInt& s) const {
    CyclotomicInt r = *this;
    for (auto& v : r.c_) v *= s;
    return r;
  }

  /// Division by an integer that must divide every coordinate.
  CyclotomicInt divided_exact(const BigInt& d) const {
    CyclotomicInt r = *this;
    for (auto& v : r.c_) {
      if (v % d != 0) throw ConsistencyError("inexact division of a cyclotomic integer by " + d.str());
      v /= d;
    }
    return r;
  }

  /// Complex conjugate (zeta -> zeta^{-1}).
  CyclotomicInt conj() const {
    CyclotomicInt r(modulus());
    const std::uint32_t N = modulus();
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      const auto& p = ctx_->power[(N - i % N) % N];
      for (std::size_t j = 0; j < c_.size(); ++j)
        if (p[j]) r.c_[j] += c_[i] * p[j];
    }
    return r;
  }

  std::complex<double> render() const {
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0) s += c_[i].convert_to<double>() * RootOfUnity::render(static_cast<std::uint32_t>(i), modulus());
    return s;
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? "," : "") + c_[i].str();
    return s + "]";
  }

  friend bool operator==(const CyclotomicInt& a, const CyclotomicInt& b) {
    return a.modulus() == b.modulus() && a.c_ == b.c_;
  }

 private:
  void check(const CyclotomicInt& o) const {
    if (o.modulus() != modulus()) throw DomainError("cyclotomic integers with different moduli");
  }
  std::shared_ptr<const detail::CycloCtx> ctx_;
  std::vector<BigInt> c_;
};

}  // namespace zzlab
