#pragma once

// Dense univariate polynomials over F_q.
//
// A Poly stores coefficients constant term first with no trailing zeros, so
// the zero polynomial is the empty vector. All operations are free functions
// taking the field explicitly.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "field.hpp"

namespace zzlab {

using Poly = std::vector<FieldElem>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) noexcept { return static_cast<int>(a.size()) - 1; }

inline bool is_monic(const Poly& a) noexcept { return !a.empty() && a.back() == 1; }

inline Poly poly_x() { return Poly{0, 1}; }

inline Poly poly_const(FieldElem c) { return c == 0 ? Poly{} : Poly{c}; }

inline Poly poly_add(const FiniteField& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    FieldElem x = i < a.size() ? a[i] : 0;
    FieldElem y = i < b.size() ? b[i] : 0;
    r[i] = F.add(x, y);
  }
  trim(r);
  return r;
}

inline Poly poly_neg(const FiniteField& F, const Poly& a) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.neg(a[i]);
  return r;
}

inline Poly poly_sub(const FiniteField& F, const Poly& a, const Poly& b) { return poly_add(F, a, poly_neg(F, b)); }

inline Poly poly_scale(const FiniteField& F, const Poly& a, FieldElem c) {
  if (c == 0) return {};
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
  return r;
}

inline Poly poly_mul(const FiniteField& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

/// Quotient and remainder of a by a nonzero b.
inline std::pair<Poly, Poly> poly_divmod(const FiniteField& F, const Poly& a, const Poly& b) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  Poly r = a;
  trim(r);
  if (r.size() < b.size()) return {Poly{}, r};
  const std::size_t db = b.size() - 1;
  const FieldElem lead_inv = F.inv(b.back());
  Poly quo(r.size() - db, 0);
  for (std::size_t i = r.size(); i-- > db;) {
    if (r[i] == 0) continue;
    FieldElem c = F.mul(r[i], lead_inv);
    quo[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(c, b[j]));
  }
  trim(r);
  trim(quo);
  return {quo, r};
}

inline Poly poly_mod(const FiniteField& F, const Poly& a, const Poly& m) { return poly_divmod(F, a, m).second; }

inline Poly poly_mulmod(const FiniteField& F, const Poly& a, const Poly& b, const Poly& m) {
  if (m.empty()) throw DomainError("zero modulus");
  return poly_mod(F, poly_mul(F, a, b), m);
}

inline Poly poly_powmod(const FiniteField& F, const Poly& base, BigInt e, const Poly& m) {
  if (m.empty()) throw DomainError("zero modulus");
  if (e < 0) throw DomainError("negative exponent in powmod");
  Poly result = poly_mod(F, Poly{1}, m);
  Poly b = poly_mod(F, base, m);
  while (e > 0) {
    if (e & 1) result = poly_mulmod(F, result, b, m);
    e >>= 1;
    if (e > 0) b = poly_mulmod(F, b, b, m);
  }
  return result;
}

inline Poly make_monic(const FiniteField& F, const Poly& a) {
  if (a.empty()) return a;
  return poly_scale(F, a, F.inv(a.back()));
}

/// Monic greatest common divisor (zero if both arguments are zero).
inline Poly poly_gcd(const FiniteField& F, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(F, a);
}

inline FieldElem poly_eval(const FiniteField& F, const Poly& a, FieldElem x) {
  FieldElem r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
  return r;
}

/// Resultant Res(a, b) = lc(a)^deg b * prod_{a(alpha)=0} b(alpha).
///
/// For monic irreducible Q and h coprime to Q this is the norm of h mod Q
/// down to F_q, which is how power residue symbols are evaluated quickly.
inline FieldElem resultant(const FiniteField& F, Poly a, Poly b) {
  trim(a);
  trim(b);
  if (a.empty() || b.empty()) return 0;
  FieldElem acc = 1;
  // Invariant: answer = acc * Res(a, b).
  while (true) {
    int da = degree(a), db = degree(b);
    if (db == 0) return F.mul(acc, F.pow(b[0], static_cast<std::uint64_t>(da)));
    if (da == 0) return F.mul(acc, F.pow(a[0], static_cast<std::uint64_t>(db)));
    if (da < db) {
      // Res(a, b) = (-1)^{da db} Res(b, a).
      if ((static_cast<long>(da) * db) & 1) acc = F.neg(acc);
      std::swap(a, b);
      continue;
    }
    // da >= db: Res(a, b) = (-1)^{da db} lc(b)^{da - deg r} Res(b, r) with r = a mod b.
    Poly r = poly_mod(F, a, b);
    if (r.empty()) return 0;
    if ((static_cast<long>(da) * db) & 1) acc = F.neg(acc);
    acc = F.mul(acc, F.pow(b.back(), static_cast<std::uint64_t>(da - degree(r))));
    a = std::move(b);
    b = std::move(r);
  }
}

/// True iff the monic polynomial P of degree >= 1 is irreducible over F_q.
///
/// Uses gcd(x^{q^i} - x, P) = 1 for 1 <= i <= deg P / 2.
inline bool is_irreducible(const FiniteField& F, const Poly& P) {
  if (degree(P) < 1) throw DomainError("irreducibility of a constant polynomial");
  const int n = degree(P);
  if (n == 1) return true;
  Poly xp = poly_x();
  const Poly x = poly_mod(F, poly_x(), P);
  for (int i = 1; i <= n / 2; ++i) {
    xp = poly_powmod(F, xp, BigInt(F.q()), P);
    Poly g = poly_gcd(F, poly_sub(F, xp, x), P);
    if (degree(g) > 0) return false;
  }
  return true;
}

/// Canonical index of a monic polynomial among monics of its degree n:
/// sum_{i<n} c_i q^{n-1-i}. Increasing index is coefficient-lexicographic
/// order read from the constant term.
inline std::uint64_t monic_index(const FiniteField& F, const Poly& P) {
  std::uint64_t key = 0;
  const int n = degree(P);
  for (int i = 0; i < n; ++i) key = key * F.q() + P[i];
  return key;
}

inline Poly monic_from_index(const FiniteField& F, int n, std::uint64_t key) {
  Poly P(static_cast<std::size_t>(n) + 1, 0);
  P[n] = 1;
  for (int i = n - 1; i >= 0; --i) {
    P[i] = static_cast<FieldElem>(key % F.q());
    key /= F.q();
  }
  return P;
}

/// Human-readable rendering, e.g. "x^2 + 2". Extension-field coefficients print as their index.
inline std::string poly_to_string(const Poly& a) {
  if (a.empty()) return "0";
  std::string out;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] == 0) continue;
    if (!out.empty()) out += " + ";
    bool unit = a[i] == 1;
    if (i == 0 || !unit) out += std::to_string(a[i]);
    if (i >= 1) {
      if (!unit) out += "*";
      out += "x";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

/// A polynomial whose leading coefficient is 1.
class MonicPoly {
 public:
  MonicPoly() : c_{1} {}
  explicit MonicPoly(Poly coeffs) : c_(std::move(coeffs)) {
    trim(c_);
    if (!is_monic(c_)) throw DomainError("polynomial is not monic: " + poly_to_string(c_));
  }
  const Poly& coeffs() const noexcept { return c_; }
  int degree() const noexcept { return zzlab::degree(c_); }
  friend bool operator==(const MonicPoly&, const MonicPoly&) = default;
  friend auto operator<=>(const MonicPoly& a, const MonicPoly& b) {
    if (a.c_.size() != b.c_.size()) return a.c_.size() <=> b.c_.size();
    return std::lexicographical_compare_three_way(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
  }

 private:
  Poly c_;
};

}  // namespace zzlab
