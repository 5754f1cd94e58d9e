#pragma once

// Finite field F_q, q = p^e <= 2^20, in additive index representation.
//
// An element is an integer in [0, q). For prime q it is the residue itself.
// For e > 1 it encodes c_0 + c_1 p + ... + c_{e-1} p^{e-1}, the coefficient
// vector of the element in F_p[y]/(f) where f is a primitive polynomial, so
// that y (index p) generates F_q^*. Multiplication and addition go through
// exponent / logarithm / Zech tables built once at construction and shared
// read-only between copies.

#include <cstdint>
#include <memory>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"

namespace zzlab {

using FieldElem = std::uint32_t;

namespace detail {

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * b) % m);
    b = static_cast<std::uint64_t>((static_cast<unsigned __int128>(b) * b) % m);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

class FiniteField {
 public:
  static constexpr std::uint32_t kDefaultMaxQ = 1u << 20;

  explicit FiniteField(std::uint32_t q, std::uint32_t max_q = kDefaultMaxQ) {
    if (q < 2) throw DomainError("field size must be at least 2");
    if (q > max_q) throw ResourceError("field size " + std::to_string(q) + " exceeds the configured ceiling");
    auto fs = detail::prime_factors(q);
    if (fs.size() != 1) throw DomainError("field size " + std::to_string(q) + " is not a prime power");
    auto t = std::make_shared<Tables>();
    t->p = static_cast<std::uint32_t>(fs[0]);
    t->q = q;
    t->e = 0;
    for (std::uint32_t r = q; r > 1; r /= t->p) ++t->e;
    t->exp.resize(q - 1);
    t->log.assign(q, 0);
    if (t->e == 1) {
      build_prime(*t);
    } else {
      build_extension(*t);
    }
    tab_ = std::move(t);
  }

  std::uint32_t q() const noexcept { return tab_->q; }
  std::uint32_t p() const noexcept { return tab_->p; }
  std::uint32_t degree() const noexcept { return tab_->e; }
  bool is_prime() const noexcept { return tab_->e == 1; }
  FieldElem gamma() const noexcept { return tab_->exp[1 % (tab_->q - 1)]; }
  FieldElem zero() const noexcept { return 0; }
  FieldElem one() const noexcept { return 1; }

  /// Image of an integer under Z -> F_p -> F_q.
  FieldElem from_int(std::int64_t v) const noexcept {
    std::int64_t p = tab_->p;
    return static_cast<FieldElem>(((v % p) + p) % p);
  }

  FieldElem add(FieldElem a, FieldElem b) const noexcept {
    const Tables& t = *tab_;
    if (t.e == 1) {
      FieldElem s = a + b;
      return s >= t.p ? s - t.p : s;
    }
    if (a == 0) return b;
    if (b == 0) return a;
    std::uint32_t la = t.log[a], lb = t.log[b];
    std::uint32_t k = lb >= la ? lb - la : lb + (t.q - 1) - la;
    std::uint32_t z = t.zech[k];
    if (z == kNone) return 0;
    std::uint32_t s = la + z;
    if (s >= t.q - 1) s -= t.q - 1;
    return t.exp[s];
  }

  FieldElem neg(FieldElem a) const noexcept {
    const Tables& t = *tab_;
    if (a == 0) return 0;
    if (t.e == 1) return t.p - a;
    // -1 = gamma^((q-1)/2) for odd q, and -a = a in characteristic 2.
    if (t.p == 2) return a;
    std::uint32_t s = t.log[a] + (t.q - 1) / 2;
    if (s >= t.q - 1) s -= t.q - 1;
    return t.exp[s];
  }

  FieldElem sub(FieldElem a, FieldElem b) const noexcept { return add(a, neg(b)); }

  FieldElem mul(FieldElem a, FieldElem b) const noexcept {
    const Tables& t = *tab_;
    if (t.e == 1) return static_cast<FieldElem>((static_cast<std::uint64_t>(a) * b) % t.p);
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = t.log[a] + t.log[b];
    if (s >= t.q - 1) s -= t.q - 1;
    return t.exp[s];
  }

  FieldElem inv(FieldElem a) const {
    if (a == 0) throw DomainError("inverse of zero in F_q");
    const Tables& t = *tab_;
    std::uint32_t l = t.log[a];
    return t.exp[l == 0 ? 0 : (t.q - 1) - l];
  }

  FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

  FieldElem pow(FieldElem a, std::uint64_t k) const noexcept {
    if (k == 0) return 1;
    if (a == 0) return 0;
    const Tables& t = *tab_;
    std::uint64_t s = (static_cast<std::uint64_t>(t.log[a]) * (k % (t.q - 1))) % (t.q - 1);
    return t.exp[s];
  }

  FieldElem pow(FieldElem a, const BigInt& k) const {
    if (k < 0) return pow(inv(a), BigInt(-k));
    BigInt r = k % (q() - 1);
    if (k != 0 && a == 0) return 0;
    if (k == 0) return 1;
    return pow(a, static_cast<std::uint64_t>(r == 0 ? BigInt(q() - 1) : r));
  }

  /// Discrete logarithm with respect to gamma, in [0, q-1).
  std::uint32_t dlog(FieldElem a) const {
    if (a == 0) throw DomainError("discrete logarithm of zero in F_q");
    return tab_->log[a];
  }

  /// Unchecked logarithm for hot loops; caller guarantees a != 0.
  std::uint32_t dlog_unchecked(FieldElem a) const noexcept { return tab_->log[a]; }

  /// Primitive polynomial used for e > 1 (coefficients over F_p, constant first); {0,1} for prime fields.
  const std::vector<std::uint32_t>& modulus() const noexcept { return tab_->modulus; }

  friend bool operator==(const FiniteField& a, const FiniteField& b) noexcept { return a.q() == b.q(); }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  struct Tables {
    std::uint32_t p = 0, e = 0, q = 0;
    std::vector<std::uint32_t> exp, log, zech, modulus;
  };

  static void build_prime(Tables& t) {
    const std::uint64_t p = t.p;
    std::uint64_t g = 1;
    if (p > 2) {
      auto fs = detail::prime_factors(p - 1);
      for (g = 2; g < p; ++g) {
        bool ok = true;
        for (auto r : fs) {
          if (detail::powmod_u64(g, (p - 1) / r, p) == 1) {
            ok = false;
            break;
          }
        }
        if (ok) break;
      }
    }
    std::uint64_t cur = 1;
    for (std::uint32_t k = 0; k + 1 < t.q; ++k) {
      t.exp[k] = static_cast<std::uint32_t>(cur);
      t.log[cur] = k;
      cur = (cur * g) % p;
    }
    t.modulus = {0, 1};
  }

  // Digit-vector helpers over F_p for the construction only.
  static std::vector<std::uint32_t> digits(std::uint32_t v, std::uint32_t p, std::uint32_t e) {
    std::vector<std::uint32_t> d(e);
    for (std::uint32_t i = 0; i < e; ++i) {
      d[i] = v % p;
      v /= p;
    }
    return d;
  }
  static std::uint32_t undigits(const std::vector<std::uint32_t>& d, std::uint32_t p) {
    std::uint32_t v = 0;
    for (std::size_t i = d.size(); i-- > 0;) v = v * p + d[i];
    return v;
  }

  // Multiply the residue class d (degree < e) by y modulo the monic f of degree e.
  static void times_y(std::vector<std::uint32_t>& d, const std::vector<std::uint32_t>& f, std::uint32_t p) {
    std::uint32_t e = static_cast<std::uint32_t>(d.size());
    std::uint32_t top = d[e - 1];
    for (std::uint32_t i = e - 1; i > 0; --i) d[i] = d[i - 1];
    d[0] = 0;
    if (top) {
      for (std::uint32_t i = 0; i < e; ++i) d[i] = (d[i] + (p - top) * f[i]) % p;
    }
  }

  static void build_extension(Tables& t) {
    const std::uint32_t p = t.p, e = t.e, q = t.q;
    const std::uint64_t order = q - 1;
    // Search monic f of degree e for which y has multiplicative order q - 1.
    std::uint32_t count = 1;
    for (std::uint32_t i = 0; i < e; ++i) count *= p;
    for (std::uint32_t idx = 0; idx < count; ++idx) {
      auto f = digits(idx, p, e);
      if (f[0] == 0) continue;
      f.push_back(1);
      // Walk y^k; order is q-1 iff y^k != 1 for 0 < k < q-1 and y^(q-1) == 1.
      std::vector<std::uint32_t> cur(e, 0);
      cur[0] = 1;
      bool primitive = true;
      std::vector<std::uint32_t> exp(q - 1);
      for (std::uint64_t k = 0; k < order; ++k) {
        std::uint32_t v = undigits(cur, p);
        if (k > 0 && v == 1) {
          primitive = false;
          break;
        }
        exp[k] = v;
        times_y(cur, f, p);
      }
      if (!primitive || undigits(cur, p) != 1) continue;
      t.exp = std::move(exp);
      for (std::uint32_t k = 0; k < q - 1; ++k) t.log[t.exp[k]] = k;
      t.modulus = f;
      break;
    }
    if (t.modulus.empty()) throw ConsistencyError("no primitive polynomial found");
    t.zech.assign(q - 1, kNone);
    for (std::uint32_t k = 0; k < q - 1; ++k) {
      auto d = digits(t.exp[k], p, e);
      d[0] = (d[0] + 1) % p;
      std::uint32_t w = undigits(d, p);
      t.zech[k] = (w == 0) ? kNone : t.log[w];
    }
  }

  std::shared_ptr<const Tables> tab_;
};

/// Field size together with the group-exponent hypothesis n_1 | q - 1.
struct FieldParams {
  std::uint32_t p = 0;
  std::uint32_t e = 0;
  std::uint32_t q = 0;
  FieldElem gamma = 0;
  std::uint32_t exponent_constraint = 1;

  static FieldParams of(const FiniteField& f, std::uint32_t n1) {
    if (n1 == 0 || (f.q() - 1) % n1 != 0) {
      throw DomainError("q = " + std::to_string(f.q()) + " is not congruent to 1 modulo the group exponent " +
                        std::to_string(n1) + " (tame hypothesis q = 1 mod exp(G))");
    }
    return FieldParams{f.p(), f.degree(), f.q(), f.gamma(), n1};
  }
};

}  // namespace zzlab
