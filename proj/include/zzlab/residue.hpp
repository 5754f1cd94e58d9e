#pragma once

// Tame power residue symbols (h / Q)_n for monic irreducible Q over F_q, n | q - 1.
//
// The symbol is the m in Z/n with h^{(|Q|-1)/n} = gamma^{m (q-1)/n} (mod Q).
// Two evaluation routes are provided: the defining power computation, and the
// norm route m = dlog_gamma(Res(Q, h)) mod n, which is what the bulk kernel uses.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "places.hpp"
#include "poly.hpp"

namespace zzlab {

namespace detail {
inline void check_symbol_modulus(const FiniteField& F, std::uint32_t n) {
  if (n == 0 || (F.q() - 1) % n != 0)
    throw DomainError("power residue symbol of order " + std::to_string(n) + " needs n | q - 1 (q = " +
                      std::to_string(F.q()) + ")");
}
}  // namespace detail

/// Defining route: None when Q | h.
inline std::optional<std::uint32_t> power_residue_symbol(const FiniteField& F, const Poly& h, const Poly& Q, std::uint32_t n) {
  detail::check_symbol_modulus(F, n);
  if (!is_monic(Q) || degree(Q) < 1) throw DomainError("symbol modulus must be monic of positive degree");
  Poly r = poly_mod(F, h, Q);
  if (r.empty()) return std::nullopt;
  BigInt e = (big_pow(F.q(), static_cast<unsigned>(degree(Q))) - 1) / n;
  Poly y = poly_powmod(F, r, e, Q);
  if (degree(y) != 0) throw ConsistencyError("power residue is not a constant; is Q irreducible?");
  std::uint32_t step = (F.q() - 1) / n;
  std::uint32_t lg = F.dlog(y[0]);
  if (lg % step != 0) throw ConsistencyError("power residue is not an n-th root of unity");
  return lg / step;
}

/// Norm route through the resultant.
inline std::optional<std::uint32_t> norm_residue_symbol(const FiniteField& F, const Poly& h, const Poly& Q, std::uint32_t n) {
  detail::check_symbol_modulus(F, n);
  Poly r = poly_mod(F, h, Q);
  if (r.empty()) return std::nullopt;
  FieldElem N = resultant(F, Q, r);
  if (N == 0) return std::nullopt;
  return F.dlog(N) % n;
}

/// Bulk evaluator of the symbols (P / Q_j)_{n} for all places P of the
/// table, for a fixed list of moduli Q_j.
///
/// Residues P mod Q_j are updated incrementally between consecutive places of
/// a degree (which share their low-order coefficients in canonical order).
/// Small moduli use a lookup table over residues; large ones a fixed-buffer
/// resultant.
class SymbolKernel {
 public:
  static constexpr std::uint32_t kZero = 0xffffffffu;
  static constexpr int kMaxDegree = 96;

  SymbolKernel(const FiniteField& F, std::vector<Poly> moduli, std::uint32_t n, int max_place_degree,
               std::uint64_t table_limit = 1u << 12)
      : F_(F), n_(n), mods_(std::move(moduli)), maxdeg_(max_place_degree) {
    detail::check_symbol_modulus(F, n);
    if (max_place_degree >= kMaxDegree) throw ResourceError("place degree too large for the symbol kernel");
    for (const auto& Q : mods_) {
      if (!is_monic(Q) || degree(Q) < 1 || degree(Q) >= kMaxDegree)
        throw DomainError("symbol modulus must be monic of moderate positive degree");
      Mod m;
      m.k = degree(Q);
      m.Q = Q;
      m.xpow.resize(static_cast<std::size_t>(max_place_degree + 1) * m.k, 0);
      Poly cur{1};
      for (int i = 0; i <= max_place_degree; ++i) {
        Poly red = poly_mod(F, cur, Q);
        for (std::size_t j = 0; j < red.size(); ++j) m.xpow[static_cast<std::size_t>(i) * m.k + j] = red[j];
        cur = poly_mod(F, poly_mul(F, cur, poly_x()), Q);
      }
      BigInt size = big_pow(F.q(), static_cast<unsigned>(m.k));
      if (size <= table_limit) {
        std::uint64_t sz = static_cast<std::uint64_t>(size);
        m.table.resize(sz);
        std::vector<FieldElem> buf(m.k);
        for (std::uint64_t idx = 0; idx < sz; ++idx) {
          std::uint64_t v = idx;
          for (int j = 0; j < m.k; ++j) {
            buf[j] = static_cast<FieldElem>(v % F.q());
            v /= F.q();
          }
          m.table[idx] = symbol_of_residue(m, buf.data());
        }
      }
      km_.push_back(std::move(m));
    }
  }

  std::size_t size() const noexcept { return km_.size(); }

  /// Symbol of an arbitrary monic P (degree <= max place degree), kZero when Q_j | P.
  void symbols(const Poly& P, std::uint32_t* out) const {
    const int n = degree(P);
    if (n > maxdeg_) throw DomainError("polynomial degree exceeds the kernel's range");
    std::array<FieldElem, kMaxDegree> r{};
    for (std::size_t j = 0; j < km_.size(); ++j) {
      const Mod& m = km_[j];
      std::fill(r.begin(), r.begin() + m.k, 0);
      for (int i = 0; i <= n; ++i) {
        if (P[i] == 0) continue;
        const FieldElem* row = &m.xpow[static_cast<std::size_t>(i) * m.k];
        for (int t = 0; t < m.k; ++t) r[t] = F_.add(r[t], F_.mul(P[i], row[t]));
      }
      out[j] = lookup(m, r.data());
    }
  }

  /// Calls fn(i, syms) for every place i of degree n in the table, where
  /// syms[j] is the symbol at Q_j (kZero if the place equals Q_j).
  template <class Fn>
  void for_each_place(const PlaceTable& T, int n, Fn&& fn) const {
    if (n > maxdeg_) throw DomainError("place degree exceeds the kernel's range");
    const std::size_t J = km_.size();
    std::vector<std::array<FieldElem, kMaxDegree>> res(J);
    std::vector<std::uint32_t> syms(J);
    std::vector<FieldElem> prev(static_cast<std::size_t>(n), 0);
    // Residues of x^n (the implicit leading coefficient) plus zero lower part.
    for (std::size_t j = 0; j < J; ++j) {
      const Mod& m = km_[j];
      res[j].fill(0);
      const FieldElem* row = &m.xpow[static_cast<std::size_t>(n) * m.k];
      for (int t = 0; t < m.k; ++t) res[j][t] = row[t];
    }
    const std::size_t count = T.count(n);
    for (std::size_t i = 0; i < count; ++i) {
      auto low = T.lower(n, i);
      for (int c = 0; c < n; ++c) {
        if (low[c] == prev[c]) continue;
        FieldElem delta = F_.sub(low[c], prev[c]);
        prev[c] = low[c];
        for (std::size_t j = 0; j < J; ++j) {
          const Mod& m = km_[j];
          const FieldElem* row = &m.xpow[static_cast<std::size_t>(c) * m.k];
          auto& rr = res[j];
          for (int t = 0; t < m.k; ++t) rr[t] = F_.add(rr[t], F_.mul(delta, row[t]));
        }
      }
      for (std::size_t j = 0; j < J; ++j) syms[j] = lookup(km_[j], res[j].data());
      fn(i, static_cast<const std::uint32_t*>(syms.data()));
    }
  }

  /// Calls fn(syms) for every monic polynomial of degree n, in canonical order.
  template <class Fn>
  void for_each_monic(int n, Fn&& fn) const {
    if (n > maxdeg_) throw DomainError("monic degree exceeds the kernel's range");
    const std::size_t J = km_.size();
    std::vector<std::array<FieldElem, kMaxDegree>> res(J);
    std::vector<std::uint32_t> syms(J);
    std::vector<FieldElem> digit(static_cast<std::size_t>(n), 0);
    for (std::size_t j = 0; j < J; ++j) {
      const Mod& m = km_[j];
      res[j].fill(0);
      const FieldElem* row = &m.xpow[static_cast<std::size_t>(n) * m.k];
      for (int t = 0; t < m.k; ++t) res[j][t] = row[t];
    }
    while (true) {
      for (std::size_t j = 0; j < J; ++j) syms[j] = lookup(km_[j], res[j].data());
      fn(static_cast<const std::uint32_t*>(syms.data()));
      // Odometer on coefficients, highest-index coefficient fastest (canonical order).
      int c = n - 1;
      for (; c >= 0; --c) {
        FieldElem next = static_cast<FieldElem>((digit[c] + 1) % F_.q());
        FieldElem delta = F_.sub(next, digit[c]);
        digit[c] = next;
        for (std::size_t j = 0; j < J; ++j) {
          const Mod& m = km_[j];
          const FieldElem* row = &m.xpow[static_cast<std::size_t>(c) * m.k];
          auto& rr = res[j];
          for (int t = 0; t < m.k; ++t) rr[t] = F_.add(rr[t], F_.mul(delta, row[t]));
        }
        if (next != 0) break;
      }
      if (c < 0) break;
    }
  }

 private:
  struct Mod {
    int k = 0;
    Poly Q;
    std::vector<FieldElem> xpow;     // row i: x^i mod Q, k entries
    std::vector<std::uint32_t> table;  // residue index -> symbol, if small
  };

  std::uint32_t lookup(const Mod& m, const FieldElem* r) const {
    if (!m.table.empty()) {
      std::uint64_t idx = 0;
      for (int t = m.k; t-- > 0;) idx = idx * F_.q() + r[t];
      return m.table[idx];
    }
    return symbol_of_residue(m, r);
  }

  /// dlog(Res(Q, r)) mod n for a residue r of degree < k.
  std::uint32_t symbol_of_residue(const Mod& m, const FieldElem* r) const {
    std::array<FieldElem, kMaxDegree + 1> a{}, b{};
    int da = m.k;
    for (int i = 0; i <= da; ++i) a[i] = m.Q[i];
    int db = m.k - 1;
    for (int i = 0; i <= db; ++i) b[i] = r[i];
    while (db >= 0 && b[db] == 0) --db;
    if (db < 0) return kZero;
    FieldElem acc = 1;
    // answer = acc * Res(a, b), with deg a > deg b maintained.
    while (db > 0) {
      // a <- a mod b
      FieldElem inv_lb = F_.inv(b[db]);
      for (int i = da; i >= db; --i) {
        if (a[i] == 0) continue;
        FieldElem c = F_.mul(a[i], inv_lb);
        for (int j = 0; j <= db; ++j) a[i - db + j] = F_.sub(a[i - db + j], F_.mul(c, b[j]));
      }
      int dr = db - 1;
      while (dr >= 0 && a[dr] == 0) --dr;
      if (dr < 0) return kZero;
      // Res(a, b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r)
      if ((da * db) & 1) acc = F_.neg(acc);
      acc = F_.mul(acc, F_.pow(b[db], static_cast<std::uint64_t>(da - dr)));
      std::swap(a, b);
      da = db;
      db = dr;
    }
    // Res(a, const c) = c^{da}
    acc = F_.mul(acc, F_.pow(b[0], static_cast<std::uint64_t>(da)));
    return F_.dlog_unchecked(acc) % n_;
  }

  FiniteField F_;
  std::uint32_t n_;
  std::vector<Poly> mods_;
  int maxdeg_;
  std::vector<Mod> km_;
};

}  // namespace zzlab
