#pragma once

// Places of F_q(x): monic irreducibles plus the place at infinity.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "poly.hpp"

namespace zzlab {

class Place {
 public:
  enum class Kind { Finite, Infinity };

  static Place infinity() { return Place(); }
  /// Finite place; the caller vouches for irreducibility (use `checked_finite` otherwise).
  static Place finite(MonicPoly prime) { return Place(std::move(prime)); }
  static Place checked_finite(const FiniteField& F, MonicPoly prime) {
    if (prime.degree() < 1 || !is_irreducible(F, prime.coeffs()))
      throw DomainError("not an irreducible polynomial: " + poly_to_string(prime.coeffs()));
    return Place(std::move(prime));
  }

  Kind kind() const noexcept { return kind_; }
  bool is_infinite() const noexcept { return kind_ == Kind::Infinity; }
  int degree() const noexcept { return is_infinite() ? 1 : prime_.degree(); }
  const MonicPoly& prime() const {
    if (is_infinite()) throw DomainError("the infinite place has no prime polynomial");
    return prime_;
  }
  BigInt norm(std::uint32_t q) const { return big_pow(q, static_cast<unsigned>(degree())); }

  /// Finite places first in (degree, coefficient-lex) order, infinity last.
  friend auto operator<=>(const Place& a, const Place& b) {
    if (a.is_infinite() != b.is_infinite()) return a.is_infinite() <=> b.is_infinite();
    return a.prime_ <=> b.prime_;
  }
  friend bool operator==(const Place& a, const Place& b) = default;

  std::string to_string() const { return is_infinite() ? std::string("inf") : poly_to_string(prime_.coeffs()); }

 private:
  Place() : kind_(Kind::Infinity) {}
  explicit Place(MonicPoly p) : kind_(Kind::Finite), prime_(std::move(p)) {}
  Kind kind_;
  MonicPoly prime_;
};

/// Number of monic irreducibles of degree n: (1/n) sum_{d|n} mu(d) q^{n/d}.
inline BigInt place_count(std::uint32_t q, int n) {
  if (n <= 0) throw DomainError("place_count needs n >= 1");
  BigInt total = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    int mu = 1, m = d;
    bool square = false;
    for (int p = 2; p * p <= m; ++p) {
      if (m % p) continue;
      m /= p;
      if (m % p == 0) square = true;
      mu = -mu;
    }
    if (m > 1) mu = -mu;
    if (square) continue;
    BigInt t = big_pow(q, static_cast<unsigned>(n / d));
    total += mu > 0 ? t : BigInt(-t);
  }
  return total / n;
}

/// All monic irreducibles up to a degree, built by sieving reducible monics.
///
/// Storage is flat per degree: the places of degree n occupy n consecutive
/// lower coefficients each (the leading 1 is implicit), in canonical order.
class PlaceTable {
 public:
  PlaceTable(const FiniteField& F, int max_degree, std::uint64_t max_monics = 1ull << 32) : F_(F), max_degree_(max_degree) {
    if (max_degree < 0) throw DomainError("negative place-table degree");
    coeffs_.resize(static_cast<std::size_t>(max_degree) + 1);
    count_.assign(static_cast<std::size_t>(max_degree) + 1, 0);
    for (int n = 1; n <= max_degree; ++n) {
      BigInt size = big_pow(F.q(), static_cast<unsigned>(n));
      if (size > max_monics)
        throw ResourceError("place table of degree " + std::to_string(n) + " over F_" + std::to_string(F.q()) +
                            " exceeds the configured size");
      sieve_degree(n);
    }
  }

  const FiniteField& field() const noexcept { return F_; }
  int max_degree() const noexcept { return max_degree_; }
  std::size_t count(int n) const { return n >= 1 && n <= max_degree_ ? count_[n] : 0; }

  /// Lower coefficients c_0..c_{n-1} of the i-th place of degree n.
  std::span<const FieldElem> lower(int n, std::size_t i) const {
    return {coeffs_[n].data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }

  Poly poly(int n, std::size_t i) const {
    auto l = lower(n, i);
    Poly p(l.begin(), l.end());
    p.push_back(1);
    return p;
  }

  Place place(int n, std::size_t i) const { return Place::finite(MonicPoly(poly(n, i))); }

  /// Finite places of degree <= D followed by infinity.
  std::vector<Place> places(int D) const {
    if (D > max_degree_) throw DomainError("place table built only to degree " + std::to_string(max_degree_));
    std::vector<Place> out;
    for (int n = 1; n <= D; ++n)
      for (std::size_t i = 0; i < count_[n]; ++i) out.push_back(place(n, i));
    out.push_back(Place::infinity());
    return out;
  }

 private:
  void sieve_degree(int n) {
    const std::uint64_t q = F_.q();
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= q;
    std::vector<std::uint64_t> weight(static_cast<std::size_t>(n) + 1, 0);  // q^{n-1-i} for coefficient i < n
    {
      std::uint64_t w = 1;
      for (int i = n - 1; i >= 0; --i) {
        weight[i] = w;
        w *= q;
      }
    }
    std::vector<std::uint8_t> reducible(total, 0);
    // Every reducible monic of degree n is A*B with A irreducible, deg A = a <= n/2.
    std::vector<FieldElem> prod(static_cast<std::size_t>(n) + 1);
    std::vector<FieldElem> bdig;
    for (int a = 1; 2 * a <= n; ++a) {
      const int b = n - a;
      for (std::size_t ia = 0; ia < count_[a]; ++ia) {
        Poly A = poly(a, ia);
        // Start with B = x^b, product = x^b A.
        std::fill(prod.begin(), prod.end(), 0);
        for (int j = 0; j <= a; ++j) prod[b + j] = A[j];
        std::uint64_t key = 0;
        for (int i = 0; i < n; ++i) key += prod[i] * weight[i];
        bdig.assign(static_cast<std::size_t>(b), 0);
        while (true) {
          reducible[key] = 1;
          // Odometer increment on B's lower coefficients; each changed digit adds x^pos * A.
          int pos = 0;
          for (; pos < b; ++pos) {
            FieldElem next = static_cast<FieldElem>((bdig[pos] + 1) % q);
            FieldElem delta = F_.sub(next, bdig[pos]);
            bdig[pos] = next;
            for (int j = 0; j <= a; ++j) {
              int idx = pos + j;
              FieldElem old = prod[idx];
              FieldElem nw = F_.add(old, F_.mul(delta, A[j]));
              prod[idx] = nw;
              if (idx < n) key = key + nw * weight[idx] - old * weight[idx];
            }
            if (next != 0) break;
          }
          if (pos == b) break;
        }
      }
    }
    auto& store = coeffs_[n];
    std::size_t c = 0;
    for (std::uint64_t key = 0; key < total; ++key) {
      if (reducible[key]) continue;
      std::uint64_t k = key;
      std::size_t base = store.size();
      store.resize(base + static_cast<std::size_t>(n));
      for (int i = n - 1; i >= 0; --i) {
        store[base + i] = static_cast<FieldElem>(k % q);
        k /= q;
      }
      ++c;
    }
    count_[n] = c;
  }

  FiniteField F_;
  int max_degree_;
  std::vector<std::vector<FieldElem>> coeffs_;
  std::vector<std::size_t> count_;
};

/// All finite places of degree <= D plus infinity, in canonical order.
inline std::vector<Place> places_up_to(const FiniteField& F, int D) {
  if (D < 1) throw DomainError("places_up_to needs D >= 1");
  return PlaceTable(F, D).places(D);
}

}  // namespace zzlab
