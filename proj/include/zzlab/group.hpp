#pragma once

// Finite abelian groups G = Z/n_1 x ... x Z/n_t with n_{i+1} | n_i, their
// duals, and exact roots of unity of order dividing n_1.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace zzlab {

/// zeta_N^a, stored by its exponent.
class RootOfUnity {
 public:
  RootOfUnity() = default;
  RootOfUnity(std::uint32_t exponent, std::uint32_t N) : a_(N ? exponent % N : 0), N_(N) {
    if (N == 0) throw DomainError("root of unity of order 0");
  }
  std::uint32_t exponent() const noexcept { return a_; }
  std::uint32_t modulus() const noexcept { return N_; }
  bool is_one() const noexcept { return a_ == 0; }

  RootOfUnity operator*(const RootOfUnity& o) const {
    if (o.N_ != N_) throw DomainError("roots of unity with different moduli");
    return RootOfUnity((a_ + o.a_) % N_, N_);
  }
  RootOfUnity inverse() const { return RootOfUnity((N_ - a_) % N_, N_); }
  RootOfUnity pow(std::int64_t k) const {
    std::int64_t e = (static_cast<std::int64_t>(a_) * (k % static_cast<std::int64_t>(N_))) % N_;
    if (e < 0) e += N_;
    return RootOfUnity(static_cast<std::uint32_t>(e), N_);
  }
  std::complex<double> render() const { return render(a_, N_); }
  static std::complex<double> render(std::uint32_t a, std::uint32_t N) {
    // Exact values on the axes keep real characters exactly real.
    std::uint64_t four = 4ull * a;
    if (four % N == 0) {
      switch ((four / N) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
      }
    }
    double t = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(N);
    return {std::cos(t), std::sin(t)};
  }
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;

 private:
  std::uint32_t a_ = 0;
  std::uint32_t N_ = 1;
};

using GroupElem = std::vector<std::uint32_t>;

class GroupSpec {
 public:
  GroupSpec() = default;
  explicit GroupSpec(std::vector<std::uint32_t> invariant_factors) : n_(std::move(invariant_factors)) {
    if (n_.empty()) throw DomainError("group needs at least one invariant factor");
    for (std::size_t i = 0; i < n_.size(); ++i) {
      if (n_[i] < 2) throw DomainError("invariant factors must be at least 2");
      if (i > 0 && n_[i - 1] % n_[i] != 0) throw DomainError("invariant factors must satisfy n_{i+1} | n_i");
    }
    order_ = 1;
    for (auto v : n_) order_ *= v;
  }

  const std::vector<std::uint32_t>& factors() const noexcept { return n_; }
  std::size_t rank() const noexcept { return n_.size(); }
  std::uint32_t order() const noexcept { return order_; }
  std::uint32_t exponent() const noexcept { return n_.empty() ? 1 : n_[0]; }

  GroupElem zero() const { return GroupElem(n_.size(), 0); }

  GroupElem reduce(GroupElem g) const {
    check_shape(g);
    for (std::size_t i = 0; i < n_.size(); ++i) g[i] %= n_[i];
    return g;
  }
  GroupElem add(const GroupElem& a, const GroupElem& b) const {
    GroupElem r(n_.size());
    for (std::size_t i = 0; i < n_.size(); ++i) r[i] = (a[i] + b[i]) % n_[i];
    return r;
  }
  GroupElem neg(const GroupElem& a) const {
    GroupElem r(n_.size());
    for (std::size_t i = 0; i < n_.size(); ++i) r[i] = (n_[i] - a[i] % n_[i]) % n_[i];
    return r;
  }
  GroupElem scale(const GroupElem& a, std::int64_t k) const {
    GroupElem r(n_.size());
    for (std::size_t i = 0; i < n_.size(); ++i) {
      std::int64_t v = (static_cast<std::int64_t>(a[i]) * (k % static_cast<std::int64_t>(n_[i]))) % n_[i];
      if (v < 0) v += n_[i];
      r[i] = static_cast<std::uint32_t>(v);
    }
    return r;
  }
  bool is_zero(const GroupElem& a) const {
    return std::all_of(a.begin(), a.end(), [](std::uint32_t v) { return v == 0; });
  }
  std::uint32_t element_order(const GroupElem& a) const {
    std::uint32_t o = 1;
    for (std::size_t i = 0; i < n_.size(); ++i) o = std::lcm(o, n_[i] / std::gcd(n_[i], a[i] % n_[i]));
    return o;
  }

  /// Mixed-radix index in [0, order), first component least significant.
  std::uint32_t index(const GroupElem& a) const {
    std::uint32_t idx = 0;
    for (std::size_t i = n_.size(); i-- > 0;) idx = idx * n_[i] + a[i] % n_[i];
    return idx;
  }
  GroupElem element(std::uint32_t idx) const {
    GroupElem g(n_.size());
    for (std::size_t i = 0; i < n_.size(); ++i) {
      g[i] = idx % n_[i];
      idx /= n_[i];
    }
    return g;
  }
  std::vector<GroupElem> elements() const {
    std::vector<GroupElem> out;
    out.reserve(order_);
    for (std::uint32_t i = 0; i < order_; ++i) out.push_back(element(i));
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < n_.size(); ++i) s += (i ? "," : "") + std::to_string(n_[i]);
    return s;
  }

  void check_shape(const GroupElem& g) const {
    if (g.size() != n_.size()) throw DomainError("group element has the wrong number of components");
  }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.n_ == b.n_; }

 private:
  std::vector<std::uint32_t> n_;
  std::uint32_t order_ = 1;
};

/// A character rho: G -> mu_{n_1}, rho(g) = zeta_{n_1}^{sum_i m_i g_i n_1/n_i}.
class DualChar {
 public:
  DualChar() = default;
  DualChar(const GroupSpec& G, std::vector<std::uint32_t> exponents) : m_(std::move(exponents)), n_(G.factors()) {
    G.check_shape(m_);
    for (std::size_t i = 0; i < n_.size(); ++i) m_[i] %= n_[i];
  }

  const std::vector<std::uint32_t>& exponents() const noexcept { return m_; }
  std::uint32_t modulus() const noexcept { return n_.empty() ? 1 : n_[0]; }

  /// Exponent of rho(g) in Z/n_1.
  std::uint32_t exponent_at(const GroupElem& g) const {
    const std::uint64_t N = modulus();
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n_.size(); ++i) s += static_cast<std::uint64_t>(m_[i]) * (g[i] % n_[i]) * (N / n_[i]);
    return static_cast<std::uint32_t>(s % N);
  }
  RootOfUnity operator()(const GroupElem& g) const { return RootOfUnity(exponent_at(g), modulus()); }

  bool is_trivial() const {
    return std::all_of(m_.begin(), m_.end(), [](std::uint32_t v) { return v == 0; });
  }
  std::uint32_t order() const {
    std::uint32_t o = 1;
    for (std::size_t i = 0; i < n_.size(); ++i) o = std::lcm(o, n_[i] / std::gcd(n_[i], m_[i]));
    return o;
  }
  /// Variance weight r_rho: 2 for real (order 2) characters, 1 otherwise.
  int r_weight() const { return order() == 2 ? 2 : 1; }

  DualChar inverse() const {
    DualChar r = *this;
    for (std::size_t i = 0; i < n_.size(); ++i) r.m_[i] = (n_[i] - m_[i]) % n_[i];
    return r;
  }
  DualChar operator*(const DualChar& o) const {
    DualChar r = *this;
    for (std::size_t i = 0; i < n_.size(); ++i) r.m_[i] = (m_[i] + o.m_[i]) % n_[i];
    return r;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < m_.size(); ++i) s += (i ? "," : "") + std::to_string(m_[i]);
    return s + ")";
  }

  friend bool operator==(const DualChar& a, const DualChar& b) { return a.m_ == b.m_ && a.n_ == b.n_; }
  friend bool operator<(const DualChar& a, const DualChar& b) { return a.m_ < b.m_; }

 private:
  std::vector<std::uint32_t> m_;
  std::vector<std::uint32_t> n_;
};

inline RootOfUnity rho_eval(const DualChar& rho, const GroupElem& g) { return rho(g); }

/// All kappa characters, trivial first, in mixed-radix order of exponent vectors.
inline std::vector<DualChar> dual_group(const GroupSpec& G) {
  std::vector<DualChar> out;
  for (std::uint32_t i = 0; i < G.order(); ++i) out.emplace_back(G, G.element(i));
  return out;
}

/// One representative of each pair {rho, rho^{-1}} of nontrivial characters.
inline std::vector<DualChar> conjugate_representatives(const std::vector<DualChar>& dual) {
  std::vector<DualChar> out;
  for (const auto& r : dual) {
    if (r.is_trivial()) continue;
    if (std::find(out.begin(), out.end(), r.inverse()) != out.end()) continue;
    out.push_back(r);
  }
  return out;
}

/// A subgroup as the sorted list of element indices.
struct Subgroup {
  std::vector<std::uint32_t> members;
  std::uint32_t order() const { return static_cast<std::uint32_t>(members.size()); }
  bool contains(std::uint32_t idx) const { return std::binary_search(members.begin(), members.end(), idx); }
  friend bool operator==(const Subgroup&, const Subgroup&) = default;
  friend auto operator<=>(const Subgroup&, const Subgroup&) = default;
};

inline Subgroup generated_subgroup(const GroupSpec& G, const std::vector<GroupElem>& gens) {
  std::set<std::uint32_t> seen{G.index(G.zero())};
  std::vector<GroupElem> frontier{G.zero()};
  while (!frontier.empty()) {
    std::vector<GroupElem> next;
    for (const auto& x : frontier) {
      for (const auto& g : gens) {
        GroupElem y = G.add(x, G.reduce(g));
        if (seen.insert(G.index(y)).second) next.push_back(y);
      }
    }
    frontier = std::move(next);
  }
  return Subgroup{std::vector<std::uint32_t>(seen.begin(), seen.end())};
}

/// Every subgroup of G (intended for small groups).
inline std::vector<Subgroup> all_subgroups(const GroupSpec& G) {
  std::set<Subgroup> found{generated_subgroup(G, {})};
  std::vector<Subgroup> work(found.begin(), found.end());
  while (!work.empty()) {
    Subgroup S = work.back();
    work.pop_back();
    for (std::uint32_t i = 0; i < G.order(); ++i) {
      if (S.contains(i)) continue;
      std::vector<GroupElem> gens;
      for (auto j : S.members) gens.push_back(G.element(j));
      gens.push_back(G.element(i));
      Subgroup T = generated_subgroup(G, gens);
      if (found.insert(T).second) work.push_back(T);
    }
  }
  return {found.begin(), found.end()};
}

/// Invariant factors of a subgroup, largest first (empty for the trivial group).
inline std::vector<std::uint32_t> invariant_factors(const GroupSpec& G, const Subgroup& S) {
  // For each prime p, the number of cyclic p-factors of order >= p^j is
  // log_p #{h : p^j h = 0} - log_p #{h : p^{j-1} h = 0}.
  std::uint32_t n = S.order();
  std::vector<std::uint32_t> primes;
  for (std::uint32_t p = 2, m = n; m > 1; ++p) {
    if (m % p == 0) {
      primes.push_back(p);
      while (m % p == 0) m /= p;
    }
  }
  std::vector<std::uint32_t> result;
  auto log_p = [](std::uint32_t v, std::uint32_t p) {
    std::uint32_t e = 0;
    while (v > 1) {
      v /= p;
      ++e;
    }
    return e;
  };
  std::map<std::uint32_t, std::vector<std::uint32_t>> exps;  // p -> exponents of cyclic factors, descending
  for (auto p : primes) {
    std::vector<std::uint32_t> ge;  // ge[j] = number of factors with exponent >= j
    std::uint32_t prev = 0, pj = 1;
    for (std::uint32_t j = 1;; ++j) {
      pj *= p;
      std::uint32_t cnt = 0;
      for (auto idx : S.members)
        if (G.is_zero(G.scale(G.element(idx), pj))) ++cnt;
      std::uint32_t c = log_p(cnt, p);
      if (c == prev) break;
      ge.push_back(c - prev);
      prev = c;
    }
    // ge[j-1] = #factors with exponent >= j.
    std::vector<std::uint32_t> e;
    for (std::size_t j = 0; j < ge.size(); ++j) {
      std::uint32_t ex = static_cast<std::uint32_t>(j + 1);
      std::uint32_t next = j + 1 < ge.size() ? ge[j + 1] : 0;
      for (std::uint32_t k = 0; k < ge[j] - next; ++k) e.push_back(ex);
    }
    std::sort(e.rbegin(), e.rend());
    exps[p] = e;
  }
  std::size_t t = 0;
  for (auto& [p, e] : exps) t = std::max(t, e.size());
  for (std::size_t i = 0; i < t; ++i) {
    std::uint32_t f = 1;
    for (auto& [p, e] : exps)
      if (i < e.size())
        for (std::uint32_t k = 0; k < e[i]; ++k) f *= p;
    result.push_back(f);
  }
  return result;
}

}  // namespace zzlab
