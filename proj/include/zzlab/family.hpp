#pragma once

// Tame G-valued idele class characters of F_q(x), one per G-extension class.
//
// A member is the data (g_P) at finitely many finite places, the inertia image
// g_inf at infinity and the image h_inf of the uniformizer 1/x. The only
// relation is triviality on F_q^*:
//     sum_P ((|P| - 1)/(q - 1)) g_P + g_inf = 0   in G.
// Conductor degree is sum deg P + [g_inf != 0].

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "group.hpp"
#include "places.hpp"
#include "poly.hpp"
#include "residue.hpp"
#include "rng.hpp"

namespace zzlab {

struct FamilySpec {
  FiniteField field;
  GroupSpec group;
  FieldParams params;

  FamilySpec(std::uint32_t q, std::vector<std::uint32_t> factors)
      : field(q), group(std::move(factors)), params(FieldParams::of(field, group.exponent())) {}

  std::uint32_t q() const noexcept { return field.q(); }
  std::uint32_t kappa() const noexcept { return group.order(); }
  std::uint32_t n1() const noexcept { return group.exponent(); }

  /// (q^n - 1)/(q - 1) mod n_1, the weight of a degree-n place in the reciprocity relation.
  std::uint32_t weight(int n) const {
    std::uint64_t w = 0, qp = 1;
    for (int i = 0; i < n; ++i) {
      w = (w + qp) % n1();
      qp = (qp * q()) % n1();
    }
    return static_cast<std::uint32_t>(w);
  }
};

struct RamifiedPlace {
  MonicPoly prime;
  GroupElem g;
  friend bool operator==(const RamifiedPlace&, const RamifiedPlace&) = default;
};

class FamilyMember {
 public:
  FamilyMember() = default;
  FamilyMember(std::vector<RamifiedPlace> ram, GroupElem g_inf, GroupElem h_inf)
      : ram_(std::move(ram)), g_inf_(std::move(g_inf)), h_inf_(std::move(h_inf)) {
    std::sort(ram_.begin(), ram_.end(), [](const auto& a, const auto& b) { return a.prime < b.prime; });
  }

  const std::vector<RamifiedPlace>& ram_finite() const noexcept { return ram_; }
  const GroupElem& g_inf() const noexcept { return g_inf_; }
  const GroupElem& h_inf() const noexcept { return h_inf_; }

  int conductor_degree() const {
    int d = 0;
    for (const auto& r : ram_) d += r.prime.degree();
    bool inf = std::any_of(g_inf_.begin(), g_inf_.end(), [](std::uint32_t v) { return v != 0; });
    return d + (inf ? 1 : 0);
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < ram_.size(); ++i) {
      s += (i ? ", " : "") + poly_to_string(ram_[i].prime.coeffs()) + ":" + elem_str(ram_[i].g);
    }
    return s + "; g_inf=" + elem_str(g_inf_) + "; h_inf=" + elem_str(h_inf_) + "}";
  }

  friend bool operator==(const FamilyMember&, const FamilyMember&) = default;
  friend bool operator<(const FamilyMember& a, const FamilyMember& b) {
    if (a.ram_.size() != b.ram_.size()) return a.ram_.size() < b.ram_.size();
    for (std::size_t i = 0; i < a.ram_.size(); ++i) {
      if (a.ram_[i].prime != b.ram_[i].prime) return a.ram_[i].prime < b.ram_[i].prime;
      if (a.ram_[i].g != b.ram_[i].g) return a.ram_[i].g < b.ram_[i].g;
    }
    if (a.g_inf_ != b.g_inf_) return a.g_inf_ < b.g_inf_;
    return a.h_inf_ < b.h_inf_;
  }

 private:
  static std::string elem_str(const GroupElem& g) {
    std::string s = "(";
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
    return s + ")";
  }
  std::vector<RamifiedPlace> ram_;
  GroupElem g_inf_;
  GroupElem h_inf_;
};

/// Reciprocity and nondegeneracy check. Reducible or repeated keys are a domain error.
inline bool validate_member(const FamilySpec& S, const FamilyMember& m) {
  const GroupSpec& G = S.group;
  G.check_shape(m.g_inf());
  G.check_shape(m.h_inf());
  GroupElem total = G.reduce(m.g_inf());
  for (std::size_t i = 0; i < m.ram_finite().size(); ++i) {
    const auto& r = m.ram_finite()[i];
    if (i > 0 && m.ram_finite()[i - 1].prime == r.prime) throw DomainError("repeated ramified place");
    if (r.prime.degree() < 1 || !is_irreducible(S.field, r.prime.coeffs()))
      throw DomainError("ramified place is not irreducible: " + poly_to_string(r.prime.coeffs()));
    G.check_shape(r.g);
    if (G.is_zero(G.reduce(r.g))) return false;
    total = G.add(total, G.scale(G.reduce(r.g), S.weight(r.prime.degree())));
  }
  return G.is_zero(total);
}

inline void require_nontrivial(const DualChar& rho) {
  if (rho.is_trivial()) throw DomainError("operation needs a nontrivial character");
}

inline int conductor_degree(const FamilyMember& m) { return m.conductor_degree(); }

inline int conductor_of_twist(const FamilyMember& m, const DualChar& rho) {
  require_nontrivial(rho);
  int d = 0;
  for (const auto& r : m.ram_finite())
    if (rho.exponent_at(r.g) != 0) d += r.prime.degree();
  if (rho.exponent_at(m.g_inf()) != 0) d += 1;
  return d;
}

enum class TwistType { Geometric, ConstantType, Trivial };

inline const char* to_string(TwistType t) {
  switch (t) {
    case TwistType::Geometric: return "GEOMETRIC";
    case TwistType::ConstantType: return "CONSTANT_TYPE";
    default: return "TRIVIAL";
  }
}

/// Conductor 0 twists are either trivial or an unramified constant-field character.
inline TwistType classify_twist(const FamilyMember& m, const DualChar& rho) {
  if (conductor_of_twist(m, rho) > 0) return TwistType::Geometric;
  return rho.exponent_at(m.h_inf()) != 0 ? TwistType::ConstantType : TwistType::Trivial;
}

/// A member is geometric when every nontrivial twist has positive conductor.
inline bool is_geometric(const FamilySpec& S, const FamilyMember& m) {
  for (const auto& rho : dual_group(S.group))
    if (!rho.is_trivial() && conductor_of_twist(m, rho) == 0) return false;
  return true;
}

inline Subgroup image_subgroup(const FamilySpec& S, const FamilyMember& m) {
  std::vector<GroupElem> gens{m.g_inf(), m.h_inf()};
  for (const auto& r : m.ram_finite()) gens.push_back(r.g);
  return generated_subgroup(S.group, gens);
}

inline bool is_surjective(const FamilySpec& S, const FamilyMember& m) { return image_subgroup(S, m).order() == S.kappa(); }

/// Frobenius element at a monic h coprime to every ramified place other than `skip`:
/// deg h * h_inf - sum_Q s_Q(h) g_Q with s_Q the symbol of order n_1.
inline GroupElem frobenius_element(const FamilySpec& S, const FamilyMember& m, const Poly& h, const Poly* skip = nullptr) {
  const GroupSpec& G = S.group;
  GroupElem e = G.scale(m.h_inf(), degree(h));
  for (const auto& r : m.ram_finite()) {
    if (skip && r.prime.coeffs() == *skip) continue;
    auto s = norm_residue_symbol(S.field, h, r.prime.coeffs(), S.n1());
    if (!s) throw DomainError("Frobenius element requested at a place ramified in the member");
    e = G.add(e, G.scale(r.g, -static_cast<std::int64_t>(*s)));
  }
  return e;
}

/// psi(v) for the twist rho o chi; nullopt encodes the value 0 (v ramified in the twist).
inline std::optional<RootOfUnity> frobenius_value(const FamilySpec& S, const FamilyMember& m, const DualChar& rho, const Place& v) {
  require_nontrivial(rho);
  if (v.is_infinite()) {
    if (rho.exponent_at(m.g_inf()) != 0) return std::nullopt;
    return rho(m.h_inf());
  }
  const Poly& P = v.prime().coeffs();
  for (const auto& r : m.ram_finite()) {
    if (r.prime.coeffs() == P) {
      if (rho.exponent_at(r.g) != 0) return std::nullopt;
      return rho(frobenius_element(S, m, P, &P));
    }
  }
  return rho(frobenius_element(S, m, P));
}

/// Completely multiplicative extension to monic polynomials (0 if h meets the twist's conductor).
inline std::optional<RootOfUnity> twist_value_at_monic(const FamilySpec& S, const FamilyMember& m, const DualChar& rho, const Poly& h) {
  require_nontrivial(rho);
  if (!is_monic(h)) throw DomainError("twist values are defined on monic polynomials");
  std::uint64_t e = static_cast<std::uint64_t>(rho.exponent_at(m.h_inf())) * static_cast<std::uint64_t>(degree(h));
  const std::uint32_t N = S.n1();
  e %= N;
  for (const auto& r : m.ram_finite()) {
    std::uint32_t a = rho.exponent_at(r.g);
    if (a == 0) continue;
    auto s = norm_residue_symbol(S.field, h, r.prime.coeffs(), N);
    if (!s) return std::nullopt;
    e = (e + N - (static_cast<std::uint64_t>(a) * *s) % N) % N;
  }
  return RootOfUnity(static_cast<std::uint32_t>(e), N);
}

// ---------------------------------------------------------------------------
// Support shapes: multisets of finite place degrees plus an infinity flag.

struct SupportShape {
  std::vector<int> count;  // count[n] = number of ramified finite places of degree n
  bool infinity = false;
  int degree() const {
    int d = infinity ? 1 : 0;
    for (std::size_t n = 1; n < count.size(); ++n) d += static_cast<int>(n) * count[n];
    return d;
  }
};

/// S_n(eps) = sum_{g != 0} zeta^{<eps, w_n g>} = kappa [eps o w_n trivial] - 1.
inline std::int64_t epsilon_gsum(const FamilySpec& S, int n, const GroupElem& eps) {
  const auto& f = S.group.factors();
  const std::uint32_t w = S.weight(n);
  bool trivial = true;
  for (std::size_t i = 0; i < f.size(); ++i)
    if ((static_cast<std::uint64_t>(eps[i]) * w) % f[i] != 0) trivial = false;
  return trivial ? static_cast<std::int64_t>(S.kappa()) - 1 : -1;
}

/// Number of assignments of nonzero g's to a fixed support that satisfy reciprocity.
inline BigInt valid_assignments(const FamilySpec& S, const SupportShape& shape) {
  BigInt total = 0;
  for (const auto& eps : S.group.elements()) {
    BigInt term = 1;
    for (std::size_t n = 1; n < shape.count.size(); ++n)
      for (int k = 0; k < shape.count[n]; ++k) term *= epsilon_gsum(S, static_cast<int>(n), eps);
    if (shape.infinity) term *= epsilon_gsum(S, 1, eps);
    total += term;
  }
  if (total % S.kappa() != 0) throw ConsistencyError("character average of assignments is not integral");
  return total / S.kappa();
}

/// All shapes of conductor degree d with at most place_count(n) places of degree n.
inline std::vector<SupportShape> support_shapes(const FamilySpec& S, int d) {
  std::vector<SupportShape> out;
  for (int inf = 0; inf <= 1; ++inf) {
    int rest = d - inf;
    if (rest < 0) continue;
    std::vector<int> cnt(static_cast<std::size_t>(std::max(rest, 0)) + 1, 0);
    std::function<void(int, int)> rec = [&](int n, int left) {
      if (left == 0) {
        SupportShape sh;
        sh.count = cnt;
        sh.infinity = inf == 1;
        out.push_back(sh);
        return;
      }
      if (n > left) return;
      BigInt avail = place_count(S.q(), n);
      for (int k = 0; k * n <= left; ++k) {
        if (BigInt(k) > avail) break;
        cnt[n] = k;
        rec(n + 1, left - k * n);
      }
      cnt[n] = 0;
    };
    rec(1, rest);
  }
  return out;
}

/// Members supported on a shape: prod_n C(N_n, k_n) * valid assignments * kappa (free h_inf).
inline BigInt shape_member_count(const FamilySpec& S, const SupportShape& shape) {
  BigInt c = S.kappa();
  for (std::size_t n = 1; n < shape.count.size(); ++n)
    if (shape.count[n]) c *= binomial(place_count(S.q(), static_cast<int>(n)), static_cast<unsigned>(shape.count[n]));
  if (c == 0) return 0;
  return c * valid_assignments(S, shape);
}

/// #Ẽ_G(k, d) by summing over shapes (independent of the series and of enumeration).
inline BigInt family_size(const FamilySpec& S, int d) {
  BigInt t = 0;
  for (const auto& sh : support_shapes(S, d)) t += shape_member_count(S, sh);
  return t;
}

// ---------------------------------------------------------------------------
// Enumeration.

constexpr std::uint64_t kDefaultBudget = 10'000'000;

/// Streams every valid member of conductor degree d in a deterministic order.
template <class Fn>
void for_each_member(const FamilySpec& S, int d, Fn&& fn, std::uint64_t budget = kDefaultBudget) {
  if (d < 0) throw DomainError("conductor degree must be nonnegative");
  BigInt total = family_size(S, d);
  if (total > budget)
    throw ResourceError("enumerating " + total.str() + " members of conductor degree " + std::to_string(d) +
                        " exceeds the budget of " + std::to_string(budget) + "; sample instead");
  const GroupSpec& G = S.group;
  const std::uint32_t kappa = S.kappa();
  PlaceTable T(S.field, std::max(d, 1));
  for (const auto& shape : support_shapes(S, d)) {
    if (shape_member_count(S, shape) == 0) continue;
    // Places chosen per degree as increasing index combinations.
    std::vector<int> degs;
    for (std::size_t n = 1; n < shape.count.size(); ++n)
      for (int k = 0; k < shape.count[n]; ++k) degs.push_back(static_cast<int>(n));
    const std::size_t np = degs.size();
    std::vector<std::size_t> idx(np);
    std::function<void(std::size_t)> choose = [&](std::size_t pos) {
      if (pos == np) {
        // Odometer over nonzero g's for each finite place and g_inf (nonzero iff flagged).
        const std::size_t slots = np + (shape.infinity ? 1 : 0);
        std::vector<std::uint32_t> gi(slots, 1);
        std::vector<std::uint32_t> w(np);
        for (std::size_t i = 0; i < np; ++i) w[i] = S.weight(degs[i]);
        while (true) {
          GroupElem sum = G.zero();
          for (std::size_t i = 0; i < np; ++i) sum = G.add(sum, G.scale(G.element(gi[i]), w[i]));
          if (shape.infinity) sum = G.add(sum, G.element(gi[np]));
          if (G.is_zero(sum)) {
            std::vector<RamifiedPlace> ram;
            for (std::size_t i = 0; i < np; ++i) ram.push_back({MonicPoly(T.poly(degs[i], idx[i])), G.element(gi[i])});
            GroupElem ginf = shape.infinity ? G.element(gi[np]) : G.zero();
            for (std::uint32_t h = 0; h < kappa; ++h) fn(FamilyMember(ram, ginf, G.element(h)));
          }
          std::size_t p = 0;
          for (; p < slots; ++p) {
            if (++gi[p] < kappa) break;
            gi[p] = 1;
          }
          if (p == slots) break;
        }
        return;
      }
      const int n = degs[pos];
      std::size_t start = (pos > 0 && degs[pos - 1] == n) ? idx[pos - 1] + 1 : 0;
      for (std::size_t i = start; i < T.count(n); ++i) {
        idx[pos] = i;
        choose(pos + 1);
      }
    };
    choose(0);
  }
}

inline std::vector<FamilyMember> enumerate_members(const FamilySpec& S, int d, bool surjective_only = false,
                                                   std::uint64_t budget = kDefaultBudget) {
  std::vector<FamilyMember> out;
  for_each_member(
      S, d,
      [&](FamilyMember m) {
        if (!surjective_only || is_surjective(S, m)) out.push_back(std::move(m));
      },
      budget);
  return out;
}

// ---------------------------------------------------------------------------
// Exact uniform sampling.

class MemberSampler {
 public:
  MemberSampler(const FamilySpec& S, int d, bool surjective_only = false) : S_(S), d_(d), surjective_(surjective_only) {
    if (d < 1) throw DomainError("sampling needs conductor degree d >= 1");
    for (auto& sh : support_shapes(S, d)) {
      BigInt w = shape_member_count(S, sh);
      if (w == 0) continue;
      total_ += w;
      shapes_.push_back(std::move(sh));
      cumulative_.push_back(total_);
    }
    if (total_ == 0) throw DomainError("the family of conductor degree " + std::to_string(d) + " is empty");
  }

  const BigInt& total() const noexcept { return total_; }

  /// Draw number `index` of the stream with the given seed.
  FamilyMember draw(std::uint64_t seed, std::uint64_t index) const {
    RandomStream rng(seed, index);
    for (int attempt = 0; attempt < 1'000'000; ++attempt) {
      FamilyMember m = draw_once(rng);
      if (!surjective_ || is_surjective(S_, m)) return m;
    }
    throw ResourceError("surjective filter rejected too many draws");
  }

 private:
  FamilyMember draw_once(RandomStream& rng) const {
    const GroupSpec& G = S_.group;
    BigInt u = rng.below(total_);
    std::size_t si = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
    const SupportShape& sh = shapes_[si];
    std::vector<MonicPoly> primes;
    for (std::size_t n = 1; n < sh.count.size(); ++n) {
      std::vector<MonicPoly> chosen;
      while (static_cast<int>(chosen.size()) < sh.count[n]) {
        Poly p(n + 1);
        for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<FieldElem>(rng.below(S_.q()));
        p[n] = 1;
        if (!is_irreducible(S_.field, p)) continue;
        MonicPoly mp(std::move(p));
        if (std::find(chosen.begin(), chosen.end(), mp) != chosen.end()) continue;
        chosen.push_back(std::move(mp));
      }
      for (auto& c : chosen) primes.push_back(std::move(c));
    }
    const std::uint32_t kappa = S_.kappa();
    while (true) {
      std::vector<RamifiedPlace> ram;
      GroupElem sum = G.zero();
      for (const auto& p : primes) {
        GroupElem g = G.element(1 + static_cast<std::uint32_t>(rng.below(kappa - 1)));
        sum = G.add(sum, G.scale(g, S_.weight(p.degree())));
        ram.push_back({p, g});
      }
      GroupElem ginf = G.zero();
      if (sh.infinity) {
        ginf = G.element(1 + static_cast<std::uint32_t>(rng.below(kappa - 1)));
        sum = G.add(sum, ginf);
      }
      if (!G.is_zero(sum)) continue;
      GroupElem h = G.element(static_cast<std::uint32_t>(rng.below(kappa)));
      return FamilyMember(std::move(ram), std::move(ginf), std::move(h));
    }
  }

  FamilySpec S_;
  int d_;
  bool surjective_;
  std::vector<SupportShape> shapes_;
  std::vector<BigInt> cumulative_;
  BigInt total_ = 0;
};

inline std::vector<FamilyMember> sample_members(const FamilySpec& S, int d, std::size_t count, std::uint64_t seed,
                                                bool surjective_only = false) {
  if (count == 0) return {};
  MemberSampler sampler(S, d, surjective_only);
  std::vector<FamilyMember> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.draw(seed, i));
  return out;
}

}  // namespace zzlab
