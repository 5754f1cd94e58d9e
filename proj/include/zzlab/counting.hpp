#pragma once

// Exact conductor counting through epsilon-twisted Euler products.
//
// The reciprocity constraint sum_v w_v g_v = 0 is detected by averaging over
// the kappa classes eps of F_q^* / (F_q^*)^{n_i}. For a fixed eps every local
// factor depends on the place only through its degree, so the global product
// is aggregated as prod_n (1 + S_n(eps) T^n)^{N_n} and stays exact to degree 40+.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "cyclotomic.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "group.hpp"
#include "parallel.hpp"
#include "places.hpp"

namespace zzlab {

/// Power series in T truncated at degree D, exact integer coefficients.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int D, BigInt constant = 0) : a_(static_cast<std::size_t>(D) + 1, 0) {
    if (D < 0) throw DomainError("negative truncation degree");
    a_[0] = std::move(constant);
  }
  static TruncatedSeries one(int D) { return TruncatedSeries(D, 1); }

  int D() const noexcept { return static_cast<int>(a_.size()) - 1; }
  const BigInt& operator[](int i) const { return a_.at(static_cast<std::size_t>(i)); }
  BigInt& operator[](int i) { return a_.at(static_cast<std::size_t>(i)); }
  const std::vector<BigInt>& coeffs() const noexcept { return a_; }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    check(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  TruncatedSeries operator*(const TruncatedSeries& o) const {
    check(o);
    TruncatedSeries r(D());
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (a_[i] == 0) continue;
      for (std::size_t j = 0; i + j < a_.size(); ++j)
        if (o.a_[j] != 0) r.a_[i + j] += a_[i] * o.a_[j];
    }
    return r;
  }
  TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }
  TruncatedSeries scaled(const BigInt& s) const {
    TruncatedSeries r = *this;
    for (auto& c : r.a_) c *= s;
    return r;
  }

  /// (1 + c T^n)^e expanded binomially.
  static TruncatedSeries binomial_power(int D, const BigInt& c, int n, const BigInt& e) {
    if (n < 1) throw DomainError("monomial degree must be positive");
    TruncatedSeries r(D);
    BigInt cp = 1;
    for (int k = 0; static_cast<long long>(k) * n <= D && BigInt(k) <= e; ++k) {
      r.a_[static_cast<std::size_t>(k) * n] = binomial(e, static_cast<unsigned>(k)) * cp;
      cp *= c;
    }
    return r;
  }

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  void check(const TruncatedSeries& o) const {
    if (o.a_.size() != a_.size()) throw DomainError("series truncated at different degrees");
  }
  std::vector<BigInt> a_;
};

/// Epsilon classes are exponent vectors (a_1..a_t), eps_i = gamma^{a_i}; there are kappa of them.
using EpsilonClass = GroupElem;

inline std::vector<EpsilonClass> epsilon_classes(const FamilySpec& S) { return S.group.elements(); }

/// Pairing of eps with a local inertia value g at a place of degree deg, in mu_{n_1}.
inline RootOfUnity dot_epsilon(const FamilySpec& S, int deg, const GroupElem& g, const EpsilonClass& eps) {
  if (deg < 1) throw DomainError("place degree must be positive");
  const auto& f = S.group.factors();
  S.group.check_shape(g);
  S.group.check_shape(eps);
  const std::uint32_t n1 = S.n1();
  const std::uint64_t w = S.weight(deg);
  std::uint64_t e = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::uint64_t c = (static_cast<std::uint64_t>(eps[i]) * w % f[i]) * g[i] % f[i];
    e += c * (n1 / f[i]);
  }
  return RootOfUnity(static_cast<std::uint32_t>(e % n1), n1);
}

// ---------------------------------------------------------------------------
// Marks restrict the inertia value at one place.

enum class MarkKind { None, Ramified, Unramified };

struct PlaceMark {
  Place place = Place::infinity();
  MarkKind kind = MarkKind::None;
  DualChar rho;
  std::int64_t lambda = 0;
};

namespace detail {

inline bool divides_order(const DualChar& rho, std::int64_t lambda) {
  std::int64_t t = rho.order();
  return lambda % t == 0;
}

/// sum of dot_epsilon over the g admitted by the mark, g != 0 unless noted.
inline BigInt restricted_gsum(const FamilySpec& S, int deg, const EpsilonClass& eps, MarkKind kind, const DualChar* rho) {
  CyclotomicInt s(S.n1());
  for (const auto& g : S.group.elements()) {
    if (S.group.is_zero(g)) continue;
    if (kind == MarkKind::Ramified && rho->exponent_at(g) == 0) continue;
    if (kind == MarkKind::Unramified && rho->exponent_at(g) != 0) continue;
    s += CyclotomicInt::root(dot_epsilon(S, deg, g, eps));
  }
  if (!s.is_rational()) throw ConsistencyError("character sum over a subgroup is not rational");
  return s.rational_part();
}

}  // namespace detail

/// Local factor of one place of degree deg for the eps-twisted product.
/// The infinite place carries the extra factor kappa from the free value on its uniformizer.
inline TruncatedSeries local_factor_series(const FamilySpec& S, int deg, const EpsilonClass& eps, int D,
                                           const PlaceMark& mark = {}, bool at_infinity = false) {
  if (D < 0) throw DomainError("negative truncation degree");
  if (mark.kind != MarkKind::None) {
    if (mark.rho.is_trivial()) throw DomainError("marks need a non-principal character");
    if (mark.kind == MarkKind::Unramified && !detail::divides_order(mark.rho, mark.lambda))
      throw DomainError("Frobenius weight rho^lambda with ord(rho) not dividing lambda is not a local factor; use the brute-force average");
  }
  TruncatedSeries r(D);
  const DualChar* rho = mark.kind == MarkKind::None ? nullptr : &mark.rho;
  BigInt s = detail::restricted_gsum(S, deg, eps, mark.kind, rho);
  if (mark.kind != MarkKind::Ramified) r[0] = 1;
  if (deg <= D) r[deg] = s;
  if (at_infinity) r = r.scaled(S.kappa());
  return r;
}

namespace detail {

inline TruncatedSeries twisted_series(const FamilySpec& S, int D, const EpsilonClass& eps, const std::vector<PlaceMark>& marks) {
  std::vector<std::int64_t> marked_at(static_cast<std::size_t>(D) + 1, 0);
  bool inf_marked = false;
  TruncatedSeries acc = TruncatedSeries::one(D);
  for (const auto& m : marks) {
    if (m.place.is_infinite()) {
      inf_marked = true;
      acc *= local_factor_series(S, 1, eps, D, m, true);
    } else {
      int n = m.place.degree();
      if (n <= D) ++marked_at[n];
      acc *= local_factor_series(S, n, eps, D, m, false);
    }
  }
  for (int n = 1; n <= D; ++n) {
    BigInt N = place_count(S.q(), n) - marked_at[n];
    BigInt s = epsilon_gsum(S, n, eps);
    acc *= TruncatedSeries::binomial_power(D, s, n, N);
  }
  if (!inf_marked) acc *= local_factor_series(S, 1, eps, D, {}, true);
  return acc;
}

inline void check_marks(const FamilySpec& S, const std::vector<PlaceMark>& marks) {
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const auto& m = marks[i];
    if (m.kind == MarkKind::None) throw DomainError("mark without a kind");
    if (!m.place.is_infinite() && !is_irreducible(S.field, m.place.prime().coeffs()))
      throw DomainError("marked place " + m.place.to_string() + " is not irreducible over F_" + std::to_string(S.q()));
    for (std::size_t j = 0; j < i; ++j)
      if (marks[j].place == m.place) throw DomainError("marked places must be distinct");
  }
}

}  // namespace detail

/// The eps-twisted series (before averaging) for every eps class, in epsilon_classes order.
inline std::vector<TruncatedSeries> twisted_count_series(const FamilySpec& S, int D, const std::vector<PlaceMark>& marks = {},
                                                         unsigned workers = 1) {
  detail::check_marks(S, marks);
  auto eps = epsilon_classes(S);
  std::vector<TruncatedSeries> out(eps.size(), TruncatedSeries(D));
  parallel_for(eps.size(), workers, [&](std::size_t i) { out[i] = detail::twisted_series(S, D, eps[i], marks); });
  return out;
}

/// a_0..a_D: a_d is the number of members of conductor degree d satisfying the marks.
inline std::vector<BigInt> family_count_series(const FamilySpec& S, int D, const std::vector<PlaceMark>& marks = {},
                                               unsigned workers = 1) {
  auto tw = twisted_count_series(S, D, marks, workers);
  std::vector<BigInt> a(static_cast<std::size_t>(D) + 1, 0);
  for (const auto& t : tw)
    for (int d = 0; d <= D; ++d) a[d] += t[d];
  const BigInt k = S.kappa();
  for (int d = 0; d <= D; ++d) {
    if (a[d] % k != 0 || a[d] < 0)
      throw ConsistencyError("averaged count at degree " + std::to_string(d) + " is not a nonnegative integer");
    a[d] /= k;
  }
  return a;
}

// ---------------------------------------------------------------------------
// Main terms.

struct EulerConstant {
  long double value = 0;
  int truncation = 0;        // degrees 1..truncation included
  long double tail_bound = 0;  // bound on |log H - log H_N|
};

/// log-tail bound after degree N: each place contributes at most kappa^2 |v|^{-2}
/// to |log factor| and there are at most q^n / n places of degree n (one more at n = 1).
inline long double euler_tail_bound(std::uint32_t q, std::uint32_t kappa, int N) {
  long double k2 = static_cast<long double>(kappa) * kappa;
  long double qi = 1.0L / q;
  return k2 * std::pow(qi, N + 1) / ((N + 1) * (1 - qi) * (1 - qi));
}

/// H = prod_v (1 + (kappa-1)|v|^{-1})(1 - |v|^{-1})^{kappa-1}, over all places including infinity.
inline EulerConstant euler_H(const FamilySpec& S, long double tol = 1e-12L) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  const std::uint32_t q = S.q(), kappa = S.kappa();
  EulerConstant H;
  int N = 1;
  while (euler_tail_bound(q, kappa, N) > tol) ++N;
  long double logH = 0;
  for (int n = 1; n <= N; ++n) {
    long double x = std::pow(static_cast<long double>(q), -n);
    long double lf = std::log1p((kappa - 1) * x) + (kappa - 1) * std::log1p(-x);
    long double cnt = place_count(q, n).convert_to<long double>() + (n == 1 ? 1 : 0);
    logH += cnt * lf;
  }
  H.value = std::exp(logH);
  H.truncation = N;
  H.tail_bound = euler_tail_bound(q, kappa, N);
  return H;
}

/// c_k = (q-1)^{-1} q^{-g_k} h_k for the rational function field (g_k = 0, h_k = 1).
inline long double c_k(std::uint32_t q) { return 1.0L / (q - 1); }

/// H binom(d+kappa-2, kappa-2) c_k^{kappa-1} q^{d+kappa-1}.
inline long double main_term(const FamilySpec& S, int d, long double H) {
  const int k = static_cast<int>(S.kappa());
  long double b = binomial(BigInt(d + k - 2), static_cast<unsigned>(k - 2)).convert_to<long double>();
  return H * b * std::pow(c_k(S.q()), k - 1) * std::pow(static_cast<long double>(S.q()), d + k - 1);
}

inline long double predicted_count(const FamilySpec& S, int d, long double tol = 1e-12L) {
  return main_term(S, d, euler_H(S, tol).value);
}

inline long double place_norm(const FamilySpec& S, const Place& v) {
  return std::pow(static_cast<long double>(S.q()), v.degree());
}

/// prod_i (1 + (#ker rho_i - 1)|v_i|^{-1}) / (1 + (kappa - 1)|v_i|^{-1}).
inline long double H_Sigma0(const FamilySpec& S, const std::vector<DualChar>& rhos, const std::vector<Place>& places) {
  if (rhos.size() != places.size()) throw DomainError("one character per marked place");
  long double h = 1;
  const long double k = S.kappa();
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    long double ker = k / rhos[i].order();
    long double x = 1 / place_norm(S, places[i]);
    h *= (1 + (ker - 1) * x) / (1 + (k - 1) * x);
  }
  return h;
}

/// prod_i |v_i|^{-1} (1 + (kappa - 1)|v_i|^{-1})^{-1}.
inline long double H_Sigma0_prime(const FamilySpec& S, const std::vector<Place>& places) {
  long double h = 1;
  const long double k = S.kappa();
  for (const auto& v : places) {
    long double x = 1 / place_norm(S, v);
    h *= x / (1 + (k - 1) * x);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Character averages over the family.

enum class ABMode { A, BUnramified, BRamified };

inline const char* to_string(ABMode m) {
  switch (m) {
    case ABMode::A: return "A";
    case ABMode::BUnramified: return "B_unram";
    default: return "B_ram";
  }
}

struct ABResult {
  ABMode mode = ABMode::A;
  int d = 0;
  CyclotomicInt exact{1};   // exact sum over the family
  BigInt family_size = 0;   // #Ẽ(d)
  long double predicted = 0;
  std::string route;        // "series" or "enumeration"

  std::complex<double> value() const { return exact.render(); }
  double ratio() const { return predicted == 0 ? std::nan("") : static_cast<double>(std::abs(value()) / predicted); }
  double normalized() const { return static_cast<double>(std::abs(value()) / family_size.convert_to<long double>()); }
};

/// Raised when brute-force enumeration is out of budget; the main-term prediction is still available.
class EnumerationInfeasible : public ResourceError {
 public:
  EnumerationInfeasible(const std::string& what, long double predicted) : ResourceError(what), predicted_(predicted) {}
  long double predicted() const noexcept { return predicted_; }

 private:
  long double predicted_;
};

inline long double ab_prediction(const FamilySpec& S, int d, const std::vector<DualChar>& rhos, const std::vector<Place>& places,
                                 const std::vector<std::int64_t>& lambdas, ABMode mode) {
  const long double mt = main_term(S, d, euler_H(S).value);
  if (mode == ABMode::BRamified) {
    long double f = 1;
    for (const auto& r : rhos) f *= static_cast<long double>(S.kappa()) - static_cast<long double>(S.kappa()) / r.order();
    return f * H_Sigma0_prime(S, places) * mt;
  }
  if (mode == ABMode::A)
    for (std::size_t i = 0; i < rhos.size(); ++i)
      if (!detail::divides_order(rhos[i], lambdas[i])) return 0;
  return H_Sigma0(S, rhos, places) * mt;
}

/// Brute-force route: sum over enumerated members of prod_i rho_i(phi(v_i))^{lambda_i} (mode A)
/// or of the ramification indicators (modes B).
inline CyclotomicInt ab_exact_enumeration(const FamilySpec& S, int d, const std::vector<DualChar>& rhos, const std::vector<Place>& places,
                                          const std::vector<std::int64_t>& lambdas, ABMode mode, std::uint64_t budget = kDefaultBudget) {
  const std::uint32_t N = S.n1();
  std::vector<std::int64_t> hist(N, 0);
  for_each_member(
      S, d,
      [&](const FamilyMember& m) {
        std::uint64_t e = 0;
        for (std::size_t i = 0; i < rhos.size(); ++i) {
          auto v = frobenius_value(S, m, rhos[i], places[i]);
          const bool ram = !v.has_value();
          if (mode == ABMode::BRamified) {
            if (!ram) return;
          } else if (ram) {
            return;
          } else if (mode == ABMode::A) {
            e += v->pow(lambdas[i]).exponent();
          }
        }
        hist[e % N] += 1;
      },
      budget);
  return CyclotomicInt::from_histogram(N, hist);
}

/// Exact A / B sums with their main-term predictions. The series route is used
/// when every mark is a local factor; otherwise the family is enumerated.
inline ABResult ab_averages(const FamilySpec& S, int d, const std::vector<DualChar>& rhos, const std::vector<Place>& places,
                            std::vector<std::int64_t> lambdas, ABMode mode, std::uint64_t budget = kDefaultBudget) {
  if (rhos.size() != places.size()) throw DomainError("one character per place");
  if (lambdas.empty()) lambdas.assign(rhos.size(), 0);
  if (lambdas.size() != rhos.size()) throw DomainError("one exponent per place");
  for (const auto& r : rhos) require_nontrivial(r);
  ABResult res;
  res.mode = mode;
  res.d = d;
  res.predicted = ab_prediction(S, d, rhos, places, lambdas, mode);
  res.family_size = family_count_series(S, d)[d];
  bool local = mode != ABMode::A;
  if (mode == ABMode::A) {
    local = true;
    for (std::size_t i = 0; i < rhos.size(); ++i)
      if (!detail::divides_order(rhos[i], lambdas[i])) local = false;
  }
  if (local) {
    std::vector<PlaceMark> marks;
    for (std::size_t i = 0; i < rhos.size(); ++i)
      marks.push_back({places[i], mode == ABMode::BRamified ? MarkKind::Ramified : MarkKind::Unramified, rhos[i], 0});
    res.exact = CyclotomicInt::from_int(S.n1(), family_count_series(S, d, marks)[d]);
    res.route = "series";
    return res;
  }
  try {
    res.exact = ab_exact_enumeration(S, d, rhos, places, lambdas, mode, budget);
  } catch (const ResourceError& e) {
    throw EnumerationInfeasible(std::string(e.what()) + "; predicted main term is available", res.predicted);
  }
  res.route = "enumeration";
  return res;
}

// ---------------------------------------------------------------------------
// Probe of the eps != 1 local sums.

struct ProbeReport {
  struct LocalRow {
    EpsilonClass eps;
    int degree = 0;
    std::int64_t gsum = 0;        // computed local sum S_n(eps)
    std::int64_t vanishing = -1;  // the value a (1 - |v|^{-s}) factor form would need
  };
  struct SeriesRow {
    EpsilonClass eps;
    int d = 0;
    BigInt twisted;     // eps-twisted coefficient
    BigInt untwisted;   // eps = 1 coefficient
  };
  std::vector<LocalRow> local;
  std::vector<SeriesRow> series;
};

/// Tabulates S_n(eps) against the vanishing form and the eps-twisted coefficients for eps != 1.
inline ProbeReport probe_lemma(const FamilySpec& S, int D, unsigned workers = 1) {
  ProbeReport rep;
  auto eps = epsilon_classes(S);
  auto tw = twisted_count_series(S, D, {}, workers);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (S.group.is_zero(eps[i])) continue;
    for (int n = 1; n <= D; ++n) rep.local.push_back({eps[i], n, epsilon_gsum(S, n, eps[i]), -1});
    for (int d = 0; d <= D; ++d) rep.series.push_back({eps[i], d, tw[i][d], tw[0][d]});
  }
  return rep;
}

}  // namespace zzlab
