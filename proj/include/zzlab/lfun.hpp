#pragma once

// L-polynomials of twists rho o chi, their zero angles, and the explicit formula.
//
// For each twist the Frobenius values of all places up to a degree are
// summarized as exponent histograms hist[k][a] = #{v : deg v = k, psi(v) = zeta^a}.
// Power sums P_n = sum_{deg v | n} deg v psi(v)^{n/deg v} follow exactly, and
// the Euler product coefficients come from Newton's identity j a_j = sum_i P_i a_{j-i}.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cyclotomic.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "group.hpp"
#include "places.hpp"
#include "residue.hpp"

namespace zzlab {

/// Raised when an operation needs a geometric twist and got a constant-type or trivial one.
class TwistTypeError : public DomainError {
 public:
  TwistTypeError(TwistType t, const std::string& what) : DomainError(what + " (" + to_string(t) + ")"), type_(t) {}
  TwistType type() const noexcept { return type_; }

 private:
  TwistType type_;
};

struct TwistProfile {
  DualChar rho;
  int conductor = 0;
  TwistType type = TwistType::Geometric;
  std::uint32_t N = 1;
  int max_degree = 0;
  std::vector<std::vector<std::int64_t>> hist;  // [k][a], 1 <= k <= max_degree
  std::optional<std::uint32_t> inf_exponent;    // psi(inf) exponent, empty if ramified in the twist

  /// Exact P_n from the place data (1 <= n <= max_degree).
  CyclotomicInt power_sum(int n) const {
    if (n < 1 || n > max_degree) throw DomainError("power sum outside the place-table range");
    std::vector<std::int64_t> acc(N, 0);
    for (int k = 1; k <= n; ++k) {
      if (n % k) continue;
      const std::uint64_t r = static_cast<std::uint64_t>(n / k);
      for (std::uint32_t a = 0; a < N; ++a)
        if (hist[k][a]) acc[(a * r) % N] += static_cast<std::int64_t>(k) * hist[k][a];
    }
    if (inf_exponent) acc[(static_cast<std::uint64_t>(*inf_exponent) * n) % N] += 1;
    return CyclotomicInt::from_histogram(N, acc);
  }
};

/// Place histograms of every requested twist of a member, from one pass over the places.
inline std::vector<TwistProfile> twist_profiles(const FamilySpec& S, const PlaceTable& T, const FamilyMember& m,
                                                const std::vector<DualChar>& rhos, int max_degree) {
  if (max_degree > T.max_degree()) throw DomainError("place table too small for the requested degree");
  const std::uint32_t N = S.n1();
  std::vector<Poly> mods;
  for (const auto& r : m.ram_finite()) mods.push_back(r.prime.coeffs());
  const std::size_t J = mods.size();
  const std::size_t R = rhos.size();
  std::vector<TwistProfile> out(R);
  std::vector<std::vector<std::uint32_t>> aQ(R, std::vector<std::uint32_t>(J));
  std::vector<std::uint32_t> aH(R);
  for (std::size_t i = 0; i < R; ++i) {
    require_nontrivial(rhos[i]);
    auto& p = out[i];
    p.rho = rhos[i];
    p.conductor = conductor_of_twist(m, rhos[i]);
    p.type = classify_twist(m, rhos[i]);
    p.N = N;
    p.max_degree = max_degree;
    p.hist.assign(static_cast<std::size_t>(max_degree) + 1, std::vector<std::int64_t>(N, 0));
    for (std::size_t j = 0; j < J; ++j) aQ[i][j] = rhos[i].exponent_at(m.ram_finite()[j].g);
    aH[i] = rhos[i].exponent_at(m.h_inf());
    if (rhos[i].exponent_at(m.g_inf()) == 0) p.inf_exponent = aH[i];
  }
  if (max_degree < 1) return out;
  SymbolKernel K(S.field, mods, N, max_degree);
  for (int k = 1; k <= max_degree; ++k) {
    K.for_each_place(T, k, [&](std::size_t, const std::uint32_t* syms) {
      // Which ramified place (if any) is this one?
      std::size_t self = J;
      for (std::size_t j = 0; j < J; ++j)
        if (syms[j] == SymbolKernel::kZero) self = j;
      for (std::size_t i = 0; i < R; ++i) {
        if (self < J && aQ[i][self] != 0) continue;  // ramified in the twist: value 0
        std::uint64_t e = (static_cast<std::uint64_t>(aH[i]) * static_cast<std::uint64_t>(k)) % N;
        for (std::size_t j = 0; j < J; ++j) {
          if (j == self || aQ[i][j] == 0) continue;
          e = (e + N - (static_cast<std::uint64_t>(aQ[i][j]) * syms[j]) % N) % N;
        }
        out[i].hist[k][e] += 1;
      }
    });
  }
  return out;
}

/// Character sums S_j = sum_{h monic, deg h = j} psi(h) for 0 <= j <= max_degree, per twist.
/// psi(h) is the completely multiplicative extension (0 when h meets the twist's finite conductor).
inline std::vector<std::vector<CyclotomicInt>> monic_character_sums(const FamilySpec& S, const FamilyMember& m,
                                                                     const std::vector<DualChar>& rhos, int max_degree) {
  const std::uint32_t N = S.n1();
  std::vector<Poly> mods;
  for (const auto& r : m.ram_finite()) mods.push_back(r.prime.coeffs());
  const std::size_t J = mods.size(), R = rhos.size();
  std::vector<std::vector<std::uint32_t>> aQ(R, std::vector<std::uint32_t>(J));
  std::vector<std::uint32_t> aH(R);
  for (std::size_t i = 0; i < R; ++i) {
    require_nontrivial(rhos[i]);
    for (std::size_t j = 0; j < J; ++j) aQ[i][j] = rhos[i].exponent_at(m.ram_finite()[j].g);
    aH[i] = rhos[i].exponent_at(m.h_inf());
  }
  std::vector<std::vector<CyclotomicInt>> out(R);
  SymbolKernel K(S.field, mods, N, std::max(max_degree, 1));
  for (int n = 0; n <= max_degree; ++n) {
    std::vector<std::vector<std::int64_t>> hist(R, std::vector<std::int64_t>(N, 0));
    if (n == 0) {
      for (std::size_t i = 0; i < R; ++i) hist[i][0] = 1;
    } else {
      K.for_each_monic(n, [&](const std::uint32_t* syms) {
        for (std::size_t i = 0; i < R; ++i) {
          std::uint64_t e = (static_cast<std::uint64_t>(aH[i]) * static_cast<std::uint64_t>(n)) % N;
          bool zero = false;
          for (std::size_t j = 0; j < J; ++j) {
            if (aQ[i][j] == 0) continue;
            if (syms[j] == SymbolKernel::kZero) {
              zero = true;
              break;
            }
            e = (e + N - (static_cast<std::uint64_t>(aQ[i][j]) * syms[j]) % N) % N;
          }
          if (!zero) hist[i][e] += 1;
        }
      });
    }
    for (std::size_t i = 0; i < R; ++i) out[i].push_back(CyclotomicInt::from_histogram(N, hist[i]));
  }
  return out;
}

/// Power series coefficients a_0..a_M of exp(sum_n P_n T^n / n), P given for 1..M.
inline std::vector<CyclotomicInt> newton_from_power_sums(std::uint32_t N, const std::vector<CyclotomicInt>& P, int M) {
  std::vector<CyclotomicInt> a;
  a.push_back(CyclotomicInt::from_int(N, 1));
  for (int j = 1; j <= M; ++j) {
    CyclotomicInt s(N);
    for (int i = 1; i <= j; ++i) s += P[i] * a[j - i];
    a.push_back(s.divided_exact(j));
  }
  return a;
}

/// Power sums p_1..p_M of a series with constant term 1: p_n = n c_n - sum_{i<n} p_i c_{n-i}.
inline std::vector<CyclotomicInt> power_sums_from_series(std::uint32_t N, const std::vector<CyclotomicInt>& c, int M) {
  std::vector<CyclotomicInt> p(static_cast<std::size_t>(M) + 1, CyclotomicInt(N));
  auto coef = [&](int i) { return i < static_cast<int>(c.size()) ? c[i] : CyclotomicInt(N); };
  for (int n = 1; n <= M; ++n) {
    CyclotomicInt s = coef(n).scaled(n);
    for (int i = 1; i < n; ++i) s -= p[i] * coef(n - i);
    p[n] = s;
  }
  return p;
}

struct LPolynomial {
  DualChar rho;
  int conductor = 0;
  std::vector<CyclotomicInt> coeffs;  // a_0 = 1, trailing zeros removed

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  int expected_degree() const { return conductor - 2; }
  std::vector<std::complex<double>> render() const {
    std::vector<std::complex<double>> r;
    for (const auto& c : coeffs) r.push_back(c.render());
    return r;
  }
};

/// L-polynomial from a profile. The Euler product is expanded to degree
/// (conductor - 2) + extra_degree; extra coefficients are kept if nonzero so
/// that the degree law can be verified rather than assumed.
inline LPolynomial l_polynomial_from_profile(const TwistProfile& p, int extra_degree = 0) {
  if (p.type != TwistType::Geometric)
    throw TwistTypeError(p.type, "twist " + p.rho.to_string() + " has conductor 0; its L-function is not a polynomial twist");
  if (p.conductor < 2) throw ConsistencyError("geometric twist of conductor degree " + std::to_string(p.conductor));
  const int M = p.conductor - 2 + extra_degree;
  if (M > p.max_degree) throw DomainError("place data do not reach degree " + std::to_string(M));
  std::vector<CyclotomicInt> P(static_cast<std::size_t>(M) + 1, CyclotomicInt(p.N));
  for (int n = 1; n <= M; ++n) P[n] = p.power_sum(n);
  auto a = newton_from_power_sums(p.N, P, M);
  while (a.size() > 1 && a.back().is_zero()) a.pop_back();
  return LPolynomial{p.rho, p.conductor, std::move(a)};
}

inline LPolynomial l_polynomial(const FamilySpec& S, const PlaceTable& T, const FamilyMember& m, const DualChar& rho,
                                int extra_degree = 0) {
  require_nontrivial(rho);
  TwistType t = classify_twist(m, rho);
  if (t != TwistType::Geometric) throw TwistTypeError(t, "twist " + rho.to_string() + " is not geometric");
  int M = conductor_of_twist(m, rho) - 2 + extra_degree;
  auto prof = twist_profiles(S, T, m, {rho}, std::max(M, 0));
  return l_polynomial_from_profile(prof[0], extra_degree);
}

// ---------------------------------------------------------------------------
// Zero angles.

struct AngleSet {
  std::vector<double> theta;  // sorted, in [-1/2, 1/2), repeated by multiplicity
  double rh_residual = 0.0;   // max | |u| sqrt(q) - 1 |
  std::size_t size() const { return theta.size(); }
};

namespace detail {

using cld = std::complex<long double>;

inline cld horner(const std::vector<cld>& b, cld z, int deriv = 0) {
  // deriv-th derivative of sum b_j z^j
  const int m = static_cast<int>(b.size()) - 1;
  cld r = 0;
  for (int j = m; j >= deriv; --j) {
    long double f = 1;
    for (int t = 0; t < deriv; ++t) f *= static_cast<long double>(j - t);
    r = r * z + b[j] * f;
  }
  return r;
}

inline cld newton_polish(const std::vector<cld>& b, cld z, int deriv) {
  for (int it = 0; it < 60; ++it) {
    cld f = horner(b, z, deriv);
    cld fp = horner(b, z, deriv + 1);
    if (std::abs(fp) == 0) break;
    cld step = f / fp;
    z -= step;
    if (std::abs(step) < 1e-18L * std::max<long double>(1, std::abs(z))) break;
  }
  return z;
}

inline std::string echo(const std::vector<std::complex<double>>& c) {
  std::string s;
  for (std::size_t j = 0; j < c.size(); ++j)
    s += (j ? " + " : "") + std::string("(") + std::to_string(c[j].real()) + "," + std::to_string(c[j].imag()) + ")u^" + std::to_string(j);
  return s;
}

}  // namespace detail

/// Angles theta_i with roots u_i = q^{-1/2} e(-theta_i).
inline AngleSet angles(const std::vector<std::complex<double>>& coeffs, std::uint32_t q) {
  AngleSet out;
  const int m = static_cast<int>(coeffs.size()) - 1;
  if (m <= 0) return out;
  // Scale u = z / sqrt(q) so the roots z lie on the unit circle.
  std::vector<detail::cld> b(static_cast<std::size_t>(m) + 1);
  const long double sq = std::sqrt(static_cast<long double>(q));
  long double s = 1;
  for (int j = 0; j <= m; ++j) {
    b[j] = detail::cld(coeffs[j].real(), coeffs[j].imag()) / s;
    s *= sq;
  }
  if (std::abs(b[m]) == 0) throw NumericError("vanishing leading coefficient: " + detail::echo(coeffs));
  std::vector<detail::cld> z;
  if (m == 1) {
    z.push_back(-b[0] / b[1]);
  } else {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) {
      std::complex<long double> v = -b[i] / b[m];
      C(i, m - 1) = std::complex<double>(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue iteration did not converge for " + detail::echo(coeffs));
    for (int i = 0; i < m; ++i) {
      auto e = es.eigenvalues()[i];
      if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) throw NumericError("non-finite root for " + detail::echo(coeffs));
      z.emplace_back(e.real(), e.imag());
    }
  }
  // Cluster near-coincident roots, then polish each cluster on the (k-1)-th derivative.
  const long double tol = 1e-7L;
  std::vector<int> cluster(m, -1);
  int nc = 0;
  for (int i = 0; i < m; ++i) {
    if (cluster[i] >= 0) continue;
    cluster[i] = nc;
    bool grew = true;
    while (grew) {
      grew = false;
      for (int j = 0; j < m; ++j) {
        if (cluster[j] >= 0) continue;
        for (int k = 0; k < m; ++k) {
          if (cluster[k] == nc && std::abs(z[j] - z[k]) < tol) {
            cluster[j] = nc;
            grew = true;
            break;
          }
        }
      }
    }
    ++nc;
  }
  std::vector<detail::cld> roots;
  for (int c = 0; c < nc; ++c) {
    detail::cld sum = 0;
    int k = 0;
    for (int i = 0; i < m; ++i)
      if (cluster[i] == c) {
        sum += z[i];
        ++k;
      }
    detail::cld r = k == 1 ? detail::newton_polish(b, sum, 0) : detail::newton_polish(b, sum / static_cast<long double>(k), k - 1);
    for (int t = 0; t < k; ++t) roots.push_back(r);
  }
  double resid = 0;
  for (const auto& r : roots) {
    double mod = static_cast<double>(std::abs(r));
    if (!std::isfinite(mod)) throw NumericError("root polishing diverged for " + detail::echo(coeffs));
    resid = std::max(resid, std::abs(mod - 1.0));
    double th = -static_cast<double>(std::arg(r)) / (2.0 * std::numbers::pi);
    if (th >= 0.5) th -= 1.0;
    if (th < -0.5) th += 1.0;
    out.theta.push_back(th);
  }
  std::sort(out.theta.begin(), out.theta.end());
  out.rh_residual = resid;
  return out;
}

inline AngleSet angles(const LPolynomial& L, std::uint32_t q) { return angles(L.render(), q); }

// ---------------------------------------------------------------------------
// Explicit formula.

struct ExplicitFormulaResult {
  std::complex<double> lhs, rhs;
  double residual = 0;
};

/// Exact P_n for a twist, using place data for n <= max_degree and the
/// finite character sums of the monic route beyond.
class TwistPowerSums {
 public:
  /// monic_sums must run through degree (finite conductor degree - 1); the sums vanish beyond.
  TwistPowerSums(const TwistProfile& prof, const std::vector<CyclotomicInt>& monic_sums = {}, int max_n = 0) : prof_(prof) {
    if (!monic_sums.empty()) {
      fin_ = power_sums_from_series(prof.N, monic_sums, std::max(max_n, prof.max_degree));
      has_monic_ = true;
    }
  }

  CyclotomicInt operator()(int n) const {
    if (n <= prof_.max_degree) return prof_.power_sum(n);
    return from_monic(n);
  }

  CyclotomicInt from_monic(int n) const {
    if (!has_monic_) throw DomainError("no monic-route data for n = " + std::to_string(n));
    if (n >= static_cast<int>(fin_.size())) throw DomainError("monic-route power sums not tabulated that far");
    CyclotomicInt p = fin_[n];
    if (prof_.inf_exponent) p.add_root(static_cast<std::uint32_t>((static_cast<std::uint64_t>(*prof_.inf_exponent) * n) % prof_.N), 1);
    return p;
  }

 private:
  const TwistProfile& prof_;
  std::vector<CyclotomicInt> fin_;
  bool has_monic_ = false;
};

inline ExplicitFormulaResult explicit_formula_check(const AngleSet& A, const CyclotomicInt& P_abs_n, int n, std::uint32_t q) {
  if (n == 0) throw DomainError("explicit formula needs n != 0");
  ExplicitFormulaResult r;
  for (double th : A.theta) {
    double t = 2.0 * std::numbers::pi * n * th;
    r.lhs += std::complex<double>(std::cos(t), std::sin(t));
  }
  std::complex<double> P = P_abs_n.render();
  if (n < 0) P = std::conj(P);
  r.rhs = -std::pow(static_cast<double>(q), -std::abs(n) / 2.0) * P;
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

/// Finite conductor degree of a twist (places other than infinity where rho(g_v) != 1).
inline int finite_conductor_degree(const FamilyMember& m, const DualChar& rho) {
  int d = 0;
  for (const auto& r : m.ram_finite())
    if (rho.exponent_at(r.g) != 0) d += r.prime.degree();
  return d;
}

// ---------------------------------------------------------------------------
// Genus.

/// g_K = (1/2) sum_{rho != 1} (cond(rho o chi) - 2); non-geometric members are rejected.
inline int genus_of_member(const FamilySpec& S, const FamilyMember& m) {
  int twice = 0;
  for (const auto& rho : dual_group(S.group)) {
    if (rho.is_trivial()) continue;
    TwistType t = classify_twist(m, rho);
    if (t != TwistType::Geometric) throw TwistTypeError(t, "member is not geometric");
    twice += conductor_of_twist(m, rho) - 2;
  }
  if (twice < 0 || twice % 2) throw ConsistencyError("L-degree genus is not a nonnegative integer");
  return twice / 2;
}

/// Tame Riemann-Hurwitz: 2g - 2 = -2 kappa + sum_v (kappa - kappa/e_v) deg v.
inline int riemann_hurwitz_genus(const FamilySpec& S, const FamilyMember& m) {
  if (!is_geometric(S, m)) throw TwistTypeError(TwistType::ConstantType, "member is not geometric");
  const std::int64_t kappa = S.kappa();
  std::int64_t rhs = -2 * kappa;
  for (const auto& r : m.ram_finite()) rhs += (kappa - kappa / S.group.element_order(r.g)) * r.prime.degree();
  if (!S.group.is_zero(m.g_inf())) rhs += kappa - kappa / S.group.element_order(m.g_inf());
  std::int64_t twice_g = rhs + 2;
  if (twice_g < 0 || twice_g % 2) throw ConsistencyError("Riemann-Hurwitz genus is not a nonnegative integer");
  return static_cast<int>(twice_g / 2);
}

// ---------------------------------------------------------------------------
// Per-member L data.

struct TwistLData {
  DualChar rho;
  TwistType type = TwistType::Geometric;
  int conductor = 0;
  std::optional<LPolynomial> L;  // geometric twists only
  AngleSet angles;
  bool degree_law = true;
  double ef_residual = 0;  // max over 1 <= |n| <= 2 deg L + 4
};

struct MemberLData {
  std::vector<TwistLData> twists;
  bool geometric = false;
  int genus = -1;     // from L-degrees
  int rh_genus = -1;  // tame Riemann-Hurwitz
};

/// L-polynomials, angles and explicit-formula residuals of every twist of a member.
/// T must reach the largest conductor degree minus 2.
inline MemberLData analyze_member(const FamilySpec& S, const PlaceTable& T, const FamilyMember& m,
                                  const std::vector<DualChar>& rhos) {
  MemberLData out;
  int maxcond = 0, maxfin = 0;
  for (const auto& r : rhos) {
    maxcond = std::max(maxcond, conductor_of_twist(m, r));
    maxfin = std::max(maxfin, finite_conductor_degree(m, r));
  }
  const int top = std::max(0, maxcond - 2);
  auto prof = twist_profiles(S, T, m, rhos, top);
  auto sums = monic_character_sums(S, m, rhos, std::max(0, maxfin - 1));
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const auto& p = prof[i];
    TwistLData t{p.rho, p.type, p.conductor, std::nullopt, {}, true, 0};
    if (p.type == TwistType::Geometric) {
      t.L = l_polynomial_from_profile(p);
      t.degree_law = t.L->degree() == t.L->expected_degree();
      t.angles = angles(*t.L, S.q());
      const int nmax = 2 * t.L->degree() + 4;
      TwistPowerSums P(p, sums[i], nmax);
      for (int n = 1; n <= nmax; ++n) {
        CyclotomicInt Pn = P(n);
        t.ef_residual = std::max(t.ef_residual, explicit_formula_check(t.angles, Pn, n, S.q()).residual);
        t.ef_residual = std::max(t.ef_residual, explicit_formula_check(t.angles, Pn, -n, S.q()).residual);
      }
    }
    out.twists.push_back(std::move(t));
  }
  out.geometric = is_geometric(S, m);
  if (out.geometric) {
    out.genus = genus_of_member(S, m);
    out.rh_genus = riemann_hurwitz_genus(S, m);
  }
  return out;
}

}  // namespace zzlab
