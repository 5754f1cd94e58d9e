#pragma once

// Zero-counting statistics over ensembles of family members.
//
// For every member and nontrivial rho the angles of L(rho o chi) are counted
// in I = [-beta/2, beta/2], smoothed with the Selberg polynomials of degree l,
// and the smoothed counts are split into the prime sums T (r = 1), Delta
// (r = 2) and the r >= 3 tail.

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bspoly.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "lfun.hpp"
#include "parallel.hpp"
#include "places.hpp"

namespace zzlab {

struct KahanSum {
  double sum = 0, c = 0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

/// l = round(d / ln(d + 1)) clipped to [4, 256].
inline int bs_degree_schedule(int d) {
  if (d < 0) throw DomainError("negative conductor degree");
  int l = static_cast<int>(std::lround(d / std::log(d + 1.0)));
  return std::clamp(l, 4, 256);
}

/// Number of angles with |theta| <= beta/2 (closed interval).
inline int N_interval(const AngleSet& A, double beta) {
  if (!(beta > 0 && beta < 1)) throw DomainError("interval length beta must lie in (0, 1)");
  int n = 0;
  for (double t : A.theta)
    if (in_symmetric_interval(t, beta)) ++n;
  return n;
}

inline double smoothed_count(const AngleSet& A, const TrigPoly& I) {
  KahanSum s;
  for (double t : A.theta) s.add(I(t));
  return s.value();
}

struct PrimeTerms {
  double T = 0, Delta = 0, tail = 0;
  double sum() const { return T + Delta + tail; }
};

/// T, Delta and the r >= 3 tail of -sum_{v, r} c(r deg v) deg v |v|^{-r/2} 2 Re psi(v)^r.
inline PrimeTerms prime_terms(const TwistProfile& p, const TrigPoly& I, std::uint32_t q) {
  const int l = I.K();
  if (l > p.max_degree) throw DomainError("place data do not reach the Selberg degree");
  const std::uint32_t N = p.N;
  KahanSum T, D, R;
  auto add = [&](int k, std::uint32_t a, double count) {
    for (int r = 1; r * k <= l; ++r) {
      const double c = I.coeff(r * k);
      if (c == 0) continue;
      const double re = RootOfUnity::render(static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * r) % N), N).real();
      const double term = -c * k * std::pow(static_cast<double>(q), -0.5 * r * k) * 2.0 * re * count;
      (r == 1 ? T : r == 2 ? D : R).add(term);
    }
  };
  for (int k = 1; k <= l; ++k)
    for (std::uint32_t a = 0; a < N; ++a)
      if (p.hist[k][a]) add(k, a, static_cast<double>(p.hist[k][a]));
  if (p.inf_exponent) add(1, *p.inf_exponent, 1.0);
  return {T.value(), D.value(), R.value()};
}

inline PrimeTerms prime_terms_of(const FamilySpec& S, const PlaceTable& Tbl, const FamilyMember& m, const DualChar& rho,
                                 const TrigPoly& I) {
  require_nontrivial(rho);
  auto prof = twist_profiles(S, Tbl, m, {rho}, I.K());
  return prime_terms(prof[0], I, S.q());
}

inline double T_stat(const FamilySpec& S, const PlaceTable& Tbl, const FamilyMember& m, const DualChar& rho, const TrigPoly& I) {
  return prime_terms_of(S, Tbl, m, rho, I).T;
}

inline double Delta_stat(const FamilySpec& S, const PlaceTable& Tbl, const FamilyMember& m, const DualChar& rho, const TrigPoly& I) {
  return prime_terms_of(S, Tbl, m, rho, I).Delta;
}

// ---------------------------------------------------------------------------
// Per-member observations.

struct SideObservation {
  double N_l = 0;            // sum_i I(theta_i)
  PrimeTerms terms;          // prime side pieces
  double two_way_residual = 0;  // |N_l - (c(0) m + T + Delta + tail)|
};

struct TwistObservation {
  DualChar rho;
  TwistType type = TwistType::Geometric;
  int conductor = 0;
  int m = 0;  // deg L
  AngleSet angles;
  int N = 0;
  SideObservation minus, plus;
};

struct MemberObservation {
  std::size_t index = 0;
  FamilyMember member;
  bool geometric = true;
  bool surjective = true;
  std::vector<TwistObservation> twists;  // one per nontrivial character, dual_group order
};

inline std::vector<DualChar> nontrivial_characters(const GroupSpec& G) {
  std::vector<DualChar> out;
  for (auto& r : dual_group(G))
    if (!r.is_trivial()) out.push_back(r);
  return out;
}

inline MemberObservation observe_member(const FamilySpec& S, const PlaceTable& Tbl, const FamilyMember& m,
                                        const std::vector<DualChar>& rhos, const SelbergPair& bs, double beta) {
  MemberObservation out;
  out.member = m;
  out.surjective = is_surjective(S, m);
  int maxdeg = bs.plus.K();
  for (const auto& r : rhos) maxdeg = std::max(maxdeg, conductor_of_twist(m, r) - 2);
  auto profiles = twist_profiles(S, Tbl, m, rhos, maxdeg);
  for (const auto& p : profiles) {
    TwistObservation o;
    o.rho = p.rho;
    o.type = p.type;
    o.conductor = p.conductor;
    if (p.type != TwistType::Geometric) {
      out.geometric = false;
      out.twists.push_back(std::move(o));
      continue;
    }
    auto L = l_polynomial_from_profile(p);
    o.m = L.degree();
    o.angles = angles(L, S.q());
    o.N = N_interval(o.angles, beta);
    for (const TrigPoly* I : {&bs.minus, &bs.plus}) {
      SideObservation s;
      s.N_l = smoothed_count(o.angles, *I);
      s.terms = prime_terms(p, *I, S.q());
      s.two_way_residual = std::abs(s.N_l - (I->coeff(0) * o.m + s.terms.sum()));
      (I->side() == Side::Plus ? o.plus : o.minus) = s;
    }
    out.twists.push_back(std::move(o));
  }
  return out;
}

struct Ensemble {
  std::uint32_t q = 0;
  std::vector<std::uint32_t> group;
  int d = 0;
  double beta = 0;
  int l = 0;
  std::vector<DualChar> rhos;
  std::vector<MemberObservation> members;
};

/// Observes every member; the place table is built once and shared read-only.
inline Ensemble observe_ensemble(const FamilySpec& S, int d, const std::vector<FamilyMember>& members, double beta, int l,
                                 unsigned workers = 1) {
  if (!(beta > 0 && beta <= 0.5)) throw DomainError("interval length beta must lie in (0, 1/2]");
  if (l < 1) throw DomainError("Selberg degree must be at least 1");
  Ensemble E;
  E.q = S.q();
  E.group = S.group.factors();
  E.d = d;
  E.beta = beta;
  E.l = l;
  E.rhos = nontrivial_characters(S.group);
  int maxc = 0;
  for (const auto& m : members) maxc = std::max(maxc, m.conductor_degree());
  PlaceTable Tbl(S.field, std::max({maxc - 2, l, 1}));
  auto bs = selberg_pair(beta, l);
  E.members.resize(members.size());
  parallel_for(members.size(), workers, [&](std::size_t i) {
    E.members[i] = observe_member(S, Tbl, members[i], E.rhos, bs, beta);
    E.members[i].index = i;
  });
  return E;
}

// ---------------------------------------------------------------------------
// Descriptive statistics.

struct Describe {
  std::size_t n = 0;
  double mean = 0, variance = 0, skewness = 0, kurtosis = 0;
  std::vector<std::pair<double, double>> quantiles;  // (probability, empirical)
};

inline double standard_normal_quantile(double p) {
  if (!(p > 0 && p < 1)) throw DomainError("quantile probability must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

inline const std::vector<double>& quantile_levels() {
  static const std::vector<double> p{0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95};
  return p;
}

/// Sample variance uses n - 1; skewness and kurtosis are the moment ratios m3/m2^{3/2}, m4/m2^2.
/// Undefined statistics (empty sample, n = 1, zero spread) are NaN.
inline Describe describe(const std::vector<double>& x) {
  Describe D;
  D.n = x.size();
  D.mean = D.variance = D.skewness = D.kurtosis = std::nan("");
  if (x.empty()) return D;
  KahanSum s;
  for (double v : x) s.add(v);
  D.mean = s.value() / static_cast<double>(x.size());
  KahanSum m2, m3, m4;
  for (double v : x) {
    double e = v - D.mean;
    m2.add(e * e);
    m3.add(e * e * e);
    m4.add(e * e * e * e);
  }
  const double n = static_cast<double>(x.size());
  const double c2 = m2.value() / n;
  if (x.size() > 1) D.variance = m2.value() / (n - 1);
  if (c2 > 0) {
    D.skewness = (m3.value() / n) / std::pow(c2, 1.5);
    D.kurtosis = (m4.value() / n) / (c2 * c2);
  }
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  for (double p : quantile_levels()) {
    double h = (n - 1) * p;
    std::size_t lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    D.quantiles.emplace_back(p, sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]));
  }
  return D;
}

inline double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("correlation needs two equally long samples");
  const double n = static_cast<double>(x.size());
  KahanSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.value() / n, my = sy.value() / n;
  KahanSum cxy, cxx, cyy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cxy.add((x[i] - mx) * (y[i] - my));
    cxx.add((x[i] - mx) * (x[i] - mx));
    cyy.add((y[i] - my) * (y[i] - my));
  }
  if (cxx.value() <= 0 || cyy.value() <= 0) return 0;
  return cxy.value() / std::sqrt(cxx.value() * cyy.value());
}

// ---------------------------------------------------------------------------
// Reports.

struct ExclusionCounts {
  std::size_t constant_type = 0;  // members with a CONSTANT_TYPE twist
  std::size_t trivial_twist = 0;  // members with a nontrivial rho whose twist is trivial
  std::size_t degenerate = 0;     // members whose normalization is undefined (m beta <= 1 or m = 0)
};

namespace detail {
inline void count_exclusion(const MemberObservation& mo, ExclusionCounts& ex) {
  bool c = false, t = false;
  for (const auto& tw : mo.twists) {
    if (tw.type == TwistType::ConstantType) c = true;
    if (tw.type == TwistType::Trivial) t = true;
  }
  if (c) ++ex.constant_type;
  else if (t) ++ex.trivial_twist;
}

inline std::size_t rho_index(const Ensemble& E, const DualChar& r) {
  for (std::size_t i = 0; i < E.rhos.size(); ++i)
    if (E.rhos[i] == r) return i;
  throw DomainError("character " + r.to_string() + " is not a nontrivial character of the ensemble's group");
}
}  // namespace detail

struct DensityReport {
  struct PerRho {
    DualChar rho;
    Describe ratio;             // N / (m beta)
    double max_deviation = 0;   // max |N - m beta|
    double max_normalized = 0;  // max |N - m beta| / (m / log m), m >= 2
  };
  double beta = 0;
  std::vector<PerRho> per_rho;
  ExclusionCounts excluded;
  std::size_t used = 0;
  double ensemble_mean = 0;  // mean of N/(m beta) over all used (member, rho)
};

inline DensityReport mean_density_report(const Ensemble& E) {
  DensityReport R;
  R.beta = E.beta;
  std::vector<std::vector<double>> vals(E.rhos.size());
  std::vector<double> all;
  R.per_rho.resize(E.rhos.size());
  for (std::size_t j = 0; j < E.rhos.size(); ++j) R.per_rho[j].rho = E.rhos[j];
  for (const auto& mo : E.members) {
    if (!mo.geometric) {
      detail::count_exclusion(mo, R.excluded);
      continue;
    }
    bool used = false;
    for (std::size_t j = 0; j < mo.twists.size(); ++j) {
      const auto& t = mo.twists[j];
      if (t.m == 0) {
        ++R.excluded.degenerate;
        continue;
      }
      const double dev = std::abs(t.N - t.m * E.beta);
      vals[j].push_back(t.N / (t.m * E.beta));
      all.push_back(vals[j].back());
      R.per_rho[j].max_deviation = std::max(R.per_rho[j].max_deviation, dev);
      if (t.m >= 2) R.per_rho[j].max_normalized = std::max(R.per_rho[j].max_normalized, dev / (t.m / std::log(t.m)));
      used = true;
    }
    if (used) ++R.used;
  }
  for (std::size_t j = 0; j < E.rhos.size(); ++j) R.per_rho[j].ratio = describe(vals[j]);
  R.ensemble_mean = describe(all).mean;
  return R;
}

struct CLTReport {
  struct PerRho {
    DualChar rho;
    int r_weight = 1;
    Describe z;
  };
  double beta = 0;
  std::vector<PerRho> per_rho;  // conjugacy representatives A
  std::vector<std::vector<double>> correlation;  // between members of A
  std::vector<std::vector<std::size_t>> pair_counts;  // members behind each correlation
  Describe total;
  Describe total_surjective;  // same statistic on the members of E (surjective)
  std::size_t used = 0, non_surjective = 0;
  ExclusionCounts excluded;
};

/// Standardized counts per rho in A: (N - m beta) / sqrt(r_rho / pi^2 log(m beta)),
/// and in total (N_I - 2 g beta) / sqrt(2 (kappa - 1) / pi^2 log(g beta)) with N_I = sum_A eps_rho N_rho.
/// A twist with m beta <= 1 drops out of its own statistic and the correlations it enters;
/// the total needs every twist of the member. `used` and `excluded` refer to the total.
inline CLTReport clt_report(const Ensemble& E) {
  CLTReport R;
  R.beta = E.beta;
  GroupSpec G(E.group);
  const auto A = conjugate_representatives(dual_group(G));
  const double kappa = G.order();
  std::vector<std::size_t> idx;
  for (const auto& r : A) idx.push_back(detail::rho_index(E, r));
  std::vector<std::vector<double>> z(A.size());
  std::vector<std::vector<std::vector<double>>> px(A.size(), std::vector<std::vector<double>>(A.size())), py = px;
  std::vector<double> tot, tot_surj;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (const auto& mo : E.members) {
    if (!mo.geometric) {
      detail::count_exclusion(mo, R.excluded);
      continue;
    }
    std::vector<std::optional<double>> zs(A.size());
    bool all = true;
    for (std::size_t a = 0; a < A.size(); ++a) {
      const auto& t = mo.twists[idx[a]];
      const double mb = t.m * E.beta;
      if (mb <= 1) {
        all = false;
        continue;
      }
      zs[a] = (t.N - mb) / std::sqrt(A[a].r_weight() / pi2 * std::log(mb));
      z[a].push_back(*zs[a]);
    }
    for (std::size_t a = 0; a < A.size(); ++a)
      for (std::size_t b = a + 1; b < A.size(); ++b)
        if (zs[a] && zs[b]) {
          px[a][b].push_back(*zs[a]);
          py[a][b].push_back(*zs[b]);
        }
    double NI = 0, twice_g = 0;
    for (const auto& t : mo.twists) twice_g += t.m;
    const double g = twice_g / 2;
    if (!all || g * E.beta <= 1) {
      ++R.excluded.degenerate;
      continue;
    }
    for (std::size_t a = 0; a < A.size(); ++a) {
      const double eps = A[a].order() <= 2 ? 1.0 : 2.0;
      NI += eps * mo.twists[idx[a]].N;
    }
    const double zt = (NI - twice_g * E.beta) / std::sqrt(2 * (kappa - 1) / pi2 * std::log(g * E.beta));
    tot.push_back(zt);
    if (mo.surjective) tot_surj.push_back(zt);
    else ++R.non_surjective;
    ++R.used;
  }
  for (std::size_t a = 0; a < A.size(); ++a) R.per_rho.push_back({A[a], A[a].r_weight(), describe(z[a])});
  R.correlation.assign(A.size(), std::vector<double>(A.size(), 1.0));
  R.pair_counts.assign(A.size(), std::vector<std::size_t>(A.size(), 0));
  for (std::size_t a = 0; a < A.size(); ++a) {
    R.pair_counts[a][a] = z[a].size();
    for (std::size_t b = a + 1; b < A.size(); ++b) {
      double c = px[a][b].size() >= 2 ? correlation(px[a][b], py[a][b]) : std::nan("");
      R.correlation[a][b] = R.correlation[b][a] = c;
      R.pair_counts[a][b] = R.pair_counts[b][a] = px[a][b].size();
    }
  }
  R.total = describe(tot);
  R.total_surjective = describe(tot_surj);
  return R;
}

struct MomentReport {
  std::vector<DualChar> rhos;
  std::vector<int> r;
  double log_l_beta = 0;
  double T_moment = 0;      // < prod_j T_j^{r_j} >
  double Delta_moment = 0;  // < prod_j Delta_j^{r_j} >
  double reference = 0;     // main term for the T moment
  std::size_t used = 0;
};

/// prod_j r_rho^{r_j/2} delta(r_j) r_j! / (2^{r_j/2} pi^{r_j} (r_j/2)!) (log l beta)^{r_j/2}.
inline double moment_reference(const std::vector<DualChar>& rhos, const std::vector<int>& r, double log_l_beta) {
  double ref = 1;
  for (std::size_t j = 0; j < rhos.size(); ++j) {
    const int rj = r[j];
    if (rj % 2) return 0;
    const double h = rj / 2.0;
    ref *= std::pow(rhos[j].r_weight(), h) * std::tgamma(rj + 1.0) / (std::pow(2.0, h) * std::pow(std::numbers::pi, rj) * std::tgamma(h + 1)) *
           std::pow(log_l_beta, h);
  }
  return ref;
}

/// Mixed moments of T and Delta (computed with the majorant's coefficients) over the geometric members.
inline MomentReport ensemble_moments(const Ensemble& E, const std::vector<DualChar>& rhos, const std::vector<int>& r) {
  if (rhos.size() != r.size()) throw DomainError("one exponent per character");
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    require_nontrivial(rhos[i]);
    if (r[i] < 0) throw DomainError("moment exponents must be nonnegative");
    for (std::size_t j = 0; j < i; ++j)
      if ((rhos[i] * rhos[j]).is_trivial())
        throw DomainError("moment hypothesis rho_i rho_j != 1 fails for " + rhos[i].to_string() + ", " + rhos[j].to_string());
  }
  MomentReport M;
  M.rhos = rhos;
  M.r = r;
  M.log_l_beta = std::log(E.l * E.beta);
  M.reference = moment_reference(rhos, r, M.log_l_beta);
  std::vector<std::size_t> idx;
  for (const auto& x : rhos) idx.push_back(detail::rho_index(E, x));
  KahanSum t, dl;
  for (const auto& mo : E.members) {
    if (!mo.geometric) continue;
    double pt = 1, pd = 1;
    for (std::size_t j = 0; j < rhos.size(); ++j) {
      const auto& terms = mo.twists[idx[j]].plus.terms;
      pt *= std::pow(terms.T, r[j]);
      pd *= std::pow(terms.Delta, r[j]);
    }
    t.add(pt);
    dl.add(pd);
    ++M.used;
  }
  if (M.used) {
    M.T_moment = t.value() / static_cast<double>(M.used);
    M.Delta_moment = dl.value() / static_cast<double>(M.used);
  }
  return M;
}

}  // namespace zzlab
