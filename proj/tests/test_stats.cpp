#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "zzlab/stats.hpp"

using namespace zzlab;

namespace {

MonicPoly mp(Poly p) { return MonicPoly(std::move(p)); }

// T and Delta place by place from the defining Frobenius values.
PrimeTerms direct_terms(const FamilySpec& S, const PlaceTable& Tbl, const FamilyMember& m, const DualChar& rho, const TrigPoly& I) {
  PrimeTerms out;
  const int l = I.K();
  auto visit = [&](const Place& v) {
    auto z = frobenius_value(S, m, rho, v);
    if (!z) return;
    const int k = v.degree();
    for (int r = 1; r * k <= l; ++r) {
      double term = -I.coeff(r * k) * k * std::pow(double(S.q()), -0.5 * r * k) * 2.0 * z->pow(r).render().real();
      (r == 1 ? out.T : r == 2 ? out.Delta : out.tail) += term;
    }
  };
  visit(Place::infinity());
  for (int k = 1; k <= l; ++k)
    for (std::size_t i = 0; i < Tbl.count(k); ++i) visit(Tbl.place(k, i));
  return out;
}

}  // namespace

TEST(Stats, IntervalCounts) {
  AngleSet A;
  A.theta = {-0.25, 0.25};
  EXPECT_EQ(N_interval(A, 0.6), 2);
  EXPECT_EQ(N_interval(A, 0.5), 2);
  EXPECT_EQ(N_interval(A, 0.4), 0);
  EXPECT_EQ(N_interval(AngleSet{}, 0.3), 0);
  EXPECT_THROW(N_interval(A, 1.0), DomainError);
}

TEST(Stats, Schedule) {
  EXPECT_EQ(bs_degree_schedule(16), 6);
  EXPECT_EQ(bs_degree_schedule(14), 5);
  EXPECT_EQ(bs_degree_schedule(3), 4);
  EXPECT_EQ(bs_degree_schedule(100000), 256);
}

TEST(Stats, PrimeTermsMatchPlaceByPlace) {
  FamilySpec S(3, {2});
  PlaceTable Tbl(S.field, 6);
  DualChar rho(S.group, {1});
  FamilyMember m({{mp({0, 1}), {1}}, {mp({1, 1}), {1}}}, {0}, {0});
  auto bs = selberg_pair(0.25, 4);
  auto a = prime_terms_of(S, Tbl, m, rho, bs.plus);
  auto b = direct_terms(S, Tbl, m, rho, bs.plus);
  EXPECT_NEAR(a.T, b.T, 1e-12);
  EXPECT_NEAR(a.Delta, b.Delta, 1e-12);
  EXPECT_NEAR(a.tail, b.tail, 1e-12);
  EXPECT_NEAR(T_stat(S, Tbl, m, rho, bs.plus), b.T, 1e-12);
  EXPECT_THROW(T_stat(S, Tbl, m, DualChar(S.group, {0}), bs.plus), DomainError);
  for (auto [q, fac] : {std::pair{5u, std::vector<std::uint32_t>{4}}, std::pair{7u, std::vector<std::uint32_t>{3}}}) {
    FamilySpec V(q, fac);
    PlaceTable T(V.field, 5);
    auto bs5 = selberg_pair(0.3, 5);
    for (const auto& mem : sample_members(V, 5, 5, 9)) {
      for (const auto& r : nontrivial_characters(V.group)) {
        auto x = prime_terms_of(V, T, mem, r, bs5.minus);
        auto y = direct_terms(V, T, mem, r, bs5.minus);
        EXPECT_NEAR(x.T, y.T, 1e-10);
        EXPECT_NEAR(x.Delta, y.Delta, 1e-10);
        EXPECT_NEAR(x.tail, y.tail, 1e-10);
      }
    }
  }
}

TEST(Stats, TwoWayIdentityAndSandwich) {
  for (auto [q, fac, d] : {std::tuple{3u, std::vector<std::uint32_t>{2}, 10}, std::tuple{5u, std::vector<std::uint32_t>{2, 2}, 6},
                           std::tuple{7u, std::vector<std::uint32_t>{3}, 6}}) {
    FamilySpec S(q, fac);
    auto members = sample_members(S, d, 30, 5);
    auto E = observe_ensemble(S, d, members, 0.25, bs_degree_schedule(d));
    for (const auto& mo : E.members) {
      if (!mo.geometric) continue;
      for (const auto& t : mo.twists) {
        EXPECT_LT(t.plus.two_way_residual, 1e-6);
        EXPECT_LT(t.minus.two_way_residual, 1e-6);
        EXPECT_LE(t.minus.N_l, t.N + 1e-9);
        EXPECT_GE(t.plus.N_l, t.N - 1e-9);
        // Decomposition into (c(0) - beta) m + T + Delta + tail.
        const double c0 = selberg_pair(0.25, E.l).plus.coeff(0);
        const auto& p = t.plus;
        EXPECT_NEAR(p.N_l - 0.25 * t.m, (c0 - 0.25) * t.m + p.terms.T + p.terms.Delta + p.terms.tail, 1e-6);
      }
    }
  }
}

TEST(Stats, WorkersDoNotChangeResults) {
  FamilySpec S(3, {2});
  auto members = sample_members(S, 8, 12, 1);
  auto a = observe_ensemble(S, 8, members, 0.25, 4, 1);
  auto b = observe_ensemble(S, 8, members, 0.25, 4, 3);
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = 0; j < a.members[i].twists.size(); ++j) {
      EXPECT_EQ(a.members[i].twists[j].N, b.members[i].twists[j].N);
      EXPECT_EQ(a.members[i].twists[j].plus.terms.T, b.members[i].twists[j].plus.terms.T);
      EXPECT_EQ(a.members[i].twists[j].angles.theta, b.members[i].twists[j].angles.theta);
    }
}

TEST(Stats, BetaRangeEnforced) {
  FamilySpec S(3, {2});
  auto members = sample_members(S, 4, 2, 1);
  EXPECT_THROW(observe_ensemble(S, 4, members, 0.98, 4), DomainError);
  EXPECT_THROW(observe_ensemble(S, 4, members, 0.0, 4), DomainError);
}

TEST(Stats, MomentReferences) {
  GroupSpec G({2});
  DualChar r(G, {1});
  const double L = std::log(6 * 0.25);
  EXPECT_NEAR(moment_reference({r}, {2}, L), 2 * L / (std::numbers::pi * std::numbers::pi), 1e-15);
  EXPECT_EQ(moment_reference({r}, {3}, L), 0.0);
  GroupSpec V({2, 2});
  DualChar a(V, {1, 0}), b(V, {0, 1});
  EXPECT_NEAR(moment_reference({a, b}, {2, 2}, L), moment_reference({a}, {2}, L) * moment_reference({b}, {2}, L), 1e-15);
  // Order 4: r_rho = 1; fourth moment 3 sigma^4.
  GroupSpec C({4});
  DualChar c(C, {1});
  double s2 = moment_reference({c}, {2}, L);
  EXPECT_NEAR(moment_reference({c}, {4}, L), 3 * s2 * s2, 1e-14);
}

TEST(Stats, MomentHypothesisEnforced) {
  FamilySpec S(5, {4});
  auto E = observe_ensemble(S, 4, sample_members(S, 4, 5, 2), 0.25, 8);
  DualChar r1(S.group, {1}), r3(S.group, {3}), r2(S.group, {2});
  EXPECT_THROW(ensemble_moments(E, {r1, r3}, {1, 1}), DomainError);
  auto M = ensemble_moments(E, {r1, r2}, {2, 2});
  EXPECT_LE(M.used, 5u);
  EXPECT_GT(M.reference, 0);
}

TEST(Stats, DescribeKnownSample) {
  auto D = describe({1, 2, 3, 4, 5});
  EXPECT_DOUBLE_EQ(D.mean, 3);
  EXPECT_DOUBLE_EQ(D.variance, 2.5);
  EXPECT_NEAR(D.skewness, 0, 1e-15);
  EXPECT_NEAR(D.kurtosis, 1.7, 1e-12);
  EXPECT_DOUBLE_EQ(D.quantiles[3].second, 3);
  EXPECT_NEAR(standard_normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(correlation({1, 2, 3}, {2, 4, 6}), 1, 1e-15);
  EXPECT_NEAR(correlation({1, 2, 3}, {3, 2, 1}), -1, 1e-15);
  auto E = describe({});
  EXPECT_EQ(E.n, 0u);
  EXPECT_TRUE(std::isnan(E.mean));
  EXPECT_TRUE(std::isnan(describe({2.0}).variance));
}

TEST(Stats, ReportsOnSmallEnsemble) {
  FamilySpec S(3, {2});
  auto E = observe_ensemble(S, 10, sample_members(S, 10, 40, 3), 0.25, bs_degree_schedule(10));
  auto dr = mean_density_report(E);
  EXPECT_EQ(dr.per_rho.size(), 1u);
  EXPECT_GT(dr.used, 0u);
  auto cr = clt_report(E);
  ASSERT_EQ(cr.per_rho.size(), 1u);
  EXPECT_EQ(cr.per_rho[0].r_weight, 2);
  EXPECT_EQ(cr.used + cr.excluded.constant_type + cr.excluded.trivial_twist + cr.excluded.degenerate, E.members.size());

  FamilySpec V(5, {4});
  auto EV = observe_ensemble(V, 6, sample_members(V, 6, 20, 3), 0.25, 4);
  auto cv = clt_report(EV);
  ASSERT_EQ(cv.per_rho.size(), 2u);  // {rho, rho^3} collapse, plus rho^2
  EXPECT_EQ(cv.correlation.size(), 2u);
  for (const auto& p : cv.per_rho) EXPECT_GE(p.z.n, cv.used);
  EXPECT_LE(cv.pair_counts[0][1], std::min(cv.pair_counts[0][0], cv.pair_counts[1][1]));
}

TEST(Stats, DegenerateMembersFlagged) {
  // Conductor 2 on two linear places: deg L = 0.
  FamilySpec S(3, {2});
  FamilyMember m({{mp({0, 1}), {1}}, {mp({1, 1}), {1}}}, {0}, {0});
  auto E = observe_ensemble(S, 2, {m}, 0.25, 4);
  auto dr = mean_density_report(E);
  EXPECT_EQ(dr.excluded.degenerate, 1u);
  EXPECT_EQ(dr.used, 0u);
}

TEST(Stats, ConstantTypeExcluded) {
  FamilySpec V(5, {2, 2});
  FamilyMember c({{mp({0, 1}), {1, 0}}, {mp({1, 1}), {1, 0}}}, {0, 0}, {0, 1});
  auto E = observe_ensemble(V, 2, {c}, 0.25, 4);
  EXPECT_FALSE(E.members[0].geometric);
  auto cr = clt_report(E);
  EXPECT_EQ(cr.excluded.constant_type, 1u);
  EXPECT_EQ(cr.used, 0u);
}
