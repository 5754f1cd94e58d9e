#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "zzlab/lfun.hpp"

using namespace zzlab;

namespace {

MonicPoly mp(Poly p) { return MonicPoly(std::move(p)); }

std::vector<DualChar> nontrivial(const GroupSpec& G) {
  std::vector<DualChar> out;
  for (auto& r : dual_group(G))
    if (!r.is_trivial()) out.push_back(r);
  return out;
}

// Brute force: L = L_fin / (1 - psi(inf) T), L_fin summed over all monics by the
// per-polynomial symbol definition.
std::vector<CyclotomicInt> brute_l(const FamilySpec& S, const FamilyMember& m, const DualChar& rho, int maxdeg) {
  const std::uint32_t N = S.n1();
  std::vector<CyclotomicInt> fin;
  for (int j = 0; j <= maxdeg; ++j) {
    CyclotomicInt s(N);
    std::uint64_t cnt = 1;
    for (int i = 0; i < j; ++i) cnt *= S.q();
    for (std::uint64_t idx = 0; idx < cnt; ++idx) {
      Poly h = monic_from_index(S.field, j, idx);
      auto v = twist_value_at_monic(S, m, rho, h);
      if (v) s += CyclotomicInt::root(*v);
    }
    fin.push_back(s);
  }
  auto inf = frobenius_value(S, m, rho, Place::infinity());
  if (!inf) return fin;
  // Divide by (1 - psi T): a_j = fin_j + psi a_{j-1}.
  CyclotomicInt z = CyclotomicInt::root(*inf);
  std::vector<CyclotomicInt> a;
  for (int j = 0; j <= maxdeg; ++j) {
    CyclotomicInt v = fin[j];
    if (j) v += z * a[j - 1];
    a.push_back(v);
  }
  return a;
}

}  // namespace

TEST(LFun, TwoLinearPlacesGiveTrivialPolynomial) {
  FamilySpec S(3, {2});
  PlaceTable T(S.field, 4);
  FamilyMember m({{mp({0, 1}), {1}}, {mp({1, 1}), {1}}}, {0}, {0});
  auto L = l_polynomial(S, T, m, DualChar(S.group, {1}), 2);
  EXPECT_EQ(L.degree(), 0);
  EXPECT_EQ(L.expected_degree(), 0);
}

TEST(LFun, ConductorFourOnTwoQuadratics) {
  FamilySpec S(3, {2});
  PlaceTable T(S.field, 6);
  FamilyMember m({{mp({1, 0, 1}), {1}}, {mp({2, 1, 1}), {1}}}, {0}, {0});
  ASSERT_TRUE(validate_member(S, m));
  auto L = l_polynomial(S, T, m, DualChar(S.group, {1}), 2);
  EXPECT_EQ(L.degree(), 2);
  auto A = angles(L, 3);
  ASSERT_EQ(A.size(), 2u);
  EXPECT_LT(A.rh_residual, 1e-10);
  EXPECT_EQ(genus_of_member(S, m), 1);
  EXPECT_EQ(riemann_hurwitz_genus(S, m), 1);
}

TEST(LFun, AnglesOfKnownPolynomial) {
  auto A = angles(std::vector<std::complex<double>>{1, 0, 3}, 3);
  ASSERT_EQ(A.size(), 2u);
  EXPECT_NEAR(A.theta[0], -0.25, 1e-12);
  EXPECT_NEAR(A.theta[1], 0.25, 1e-12);
  EXPECT_LT(A.rh_residual, 1e-12);
  // Double root: (1 - u/sqrt(q) e(-t))^2 style cluster stays put.
  double s = std::sqrt(5.0);
  auto B = angles(std::vector<std::complex<double>>{1, 2 * s, 5}, 5);
  ASSERT_EQ(B.size(), 2u);
  EXPECT_NEAR(B.theta[0], -0.5, 1e-9);
  EXPECT_NEAR(B.theta[1], -0.5, 1e-9);
}

TEST(LFun, NewtonRoundTrip) {
  const std::uint32_t N = 4;
  std::vector<CyclotomicInt> c{CyclotomicInt::from_int(N, 1), CyclotomicInt::root(N, 1), CyclotomicInt::from_int(N, -2),
                               CyclotomicInt::root(N, 3).scaled(5)};
  auto p = power_sums_from_series(N, c, 10);
  auto back = newton_from_power_sums(N, p, 10);
  for (int j = 0; j <= 10; ++j) EXPECT_EQ(back[j], j < 4 ? c[j] : CyclotomicInt(N)) << j;
}

TEST(LFun, MatchesBruteForceCoefficients) {
  for (auto [q, fac, d, count] : {std::tuple{3u, std::vector<std::uint32_t>{2}, 6, 25}, std::tuple{5u, std::vector<std::uint32_t>{4}, 5, 15},
                                  std::tuple{7u, std::vector<std::uint32_t>{3}, 4, 10}, std::tuple{5u, std::vector<std::uint32_t>{2, 2}, 4, 10}}) {
    FamilySpec S(q, fac);
    PlaceTable T(S.field, d + 1);
    auto members = sample_members(S, d, count, 7, false);
    for (const auto& m : members) {
      for (const auto& rho : nontrivial(S.group)) {
        if (classify_twist(m, rho) != TwistType::Geometric) continue;
        auto L = l_polynomial(S, T, m, rho, 1);
        auto B = brute_l(S, m, rho, conductor_of_twist(m, rho) - 1);
        for (int j = 0; j < static_cast<int>(B.size()); ++j) {
          CyclotomicInt a = j <= L.degree() ? L.coeffs[j] : CyclotomicInt(S.n1());
          EXPECT_EQ(a, B[j]) << m.to_string() << " rho=" << rho.to_string() << " j=" << j;
        }
      }
    }
  }
}

TEST(LFun, DegreeLawRiemannHypothesisAndGenus) {
  for (auto [q, fac, d] : {std::tuple{3u, std::vector<std::uint32_t>{2}, 6}, std::tuple{5u, std::vector<std::uint32_t>{2, 2}, 3},
                           std::tuple{7u, std::vector<std::uint32_t>{3}, 3}}) {
    FamilySpec S(q, fac);
    PlaceTable T(S.field, d + 2);
    auto rhos = nontrivial(S.group);
    for_each_member(S, d, [&](const FamilyMember& m) {
      int maxc = 0;
      for (auto& r : rhos) maxc = std::max(maxc, conductor_of_twist(m, r));
      auto prof = twist_profiles(S, T, m, rhos, std::min(T.max_degree(), std::max(0, maxc)));
      bool geometric = true;
      for (const auto& p : prof) {
        if (p.type != TwistType::Geometric) {
          geometric = false;
          EXPECT_THROW(l_polynomial_from_profile(p), TwistTypeError);
          continue;
        }
        auto L = l_polynomial_from_profile(p, 2);
        EXPECT_EQ(L.degree(), p.conductor - 2) << m.to_string();
        auto A = angles(L, q);
        EXPECT_LT(A.rh_residual, 1e-8) << m.to_string();
        double lead = std::abs(L.coeffs.back().render());
        EXPECT_NEAR(lead, std::pow(double(q), L.degree() / 2.0), 1e-9 * lead);
      }
      if (geometric) {
        EXPECT_EQ(genus_of_member(S, m), riemann_hurwitz_genus(S, m)) << m.to_string();
      } else {
        EXPECT_THROW(genus_of_member(S, m), TwistTypeError);
      }
    });
  }
}

TEST(LFun, ConjugateTwistHasNegatedAngles) {
  FamilySpec S(7, {3});
  PlaceTable T(S.field, 5);
  auto members = sample_members(S, 5, 10, 11, true);
  DualChar r1(S.group, {1}), r2(S.group, {2});
  for (const auto& m : members) {
    if (classify_twist(m, r1) != TwistType::Geometric) continue;
    auto a = angles(l_polynomial(S, T, m, r1), 7).theta;
    auto b = angles(l_polynomial(S, T, m, r2), 7).theta;
    ASSERT_EQ(a.size(), b.size());
    for (auto& t : b) t = -t;
    // Compare as points on the circle.
    for (double t : a) {
      double best = 1;
      for (double u : b) {
        double diff = std::abs(t - u);
        best = std::min(best, std::min(diff, 1 - diff));
      }
      EXPECT_LT(best, 1e-8);
    }
  }
}

TEST(LFun, ExplicitFormulaBothRoutes) {
  FamilySpec S(5, {4});
  auto members = sample_members(S, 6, 12, 3, false);
  auto rhos = nontrivial(S.group);
  PlaceTable T(S.field, 5);
  for (const auto& m : members) {
    int maxfin = 0;
    for (auto& r : rhos) maxfin = std::max(maxfin, finite_conductor_degree(m, r));
    auto prof = twist_profiles(S, T, m, rhos, 5);
    auto sums = monic_character_sums(S, m, rhos, std::max(0, maxfin - 1));
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      const auto& p = prof[i];
      if (p.type != TwistType::Geometric) continue;
      auto L = l_polynomial_from_profile(p);
      auto A = angles(L, 5);
      const int top = 2 * L.degree() + 4;
      TwistPowerSums P(p, sums[i], top);
      for (int n = 1; n <= 5; ++n) EXPECT_EQ(P.from_monic(n), p.power_sum(n)) << m.to_string() << " n=" << n;
      for (int n = 1; n <= top; ++n) {
        EXPECT_LT(explicit_formula_check(A, P(n), n, 5).residual, 1e-6) << m.to_string() << " n=" << n;
        EXPECT_LT(explicit_formula_check(A, P(n), -n, 5).residual, 1e-6);
      }
      EXPECT_THROW(explicit_formula_check(A, P(1), 0, 5), DomainError);
    }
  }
}

TEST(LFun, ConstantTypeAndTrivialRejected) {
  FamilySpec V(5, {2, 2});
  FamilyMember c({}, {0, 0}, {0, 1});
  PlaceTable T(V.field, 3);
  try {
    l_polynomial(V, T, c, DualChar(V.group, {0, 1}));
    FAIL();
  } catch (const TwistTypeError& e) {
    EXPECT_EQ(e.type(), TwistType::ConstantType);
  }
  EXPECT_THROW(l_polynomial(V, T, c, DualChar(V.group, {0, 0})), DomainError);
  EXPECT_THROW(riemann_hurwitz_genus(V, c), TwistTypeError);
}

TEST(LFun, AnalyzeMemberAgreesWithPieces) {
  FamilySpec S(5, {4});
  auto rhos = nontrivial(S.group);
  PlaceTable T(S.field, 4);
  for (const auto& m : sample_members(S, 6, 6, 21)) {
    auto D = analyze_member(S, T, m, rhos);
    ASSERT_EQ(D.twists.size(), rhos.size());
    for (const auto& t : D.twists) {
      if (t.type != TwistType::Geometric) {
        EXPECT_FALSE(t.L.has_value());
        continue;
      }
      auto L = l_polynomial(S, T, m, t.rho);
      EXPECT_EQ(t.L->coeffs, L.coeffs);
      EXPECT_TRUE(t.degree_law);
      EXPECT_LT(t.angles.rh_residual, 1e-8);
      EXPECT_LT(t.ef_residual, 1e-6);
    }
    if (D.geometric) {
      EXPECT_EQ(D.genus, D.rh_genus);
    }
  }
}
