#include <gtest/gtest.h>

#include <cmath>

#include "zzlab/counting.hpp"

using namespace zzlab;

namespace {

MonicPoly mp(Poly p) { return MonicPoly(std::move(p)); }

BigInt enumerated(const FamilySpec& S, int d) {
  BigInt c = 0;
  for_each_member(S, d, [&](const FamilyMember&) { c += 1; });
  return c;
}

}  // namespace

TEST(Counting, DotEpsilonExamples) {
  FamilySpec S(3, {2});
  EXPECT_EQ(dot_epsilon(S, 1, {1}, {1}), RootOfUnity(1, 2));
  EXPECT_EQ(dot_epsilon(S, 2, {1}, {1}), RootOfUnity(0, 2));
  for (int deg = 1; deg <= 4; ++deg)
    for (std::uint32_t g = 0; g < 2; ++g) EXPECT_TRUE(dot_epsilon(S, deg, {g}, {0}).is_one());
}

TEST(Counting, DotEpsilonIsCharacterInG) {
  for (auto [q, fac] : {std::pair{5u, std::vector<std::uint32_t>{4}}, std::pair{5u, std::vector<std::uint32_t>{2, 2}},
                        std::pair{7u, std::vector<std::uint32_t>{6}}, std::pair{9u, std::vector<std::uint32_t>{2, 2, 2}},
                        std::pair{13u, std::vector<std::uint32_t>{4, 2}}}) {
    FamilySpec S(q, fac);
    const auto els = S.group.elements();
    for (int deg = 1; deg <= 3; ++deg)
      for (const auto& eps : els)
        for (const auto& g : els)
          for (const auto& h : els)
            EXPECT_EQ(dot_epsilon(S, deg, S.group.add(g, h), eps), dot_epsilon(S, deg, g, eps) * dot_epsilon(S, deg, h, eps));
  }
}

TEST(Counting, DegreeOneSumDichotomy) {
  for (auto [q, fac] : {std::pair{3u, std::vector<std::uint32_t>{2}}, std::pair{5u, std::vector<std::uint32_t>{4}},
                        std::pair{5u, std::vector<std::uint32_t>{2, 2}}, std::pair{7u, std::vector<std::uint32_t>{3}}}) {
    FamilySpec S(q, fac);
    for (const auto& eps : epsilon_classes(S)) {
      CyclotomicInt s(S.n1());
      for (const auto& g : S.group.elements()) s += CyclotomicInt::root(dot_epsilon(S, 1, g, eps));
      EXPECT_EQ(s, CyclotomicInt::from_int(S.n1(), S.group.is_zero(eps) ? S.kappa() : 0));
    }
  }
}

TEST(Counting, LocalFactorExamples) {
  FamilySpec S(3, {2});
  auto a = local_factor_series(S, 1, {0}, 4);
  EXPECT_EQ(a[0], 1);
  EXPECT_EQ(a[1], 1);
  auto b = local_factor_series(S, 1, {1}, 4);
  EXPECT_EQ(b[1], -1);
  auto c = local_factor_series(S, 2, {1}, 4);
  EXPECT_EQ(c[0], 1);
  EXPECT_EQ(c[1], 0);
  EXPECT_EQ(c[2], 1);
  auto inf = local_factor_series(S, 1, {0}, 4, {}, true);
  EXPECT_EQ(inf[0], 2);
  EXPECT_EQ(inf[1], 2);
  PlaceMark bad{Place::finite(mp({0, 1})), MarkKind::Unramified, DualChar(S.group, {1}), 1};
  EXPECT_THROW(local_factor_series(S, 1, {0}, 4, bad), DomainError);
}

TEST(Counting, AnchorsAndEnumeration) {
  FamilySpec S(3, {2});
  auto a = family_count_series(S, 8);
  EXPECT_EQ(a[0], 2);
  EXPECT_EQ(a[1], 0);
  EXPECT_EQ(a[2], 18);
  for (int d = 0; d <= 6; ++d) EXPECT_EQ(a[d], enumerated(S, d)) << d;
  for (int d = 0; d <= 8; ++d) EXPECT_EQ(a[d], family_size(S, d)) << d;
}

TEST(Counting, OtherGroupsMatchEnumeration) {
  for (auto [q, fac, dmax] : {std::tuple{5u, std::vector<std::uint32_t>{4}, 3}, std::tuple{5u, std::vector<std::uint32_t>{2, 2}, 3},
                              std::tuple{7u, std::vector<std::uint32_t>{3}, 3}, std::tuple{9u, std::vector<std::uint32_t>{2}, 3}}) {
    FamilySpec S(q, fac);
    auto a = family_count_series(S, 7);
    for (int d = 0; d <= dmax; ++d) EXPECT_EQ(a[d], enumerated(S, d)) << q << " " << d;
    for (int d = 0; d <= 7; ++d) EXPECT_EQ(a[d], family_size(S, d)) << q << " " << d;
  }
}

TEST(Counting, IntegralToDegreeForty) {
  for (auto [q, fac] : {std::pair{3u, std::vector<std::uint32_t>{2}}, std::pair{5u, std::vector<std::uint32_t>{2, 2}},
                        std::pair{5u, std::vector<std::uint32_t>{4}}}) {
    FamilySpec S(q, fac);
    auto a = family_count_series(S, 40);
    for (const auto& c : a) EXPECT_GE(c, 0);
  }
}

TEST(Counting, WorkerCountDoesNotMatter) {
  FamilySpec S(5, {2, 2});
  EXPECT_EQ(family_count_series(S, 20, {}, 1), family_count_series(S, 20, {}, 3));
}

TEST(Counting, MarkedSeriesMatchEnumeration) {
  FamilySpec S(3, {2});
  DualChar rho(S.group, {1});
  for (const Place& v : {Place::finite(mp({0, 1})), Place::infinity(), Place::finite(mp({1, 0, 1}))}) {
    for (MarkKind k : {MarkKind::Unramified, MarkKind::Ramified}) {
      auto series = family_count_series(S, 6, {{v, k, rho, 0}});
      ABMode mode = k == MarkKind::Ramified ? ABMode::BRamified : ABMode::BUnramified;
      for (int d = 0; d <= 6; ++d) {
        auto e = ab_exact_enumeration(S, d, {rho}, {v}, {0}, mode);
        EXPECT_EQ(CyclotomicInt::from_int(2, series[d]), e) << v.to_string() << " d=" << d;
      }
    }
  }
  FamilySpec V(5, {2, 2});
  DualChar r1(V.group, {1, 0}), r2(V.group, {1, 1});
  Place a = Place::finite(mp({1, 1})), b = Place::infinity();
  auto series = family_count_series(V, 4, {{a, MarkKind::Unramified, r1, 0}, {b, MarkKind::Ramified, r2, 0}});
  for (int d = 0; d <= 4; ++d) {
    // Mixed marks: enumerate directly.
    BigInt c = 0;
    for_each_member(V, d, [&](const FamilyMember& m) {
      if (frobenius_value(V, m, r1, a) && !frobenius_value(V, m, r2, b)) c += 1;
    });
    EXPECT_EQ(series[d], c) << d;
  }
}

TEST(Counting, DuplicateOrReduciblePlacesRejected) {
  FamilySpec S(3, {2});
  DualChar rho(S.group, {1});
  Place v = Place::finite(mp({0, 1}));
  EXPECT_THROW(family_count_series(S, 4, {{v, MarkKind::Ramified, rho, 0}, {v, MarkKind::Unramified, rho, 0}}), DomainError);
  EXPECT_THROW(family_count_series(S, 4, {{Place::finite(mp({2, 0, 1})), MarkKind::Ramified, rho, 0}}), DomainError);
}

TEST(Counting, EulerConstant) {
  EXPECT_DOUBLE_EQ(static_cast<double>(c_k(3)), 0.5);
  // kappa = 2: H = prod_v (1 - |v|^{-2}) = 1 / zeta(2) = (1 - 1/q)(1 - q^{1-2}) ... = (1 - q^{-2})(1 - q^{-1}).
  for (std::uint32_t q : {3u, 5u, 7u}) {
    FamilySpec S(q, {2});
    long double want = (1 - 1.0L / (q * q)) * (1 - 1.0L / q);
    auto H = euler_H(S, 1e-14L);
    EXPECT_NEAR(static_cast<double>(H.value), static_cast<double>(want), 1e-12);
  }
  FamilySpec V(5, {2, 2});
  auto h1 = euler_H(V, 1e-10L), h2 = euler_H(V, 1e-14L);
  EXPECT_GT(h1.value, 0);
  EXPECT_LE(std::abs(std::log(h1.value) - std::log(h2.value)), h1.tail_bound);
  FamilySpec S(3, {2});
  EXPECT_NEAR(static_cast<double>(main_term(S, 4, 1.0L)), 0.5 * 243, 1e-9);
}

TEST(Counting, MainTermRatioAtEvenDegrees) {
  FamilySpec S(3, {2});
  auto a = family_count_series(S, 40);
  double r = static_cast<double>(a[40].convert_to<long double>() / predicted_count(S, 40));
  EXPECT_GT(r, 0.2);
  EXPECT_LT(r, 5.0);
  // Reciprocity forces even conductor degree here.
  for (int d = 1; d <= 40; d += 2) EXPECT_EQ(a[d], 0);
}

TEST(Counting, ABAverages) {
  FamilySpec S(3, {2});
  DualChar rho(S.group, {1});
  Place x = Place::finite(mp({0, 1}));
  auto none = ab_averages(S, 6, {}, {}, {}, ABMode::A);
  EXPECT_EQ(none.exact, CyclotomicInt::from_int(2, family_count_series(S, 6)[6]));
  auto even = ab_averages(S, 6, {rho}, {x}, {2}, ABMode::A);
  EXPECT_EQ(even.route, "series");
  EXPECT_EQ(even.exact, ab_exact_enumeration(S, 6, {rho}, {x}, {2}, ABMode::A));
  auto odd = ab_averages(S, 6, {rho}, {x}, {1}, ABMode::A);
  EXPECT_EQ(odd.route, "enumeration");
  EXPECT_EQ(odd.predicted, 0);
  EXPECT_LT(odd.normalized(), 0.5);
  auto ram = ab_averages(S, 6, {rho}, {x}, {}, ABMode::BRamified);
  auto unr = ab_averages(S, 6, {rho}, {x}, {}, ABMode::BUnramified);
  EXPECT_EQ(ram.exact + unr.exact, none.exact);
  EXPECT_GT(ram.predicted, 0);
  try {
    ab_averages(S, 6, {rho}, {x}, {1}, ABMode::A, 10);
    FAIL();
  } catch (const EnumerationInfeasible& e) {
    EXPECT_EQ(e.predicted(), 0);
  }
}

TEST(Counting, ProbeReportsNonVanishingSums) {
  FamilySpec S(3, {2});
  auto rep = probe_lemma(S, 6);
  ASSERT_EQ(rep.local.size(), 6u);
  for (const auto& row : rep.local) EXPECT_EQ(row.gsum, row.degree % 2 == 0 ? 1 : -1);
  ASSERT_EQ(rep.series.size(), 7u);
  // Averaging eps = 1 and eps != 1 reproduces the count.
  auto a = family_count_series(S, 6);
  for (const auto& row : rep.series) EXPECT_EQ(row.twisted + row.untwisted, 2 * a[row.d]);
}
