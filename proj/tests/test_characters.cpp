#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "zzlab/cyclotomic.hpp"
#include "zzlab/group.hpp"
#include "zzlab/places.hpp"
#include "zzlab/residue.hpp"

using namespace zzlab;

namespace {

Poly random_monic(std::mt19937_64& gen, const FiniteField& F, int n) {
  Poly p(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) p[i] = static_cast<FieldElem>(gen() % F.q());
  p[n] = 1;
  return p;
}

Poly random_irreducible(std::mt19937_64& gen, const FiniteField& F, int n) {
  while (true) {
    Poly p = random_monic(gen, F, n);
    if (is_irreducible(F, p)) return p;
  }
}

}  // namespace

TEST(Symbol, Examples) {
  FiniteField F(3);
  EXPECT_EQ(power_residue_symbol(F, Poly{2, 1}, poly_x(), 2), 1u);
  EXPECT_EQ(power_residue_symbol(F, Poly{1, 2, 1}, poly_x(), 2), 0u);  // h = 1 mod x
  EXPECT_EQ(power_residue_symbol(F, Poly{0, 2, 1}, poly_x(), 2), std::nullopt);
  EXPECT_THROW(power_residue_symbol(F, Poly{1}, poly_x(), 4), DomainError);
  EXPECT_THROW(norm_residue_symbol(F, Poly{1}, poly_x(), 4), DomainError);
}

TEST(Symbol, MultiplicativeAndKilledByNthPowers) {
  std::mt19937_64 gen(5);
  for (auto [q, n] : {std::pair{5u, 4u}, {7u, 3u}, {7u, 6u}, {9u, 8u}, {13u, 12u}}) {
    FiniteField F(q);
    for (int t = 0; t < 60; ++t) {
      Poly Q = random_irreducible(gen, F, 1 + static_cast<int>(gen() % 4));
      Poly h1 = random_monic(gen, F, static_cast<int>(gen() % 6));
      Poly h2 = random_monic(gen, F, static_cast<int>(gen() % 6));
      auto s1 = power_residue_symbol(F, h1, Q, n);
      auto s2 = power_residue_symbol(F, h2, Q, n);
      auto s12 = power_residue_symbol(F, poly_mul(F, h1, h2), Q, n);
      if (s1 && s2) {
        ASSERT_TRUE(s12.has_value());
        EXPECT_EQ(*s12, (*s1 + *s2) % n);
      } else {
        EXPECT_FALSE(s12.has_value());
      }
      Poly hn{1};
      for (std::uint32_t i = 0; i < n; ++i) hn = poly_mul(F, hn, h1);
      if (s1) {
        EXPECT_EQ(power_residue_symbol(F, hn, Q, n), 0u);
      }
    }
  }
}

TEST(Symbol, CompatibleAcrossDivisors) {
  std::mt19937_64 gen(8);
  FiniteField F(13);
  for (int t = 0; t < 100; ++t) {
    Poly Q = random_irreducible(gen, F, 1 + static_cast<int>(gen() % 3));
    Poly h = random_monic(gen, F, static_cast<int>(gen() % 5));
    auto s12 = power_residue_symbol(F, h, Q, 12);
    for (std::uint32_t d : {1u, 2u, 3u, 4u, 6u}) {
      auto sd = power_residue_symbol(F, h, Q, d);
      ASSERT_EQ(s12.has_value(), sd.has_value());
      if (s12) {
        EXPECT_EQ(*sd, *s12 % d);
      }
    }
  }
}

TEST(Symbol, NormRouteAgreesWithPowerRoute) {
  for (auto [q, n] : {std::pair{3u, 2u}, {4u, 3u}, {5u, 4u}, {7u, 6u}, {9u, 8u}}) {
    FiniteField F(q);
    PlaceTable T(F, 3);
    for (int k = 1; k <= 3; ++k) {
      for (std::size_t iq = 0; iq < T.count(k); ++iq) {
        Poly Q = T.poly(k, iq);
        std::uint64_t lim = 1;
        for (int i = 0; i < 4; ++i) lim *= q;
        for (std::uint64_t key = 0; key < std::min<std::uint64_t>(lim, 400); ++key) {
          Poly h = monic_from_index(F, 4, key);
          ASSERT_EQ(power_residue_symbol(F, h, Q, n), norm_residue_symbol(F, h, Q, n));
        }
      }
    }
  }
}

TEST(Symbol, KernelMatchesDefinition) {
  std::mt19937_64 gen(21);
  for (auto [q, n, lim] : {std::tuple{5u, 4u, 4096ull}, {5u, 4u, 0ull}, {7u, 3u, 4096ull}, {9u, 4u, 0ull}, {3u, 2u, 4096ull}}) {
    FiniteField F(q);
    const int D = q <= 5 ? 6 : 4;
    PlaceTable T(F, D);
    std::vector<Poly> mods;
    for (int k : {1, 2, 3, 5}) mods.push_back(random_irreducible(gen, F, k));
    mods.push_back(T.poly(1, 0));
    SymbolKernel K(F, mods, n, D, lim);
    for (int deg = 1; deg <= D; ++deg) {
      std::size_t seen = 0;
      K.for_each_place(T, deg, [&](std::size_t i, const std::uint32_t* syms) {
        Poly P = T.poly(deg, i);
        for (std::size_t j = 0; j < mods.size(); ++j) {
          auto s = power_residue_symbol(F, P, mods[j], n);
          if (s) {
            ASSERT_EQ(syms[j], *s) << poly_to_string(P) << " mod " << poly_to_string(mods[j]);
          } else {
            ASSERT_EQ(syms[j], SymbolKernel::kZero);
          }
        }
        ++seen;
      });
      EXPECT_EQ(seen, T.count(deg));
    }
    Poly h = random_monic(gen, F, D);
    std::vector<std::uint32_t> out(mods.size());
    K.symbols(h, out.data());
    for (std::size_t j = 0; j < mods.size(); ++j) {
      auto s = power_residue_symbol(F, h, mods[j], n);
      EXPECT_EQ(out[j], s ? *s : SymbolKernel::kZero);
    }
  }
}

TEST(Group, Basics) {
  EXPECT_THROW(GroupSpec({2, 4}), DomainError);
  EXPECT_THROW(GroupSpec({1}), DomainError);
  GroupSpec G({4, 2});
  EXPECT_EQ(G.order(), 8u);
  EXPECT_EQ(G.exponent(), 4u);
  for (std::uint32_t i = 0; i < 8; ++i) EXPECT_EQ(G.index(G.element(i)), i);
  EXPECT_EQ(G.element_order({2, 1}), 2u);
  EXPECT_EQ(G.element_order({1, 1}), 4u);
}

TEST(Group, RhoEvalExamples) {
  GroupSpec Z2({2});
  DualChar s(Z2, {1});
  EXPECT_EQ(rho_eval(s, {1}), RootOfUnity(1, 2));
  EXPECT_EQ(rho_eval(s, {1}).render(), std::complex<double>(-1, 0));
  EXPECT_TRUE(rho_eval(s, {0}).is_one());
  GroupSpec Z4({4});
  DualChar r(Z4, {1});
  EXPECT_EQ(r.order(), 4u);
  EXPECT_EQ(rho_eval(r, {2}), RootOfUnity(2, 4));
}

TEST(Group, HomomorphismAndOrthogonality) {
  for (auto f : {std::vector<std::uint32_t>{2}, {3}, {4}, {2, 2}, {4, 2}, {6, 3}, {2, 2, 2}}) {
    GroupSpec G(f);
    auto dual = dual_group(G);
    ASSERT_EQ(dual.size(), G.order());
    EXPECT_TRUE(dual[0].is_trivial());
    for (const auto& rho : dual) {
      CyclotomicInt sum(G.exponent());
      for (const auto& g : G.elements()) {
        sum.add_root(rho.exponent_at(g), 1);
        for (const auto& h : G.elements()) ASSERT_EQ(rho(G.add(g, h)), rho(g) * rho(h));
      }
      EXPECT_EQ(sum, CyclotomicInt::from_int(G.exponent(), rho.is_trivial() ? BigInt(G.order()) : BigInt(0)));
      EXPECT_EQ(rho * rho.inverse(), dual[0]);
    }
  }
}

TEST(Group, ConjugateRepresentatives) {
  EXPECT_EQ(conjugate_representatives(dual_group(GroupSpec({2}))).size(), 1u);
  EXPECT_EQ(conjugate_representatives(dual_group(GroupSpec({3}))).size(), 1u);
  EXPECT_EQ(conjugate_representatives(dual_group(GroupSpec({2, 2}))).size(), 3u);
  auto A4 = conjugate_representatives(dual_group(GroupSpec({4})));
  EXPECT_EQ(A4.size(), 2u);
  // Exactly one of each {rho, rho^-1}.
  GroupSpec G({6, 3});
  auto dual = dual_group(G);
  auto A = conjugate_representatives(dual);
  for (const auto& r : dual) {
    if (r.is_trivial()) continue;
    int hits = static_cast<int>(std::count(A.begin(), A.end(), r) + (r.inverse() == r ? 0 : std::count(A.begin(), A.end(), r.inverse())));
    EXPECT_EQ(hits, 1) << r.to_string();
  }
}

TEST(Group, Subgroups) {
  GroupSpec V({2, 2});
  EXPECT_EQ(all_subgroups(V).size(), 5u);
  GroupSpec C4({4});
  EXPECT_EQ(all_subgroups(C4).size(), 3u);
  GroupSpec G({4, 2});
  auto subs = all_subgroups(G);
  EXPECT_EQ(subs.size(), 8u);
  auto full = generated_subgroup(G, {{1, 0}, {0, 1}});
  EXPECT_EQ(invariant_factors(G, full), (std::vector<std::uint32_t>{4, 2}));
  EXPECT_EQ(invariant_factors(G, generated_subgroup(G, {{2, 1}})), (std::vector<std::uint32_t>{2}));
  EXPECT_EQ(invariant_factors(G, generated_subgroup(G, {{2, 0}, {0, 1}})), (std::vector<std::uint32_t>{2, 2}));
  EXPECT_TRUE(invariant_factors(G, generated_subgroup(G, {})).empty());
  GroupSpec H({6, 2});
  EXPECT_EQ(invariant_factors(H, generated_subgroup(H, {{1, 0}, {0, 1}})), (std::vector<std::uint32_t>{6, 2}));
  EXPECT_EQ(invariant_factors(H, generated_subgroup(H, {{3, 1}})), (std::vector<std::uint32_t>{2}));
}

TEST(Cyclotomic, RingLawsAndRender) {
  std::mt19937_64 gen(9);
  for (std::uint32_t N : {1u, 2u, 3u, 4u, 5u, 6u, 8u, 12u}) {
    auto rnd = [&]() {
      CyclotomicInt x(N);
      std::complex<double> z = 0;
      for (int t = 0; t < 5; ++t) {
        std::uint32_t a = static_cast<std::uint32_t>(gen() % N);
        std::int64_t m = static_cast<std::int64_t>(gen() % 11) - 5;
        x.add_root(a, m);
        z += static_cast<double>(m) * RootOfUnity::render(a, N);
      }
      return std::pair{x, z};
    };
    for (int t = 0; t < 30; ++t) {
      auto [a, za] = rnd();
      auto [b, zb] = rnd();
      auto [c, zc] = rnd();
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_LT(std::abs(a.render() - za), 1e-12);
      EXPECT_LT(std::abs((a * b).render() - za * zb), 1e-9);
      EXPECT_LT(std::abs(a.conj().render() - std::conj(za)), 1e-12);
      EXPECT_EQ(a.scaled(7).divided_exact(7), a);
    }
    EXPECT_EQ(CyclotomicInt::root(N, 1).scaled(2).is_rational(), N <= 2);
  }
  EXPECT_THROW(CyclotomicInt::root(4, 1).rational_part(), DomainError);
  EXPECT_THROW(CyclotomicInt::from_int(4, 3).divided_exact(2), ConsistencyError);
  // 1 + zeta_3 + zeta_3^2 = 0
  CyclotomicInt s(3);
  for (std::uint32_t a = 0; a < 3; ++a) s.add_root(a, 1);
  EXPECT_TRUE(s.is_zero());
}

TEST(RootOfUnity, RenderModulus) {
  for (std::uint32_t N : {1u, 2u, 3u, 4u, 7u, 12u})
    for (std::uint32_t a = 0; a < N; ++a) EXPECT_NEAR(std::abs(RootOfUnity(a, N).render()), 1.0, 1e-15);
  EXPECT_EQ(RootOfUnity(3, 4).pow(-1), RootOfUnity(1, 4));
}
