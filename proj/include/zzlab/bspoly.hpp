#pragma once

// Beurling-Selberg majorant and minorant trigonometric polynomials of the
// indicator of a symmetric interval I = [-beta/2, beta/2] on R/Z.
//
// Built from Vaaler's weights: for 1 <= |k| <= K
//   c_pm(k) = J(|k|/(K+1)) sin(pi k beta)/(pi k) +- (1 - |k|/(K+1)) cos(pi k beta)/(K+1),
// with J(t) = pi t (1 - t) cot(pi t) + t, and c_pm(0) = beta +- 1/(K+1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace zzlab {

enum class Side { Minus, Plus };

class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(int K, double beta, Side side, std::vector<double> c) : K_(K), beta_(beta), side_(side), c_(std::move(c)) {
    if (static_cast<int>(c_.size()) != K + 1) throw DomainError("trigonometric polynomial needs K + 1 coefficients");
  }

  int K() const noexcept { return K_; }
  double beta() const noexcept { return beta_; }
  Side side() const noexcept { return side_; }

  /// c(n), even in n, zero beyond the degree.
  double coeff(int n) const noexcept {
    n = n < 0 ? -n : n;
    return n <= K_ ? c_[n] : 0.0;
  }

  /// sum_n c(n) e(n x), real by evenness.
  double operator()(double x) const noexcept {
    double s = 0;
    for (int n = K_; n >= 1; --n) s += c_[n] * std::cos(2.0 * std::numbers::pi * n * x);
    return c_[0] + 2.0 * s;
  }

 private:
  int K_ = 0;
  double beta_ = 0;
  Side side_ = Side::Plus;
  std::vector<double> c_;  // c(0..K)
};

inline double trig_eval(const TrigPoly& T, double x) { return T(x); }
inline double fourier_coeff(const TrigPoly& T, int n) { return T.coeff(n); }

namespace detail {
inline double vaaler_weight(double t) {
  if (t <= 0) return 1.0;
  return std::numbers::pi * t * (1 - t) / std::tan(std::numbers::pi * t) + t;
}
}  // namespace detail

struct SelbergPair {
  TrigPoly minus, plus;
};

inline SelbergPair selberg_pair(double beta, int K) {
  if (!(beta > 0 && beta < 1)) throw DomainError("interval length beta must lie in (0, 1)");
  if (K < 1) throw DomainError("Selberg polynomial degree must be at least 1");
  std::vector<double> cm(K + 1), cp(K + 1);
  const double h = 1.0 / (K + 1);
  cm[0] = beta - h;
  cp[0] = beta + h;
  for (int k = 1; k <= K; ++k) {
    const double t = k * h;
    const double pk = std::numbers::pi * k;
    const double main = detail::vaaler_weight(t) * std::sin(pk * beta) / pk;
    const double corr = h * (1 - t) * std::cos(pk * beta);
    cm[k] = main - corr;
    cp[k] = main + corr;
  }
  return {TrigPoly(K, beta, Side::Minus, std::move(cm)), TrigPoly(K, beta, Side::Plus, std::move(cp))};
}

/// Closed-interval indicator of [-beta/2, beta/2] on R/Z.
inline bool in_symmetric_interval(double theta, double beta) {
  double t = theta - std::floor(theta + 0.5);  // fold to [-1/2, 1/2)
  return std::abs(t) <= beta / 2;
}

/// N_n q^{-n} for places of degree n on the projective line, via Moebius (n = 1 includes infinity).
inline double place_density(std::uint32_t q, int n) {
  double s = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    int m = d, mu = 1;
    for (int p = 2; p * p <= m; ++p) {
      if (m % p) continue;
      m /= p;
      if (m % p == 0) {
        mu = 0;
        break;
      }
      mu = -mu;
    }
    if (mu == 0) continue;
    if (m > 1) mu = -mu;
    s += mu * std::pow(static_cast<double>(q), static_cast<double>(n / d - n));
  }
  s /= n;
  if (n == 1) s += 1.0 / q;
  return s;
}

struct BSSideReport {
  double majorant_violation = 0;  // max over the grid of the sandwich violation
  double even_sum = 0;            // |sum_{n>=1} c(2n)|
  double diagonal_defect = 0;     // |sum n c(n)^2 - log(K beta)/(2 pi^2)|
  double max_coeff_times_n = 0;   // max_n |c(n) n|
  double prime_defect = 0;        // sum_v c(deg v)^2 deg(v)^2 |v|^{-1} - log(K beta)/(2 pi^2)
};

struct BSReport {
  int K = 0;
  double beta = 0;
  std::uint32_t q = 0;
  std::size_t grid_size = 0;
  bool log_checks = false;  // false when K beta <= 1
  BSSideReport minus, plus;
  double c0_error = 0;  // max |c_pm(0) - (beta +- 1/(K+1))|

  static constexpr double kViolationTol = 1e-10;
  static constexpr double kEven = 10, kSum = 10, kCoeff = 10, kPrime = 10;

  bool side_pass(const BSSideReport& s) const {
    bool ok = s.majorant_violation <= kViolationTol && s.max_coeff_times_n <= kCoeff && s.even_sum <= kEven;
    if (log_checks) ok = ok && s.diagonal_defect <= kSum && s.prime_defect <= kPrime;
    return ok;
  }
  bool pass() const { return side_pass(minus) && side_pass(plus) && c0_error <= 1e-15; }
};

inline BSReport bs_diagnostics(const SelbergPair& pr, std::size_t grid_size, std::uint32_t q) {
  const int K = pr.plus.K();
  const double beta = pr.plus.beta();
  BSReport r;
  r.K = K;
  r.beta = beta;
  r.q = q;
  r.grid_size = grid_size;
  r.log_checks = K * beta > 1;
  const double h = 1.0 / (K + 1);
  r.c0_error = std::max(std::abs(pr.plus.coeff(0) - (beta + h)), std::abs(pr.minus.coeff(0) - (beta - h)));
  const double target = r.log_checks ? std::log(K * beta) / (2 * std::numbers::pi * std::numbers::pi) : 0.0;
  for (const TrigPoly* T : {&pr.minus, &pr.plus}) {
    BSSideReport s;
    for (std::size_t j = 0; j < grid_size; ++j) {
      const double x = -0.5 + static_cast<double>(j) / static_cast<double>(grid_size);
      const double ind = in_symmetric_interval(x, beta) ? 1.0 : 0.0;
      const double v = (*T)(x);
      const double viol = T->side() == Side::Plus ? ind - v : v - ind;
      s.majorant_violation = std::max(s.majorant_violation, viol);
    }
    // Endpoints of I are grid-independent extremal points for the sandwich.
    for (double x : {-beta / 2, beta / 2}) {
      const double v = (*T)(x);
      s.majorant_violation = std::max(s.majorant_violation, T->side() == Side::Plus ? 1.0 - v : v - 1.0);
    }
    double even = 0, diag = 0, prime = 0;
    for (int n = 1; n <= K; ++n) {
      const double c = T->coeff(n);
      if (n % 2 == 0) even += c;
      diag += n * c * c;
      prime += c * c * n * n * place_density(q, n);
      s.max_coeff_times_n = std::max(s.max_coeff_times_n, std::abs(c * n));
    }
    s.even_sum = std::abs(even);
    if (r.log_checks) {
      s.diagonal_defect = std::abs(diag - target);
      s.prime_defect = prime - target;
    }
    (T->side() == Side::Plus ? r.plus : r.minus) = s;
  }
  return r;
}

}  // namespace zzlab
