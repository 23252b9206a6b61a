#pragma once

// Normal-ordered expansions of the operator functions the state
// construction and the quasi-probability need, and reconstruction of dense
// matrices from them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <utility>

#include "pmcs/error.hpp"
#include "pmcs/fock.hpp"
#include "pmcs/special_functions.hpp"
#include "pmcs/types.hpp"

namespace pmcs::weyl {

/// sum c_{m,n} :(a^dagger)^m a^n:, keyed by (creation power, annihilation power).
class NormalOrderedSeries {
 public:
  using Key = std::pair<int, int>;
  using Map = std::map<Key, Complex>;

  void add(int m, int n, Complex c) {
    if (m < 0 || n < 0) throw Error(ErrorKind::domain, "NormalOrderedSeries: negative power");
    terms_[{m, n}] += c;
  }

  const Map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  Complex coefficient(int m, int n) const {
    auto it = terms_.find({m, n});
    return it == terms_.end() ? Complex(0.0) : it->second;
  }

  int max_total_power() const {
    int best = 0;
    for (const auto& [key, c] : terms_) best = std::max(best, key.first + key.second);
    return best;
  }

  /// Normal-ordered symbol at a coherent-state point: sum c alpha*^m alpha^n.
  Complex symbol(Complex alpha) const {
    Complex s(0.0);
    for (const auto& [key, c] : terms_) {
      s += c * special::detail::int_pow(std::conj(alpha), key.first) *
           special::detail::int_pow(alpha, key.second);
    }
    return s;
  }

 private:
  Map terms_;
};

/// (mu a + nu a^dagger)^N = N! sum_{k,l} mu^k nu^{N-k} (1/2)^l
///     :a^dagger^{N-k-l} a^{k-l}: / (l! (k-l)! (N-k-l)!)
/// The mu^k nu^{N-k} grouping keeps nu = 0 (photon subtraction) free of 0/0.
inline NormalOrderedSeries expand_superposed_power(const ModulationParams& p) {
  p.validate();
  using special::log_factorial;
  const int N = p.N;
  const double log_mu = std::abs(p.mu) > 0.0 ? std::log(std::abs(p.mu)) : 0.0;
  const double log_nu = std::abs(p.nu) > 0.0 ? std::log(std::abs(p.nu)) : 0.0;
  const double arg_mu = std::arg(p.mu);
  const double arg_nu = std::arg(p.nu);
  NormalOrderedSeries series;
  for (int k = 0; k <= N; ++k) {
    if (k > 0 && p.mu == Complex(0.0)) continue;
    if (N - k > 0 && p.nu == Complex(0.0)) continue;
    for (int l = 0; l <= std::min(N - k, k); ++l) {
      const double log_mag = log_factorial(N).log_magnitude - log_factorial(l).log_magnitude -
                             log_factorial(k - l).log_magnitude -
                             log_factorial(N - k - l).log_magnitude - l * std::log(2.0) +
                             (k > 0 ? k * log_mu : 0.0) + (N - k > 0 ? (N - k) * log_nu : 0.0);
      const double phase = k * arg_mu + (N - k) * arg_nu;
      series.add(N - k - l, k - l, std::polar(std::exp(log_mag), phase));
    }
  }
  return series;
}

/// (a^dagger a)^j = sum_i S(j,i) a^dagger^i a^i with Stirling numbers of the
/// second kind S(j,i) = sum_r (-1)^r (i-r)^j / (r! (i-r)!).
inline NormalOrderedSeries expand_number_power(int j) {
  if (j < 1 || j > 8) throw Error(ErrorKind::domain, "expand_number_power: j must be in [1, 8]");
  NormalOrderedSeries series;
  for (int i = 1; i <= j; ++i) {
    series.add(i, i, static_cast<double>(special::stirling2(j, i)));
  }
  return series;
}

/// Scalars of e^{-lambda n} = P exp_W(c a^dagger a) with
/// P = 2/(1+e^{-lambda}), c = -2(1-e^{-lambda})/(1+e^{-lambda}); the
/// exponential is in Weyl (symmetric) order.
struct ExpNumberForm {
  Complex prefactor;
  Complex exponent_coeff;
};

inline ExpNumberForm expand_exp_number(Complex lambda) {
  const Complex e = std::exp(-lambda);
  const Complex denom = 1.0 + e;
  if (std::abs(denom) < 1e-14) {
    throw Error(ErrorKind::domain, "expand_exp_number: pole at e^{-lambda} = -1");
  }
  return {2.0 / denom, -2.0 * (1.0 - e) / denom};
}

/// Weyl-ordered Gaussian P exp_W(c a^dagger a) rewritten in normal order as
/// P' :exp(c' a^dagger a): with P' = P/(1 - c/2), c' = c/(1 - c/2).
inline ExpNumberForm weyl_gaussian_to_normal(const ExpNumberForm& w) {
  const Complex d = 1.0 - 0.5 * w.exponent_coeff;
  if (std::abs(d) < 1e-14) throw Error(ErrorKind::domain, "weyl_gaussian_to_normal: singular");
  return {w.prefactor / d, w.exponent_coeff / d};
}

/// <alpha| e^{-lambda n} |beta> from the ordered form, for unit-normalized
/// coherent states.
inline Complex exp_number_coherent_element(Complex lambda, Complex alpha, Complex beta) {
  const auto normal = weyl_gaussian_to_normal(expand_exp_number(lambda));
  const Complex overlap =
      std::exp(-0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + std::conj(alpha) * beta);
  return normal.prefactor * overlap * std::exp(normal.exponent_coeff * std::conj(alpha) * beta);
}

/// Truncated normal-ordered series of P' :exp(c' a^dagger a): up to power kmax.
inline NormalOrderedSeries exp_number_series(Complex lambda, int kmax) {
  const auto normal = weyl_gaussian_to_normal(expand_exp_number(lambda));
  NormalOrderedSeries series;
  Complex c(1.0);
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) c *= normal.exponent_coeff / static_cast<double>(k);
    series.add(k, k, normal.prefactor * c);
  }
  return series;
}

/// Dense sum c (a^dagger)^m a^n. Needs m + n <= D/2 so products stay exact
/// away from the truncation edge.
inline fock::FockOperator series_to_matrix(const NormalOrderedSeries& s, int dimension) {
  fock::check_dimension(dimension, 2, "series_to_matrix");
  if (s.max_total_power() > dimension / 2) {
    throw Error(ErrorKind::headroom, "series_to_matrix: max power " +
                                         std::to_string(s.max_total_power()) +
                                         " exceeds D/2 = " + std::to_string(dimension / 2));
  }
  // <p| a^dagger^m a^n |q> = sqrt(p!/(p-m)!) sqrt(q!/(q-n)!) when p - m = q - n >= 0
  auto falling = [](int top, int count) {
    double f = 1.0;
    for (int i = 0; i < count; ++i) f *= static_cast<double>(top - i);
    return f;
  };
  fock::Matrix out = fock::Matrix::Zero(dimension, dimension);
  for (const auto& [key, c] : s.terms()) {
    const auto [m, n] = key;
    for (int r = 0; r + std::max(m, n) < dimension; ++r) {
      const int p = r + m;
      const int q = r + n;
      // m == n stays in integers so diagonal reconstructions are exact
      const double amp = (m == n) ? falling(p, m)
                                  : std::sqrt(falling(p, m)) * std::sqrt(falling(q, n));
      if (!std::isfinite(amp)) throw Error(ErrorKind::overflow, "series_to_matrix: overflow");
      out(p, q) += c * amp;
    }
  }
  return {std::move(out), "series"};
}

}  // namespace pmcs::weyl
