#pragma once

// Orthogonal polynomials and combinatorial coefficients used by the
// ordering expansions and the closed-form moment/normalization sums.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>

#include "pmcs/error.hpp"

namespace pmcs::special {

inline constexpr int kMaxPolynomialDegree = 64;
inline constexpr int kMaxTwoParamDegree = 32;
inline constexpr int kMaxFactorialArg = 128;

/// Polynomial value plus the largest intermediate magnitude seen while
/// evaluating it. A hint much larger than |value| means cancellation.
template <typename T>
struct PolynomialEval {
  T value{};
  double condition_hint = 0.0;
};

/// Signed number stored as log|x| and sign. sign == 0 encodes exact zero
/// (log_magnitude is then -inf).
struct LogCoeff {
  double log_magnitude = 0.0;
  int sign = 1;

  double value() const {
    return sign == 0 ? 0.0 : static_cast<double>(sign) * std::exp(log_magnitude);
  }

  static LogCoeff zero() { return {-std::numeric_limits<double>::infinity(), 0}; }

  static LogCoeff from_value(double x) {
    if (x == 0.0) return zero();
    return {std::log(std::abs(x)), x > 0 ? 1 : -1};
  }

  friend LogCoeff operator*(LogCoeff a, LogCoeff b) {
    if (a.sign == 0 || b.sign == 0) return zero();
    return {a.log_magnitude + b.log_magnitude, a.sign * b.sign};
  }
  friend LogCoeff operator/(LogCoeff a, LogCoeff b) {
    if (b.sign == 0) throw Error(ErrorKind::domain, "LogCoeff division by zero");
    if (a.sign == 0) return zero();
    return {a.log_magnitude - b.log_magnitude, a.sign * b.sign};
  }
};

namespace detail {

inline void check_degree(int n, int cap, const char* what) {
  if (n < 0) throw Error(ErrorKind::domain, std::string(what) + ": negative degree");
  if (n > cap) {
    throw Error(ErrorKind::degree_overflow, std::string(what) + ": degree " + std::to_string(n) +
                                                " exceeds cap " + std::to_string(cap));
  }
}

// log(n!) for n <= 128. Entries up to 20! come from the exact integer product,
// so exp() of them rounds back to n! at float precision.
inline const std::array<double, kMaxFactorialArg + 1>& log_factorial_table() {
  static const std::array<double, kMaxFactorialArg + 1> table = [] {
    std::array<double, kMaxFactorialArg + 1> t{};
    std::uint64_t exact = 1;
    t[0] = 0.0;
    for (int n = 1; n <= kMaxFactorialArg; ++n) {
      if (n <= 20) {
        exact *= static_cast<std::uint64_t>(n);
        t[n] = std::log(static_cast<double>(exact));
      } else {
        t[n] = std::lgamma(static_cast<double>(n) + 1.0);
      }
    }
    return t;
  }();
  return table;
}

template <typename T>
T int_pow(T base, int e) {
  T result(1);
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

}  // namespace detail

inline LogCoeff log_factorial(int n) {
  detail::check_degree(n, kMaxFactorialArg, "log_factorial");
  return {detail::log_factorial_table()[static_cast<std::size_t>(n)], 1};
}

inline LogCoeff log_binomial(int n, int k) {
  detail::check_degree(n, kMaxFactorialArg, "log_binomial");
  if (k < 0 || k > n) return LogCoeff::zero();
  const auto& t = detail::log_factorial_table();
  return {t[static_cast<std::size_t>(n)] - t[static_cast<std::size_t>(k)] -
              t[static_cast<std::size_t>(n - k)],
          1};
}

/// log(x^e) for x >= 0 with the convention 0^0 = 1.
inline double log_pow(double x, int e) {
  if (e == 0) return 0.0;
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  return e * std::log(x);
}

/// Laguerre polynomial L_n(x) (alpha = 0) by the three-term recurrence
/// (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
template <typename T>
PolynomialEval<T> laguerre_eval(int n, T x) {
  detail::check_degree(n, kMaxPolynomialDegree, "laguerre");
  T prev(1);
  if (n == 0) return {prev, 1.0};
  T cur = T(1) - x;
  double hint = std::max(1.0, static_cast<double>(std::abs(cur)));
  for (int k = 1; k < n; ++k) {
    T next = ((T(2 * k + 1) - x) * cur - T(k) * prev) / T(k + 1);
    prev = cur;
    cur = next;
    hint = std::max(hint, static_cast<double>(std::abs(cur)));
  }
  return {cur, hint};
}

template <typename T>
T laguerre(int n, T x) {
  return laguerre_eval(n, x).value;
}

/// Physicists' Hermite polynomial, H_{n+1} = 2x H_n - 2n H_{n-1}.
template <typename T>
PolynomialEval<T> hermite_eval(int n, T x) {
  detail::check_degree(n, kMaxPolynomialDegree, "hermite");
  T prev(1);
  if (n == 0) return {prev, 1.0};
  T cur = T(2) * x;
  double hint = std::max(1.0, static_cast<double>(std::abs(cur)));
  for (int k = 1; k < n; ++k) {
    T next = T(2) * x * cur - T(2 * k) * prev;
    prev = cur;
    cur = next;
    hint = std::max(hint, static_cast<double>(std::abs(cur)));
  }
  return {cur, hint};
}

template <typename T>
T hermite(int n, T x) {
  return hermite_eval(n, x).value;
}

/// P-Hermite polynomials of the isotonic oscillator eigenfunctions:
/// P_0 = 1, P_n = H_n + 4n H_{n-2} + 4n(n-3) H_{n-4} for n >= 3.
/// At n = 3 the last coefficient vanishes and H_{-1} is never touched.
template <typename T>
T p_hermite(int n, T x) {
  if (n == 1 || n == 2) {
    throw Error(ErrorKind::domain,
                "p_hermite: n = " + std::to_string(n) + " is not an allowed quantum number");
  }
  detail::check_degree(n, kMaxPolynomialDegree, "p_hermite");
  if (n == 0) return T(1);
  T value = hermite(n, x) + T(4 * n) * hermite(n - 2, x);
  if (n >= 4) value += T(4 * n * (n - 3)) * hermite(n - 4, x);
  return value;
}

/// Two-parameter Hermite polynomial in the (z, -z*) specialization:
///   H_{m,n}(z,-z*) = m! n! sum_k (-1/2)^k (-z*)^{m-k} z^{n-k} / (k! (m-k)! (n-k)!)
inline PolynomialEval<std::complex<double>> two_param_hermite_eval(int m, int n,
                                                                   std::complex<double> z) {
  detail::check_degree(m, kMaxTwoParamDegree, "two_param_hermite");
  detail::check_degree(n, kMaxTwoParamDegree, "two_param_hermite");
  const std::complex<double> w = -std::conj(z);
  std::complex<double> sum(0.0);
  double hint = 0.0;
  for (int k = 0; k <= std::min(m, n); ++k) {
    const LogCoeff c{log_factorial(m).log_magnitude + log_factorial(n).log_magnitude -
                         log_factorial(k).log_magnitude - log_factorial(m - k).log_magnitude -
                         log_factorial(n - k).log_magnitude - k * std::log(2.0),
                     (k % 2 == 0) ? 1 : -1};
    const std::complex<double> term =
        c.value() * detail::int_pow(w, m - k) * detail::int_pow(z, n - k);
    if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) {
      throw Error(ErrorKind::overflow, "two_param_hermite: term magnitude outside double range");
    }
    hint = std::max(hint, std::abs(term));
    sum += term;
  }
  return {sum, hint};
}

inline std::complex<double> two_param_hermite(int m, int n, std::complex<double> z) {
  return two_param_hermite_eval(m, n, z).value;
}

/// Stirling number of the second kind S(j, i), exact integer recurrence.
inline std::int64_t stirling2(int j, int i) {
  if (j < 0 || i < 0) throw Error(ErrorKind::domain, "stirling2: negative index");
  if (j > 25) throw Error(ErrorKind::degree_overflow, "stirling2: j above 25");
  if (i > j) return 0;
  // row-by-row table, small sizes only
  std::array<std::array<std::int64_t, 26>, 26> s{};
  s[0][0] = 1;
  for (int a = 1; a <= j; ++a) {
    for (int b = 1; b <= a; ++b) s[a][b] = b * s[a - 1][b] + s[a - 1][b - 1];
  }
  return s[j][i];
}

}  // namespace pmcs::special
