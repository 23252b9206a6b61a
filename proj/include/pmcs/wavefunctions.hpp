#pragma once

// Position-space layer of the generalized isotonic oscillator
//   V(x) = x^2 + 8 (2x^2 - 1) / (2x^2 + 1)^2,
// eigenfunctions psi_n = N_n P_n(x) e^{-x^2/2} / (1 + 2x^2), n = 0, 3, 4, ...
// with E_n = n - 3/2. Units: hbar and mass absorbed so that the Hamiltonian
// is H = (1/2)(-d^2/dx^2 + V); this is the convention under which the
// listed eigenfunctions have zero residual.

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pmcs/error.hpp"
#include "pmcs/special_functions.hpp"

namespace pmcs::wavefn {

struct EigenState {
  int n_physical = 0;
  double energy = 0.0;
  double norm_const = 0.0;
};

inline bool is_valid_level(int n) { return n == 0 || n >= 3; }

inline void check_level(int n) {
  if (!is_valid_level(n)) {
    throw Error(ErrorKind::domain, "isotonic oscillator level " + std::to_string(n) +
                                       " is not in {0, 3, 4, ...}");
  }
  special::detail::check_degree(n, special::kMaxPolynomialDegree, "eigenstate");
}

inline double energy(int n) {
  check_level(n);
  return n - 1.5;
}

/// N_n = [(n-1)(n-2) / (2^n n! sqrt(pi))]^{1/2}
inline double norm_const(int n) {
  check_level(n);
  const double log_denominator = n * std::log(2.0) + special::log_factorial(n).log_magnitude +
                                 0.5 * std::log(std::numbers::pi);
  return std::sqrt((n - 1.0) * (n - 2.0) * std::exp(-log_denominator));
}

inline EigenState eigenstate(int n) { return {n, energy(n), norm_const(n)}; }

inline double potential(double x) {
  const double x2 = x * x;
  const double d = 2.0 * x2 + 1.0;
  return x2 + 8.0 * (2.0 * x2 - 1.0) / (d * d);
}

inline double eigenfunction(int n, double x) {
  const double nc = norm_const(n);
  return nc * special::p_hermite(n, x) * std::exp(-0.5 * x * x) / (1.0 + 2.0 * x * x);
}

struct QuadratureSpec {
  double half_width = 0.0;  // <= 0 picks max(8, sqrt(2 n_max) + 4)
  int panels = 64;
};

inline double default_half_width(int n_max) {
  return std::max(8.0, std::sqrt(2.0 * n_max) + 4.0);
}

/// Composite 20-point Gauss-Legendre over [-L, L] with the given panel count.
template <typename F>
double integrate(F&& f, double half_width, int panels) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  const double h = 2.0 * half_width / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = -half_width + p * h;
    total += rule::integrate(f, lo, lo + h);
  }
  return total;
}

/// \int psi_{n1} psi_{n2} dx. Rejects the result if doubling the panel count
/// moves it by more than 1e-8.
inline double orthonormality_check(int n1, int n2, QuadratureSpec spec = {}) {
  check_level(n1);
  check_level(n2);
  const double minimum = default_half_width(std::max(n1, n2));
  if (spec.half_width <= 0.0) spec.half_width = minimum;
  if (spec.half_width < minimum) {
    throw Error(ErrorKind::domain, "orthonormality_check: range does not cover the eigenfunctions");
  }
  auto integrand = [=](double x) { return eigenfunction(n1, x) * eigenfunction(n2, x); };
  const double coarse = integrate(integrand, spec.half_width, spec.panels);
  const double fine = integrate(integrand, spec.half_width, 2 * spec.panels);
  if (std::abs(fine - coarse) > 1e-8) {
    throw Error(ErrorKind::truncation, "orthonormality_check: quadrature not resolved");
  }
  return fine;
}

/// ||(H - E_n) psi_n|| / ||psi_n|| on a uniform grid with central differences.
inline double schrodinger_residual_ratio(int n, double h = 1e-3, double half_width = 0.0) {
  check_level(n);
  if (half_width <= 0.0) half_width = default_half_width(n);
  const int points = static_cast<int>(std::floor(2.0 * half_width / h)) + 1;
  const double e = energy(n);
  double res_sq = 0.0;
  double psi_sq = 0.0;
  double prev = eigenfunction(n, -half_width);
  double cur = eigenfunction(n, -half_width + h);
  for (int i = 1; i + 1 < points; ++i) {
    const double x = -half_width + i * h;
    const double next = eigenfunction(n, x + h);
    const double second = (next - 2.0 * cur + prev) / (h * h);
    const double r = 0.5 * (-second + potential(x) * cur) - e * cur;
    res_sq += r * r;
    psi_sq += cur * cur;
    prev = cur;
    cur = next;
  }
  return std::sqrt(res_sq / psi_sq);
}

}  // namespace pmcs::wavefn
