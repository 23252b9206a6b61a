#pragma once

// Photon-modulated coherent states |N, zeta> ~ (mu a + nu a^dagger)^N |zeta>.
// The state vector always comes from the Fock oracle; the closed-form
// normalization is carried alongside so the two can be compared.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "pmcs/error.hpp"
#include "pmcs/fock.hpp"
#include "pmcs/special_functions.hpp"
#include "pmcs/types.hpp"

namespace pmcs::states {

namespace detail {

/// Sum over the (k, l) grid shared by all the diagonal-only closed forms:
///   sum_k sum_l W(k,l) * f(k,l),
///   W(k,l) = |mu|^{2k} |nu|^{2(N-k)} (N!)^2 (1/4)^l / (l! (k-l)! (N-k-l)!)^2.
/// f returns {log_extra, factor}; each term is exp(log W + log_extra) * factor.
template <typename TermFn>
double diagonal_sum(const ModulationParams& p, TermFn&& f) {
  p.validate();
  using special::log_factorial;
  const int N = p.N;
  const double abs_mu = std::abs(p.mu);
  const double abs_nu = std::abs(p.nu);
  double total = 0.0;
  for (int k = 0; k <= N; ++k) {
    const double log_mu_nu = special::log_pow(abs_mu, 2 * k) + special::log_pow(abs_nu, 2 * (N - k));
    if (std::isinf(log_mu_nu)) continue;
    for (int l = 0; l <= std::min(N - k, k); ++l) {
      const double log_w = log_mu_nu + 2.0 * log_factorial(N).log_magnitude - l * std::log(4.0) -
                           2.0 * (log_factorial(l).log_magnitude +
                                  log_factorial(k - l).log_magnitude +
                                  log_factorial(N - k - l).log_magnitude);
      const auto [log_extra, factor] = f(k, l);
      if (factor == 0.0 || std::isinf(log_extra)) continue;
      const double term = std::exp(log_w + log_extra) * factor;
      if (!std::isfinite(term)) {
        throw Error(ErrorKind::overflow, "closed-form sum term outside double range");
      }
      total += term;
    }
  }
  return total;
}

}  // namespace detail

/// Closed-form 1/Norm^2:
///   |nu|^{2N} (N!)^2 sum_k (|mu|/|nu|)^{2k} sum_l (1/4)^l |zeta|^{2(k-l)}
///       (N-k-l)! L_{N-k-l}(-|zeta|^2) / (l! (k-l)! (N-k-l)!)^2
/// Only the k = k' (diagonal) terms appear, so this is exact for mu = 0,
/// nu = 0 or N = 0 and differs from the true norm otherwise.
inline double paper_norm_sq(const ModulationParams& p, Complex zeta) {
  const double r = std::abs(zeta);
  const double r2 = r * r;
  return detail::diagonal_sum(p, [&](int k, int l) {
    const int d = p.N - k - l;
    return std::pair<double, double>{
        special::log_pow(r, 2 * (k - l)) + special::log_factorial(d).log_magnitude,
        special::laguerre(d, -r2)};
  });
}

struct PMCState {
  ModulationParams params;
  Complex zeta;
  fock::FockVector vector;     // normalized
  double norm_sq_paper = 0.0;  // closed-form 1/Norm^2
  double norm_sq_oracle = 0.0; // <v|v> before normalization
  double discrepancy = 0.0;    // |paper - oracle| / oracle
  fock::TruncationReport truncation;

  int dimension() const { return vector.dimension(); }
};

/// dimension <= 0 selects fock::default_dimension.
inline PMCState build_state(const ModulationParams& p, Complex zeta, int dimension = 0) {
  p.validate();
  if (dimension <= 0) dimension = fock::default_dimension(std::norm(zeta), p.N);
  auto [coherent, report] = fock::coherent_state(zeta, dimension);
  const fock::FockVector raw = fock::apply_superposed_power(p, coherent);
  const double oracle = raw.norm_sq();
  if (!(oracle > std::numeric_limits<double>::min())) {
    throw Error(ErrorKind::degenerate_state,
                "build_state: (mu a + nu a^dag)^N annihilates the input coherent state");
  }
  const double paper = paper_norm_sq(p, zeta);
  fock::FockVector normalized = raw.normalized();
  const auto truncation = normalized.truncation();
  return PMCState{p,
                  zeta,
                  std::move(normalized),
                  paper,
                  oracle,
                  std::abs(paper - oracle) / oracle,
                  truncation};
}

struct NormComparison {
  double paper = 0.0;
  double oracle = 0.0;
  double rel_gap = 0.0;
  bool exact_regime = false;
};

inline NormComparison compare_norms(const ModulationParams& p, Complex zeta, int dimension = 0) {
  const auto s = build_state(p, zeta, dimension);
  return {s.norm_sq_paper, s.norm_sq_oracle, s.discrepancy, p.exact_regime()};
}

}  // namespace pmcs::states
