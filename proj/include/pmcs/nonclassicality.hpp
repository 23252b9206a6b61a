#pragma once

// Non-classicality diagnostics of photon-modulated coherent states:
// moment matrices and A3, quadrature squeezing identities, the
// s-parameterized quasi-probability F(gamma, s), and fidelity against the
// input coherent state. Each quantity has an oracle path (dense Fock
// algebra on the state vector) and, where a closed form exists, a
// formula path evaluated literally so the two can be compared.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "pmcs/error.hpp"
#include "pmcs/fock.hpp"
#include "pmcs/special_functions.hpp"
#include "pmcs/states.hpp"
#include "pmcs/types.hpp"

namespace pmcs::nonclassical {

enum class Source { paper_formula, oracle };

/// m_j = <a^dag^j a^j>, mu_j = <(a^dag a)^j>, j = 1..4 (stored at index j-1).
struct MomentSet {
  std::array<double, 4> m{};
  std::array<double, 4> mu{};
  Source source = Source::oracle;
};

struct A3Result {
  double det_m = 0.0;
  double det_mu = 0.0;
  double a3 = 0.0;
};

struct QuasiProbParams {
  Complex gamma;
  double s = 0.0;
};

// ---------------------------------------------------------------- moments

inline MomentSet moments_oracle(const fock::FockVector& v) {
  const int d = v.dimension();
  const auto report = v.truncation();
  if (!report.converged) {
    throw Error(ErrorKind::headroom, "moments_oracle: state too close to truncation edge (" +
                                         report.describe() + ")");
  }
  auto [a, ad] = fock::ladder_ops(d);
  const auto n = fock::number_op(d);
  const fock::FockVector unit = v.normalized();
  MomentSet out;
  out.source = Source::oracle;
  fock::Vector lowered = unit.amplitudes();
  fock::Vector counted = unit.amplitudes();
  for (int j = 0; j < 4; ++j) {
    lowered = a.matrix * lowered;  // a^j v, so m_j = |a^j v|^2
    counted = n.matrix * counted;
    out.m[static_cast<std::size_t>(j)] = lowered.squaredNorm();
    out.mu[static_cast<std::size_t>(j)] = unit.amplitudes().dot(counted).real();
  }
  return out;
}

inline MomentSet moments_oracle(const states::PMCState& state) {
  return moments_oracle(state.vector);
}

/// Closed-form moments, evaluated literally: m_j carries
/// (N-k-l+j)! L_{N-k-l+j}(-|zeta|^2) and mu_j the Stirling-weighted sum of
/// the same with i in place of j.
inline MomentSet moments_paper(const ModulationParams& p, Complex zeta) {
  const double norm_sq = states::paper_norm_sq(p, zeta);
  const double r = std::abs(zeta);
  const double r2 = r * r;
  auto shifted = [&](int shift) {
    return states::detail::diagonal_sum(p, [&](int k, int l) {
      const int d = p.N - k - l + shift;
      special::detail::check_degree(d, special::kMaxPolynomialDegree, "moments_paper");
      return std::pair<double, double>{
          special::log_pow(r, 2 * (k - l)) + special::log_factorial(d).log_magnitude,
          special::laguerre(d, -r2)};
    }) / norm_sq;
  };
  MomentSet out;
  out.source = Source::paper_formula;
  std::array<double, 5> by_shift{};
  for (int i = 0; i <= 4; ++i) by_shift[static_cast<std::size_t>(i)] = shifted(i);
  for (int j = 1; j <= 4; ++j) {
    out.m[static_cast<std::size_t>(j - 1)] = by_shift[static_cast<std::size_t>(j)];
    double mu = 0.0;
    for (int i = 0; i <= j; ++i) {
      double weight = 0.0;
      for (int r_idx = 0; r_idx <= i; ++r_idx) {
        weight += ((r_idx % 2 == 0) ? 1.0 : -1.0) * std::pow(static_cast<double>(i - r_idx), j) /
                  (std::tgamma(r_idx + 1.0) * std::tgamma(i - r_idx + 1.0));
      }
      mu += weight * by_shift[static_cast<std::size_t>(i)];
    }
    out.mu[static_cast<std::size_t>(j - 1)] = mu;
  }
  return out;
}

// --------------------------------------------------------------------- A3

inline double det3(const std::array<std::array<double, 3>, 3>& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

/// Hankel moment matrix [[1, x1, x2], [x1, x2, x3], [x2, x3, x4]].
inline std::array<std::array<double, 3>, 3> moment_matrix(const std::array<double, 4>& x) {
  return {{{1.0, x[0], x[1]}, {x[0], x[1], x[2]}, {x[1], x[2], x[3]}}};
}

/// A3 = det m / (det mu - det m); in (-1, 0) for non-classical light.
inline A3Result a3(const MomentSet& ms) {
  A3Result r;
  r.det_m = det3(moment_matrix(ms.m));
  r.det_mu = det3(moment_matrix(ms.mu));
  const double denom = r.det_mu - r.det_m;
  if (!(std::abs(denom) > 1e-12)) {
    throw Error(ErrorKind::undefined_ratio, "a3: det mu - det m vanishes (det m = " +
                                                std::to_string(r.det_m) +
                                                ", det mu = " + std::to_string(r.det_mu) + ")");
  }
  r.a3 = r.det_m / denom;
  return r;
}

// -------------------------------------------------------------- squeezing

struct SqueezingResult {
  double I1 = 0.0;     // < 0 means squeezing in X
  double I2 = 0.0;     // < 0 means squeezing in Y
  double var_x = 0.0;  // (Delta X)^2, X = (a^dag + a)/sqrt 2
  double var_y = 0.0;  // (Delta Y)^2, Y = i (a^dag - a)/sqrt 2
};

inline SqueezingResult squeezing_identities(const fock::FockVector& v) {
  const int d = v.dimension();
  auto [a, ad] = fock::ladder_ops(d);
  const fock::FockVector u = v.normalized();
  const Complex ea = fock::expectation(a, u);
  const Complex ead = fock::expectation(ad, u);
  const Complex ea2 = fock::expectation(a * a, u);
  const Complex ead2 = fock::expectation(ad * ad, u);
  const Complex en = fock::expectation(ad * a, u);

  SqueezingResult out;
  out.I1 = (ea2 + ead2 - ea * ea - ead * ead - 2.0 * ea * ead + 2.0 * en).real();
  out.I2 = (-ea2 - ead2 + ea * ea + ead * ead - 2.0 * ea * ead + 2.0 * en).real();

  // variances straight from the quadrature matrices
  const double root_half = std::sqrt(0.5);
  const fock::FockOperator x{root_half * (ad.matrix + a.matrix), "X"};
  const fock::FockOperator y{Complex(0.0, root_half) * (ad.matrix - a.matrix), "Y"};
  const double mx = fock::expectation(x, u).real();
  const double my = fock::expectation(y, u).real();
  out.var_x = fock::expectation(x * x, u).real() - mx * mx;
  out.var_y = fock::expectation(y * y, u).real() - my * my;
  return out;
}

inline SqueezingResult squeezing_identities(const states::PMCState& state) {
  return squeezing_identities(state.vector);
}

inline double uncertainty_product(const fock::FockVector& v) {
  const auto s = squeezing_identities(v);
  return s.var_x * s.var_y;
}

inline double uncertainty_product(const states::PMCState& state) {
  return uncertainty_product(state.vector);
}

// --------------------------------------------------------- quasi-probability

namespace detail {

inline void check_ordering_parameter(double s) {
  if (s == 1.0) {
    throw Error(ErrorKind::domain, "quasi-probability: s = 1 (P function) is not representable");
  }
}

/// (2/(1-s)) sum_n w^n |c_n|^2 with w = (s+1)/(s-1); c is normalized by the
/// caller. The top 10% of summands must be negligible.
inline double weighted_number_sum(const fock::Vector& c, double s) {
  const double w = (s + 1.0) / (s - 1.0);
  const int d = static_cast<int>(c.size());
  const int t = fock::tail_levels(d);
  double total = 0.0;
  double scale = 0.0;
  double tail = 0.0;
  double weight = 1.0;
  for (int n = 0; n < d; ++n) {
    const double term = weight * std::norm(c(n));
    total += term;
    scale += std::abs(term);
    if (n >= d - t) tail += std::abs(term);
    weight *= w;
  }
  if (!std::isfinite(scale) || tail > 1e-10 * std::max(scale, 1e-300)) {
    throw Error(ErrorKind::divergence, "quasi-probability trace does not converge at s = " +
                                           std::to_string(s) + ", dimension " + std::to_string(d));
  }
  return 2.0 / (1.0 - s) * total;
}

}  // namespace detail

/// F(gamma, s) = Tr[rho (2/(1-s)) D(gamma) ((s+1)/(s-1))^{a^dag a} D^dag(gamma)]
/// with the explicit displacement matrix. Convention: F(gamma, -1) =
/// |<gamma|psi>|^2, so a coherent state peaks at 1 and
/// (1/pi) \int F(gamma, -1) d^2 gamma = 1. Reliable for s <= 0, where the
/// number weight is bounded by one.
inline double quasiprob_oracle(const fock::FockVector& v, const QuasiProbParams& q,
                               int dimension = 0) {
  detail::check_ordering_parameter(q.s);
  if (dimension <= 0) {
    const double g = std::abs(q.gamma);
    dimension = std::min(fock::kMaxDimension,
                         v.dimension() + static_cast<int>(std::ceil(2.0 * (g + 1.0) * (g + 1.0))) + 20);
  }
  const fock::FockVector rho_vec = v.normalized().padded(std::max(dimension, v.dimension()));
  const int d = rho_vec.dimension();
  const auto disp = fock::displacement(q.gamma, d);
  const double w = (q.s + 1.0) / (q.s - 1.0);
  fock::Matrix weights = fock::Matrix::Zero(d, d);
  double wn = 1.0;
  for (int n = 0; n < d; ++n) {
    weights(n, n) = wn;
    wn *= w;
  }
  const fock::FockOperator t{(2.0 / (1.0 - q.s)) * disp.matrix * weights * disp.matrix.adjoint(),
                             "T(gamma,s)"};
  // the displaced state must sit inside the accurate part of the truncation
  const fock::Vector shifted = disp.matrix.adjoint() * rho_vec.amplitudes();
  const auto report = fock::truncation_report(shifted);
  if (!report.converged) {
    throw Error(ErrorKind::truncation, "quasiprob_oracle: displaced state not contained (" +
                                           report.describe() + ")");
  }
  const Complex f = fock::density_and_trace(rho_vec, t, 1e-10, "s = " + std::to_string(q.s));
  if (std::abs(f.imag()) > 1e-9 * std::max(1.0, std::abs(f))) {
    throw Error(ErrorKind::divergence, "quasiprob_oracle: trace has a non-negligible imaginary part");
  }
  return f.real();
}

/// Truncation for the photon-modulated route: Poisson tail of the weighted
/// displaced amplitude |zeta - gamma|^2 max(1, |(s+1)/(s-1)|) plus N quanta.
inline int quasi_dimension(const states::PMCState& state, const QuasiProbParams& q,
                           int cap = fock::kMaxDimension) {
  const double growth = std::max(1.0, std::abs((q.s + 1.0) / (q.s - 1.0)));
  return fock::default_dimension(growth * std::norm(state.zeta - q.gamma) + state.params.N,
                                 state.params.N, cap);
}

/// Same quantity for a photon-modulated state, using
///   D^dag(gamma) (mu a + nu a^dag)^N |zeta> ~ (mu (a+gamma) + nu (a^dag+gamma*))^N |zeta - gamma>
/// so every amplitude keeps relative accuracy. Needed for s > 0, where the
/// number weight ((s+1)/(s-1))^n grows geometrically.
inline double quasiprob_oracle(const states::PMCState& state, const QuasiProbParams& q,
                               int dimension = 0) {
  detail::check_ordering_parameter(q.s);
  const auto& p = state.params;
  const Complex beta = state.zeta - q.gamma;
  if (dimension <= 0) dimension = quasi_dimension(state, q);
  auto [coherent, report] = fock::coherent_state(beta, dimension);
  auto [a, ad] = fock::ladder_ops(dimension);
  const Complex shift = p.mu * q.gamma + p.nu * std::conj(q.gamma);
  const fock::Matrix op = p.mu * a.matrix + p.nu * ad.matrix +
                          shift * fock::Matrix::Identity(dimension, dimension);
  fock::Vector c = coherent.amplitudes();
  for (int k = 0; k < p.N; ++k) c = op * c;
  const double norm = c.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::degenerate_state, "quasiprob_oracle: zero vector");
  return detail::weighted_number_sum(c / norm, q.s);
}

/// Closed form evaluated literally: prefactor 2 Norm^2 |nu|^{2N} (N!)^2 / (pi^2 (1-s)),
/// Gaussian exp[-((2+s)/s)(|g|^2+|z|^2) + ((s+1)/s)(g* z + g z*)], and the
/// diagonal (k, l) sum with ((s-2)/s)^{N-k-l} L_{N-k-l}[...].
inline double quasiprob_paper(const ModulationParams& p, Complex zeta, const QuasiProbParams& q) {
  const double s = q.s;
  if (s == 0.0 || s == 1.0 || s == -2.0) {
    throw Error(ErrorKind::domain,
                "quasiprob_paper: closed form undefined at s = " + std::to_string(s));
  }
  const double norm_sq = states::paper_norm_sq(p, zeta);
  const double g2 = std::norm(q.gamma);
  const double z2 = std::norm(zeta);
  const double cross = 2.0 * (std::conj(q.gamma) * zeta).real();
  const double gaussian = std::exp(-((2.0 + s) / s) * (g2 + z2) + ((s + 1.0) / s) * cross);
  const double lag_arg = 2.0 * g2 / (s + 2.0) - ((2.0 + s) / s) * g2 + ((s + 1.0) / s) * cross;
  const double ratio = (s - 2.0) / s;
  const double r = std::abs(zeta);
  const double sum = states::detail::diagonal_sum(p, [&](int k, int l) {
    const int d = p.N - k - l;
    return std::pair<double, double>{
        special::log_pow(r, 2 * (k - l)) + special::log_factorial(d).log_magnitude,
        std::pow(ratio, d) * special::laguerre(d, lag_arg)};
  });
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return 2.0 / (norm_sq * pi2 * (1.0 - s)) * gaussian * sum;
}

// --------------------------------------------------------------- fidelity

/// Closed form Norm^2 |nu|^{2N} (N!)^2 sum_k (|mu|/|nu|)^{2k} sum_l (1/4)^l
/// |zeta|^{2(N-2l)} / (l! (k-l)! (N-k-l)!)^2.
inline double fidelity_paper(const ModulationParams& p, Complex zeta) {
  const double norm_sq = states::paper_norm_sq(p, zeta);
  const double r = std::abs(zeta);
  return states::detail::diagonal_sum(p, [&](int, int l) {
           return std::pair<double, double>{special::log_pow(r, 2 * (p.N - 2 * l)), 1.0};
         }) /
         norm_sq;
}

/// |<zeta|N, zeta>|^2 in the truncated basis.
inline double fidelity_oracle(const fock::FockVector& v, Complex zeta) {
  auto [coherent, report] = fock::coherent_state(zeta, v.dimension());
  return std::norm(coherent.amplitudes().dot(v.normalized().amplitudes()));
}

inline double fidelity_oracle(const states::PMCState& state) {
  return fidelity_oracle(state.vector, state.zeta);
}

}  // namespace pmcs::nonclassical
