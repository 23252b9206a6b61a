#pragma once

// Truncated Fock-space linear algebra. Everything here runs on the logical
// ladder index n = 0, 1, 2, ...; the physical oscillator level is n + 3.
// This is the brute-force reference that every closed form is checked
// against, so it deliberately avoids the ordering expansions.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "pmcs/error.hpp"
#include "pmcs/types.hpp"

namespace pmcs::fock {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxDimension = 256;
inline constexpr double kTailTolerance = 1e-12;

struct TruncationReport {
  int dimension = 0;
  double tail_mass = 0.0;  // normalized mass on the top 10% of levels
  bool converged = false;

  std::string describe() const {
    std::ostringstream os;
    os << "dimension " << dimension << ", tail mass " << tail_mass;
    return os.str();
  }
};

/// Number of levels counted as the "top 10%" of a truncation.
inline int tail_levels(int dimension) { return std::max(1, (dimension + 9) / 10); }

inline TruncationReport truncation_report(const Vector& amplitudes,
                                          double tolerance = kTailTolerance) {
  const int d = static_cast<int>(amplitudes.size());
  const double total = amplitudes.squaredNorm();
  const int t = tail_levels(d);
  const double tail = total > 0.0 ? amplitudes.tail(t).squaredNorm() / total : 0.0;
  return {d, tail, tail < tolerance};
}

inline void check_dimension(int dimension, int minimum, const char* what) {
  if (dimension < minimum || dimension > kMaxDimension) {
    throw Error(ErrorKind::domain, std::string(what) + ": dimension " + std::to_string(dimension) +
                                       " outside [" + std::to_string(minimum) + ", " +
                                       std::to_string(kMaxDimension) + "]");
  }
}

/// Truncated state vector over logical levels 0..D-1.
class FockVector {
 public:
  static constexpr int basis_offset = 3;

  explicit FockVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    check_dimension(dimension(), 4, "FockVector");
    if (!amplitudes_.allFinite()) throw Error(ErrorKind::overflow, "FockVector: non-finite amplitude");
  }

  static FockVector basis(int level, int dimension) {
    check_dimension(dimension, 4, "FockVector::basis");
    if (level < 0 || level >= dimension) throw Error(ErrorKind::domain, "basis level out of range");
    Vector v = Vector::Zero(dimension);
    v(level) = 1.0;
    return FockVector(std::move(v));
  }

  int dimension() const { return static_cast<int>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](int n) const { return amplitudes_(n); }
  double norm_sq() const { return amplitudes_.squaredNorm(); }

  FockVector normalized() const {
    const double n = amplitudes_.norm();
    if (n == 0.0) throw Error(ErrorKind::degenerate_state, "cannot normalize the zero vector");
    return FockVector(amplitudes_ / n);
  }

  /// Copy embedded into a larger (or equal) truncation, zero-padded.
  FockVector padded(int dimension) const {
    if (dimension < this->dimension()) throw Error(ErrorKind::domain, "padded: cannot shrink");
    Vector v = Vector::Zero(dimension);
    v.head(this->dimension()) = amplitudes_;
    return FockVector(std::move(v));
  }

  TruncationReport truncation(double tolerance = kTailTolerance) const {
    return truncation_report(amplitudes_, tolerance);
  }

  static int physical_level(int logical) { return logical + basis_offset; }

 private:
  Vector amplitudes_;
};

struct FockOperator {
  Matrix matrix;
  std::string label;

  int dimension() const { return static_cast<int>(matrix.rows()); }

  FockOperator adjoint() const { return {matrix.adjoint(), label + "^dag"}; }

  FockVector apply(const FockVector& v) const { return FockVector(matrix * v.amplitudes()); }

  friend FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    return {a.matrix * b.matrix, a.label + "*" + b.label};
  }
};

inline FockOperator identity(int dimension) {
  check_dimension(dimension, 2, "identity");
  return {Matrix::Identity(dimension, dimension), "I"};
}

/// <m|a|n> = sqrt(n) delta_{m,n-1}; a^dagger is the conjugate transpose.
inline std::pair<FockOperator, FockOperator> ladder_ops(int dimension) {
  check_dimension(dimension, 2, "ladder_ops");
  Matrix a = Matrix::Zero(dimension, dimension);
  for (int n = 1; n < dimension; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  FockOperator lower{a, "a"};
  FockOperator raise{a.adjoint(), "a^dag"};
  return {std::move(lower), std::move(raise)};
}

inline FockOperator number_op(int dimension) {
  check_dimension(dimension, 2, "number_op");
  Matrix n = Matrix::Zero(dimension, dimension);
  for (int k = 0; k < dimension; ++k) n(k, k) = static_cast<double>(k);
  return {n, "n"};
}

inline FockOperator parity_op(int dimension) {
  check_dimension(dimension, 2, "parity_op");
  Matrix p = Matrix::Zero(dimension, dimension);
  for (int k = 0; k < dimension; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return {p, "parity"};
}

/// Rule-of-thumb truncation: Poisson tail of |zeta|^2 plus N quanta of headroom.
inline int default_dimension(double abs_zeta_sq, int N, int cap = kMaxDimension) {
  const double base = std::ceil(abs_zeta_sq + 10.0 * std::sqrt(abs_zeta_sq + 1.0));
  const double d = base + 4.0 * N + 16.0;
  return static_cast<int>(std::min<double>(d, std::min(cap, kMaxDimension)));
}

/// |zeta> = e^{-|zeta|^2/2} sum zeta^n / sqrt(n!) |n>, truncated at D and renormalized.
inline std::pair<FockVector, TruncationReport> coherent_state(Complex zeta, int dimension,
                                                              double tolerance = kTailTolerance) {
  check_dimension(dimension, 4, "coherent_state");
  Vector c(dimension);
  c(0) = std::exp(-0.5 * std::norm(zeta));
  for (int n = 1; n < dimension; ++n) c(n) = c(n - 1) * zeta / std::sqrt(static_cast<double>(n));
  const auto report = truncation_report(c, tolerance);
  if (!report.converged) {
    throw Error(ErrorKind::truncation, "coherent_state: not converged (" + report.describe() + ")");
  }
  return {FockVector(c / c.norm()), report};
}

inline FockOperator superposed_operator(const ModulationParams& p, int dimension) {
  auto [a, ad] = ladder_ops(dimension);
  return {p.mu * a.matrix + p.nu * ad.matrix, "mu*a+nu*a^dag"};
}

/// (mu a + nu a^dagger)^N v by N matrix-vector products, not normalized.
inline FockVector apply_superposed_power(const ModulationParams& p, const FockVector& v,
                                         double tolerance = kTailTolerance) {
  p.validate();
  const int d = v.dimension();
  if (p.N > d / 4) {
    throw Error(ErrorKind::headroom, "apply_superposed_power: N = " + std::to_string(p.N) +
                                         " needs dimension >= " + std::to_string(4 * p.N));
  }
  const Matrix op = superposed_operator(p, d).matrix;
  Vector w = v.amplitudes();
  for (int k = 0; k < p.N; ++k) {
    w = op * w;
    const auto report = truncation_report(w, tolerance);
    if (!report.converged) {
      throw Error(ErrorKind::truncation,
                  "apply_superposed_power: ladder reached the truncation edge (" +
                      report.describe() + ")");
    }
  }
  return FockVector(std::move(w));
}

/// D(gamma) = exp(gamma a^dagger - gamma* a) by scaling-and-squaring Pade.
inline FockOperator displacement(Complex gamma, int dimension) {
  auto [a, ad] = ladder_ops(dimension);
  const Matrix generator = gamma * ad.matrix - std::conj(gamma) * a.matrix;
  Matrix d = generator.exp();
  if (!d.allFinite()) throw Error(ErrorKind::divergence, "displacement: matrix exponential failed");
  std::ostringstream label;
  label << "D(" << gamma.real() << (gamma.imag() < 0 ? "" : "+") << gamma.imag() << "i)";
  return {std::move(d), label.str()};
}

/// v^dagger M v; v is expected to be normalized.
inline Complex expectation(const FockOperator& op, const FockVector& v) {
  return v.amplitudes().dot(op.matrix * v.amplitudes());
}

/// diag(e^{-lambda n}).
inline FockOperator operator_exp_number(Complex lambda, int dimension) {
  check_dimension(dimension, 2, "operator_exp_number");
  const double max_log = std::log(std::numeric_limits<double>::max()) - 1.0;
  if (-lambda.real() * (dimension - 1) > max_log) {
    throw Error(ErrorKind::overflow, "operator_exp_number: e^{-lambda n} overflows at top level");
  }
  Matrix m = Matrix::Zero(dimension, dimension);
  for (int n = 0; n < dimension; ++n) m(n, n) = std::exp(-lambda * static_cast<double>(n));
  return {std::move(m), "exp(-lambda n)"};
}

/// Tr[|v><v| M] summed level by level; the top 10% of summands must be
/// negligible (relative to the absolute sum) or the trace is rejected.
inline Complex density_and_trace(const FockVector& v, const FockOperator& op,
                                 double tolerance = 1e-10, const std::string& context = "") {
  const Vector mv = op.matrix * v.amplitudes();
  const int d = v.dimension();
  const int t = tail_levels(d);
  Complex total(0.0);
  double scale = 0.0;
  double tail = 0.0;
  for (int n = 0; n < d; ++n) {
    const Complex term = std::conj(v[n]) * mv(n);
    total += term;
    scale += std::abs(term);
    if (n >= d - t) tail += std::abs(term);
  }
  if (!std::isfinite(scale) || tail > tolerance * std::max(scale, 1e-300)) {
    throw Error(ErrorKind::divergence, "density_and_trace: trace summand does not decay" +
                                           (context.empty() ? std::string() : " (" + context + ")"));
  }
  return total;
}

}  // namespace pmcs::fock
