#include <gtest/gtest.h>

#include <cmath>

#include "pmcs/weyl.hpp"

namespace fock = pmcs::fock;
namespace weyl = pmcs::weyl;
using pmcs::Complex;

namespace {

fock::Matrix dense_power(const fock::Matrix& m, int n) {
  fock::Matrix out = fock::Matrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < n; ++i) out = out * m;
  return out;
}

void expect_coeff(const weyl::NormalOrderedSeries& s, int m, int n, Complex c) {
  EXPECT_LE(std::abs(s.coefficient(m, n) - c), 1e-14) << "(" << m << "," << n << ")";
}

}  // namespace

TEST(SuperposedExpansion, Examples) {
  const auto s0 = weyl::expand_superposed_power({Complex(0.3), Complex(0.7), 0});
  EXPECT_EQ(s0.size(), 1u);
  expect_coeff(s0, 0, 0, 1.0);

  const Complex mu(0.2, 0.5), nu(-1.0, 0.3);
  const auto s1 = weyl::expand_superposed_power({mu, nu, 1});
  EXPECT_EQ(s1.size(), 2u);
  expect_coeff(s1, 1, 0, nu);
  expect_coeff(s1, 0, 1, mu);

  const auto s2 = weyl::expand_superposed_power({Complex(1.0), Complex(1.0), 2});
  EXPECT_EQ(s2.size(), 4u);
  expect_coeff(s2, 2, 0, 1.0);
  expect_coeff(s2, 1, 1, 2.0);
  expect_coeff(s2, 0, 2, 1.0);
  expect_coeff(s2, 0, 0, 1.0);
}

TEST(SuperposedExpansion, PhotonSubtractedNoDivision) {
  const auto s = weyl::expand_superposed_power({Complex(0.5, 0.5), Complex(0.0), 4});
  EXPECT_EQ(s.size(), 1u);
  expect_coeff(s, 0, 4, std::pow(Complex(0.5, 0.5), 4));
}

TEST(SuperposedExpansion, RejectsBadPower) {
  EXPECT_THROW(weyl::expand_superposed_power({Complex(1.0), Complex(1.0), 33}), pmcs::Error);
  EXPECT_THROW(weyl::expand_superposed_power({Complex(1.0), Complex(1.0), -1}), pmcs::Error);
}

TEST(SuperposedExpansion, SymbolMatchesCoherentElement) {
  // <alpha| (mu a + nu a^dag)^N |alpha> equals the normal-ordered symbol
  const pmcs::ModulationParams p{Complex(0.3, -0.2), Complex(0.5, 0.4), 4};
  const Complex alpha(0.7, 0.3);
  const int d = 60;
  const auto c = fock::coherent_state(alpha, d).first;
  const fock::Matrix op = dense_power(fock::superposed_operator(p, d).matrix, p.N);
  const Complex dense = c.amplitudes().dot(op * c.amplitudes());
  EXPECT_LE(std::abs(weyl::expand_superposed_power(p).symbol(alpha) - dense), 1e-10);
}

TEST(SuperposedExpansion, AdjointPairing) {
  // ((mu a + nu a^dag)^N)^dag = (nu* a + mu* a^dag)^N
  const int d = 40;
  for (int n = 1; n <= 5; ++n) {
    const Complex mu(0.4, -0.3), nu(-0.2, 0.9);
    const auto m1 = weyl::series_to_matrix(weyl::expand_superposed_power({mu, nu, n}), d).matrix;
    const auto m2 = weyl::series_to_matrix(
                        weyl::expand_superposed_power({std::conj(nu), std::conj(mu), n}), d)
                        .matrix;
    EXPECT_LE((m1.adjoint() - m2).topLeftCorner(d / 2, d / 2).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(NumberPower, Examples) {
  const auto j1 = weyl::expand_number_power(1);
  EXPECT_EQ(j1.size(), 1u);
  expect_coeff(j1, 1, 1, 1.0);
  const auto j2 = weyl::expand_number_power(2);
  EXPECT_EQ(j2.size(), 2u);
  expect_coeff(j2, 1, 1, 1.0);
  expect_coeff(j2, 2, 2, 1.0);
  const auto j3 = weyl::expand_number_power(3);
  expect_coeff(j3, 1, 1, 1.0);
  expect_coeff(j3, 2, 2, 3.0);
  expect_coeff(j3, 3, 3, 1.0);
  EXPECT_THROW(weyl::expand_number_power(0), pmcs::Error);
  EXPECT_THROW(weyl::expand_number_power(9), pmcs::Error);
}

TEST(NumberPower, ExactDiagonal) {
  const int d = 64;
  for (int j = 1; j <= 8; ++j) {
    const auto m = weyl::series_to_matrix(weyl::expand_number_power(j), d).matrix;
    for (int n = 0; n <= 20; ++n) {
      EXPECT_EQ(m(n, n), Complex(std::pow(static_cast<double>(n), j)));
    }
    EXPECT_EQ((m - fock::Matrix(m.diagonal().asDiagonal())).norm(), 0.0);
  }
}

TEST(ExpNumber, Scalars) {
  const auto zero = weyl::expand_exp_number(Complex(0.0));
  EXPECT_LE(std::abs(zero.prefactor - 1.0), 1e-15);
  EXPECT_LE(std::abs(zero.exponent_coeff), 1e-15);
  const auto ln2 = weyl::expand_exp_number(Complex(std::log(2.0)));
  EXPECT_LE(std::abs(ln2.prefactor - 4.0 / 3.0), 1e-15);
  EXPECT_LE(std::abs(ln2.exponent_coeff + 2.0 / 3.0), 1e-15);
}

TEST(ExpNumber, Pole) {
  try {
    weyl::expand_exp_number(Complex(0.0, M_PI));
    FAIL();
  } catch (const pmcs::Error& e) {
    EXPECT_EQ(e.kind(), pmcs::ErrorKind::domain);
  }
}

TEST(ExpNumber, NormalFormIsGeometric) {
  // P' = 1 and c' = e^{-lambda} - 1 after reordering
  for (Complex lambda : {Complex(std::log(2.0)), Complex(1.0, 0.3), Complex(-0.4, 2.0)}) {
    const auto n = weyl::weyl_gaussian_to_normal(weyl::expand_exp_number(lambda));
    EXPECT_LE(std::abs(n.prefactor - 1.0), 1e-14);
    EXPECT_LE(std::abs(n.exponent_coeff - (std::exp(-lambda) - 1.0)), 1e-14);
  }
}

TEST(ExpNumber, CoherentElementsAgainstDense) {
  const int d = 64;
  for (Complex lambda : {Complex(std::log(2.0)), Complex(1.0, 0.3)}) {
    const auto dense = fock::operator_exp_number(lambda, d).matrix;
    for (Complex a : {Complex(0.0), Complex(1.0, -0.5), Complex(-1.5, 1.0)}) {
      for (Complex b : {Complex(0.2, 0.2), Complex(2.0, 0.0)}) {
        const auto va = fock::coherent_state(a, d).first.amplitudes();
        const auto vb = fock::coherent_state(b, d).first.amplitudes();
        const Complex ref = va.dot(dense * vb);
        EXPECT_LE(std::abs(weyl::exp_number_coherent_element(lambda, a, b) - ref),
                  1e-9 * std::abs(ref));
      }
    }
  }
}

TEST(SeriesToMatrix, Examples) {
  weyl::NormalOrderedSeries constant;
  constant.add(0, 0, Complex(2.5, -1.0));
  const int d = 16;
  EXPECT_EQ((weyl::series_to_matrix(constant, d).matrix -
             Complex(2.5, -1.0) * fock::Matrix::Identity(d, d))
                .norm(),
            0.0);

  const auto s = weyl::expand_superposed_power({Complex(1.0), Complex(1.0), 2});
  const auto rebuilt = weyl::series_to_matrix(s, 32).matrix;
  const auto dense = dense_power(fock::superposed_operator({Complex(1.0), Complex(1.0), 2}, 32).matrix, 2);
  EXPECT_LE((rebuilt - dense).topLeftCorner(16, 16).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SeriesToMatrix, Headroom) {
  const auto s = weyl::expand_superposed_power({Complex(1.0), Complex(1.0), 9});
  try {
    weyl::series_to_matrix(s, 16);
    FAIL();
  } catch (const pmcs::Error& e) {
    EXPECT_EQ(e.kind(), pmcs::ErrorKind::headroom);
  }
  weyl::NormalOrderedSeries bad;
  EXPECT_THROW(bad.add(-1, 0, 1.0), pmcs::Error);
}
