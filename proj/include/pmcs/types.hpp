#pragma once

#include <complex>
#include <string>

#include "pmcs/error.hpp"

namespace pmcs {

using Complex = std::complex<double>;

inline constexpr int kMaxSuperposedPower = 32;

/// Superposed operator (mu a + nu a^dagger)^N.
struct ModulationParams {
  Complex mu{0.0, 0.0};
  Complex nu{1.0, 0.0};
  int N = 0;

  void validate() const {
    if (N < 0) throw Error(ErrorKind::domain, "ModulationParams: N must be nonnegative");
    if (N > kMaxSuperposedPower) {
      throw Error(ErrorKind::degree_overflow,
                  "ModulationParams: N = " + std::to_string(N) + " exceeds " +
                      std::to_string(kMaxSuperposedPower));
    }
    if (N > 0 && mu == Complex(0.0) && nu == Complex(0.0)) {
      throw Error(ErrorKind::domain, "ModulationParams: mu and nu both zero with N > 0");
    }
  }

  bool photon_added() const { return mu == Complex(0.0); }
  bool photon_subtracted() const { return nu == Complex(0.0); }
  /// Regimes where the diagonal-only closed forms are exact.
  bool exact_regime() const { return N == 0 || photon_added() || photon_subtracted(); }
};

}  // namespace pmcs
