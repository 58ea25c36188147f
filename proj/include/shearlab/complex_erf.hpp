#pragma once

#include <complex>

namespace shearlab {

/// Faddeeva function w(z) = e^{-z^2} erfc(-iz) for Im(z) >= 0.
std::complex<double> faddeeva_w(std::complex<double> z);

/// erf for complex argument (needed on the short complex legs of the
/// Rayleigh solution march; accurate to ~1e-13 in the strip |Im z| <~ 6).
std::complex<double> complex_erf(std::complex<double> z);

}  // namespace shearlab
