#include "shearlab/complex_erf.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

namespace shearlab {

namespace {
using cd = std::complex<double>;
constexpr double kSqrtPi = 1.7724538509055160273;

// Weideman rational approximation of the Faddeeva function (SIAM Rev. 36
// (1994) 185). Coefficients computed once by the direct Fourier sum.
constexpr int kN = 48;
double weideman_L;
std::vector<double> weideman_a;
std::once_flag init_flag;

void init_coeffs() {
    const int M = 2 * kN;
    const int M2 = 2 * M;
    weideman_L = std::sqrt(kN / std::numbers::sqrt2);
    // f(theta_k) = (L^2 + t^2) e^{-t^2}, t = L tan(theta/2), theta = k pi / M
    std::vector<double> f(M2, 0.0);
    for (int k = -M + 1; k <= M - 1; ++k) {
        const double theta = k * std::numbers::pi / M;
        const double t = weideman_L * std::tan(0.5 * theta);
        const double val = (weideman_L * weideman_L + t * t) * std::exp(-t * t);
        f[(k + M2) % M2] = val;  // fftshift packing: index k mod M2
    }
    // a_j = (1/M2) sum_m f[m] cos(pi j m / M): real DFT coefficients
    weideman_a.resize(kN);
    for (int j = 1; j <= kN; ++j) {
        double acc = 0.0;
        for (int m = 0; m < M2; ++m)
            acc += f[m] * std::cos(std::numbers::pi * j * m / M);
        weideman_a[j - 1] = acc / M2;
    }
}
}  // namespace

std::complex<double> faddeeva_w(std::complex<double> z) {
    std::call_once(init_flag, init_coeffs);
    if (z.imag() < 0.0) {
        // w(-z) = 2 e^{-z^2} - w(z)
        const cd zz = -z;
        return 2.0 * std::exp(-z * z) - faddeeva_w(zz);
    }
    const double L = weideman_L;
    const cd iz{-z.imag(), z.real()};  // i z
    const cd Z = (L + iz) / (L - iz);
    cd p{0.0, 0.0};  // polynomial in Z, highest coefficient first
    for (int j = kN - 1; j >= 0; --j) p = p * Z + weideman_a[j];
    return 2.0 * p / ((L - iz) * (L - iz)) + (1.0 / kSqrtPi) / (L - iz);
}

std::complex<double> complex_erf(std::complex<double> z) {
    if (z.real() < 0.0) return -complex_erf(-z);
    if (z.imag() == 0.0) return {std::erf(z.real()), 0.0};
    // erfc(z) = e^{-z^2} w(iz) for Re z >= 0
    const cd iz{-z.imag(), z.real()};
    const cd tail = std::exp(-z * z) * faddeeva_w(iz);
    return 1.0 - tail;
}

}  // namespace shearlab
