#pragma once

#include <complex>

namespace mfk {

// Gamma function of a complex argument, Lanczos approximation with reflection
// for Re z < 1/2.  Throws std::domain_error at the poles 0, -1, -2, ...
std::complex<double> complex_gamma(std::complex<double> z);

// Gamma(1/2 + i tau - mu) * Gamma(1/2 - i tau - mu).  For real mu the two
// factors are conjugate, so the product is computed as a squared modulus and
// the imaginary part is exactly zero.
std::complex<double> gamma_pair(double tau, std::complex<double> mu);

}  // namespace mfk
