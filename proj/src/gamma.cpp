#include "mfk/gamma.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mfk {
namespace {

constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7};

// Valid for Re z >= 1/2.
std::complex<double> gamma_right_half(std::complex<double> z) {
  z -= 1.0;
  std::complex<double> acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + 7.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

}  // namespace

std::complex<double> complex_gamma(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw std::domain_error("complex_gamma: pole at nonpositive integer");
  if (z.real() < 0.5) {
    const std::complex<double> s = std::sin(std::numbers::pi * z);
    return std::numbers::pi / (s * gamma_right_half(1.0 - z));
  }
  return gamma_right_half(z);
}

std::complex<double> gamma_pair(double tau, std::complex<double> mu) {
  if (mu.imag() == 0.0) {
    const std::complex<double> g = complex_gamma({0.5 - mu.real(), tau});
    return {std::norm(g), 0.0};
  }
  return complex_gamma(std::complex<double>(0.5, tau) - mu) *
         complex_gamma(std::complex<double>(0.5, -tau) - mu);
}

}  // namespace mfk
