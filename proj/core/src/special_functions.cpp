#include "dicke/special_functions.hpp"

#include "dicke/errors.hpp"

#include <boost/multiprecision/float128.hpp>

#include <array>
#include <cmath>
#include <numbers>

namespace dicke {

namespace {

using Quad = boost::multiprecision::float128;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_pole(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

struct QuadComplex {
  Quad re;
  Quad im;
};

QuadComplex mul(const QuadComplex& a, const QuadComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

QuadComplex div(const QuadComplex& a, const QuadComplex& b) {
  const Quad d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

Quad magnitude(const QuadComplex& a) { return sqrt(a.re * a.re + a.im * a.im); }

}  // namespace

Complex log_gamma_right(Complex z) {
  if (z.real() < 0.5) throw ValidationError("log_gamma_right: requires Re z >= 1/2");
  const Complex w = z - 1.0;
  Complex series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    series += kLanczos[i] / (w + static_cast<double>(i));
  }
  const Complex t = w + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (w + 0.5) * std::log(t) - t + std::log(series);
}

Complex complex_gamma(Complex z) {
  if (is_pole(z)) throw ValidationError("complex_gamma: pole at a non-positive integer");
  if (z.real() < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * z) * std::exp(log_gamma_right(1.0 - z)));
  }
  return std::exp(log_gamma_right(z));
}

Complex reciprocal_gamma(Complex z) {
  if (is_pole(z)) return 0.0;
  if (z.real() < 0.5) {
    return std::sin(std::numbers::pi * z) * std::exp(log_gamma_right(1.0 - z)) / std::numbers::pi;
  }
  return std::exp(-log_gamma_right(z));
}

Complex bessel_j(Complex nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError("bessel_j: requires finite x > 0");
  // Negative integer order: J_{-n} = (-1)^n J_n (the series below would divide
  // by zero at k = n).
  if (is_pole(nu) && nu.real() != 0.0) {
    const int n = static_cast<int>(-nu.real());
    return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(Complex(n, 0.0), x);
  }
  // Leading term (x/2)^nu / Gamma(nu + 1), principal branch since x > 0.
  const Complex lead = std::exp(nu * std::log(0.5 * x)) * reciprocal_gamma(nu + 1.0);

  const Quad quarter_x2 = Quad(x) * Quad(x) / 4;
  const QuadComplex q_nu{Quad(nu.real()), Quad(nu.imag())};
  QuadComplex term{1, 0};
  QuadComplex sum{1, 0};
  constexpr int kMaxTerms = 500;
  for (int k = 1; k < kMaxTerms; ++k) {
    // term_k = term_{k-1} * (-(x/2)^2) / (k (k + nu))
    const QuadComplex denom{Quad(k) * (Quad(k) + q_nu.re), Quad(k) * q_nu.im};
    term = div(mul(term, QuadComplex{-quarter_x2, 0}), denom);
    sum.re += term.re;
    sum.im += term.im;
    if (k > x / 2 && magnitude(term) < Quad(1e-16) * magnitude(sum)) {
      return lead * Complex(static_cast<double>(sum.re), static_cast<double>(sum.im));
    }
  }
  throw NumericalError("bessel_j: series did not converge within 500 terms");
}

Complex bessel_j_asymptotic(Complex nu, double x) {
  if (!(x > 0.0)) throw ValidationError("bessel_j_asymptotic: requires x > 0");
  return std::sqrt(2.0 / (std::numbers::pi * x)) *
         std::cos(x - std::numbers::pi * nu / 2.0 - std::numbers::pi / 4.0);
}

}  // namespace dicke
