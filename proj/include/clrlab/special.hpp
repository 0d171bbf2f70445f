#pragma once

// Special functions and quadrature engines used by the kernel and bound
// evaluators. Everything here is self-contained (series + asymptotics),
// reentrant and thread-safe.

#include <cstddef>
#include <functional>
#include <stdexcept>

namespace clr::special {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double euler_gamma = 0.57721566490153286061;

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_refinements = 24;
};

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

// Trapezoid rule with node doubling for smooth periodic integrands over a
// full period [a,b]. Converges spectrally for analytic integrands.
double integrate_periodic(const std::function<double(double)>& f, double a,
                          double b, const QuadratureSpec& spec = {});

// Gamma function for x > 0 (Lanczos).
double gamma_fn(double x);
double lgamma_fn(double x);

// Modified Bessel function I_nu, scaled by e^{-z}; nu > -1, z >= 0.
double bessel_i_scaled(double nu, double z);
// Integer-order variant (Miller downward recurrence), exact stochastic
// normalization sum_k e^{-z} I_k(z) = 1; k >= 0, z >= 0.
double bessel_i_scaled_int(int k, double z);
double bessel_i(double nu, double z);  // unscaled; range error on overflow

// Modified Bessel functions of the second kind, integer order.
double bessel_k0(double z);
double bessel_k1(double z);
double bessel_kn(int n, double z);

// Bessel functions of the first kind, integer order.
double bessel_j0(double z);
double bessel_j1(double z);
double bessel_jn(int n, double z);

// c(sigma) = e^{-sigma} int_0^inf z e^{-z} / (z + sigma) dz;  c(0) = 1.
double c_sigma(double sigma);

// F(gamma) = int_gamma^inf (1 - e^{-1/4 tau}) / sqrt(4 pi tau) dtau;
// F(0) = 1/2, F(gamma) <= 1, F(gamma) <= 1/(4 sqrt(pi gamma)) for gamma >= 1.
double F_gamma(double gamma);

// beta(gamma) = pi^{-1/2} gamma Gamma(gamma)
//               int_0^inf (1 - e^{-1/s}) s^{-1/2-gamma} ds,  0 < gamma < 1/2.
double beta_gamma(double gamma);

// c_alpha = (2^{3-2 alpha}/pi) int_0^inf sin^2 z / z^{2 alpha} dz for
// 1/2 < alpha <= 1: the growth coefficient c_alpha |x|^{2 alpha - 1} of the
// regularized resolvent of the fractional operator; c_1 = 1.
double c_alpha(double alpha);

}  // namespace clr::special
