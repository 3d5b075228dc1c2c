#pragma once

#include <complex>

#include "slicebound/quadrature.hpp"

namespace slicebound {

/// I_p = integral over R of |sin x / x|^p.
QuadratureResult sinc_power_integral(double p);

struct BallIntegralCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// I_p against sqrt(2) pi / sqrt(p); only asserted for p >= 2.
BallIntegralCheck ball_integral_bound_check(double p);

/// Fourier transform of exp(-|x|^p), 1 <= p <= 2.
double gamma_p(double p, double y);
/// gamma_p by quadrature only (no closed forms at p = 1, 2).
double gamma_p_quadrature(double p, double y);

/// Fourier transform of the indicator of [-c, c].
double indicator_ft(double c, double t);
/// Fourier transform of exp(-alpha |x|).
double exp_ft(double alpha, double y);
/// Fourier transform of exp(-pi d(x, [-alpha, alpha])^2).
double dist_sq_ft(double alpha, double z);

/// I(s) = int_0^inf exp(-pi y^2) sin(y s) dy.
double gauss_sine_integral(double s);
/// 1 - s I(s), evaluated without cancellation for large |s|.
double gauss_sine_defect(double s);

struct WillsIntegrandParams {
    double alpha = 0.0;
    double p = 2.0;
};

/// A_alpha(s) = a_alpha(s) + b_alpha(s) + c_alpha(s).
double wills_integrand_A(const WillsIntegrandParams& params, double s);
/// g(alpha) = integral over R of |A_alpha(s)|^p.
QuadratureResult wills_g(const WillsIntegrandParams& params);

/// log g(alpha), computed in scaled form so that very large p does not overflow.
/// abs_error_estimate is the error of the log.
QuadratureResult log_wills_g(const WillsIntegrandParams& params);

double gamma_fn(double x);
double log_gamma_fn(double x);

/// integral over R of (1 + x^2)^{-1/(1 - ctilde)}.
double cauchy_power_integral(double ctilde);
double log_cauchy_power_integral(double ctilde);

/// sin(x)/x with a series branch near 0.
double sinc(double x);

/// Volume of the Euclidean unit ball in R^k.
double unit_ball_volume(int k);
/// Volume of the unit l_p ball in R^k: (2 Gamma(1 + 1/p))^k / Gamma(1 + k/p).
double lp_ball_volume(double p, int k);
double log_lp_ball_volume(double p, int k);
/// Regular k-simplex with inradius 1: k^{k/2} (k+1)^{(k+1)/2} / k!.
double regular_simplex_volume(int k);

/// Generalized exponential integral E_n(z) = int_1^inf exp(-z t) t^{-n} dt, Re z >= 0, z != 0 when n = 1.
std::complex<double> expint_n(int n, std::complex<double> z);

}  // namespace slicebound
