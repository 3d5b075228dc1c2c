#include "slicebound/specfun.hpp"

#include <gsl/gsl_sf_dawson.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "slicebound/errors.hpp"

namespace slicebound {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
constexpr double kLanczosG = 7.0;

double lanczos_log(double x) {
    // x >= 0.5
    x -= 1.0;
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[static_cast<std::size_t>(i)] / (x + i);
    double t = x + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

double lanczos(double x) {
    x -= 1.0;
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[static_cast<std::size_t>(i)] / (x + i);
    double t = x + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) throw DomainError(std::string(name) + " must be finite");
}

// Sum of (2n-1)!! (2 pi / s^2)^n over n >= start; asymptotic, used for |s| >= 40.
double gauss_sine_series(double s, int start) {
    const double r = 2.0 * kPi / (s * s);
    double term = 1.0;
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 0; n < 400; ++n) {
        if (n > 0) term *= (2 * n - 1) * r;
        if (n < start) continue;
        if (term >= prev) break;
        sum += term;
        prev = term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

constexpr double kGaussSineSwitch = 40.0;

}  // namespace

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        double z = x * x;
        return 1.0 - z / 6.0 * (1.0 - z / 20.0 * (1.0 - z / 42.0 * (1.0 - z / 72.0)));
    }
    return std::sin(x) / x;
}

double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("gamma_fn requires x > 0");
    if (x < 0.5) return kPi / (std::sin(kPi * x) * lanczos(1.0 - x));
    if (x > 171.0) return std::exp(lanczos_log(x));
    return lanczos(x);
}

double log_gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma_fn requires x > 0");
    if (x < 0.5) return std::log(kPi / std::sin(kPi * x)) - lanczos_log(1.0 - x);
    return lanczos_log(x);
}

double log_cauchy_power_integral(double ctilde) {
    if (!(ctilde > 0.0 && ctilde < 1.0)) throw DomainError("cauchy_power_integral requires 0 < ctilde < 1");
    double p = 1.0 / (1.0 - ctilde);
    return 0.5 * std::log(kPi) + log_gamma_fn(p - 0.5) - log_gamma_fn(p);
}

double cauchy_power_integral(double ctilde) { return std::exp(log_cauchy_power_integral(ctilde)); }

double unit_ball_volume(int k) {
    if (k < 0) throw DomainError("dimension must be >= 0");
    return std::exp(0.5 * k * std::log(kPi) - log_gamma_fn(1.0 + 0.5 * k));
}

double log_lp_ball_volume(double p, int k) {
    if (!(p > 0.0)) throw DomainError("l_p ball requires p > 0");
    if (k < 0) throw DomainError("dimension must be >= 0");
    return k * std::log(2.0 * gamma_fn(1.0 + 1.0 / p)) - log_gamma_fn(1.0 + k / p);
}

double lp_ball_volume(double p, int k) { return std::exp(log_lp_ball_volume(p, k)); }

double regular_simplex_volume(int k) {
    if (k < 0) throw DomainError("dimension must be >= 0");
    if (k == 0) return 1.0;
    return std::exp(0.5 * k * std::log(k) + 0.5 * (k + 1) * std::log(k + 1.0) - log_gamma_fn(k + 1.0));
}

QuadratureResult sinc_power_integral(double p) {
    require_finite(p, "p");
    if (!(p > 1.0)) throw DivergenceError("I_p diverges for p <= 1 (p = " + std::to_string(p) + ")");

    constexpr int kPanels = 1000;
    const double u = kPanels * kPi;
    auto f = [p](double x) { return std::pow(std::abs(sinc(x)), p); };
    std::vector<double> pts(kPanels + 1);
    for (int i = 0; i <= kPanels; ++i) pts[static_cast<std::size_t>(i)] = i * kPi;
    QuadratureOptions opts;
    opts.abs_tol = 1e-15;
    opts.rel_tol = 1e-13;
    QuadratureResult body = integrate(f, pts, opts);

    // Tail beyond U = N pi: |sin x|^p = a0 + phi(x) with phi pi-periodic of zero mean.
    // Integrating by parts twice gives a0 U^{1-p}/(p-1) - p Phi2(0) U^{-p-1} + O(U^{-p-3}),
    // Phi2 the zero-mean second antiderivative of phi.
    const double a0 = std::exp(log_gamma_fn(0.5 * (p + 1.0)) - log_gamma_fn(0.5 * p + 1.0)) / std::sqrt(kPi);
    auto kernel = [p](double x) {
        return std::pow(std::sin(x), p) * (kPi * kPi / 6.0 - kPi * x + x * x);
    };
    QuadratureResult k2 = integrate(kernel, 0.0, kPi, opts);
    const double phi2 = -k2.value / (2.0 * kPi);
    const double tail = a0 * std::pow(u, 1.0 - p) / (p - 1.0) - p * phi2 * std::pow(u, -p - 1.0);
    const double remainder = p * (p + 1.0) * (p + 2.0) * 0.14 * std::pow(u, -p - 3.0);

    QuadratureResult out;
    out.value = 2.0 * (body.value + tail);
    out.abs_error_estimate = 2.0 * (body.abs_error_estimate + remainder + k2.abs_error_estimate * p * std::pow(u, -p - 1.0) / (2.0 * kPi));
    out.evaluations = body.evaluations + k2.evaluations;
    out.converged = body.converged && k2.converged;
    return out;
}

BallIntegralCheck ball_integral_bound_check(double p) {
    require_finite(p, "p");
    if (p < 2.0) throw GateError("the sinc power inequality is only asserted for p >= 2");
    BallIntegralCheck c;
    QuadratureResult r = sinc_power_integral(p);
    c.lhs = r.value;
    c.rhs = std::sqrt(2.0) * kPi / std::sqrt(p);
    c.holds = c.lhs <= c.rhs + r.abs_error_estimate + 1e-12 * c.rhs;
    return c;
}

double gamma_p_quadrature(double p, double y) {
    require_finite(p, "p");
    require_finite(y, "y");
    if (p < 1.0 || p > 2.0) throw DomainError("gamma_p supports 1 <= p <= 2 only (p = " + std::to_string(p) + ")");
    y = std::abs(y);
    // exp(-x^p) < 1e-16 beyond x^p = 16 ln 10.
    const double x_max = std::pow(16.0 * std::log(10.0), 1.0 / p);
    const double h = y > 0.0 ? std::min(1.0, kPi / y) : 1.0;
    auto pts = uniform_breakpoints(0.0, x_max, h, 200000);
    auto f = [p, y](double x) { return std::exp(-std::pow(x, p)) * std::cos(x * y); };
    QuadratureOptions opts;
    opts.abs_tol = 1e-12;
    opts.rel_tol = 1e-12;
    return 2.0 * integrate(f, pts, opts).value;
}

namespace {

// 2 Re int_0^inf exp(-z^p + i y z) dz along arg z = theta with p theta < pi/2.
double gamma_p_contour(double p, double y) {
    const double theta = 0.4 * kPi / p;
    const std::complex<double> dir = std::polar(1.0, theta);
    const std::complex<double> rot_p = std::polar(1.0, p * theta);
    auto f = [&](double t) {
        std::complex<double> e = -std::pow(t, p) * rot_p + std::complex<double>(0.0, y * t) * dir;
        return (dir * std::exp(e)).real();
    };
    // The result is of order y^{-(1+p)} while the integrand is of order 1.
    QuadratureOptions opts;
    opts.abs_tol = 1e-14 * std::pow(y, -(1.0 + p));
    opts.rel_tol = 1e-12;
    opts.max_subdivisions = 2000;
    return 2.0 * integrate_to_infinity(f, 0.0, opts, 1.0 / (y * std::sin(theta))).value;
}

constexpr double kGammaPContourSwitch = 4.0;

}  // namespace

double gamma_p(double p, double y) {
    require_finite(p, "p");
    require_finite(y, "y");
    if (p < 1.0 || p > 2.0) throw DomainError("gamma_p supports 1 <= p <= 2 only (p = " + std::to_string(p) + ")");
    if (p == 1.0) return 2.0 / (1.0 + y * y);
    if (p == 2.0) return std::sqrt(kPi) * std::exp(-0.25 * y * y);
    y = std::abs(y);
    if (y > kGammaPContourSwitch) return gamma_p_contour(p, y);
    return gamma_p_quadrature(p, y);
}

double indicator_ft(double c, double t) {
    if (!(c > 0.0)) throw DomainError("indicator_ft requires c > 0");
    return 2.0 * c * sinc(c * t);
}

double exp_ft(double alpha, double y) {
    if (!(alpha > 0.0)) throw DomainError("exp_ft requires alpha > 0");
    return 2.0 * alpha / (alpha * alpha + y * y);
}

double gauss_sine_integral(double s) {
    require_finite(s, "s");
    if (s == 0.0) return 0.0;
    const double sign = s < 0 ? -1.0 : 1.0;
    const double a = std::abs(s);
    if (a >= kGaussSineSwitch) return sign * gauss_sine_series(a, 0) / a;
    // Closed form through Dawson's integral F: I(s) = F(s / (2 sqrt(pi))) / sqrt(pi).
    return sign * gsl_sf_dawson(a / (2.0 * std::sqrt(kPi))) / std::sqrt(kPi);
}

double gauss_sine_defect(double s) {
    require_finite(s, "s");
    const double a = std::abs(s);
    if (a >= kGaussSineSwitch) return -gauss_sine_series(a, 1);
    return 1.0 - a * gauss_sine_integral(a);
}

double dist_sq_ft(double alpha, double z) {
    require_finite(z, "z");
    if (!(alpha > 0.0)) throw DomainError("dist_sq_ft requires alpha > 0");
    if (z == 0.0) return 2.0 * alpha + 1.0;
    const double a = 2.0 * alpha * sinc(alpha * z);
    const double b = std::cos(alpha * z) * std::exp(-z * z / (4.0 * kPi));
    const double c = -2.0 * std::sin(alpha * z) * gauss_sine_integral(z);
    return a + b + c;
}

namespace {

void check_params(const WillsIntegrandParams& params) {
    require_finite(params.alpha, "alpha");
    require_finite(params.p, "p");
    if (params.alpha < 0.0) throw DomainError("Wills integrand requires alpha >= 0");
}

}  // namespace

double wills_integrand_A(const WillsIntegrandParams& params, double s) {
    check_params(params);
    require_finite(s, "s");
    const double a = std::abs(s);
    const double alpha = params.alpha;
    if (a == 0.0) return 2.0 * alpha + 1.0;
    // a + c = 2 sin(alpha s)(1 - s I(s)) / s
    double osc = alpha > 0.0 ? 2.0 * alpha * sinc(alpha * a) * gauss_sine_defect(a) : 0.0;
    return osc + std::cos(alpha * a) * std::exp(-a * a / (4.0 * kPi));
}

QuadratureResult log_wills_g(const WillsIntegrandParams& params) {
    check_params(params);
    const double p = params.p;
    if (!(p > 1.0)) throw DivergenceError("wills_g diverges for p <= 1");
    const double alpha = params.alpha;
    // |A| <= A(0) since A is the Fourier transform of a positive function.
    const double a0 = 2.0 * alpha + 1.0;

    // For s >= 50, |A(s)| <= 16 / s^3; choose S so that the two tails of (|A|/A0)^p are < 1e-9.
    const double log_s = (std::log(2.0 / (3.0 * p - 1.0)) + p * std::log(16.0) - p * std::log(a0) + 9.0 * std::log(10.0)) /
                         (3.0 * p - 1.0);
    const double s_max = std::max(50.0, std::exp(std::min(log_s, std::log(1e7))));

    std::vector<double> pts{0.0, s_max};
    for (double g = 1.0; g < s_max; g *= 2.0) pts.push_back(g);
    if (alpha > 0.0) {
        const double step = kPi / alpha;
        if (s_max / step <= 200000)
            for (double x = step; x < s_max; x += step) pts.push_back(x);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    auto f = [&](double s) { return std::pow(std::abs(wills_integrand_A(params, s)) / a0, p); };
    QuadratureOptions opts;
    opts.abs_tol = 1e-12;
    opts.rel_tol = 1e-10;
    QuadratureResult r = integrate(f, pts, opts);
    double tail = 2.0 * std::exp(p * std::log(16.0) - p * std::log(a0) + (1.0 - 3.0 * p) * std::log(s_max)) / (3.0 * p - 1.0);

    QuadratureResult out;
    const double scaled = 2.0 * r.value + tail;
    out.value = p * std::log(a0) + std::log(scaled);
    out.abs_error_estimate = (2.0 * r.abs_error_estimate + tail) / scaled;
    out.evaluations = r.evaluations;
    out.converged = r.converged;
    return out;
}

QuadratureResult wills_g(const WillsIntegrandParams& params) {
    QuadratureResult lg = log_wills_g(params);
    QuadratureResult out = lg;
    out.value = std::exp(lg.value);
    out.abs_error_estimate = out.value * lg.abs_error_estimate;
    return out;
}

std::complex<double> expint_n(int n, std::complex<double> z) {
    using C = std::complex<double>;
    if (n < 1) throw DomainError("expint_n requires n >= 1");
    if (z.real() < 0.0) throw DomainError("expint_n requires Re z >= 0");
    if (z == C(0.0, 0.0)) {
        if (n == 1) throw DomainError("E_1 is singular at 0");
        return C(1.0 / (n - 1), 0.0);
    }
    if (std::abs(z) > 2.0) {
        // Modified Lentz evaluation of the continued fraction for E_n.
        const double tiny = 1e-300;
        C b = z + static_cast<double>(n);
        C c = 1.0 / tiny;
        C d = 1.0 / b;
        C h = d;
        for (int i = 1; i < 100000; ++i) {
            double a = -static_cast<double>(i) * (n - 1 + i);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            C del = c * d;
            h *= del;
            if (std::abs(del - 1.0) < 1e-16) break;
        }
        return h * std::exp(-z);
    }
    constexpr double euler_gamma = 0.57721566490153286061;
    C sum(0.0, 0.0);
    C term(1.0, 0.0);
    for (int k = 1; k < 200; ++k) {
        term *= -z / static_cast<double>(k);
        C add = term / static_cast<double>(k);
        sum += add;
        if (std::abs(add) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    C e = -euler_gamma - std::log(z) - sum;
    const C ez = std::exp(-z);
    for (int m = 1; m < n; ++m) e = (ez - z * e) / static_cast<double>(m);
    return e;
}

}  // namespace slicebound
