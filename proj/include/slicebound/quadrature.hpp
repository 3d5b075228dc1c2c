#pragma once

#include <functional>
#include <vector>

namespace slicebound {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_subdivisions = 400000;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
    bool converged = true;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) bisection on [a, b].
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts = {});

/// Same, starting from the panels between consecutive sorted breakpoints.
QuadratureResult integrate(const Integrand& f, const std::vector<double>& breakpoints,
                           const QuadratureOptions& opts = {});

/// Integral over [a, inf) using panels of doubling width starting at first_width.
/// Stops once two consecutive panels are negligible; intended for integrands
/// with monotone algebraic or faster decay.
QuadratureResult integrate_to_infinity(const Integrand& f, double a, const QuadratureOptions& opts = {},
                                       double first_width = 1.0);

/// a, a+h, a+2h, ..., b with at most max_panels panels (h grows if needed).
std::vector<double> uniform_breakpoints(double a, double b, double h, int max_panels);

}  // namespace slicebound
