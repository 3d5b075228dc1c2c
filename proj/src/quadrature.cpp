#include "slicebound/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "slicebound/errors.hpp"

namespace slicebound {

namespace {

// Kronrod 15-point abscissae (positive half, descending) and weights; Gauss 7-point weights
// correspond to the odd-indexed Kronrod abscissae.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 3; ++j) {
        int jj = 2 * j + 1;
        double dx = h * kXgk[jj];
        double f1 = f(c - dx), f2 = f(c + dx);
        fv1[jj] = f1;
        fv2[jj] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jj] * (f1 + f2);
        resabs += kWgk[jj] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        int jj = 2 * j;
        double dx = h * kXgk[jj];
        double f1 = f(c - dx), f2 = f(c + dx);
        fv1[jj] = f1;
        fv2[jj] = f2;
        resk += kWgk[jj] * (f1 + f2);
        resabs += kWgk[jj] * (std::abs(f1) + std::abs(f2));
    }
    double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double ah = std::abs(h);
    double value = resk * h;
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    if (!std::isfinite(value)) throw DomainError("integrand is not finite on the integration range");
    return Panel{a, b, value, err};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, const std::vector<double>& breakpoints, const QuadratureOptions& opts) {
    QuadratureResult out;
    if (breakpoints.size() < 2) return out;
    std::priority_queue<Panel> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] == breakpoints[i]) continue;
        Panel p = gk15(f, breakpoints[i], breakpoints[i + 1]);
        out.evaluations += 15;
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    int splits = 0;
    while (!heap.empty() && total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (splits >= opts.max_subdivisions) {
            out.converged = false;
            break;
        }
        Panel p = heap.top();
        double mid = 0.5 * (p.a + p.b);
        if (!(mid > std::min(p.a, p.b) && mid < std::max(p.a, p.b))) {
            // Panel cannot be split further in floating point.
            out.converged = false;
            break;
        }
        heap.pop();
        Panel l = gk15(f, p.a, mid);
        Panel r = gk15(f, mid, p.b);
        out.evaluations += 30;
        total += l.value + r.value - p.value;
        total_err += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        ++splits;
    }
    // Re-sum to remove drift from the running updates.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.abs_error_estimate = total_err;
    return out;
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
    return integrate(f, std::vector<double>{a, b}, opts);
}

QuadratureResult integrate_to_infinity(const Integrand& f, double a, const QuadratureOptions& opts,
                                       double first_width) {
    QuadratureResult out;
    double lo = a, width = first_width;
    int quiet = 0;
    for (int panel = 0; panel < 200; ++panel) {
        QuadratureOptions local = opts;
        local.abs_tol = opts.abs_tol * 0.25;
        local.rel_tol = opts.rel_tol;
        QuadratureResult r = integrate(f, lo, lo + width, local);
        out.value += r.value;
        out.abs_error_estimate += r.abs_error_estimate;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
        double threshold = std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value)) * 0.1;
        if (std::abs(r.value) + r.abs_error_estimate < threshold) {
            if (++quiet >= 2) {
                out.abs_error_estimate += std::abs(r.value) + r.abs_error_estimate;
                return out;
            }
        } else {
            quiet = 0;
        }
        lo += width;
        width *= 2.0;
    }
    out.converged = false;
    return out;
}

std::vector<double> uniform_breakpoints(double a, double b, double h, int max_panels) {
    if (!(b > a)) return {a, b};
    double count = std::ceil((b - a) / h);
    if (!(count >= 1.0)) count = 1.0;
    if (count > max_panels) count = max_panels;
    auto n = static_cast<int>(count);
    std::vector<double> pts(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) pts[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
    pts.back() = b;
    return pts;
}

}  // namespace slicebound
