#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "mc.hpp"
#include "slicebound/errors.hpp"
#include "slicebound/oracle.hpp"
#include "slicebound/specfun.hpp"

namespace slicebound {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRadialCap = 1e3;

/// Combines parallel directions: the product of their indicators is the tightest one.
ProjectedDecomposition merge_parallel(const ProjectedDecomposition& proj) {
    std::vector<Vector> dirs;
    std::vector<double> c, ct, t;
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < proj.m0(); ++i) {
        auto e = static_cast<Eigen::Index>(i);
        Vector u = proj.directions.col(e);
        for (Eigen::Index j = 0; j < u.size(); ++j) {
            if (std::abs(u(j)) > 1e-10) {
                if (u(j) < 0) u = -u;
                break;
            }
        }
        std::size_t q = 0;
        while (q < dirs.size() && (dirs[q] - u).lpNorm<Eigen::Infinity>() > 1e-10) ++q;
        if (q == dirs.size()) {
            dirs.push_back(u);
            c.push_back(proj.weights(e));
            ct.push_back(proj.tilde_weights(e));
            t.push_back(proj.thresholds(e));
            support.push_back(proj.support[i]);
        } else {
            c[q] += proj.weights(e);
            ct[q] += proj.tilde_weights(e);
            t[q] = std::min(t[q], proj.thresholds(e));
        }
    }
    ProjectedDecomposition m;
    m.ambient_dim = proj.ambient_dim;
    m.k = proj.k;
    m.subspace = proj.subspace;
    m.support = support;
    const auto m0 = static_cast<Eigen::Index>(dirs.size());
    m.directions.resize(proj.k, m0);
    m.weights.resize(m0);
    m.tilde_weights.resize(m0);
    m.thresholds.resize(m0);
    for (Eigen::Index i = 0; i < m0; ++i) {
        auto s = static_cast<std::size_t>(i);
        m.directions.col(i) = dirs[s];
        m.weights(i) = c[s];
        m.tilde_weights(i) = std::min(1.0, ct[s]);
        m.thresholds(i) = t[s];
    }
    return m;
}

struct Factors {
    double c0 = 1.0;  // product of 2 a_j over unit weights
    std::vector<double> a;
    std::vector<double> s;
    std::vector<Vector> w;
};

Factors factors(const ProjectedDecomposition& merged, const Lift& l) {
    Factors f;
    std::vector<bool> nontrivial(merged.m0(), false);
    for (std::size_t i = 0; i < l.complement_indices.size(); ++i) {
        const std::size_t j = l.complement_indices[i];
        nontrivial[j] = true;
        const auto e = static_cast<Eigen::Index>(j);
        f.a.push_back(std::sqrt(merged.tilde_weights(e)) * merged.thresholds(e));
        f.s.push_back(std::sqrt(l.defect_weights(static_cast<Eigen::Index>(i))));
        f.w.push_back(l.complement_vectors.col(static_cast<Eigen::Index>(i)));
    }
    for (std::size_t j = 0; j < merged.m0(); ++j) {
        if (nontrivial[j]) continue;
        const auto e = static_cast<Eigen::Index>(j);
        f.c0 *= 2.0 * std::sqrt(merged.tilde_weights(e)) * merged.thresholds(e);
    }
    return f;
}

/// int_0^inf r^{d-1} prod_j 2 sin(a_j beta_j r) / (beta_j r) dr along direction theta.
double radial(const Factors& f, const Vector& theta, int d, double tol) {
    const std::size_t m = f.a.size();
    std::vector<double> beta(m), b(m);
    double max_b = 0.0, min_b = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        beta[j] = f.s[j] * theta.dot(f.w[j]);
        b[j] = f.a[j] * beta[j];
        max_b = std::max(max_b, std::abs(b[j]));
        if (b[j] != 0.0) min_b = std::min(min_b, std::abs(b[j]));
    }
    if (max_b == 0.0) throw DivergenceError("Fourier integrand does not decay along a direction");
    const double r0 = std::min(kRadialCap, 20.0 / min_b);

    auto integrand = [&](double r) {
        double v = std::pow(r, d - 1);
        for (std::size_t j = 0; j < m; ++j) v *= 2.0 * f.a[j] * sinc(b[j] * r);
        return v;
    };
    QuadratureOptions opts;
    opts.abs_tol = 0.01 * tol;
    opts.rel_tol = 1e-11;
    double head = integrate(integrand, uniform_breakpoints(0.0, r0, kPi / max_b, 20000), opts).value;

    // Tail: expand prod sin(b_j r) into exponentials and integrate each term exactly.
    std::vector<double> live;
    double scale = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (std::abs(b[j]) * r0 < 1e-9) {
            scale *= 2.0 * f.a[j];
        } else {
            live.push_back(b[j]);
            scale *= 2.0 / beta[j];
        }
    }
    const int mm = static_cast<int>(live.size());
    const int q = mm - d + 1;
    std::complex<double> sum = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << mm); ++mask) {
        double omega = 0.0;
        int sign = 1;
        for (int j = 0; j < mm; ++j) {
            if (mask & (1u << j)) {
                omega -= live[static_cast<std::size_t>(j)];
                sign = -sign;
            } else {
                omega += live[static_cast<std::size_t>(j)];
            }
        }
        std::complex<double> term;
        if (std::abs(omega) <= 1e-14 * max_b) {
            if (q <= 1) throw DivergenceError("Fourier integrand is not integrable along a direction");
            term = std::pow(r0, 1.0 - q) / (q - 1.0);
        } else {
            term = std::pow(r0, 1.0 - q) * expint_n(q, std::complex<double>(0.0, -omega * r0));
        }
        sum += static_cast<double>(sign) * term;
    }
    sum /= std::pow(std::complex<double>(0.0, 2.0), mm);
    return head + scale * sum.real();
}

int numeric_rank(const Matrix& m) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& sv = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-9 * std::max(1.0, sv(0))) ++r;
    return r;
}

ParsevalGates gates_for(const ProjectedDecomposition& merged, const Lift& l) {
    ParsevalGates g;
    g.d = static_cast<int>(merged.m0()) - merged.k;
    g.rank = numeric_rank(l.complement_vectors);
    g.nontrivial_factors = l.complement_indices.size();
    g.rank_ok = g.rank == g.d;
    g.count_ok = g.d == 0 || g.nontrivial_factors > static_cast<std::size_t>(g.d);
    return g;
}

}  // namespace

double ParsevalResult::tolerance() const {
    double tol = std::max({quad_tol, 3.0 * lhs_std_error, rhs_error_estimate});
    if (flagged) tol += 0.01 * std::abs(rhs) + 3.0 * rhs_error_estimate;
    return tol;
}

bool ParsevalResult::agrees() const { return std::abs(lhs - rhs) <= tolerance(); }

ParsevalGates parseval_gates(const ProjectedDecomposition& proj) {
    ProjectedDecomposition merged = merge_parallel(proj);
    return gates_for(merged, lift(merged));
}

ParsevalResult parseval_check(const ProjectedDecomposition& proj, const ParsevalOptions& opts) {
    ProjectedDecomposition merged = merge_parallel(proj);
    Lift l = lift(merged);
    ParsevalResult res;
    res.m0 = merged.m0();
    res.quad_tol = opts.quad_tol;
    res.gates = gates_for(merged, l);
    if (!res.gates.satisfied()) {
        std::string msg = "Parseval gates not satisfied:";
        if (!res.gates.rank_ok)
            msg += " complement vectors have rank " + std::to_string(res.gates.rank) + ", need d = " +
                   std::to_string(res.gates.d) + ";";
        if (!res.gates.count_ok)
            msg += " " + std::to_string(res.gates.nontrivial_factors) + " nontrivial factors, need more than d = " +
                   std::to_string(res.gates.d) + ";";
        throw GateError(msg);
    }

    HPolytopeSection poly = section_polytope(proj);
    if (proj.k <= 3) {
        res.lhs = exact_volume_smallk(poly);
        res.lhs_method = "exact";
    } else {
        McEstimate e = mc_volume(poly, opts.samples, opts.seed);
        res.lhs = e.mean;
        res.lhs_std_error = e.std_error;
        res.lhs_method = "mc";
    }

    const int d = res.gates.d;
    Factors f = factors(merged, l);
    const double norm = f.c0 * std::pow(2.0 * kPi, -d);
    if (d == 0) {
        res.rhs = f.c0;
        res.rhs_method = "product";
    } else if (d == 1) {
        res.rhs = norm * 2.0 * radial(f, Vector::Ones(1), 1, opts.quad_tol / norm);
        res.rhs_error_estimate = 0.0;
        res.rhs_method = "quadrature";
    } else if (d == 2) {
        std::vector<double> bps{0.0, kPi};
        for (const auto& w : f.w) {
            double phi = std::atan2(w(0), -w(1));
            if (phi < 0) phi += kPi;
            if (phi >= kPi) phi -= kPi;
            if (phi > 0.0 && phi < kPi) bps.push_back(phi);
        }
        std::sort(bps.begin(), bps.end());
        QuadratureOptions qo;
        qo.abs_tol = 0.1 * opts.quad_tol / norm;
        qo.rel_tol = 1e-12;
        qo.max_subdivisions = 20000;
        QuadratureResult r = integrate(
            [&](double phi) {
                Vector theta(2);
                theta << std::cos(phi), std::sin(phi);
                return radial(f, theta, 2, opts.quad_tol / norm);
            },
            bps, qo);
        res.rhs = norm * 2.0 * r.value;
        res.rhs_error_estimate = norm * 2.0 * r.abs_error_estimate;
        res.rhs_method = "quadrature";
    } else {
        const std::int64_t dirs = std::min<std::int64_t>(opts.samples, 4096);
        std::mt19937_64 rng(detail::splitmix64(opts.seed));
        double sum = 0.0, sum_sq = 0.0;
        for (std::int64_t i = 0; i < dirs; ++i) {
            double v = radial(f, detail::random_direction(d, rng), d, opts.quad_tol / norm);
            sum += v;
            sum_sq += v * v;
        }
        const auto n = static_cast<double>(dirs);
        const double area = d * unit_ball_volume(d);
        const double mean = sum / n;
        const double var = std::max(0.0, sum_sq / n - mean * mean) * n / (n - 1.0);
        res.rhs = norm * area * mean;
        res.rhs_error_estimate = norm * area * std::sqrt(var / n);
        res.rhs_method = "mc";
        res.flagged = true;
    }
    return res;
}

}  // namespace slicebound
