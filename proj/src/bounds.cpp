#include "slicebound/bounds.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "slicebound/errors.hpp"
#include "slicebound/specfun.hpp"

namespace slicebound {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLog2 = std::log(2.0);

std::string index_list(const std::vector<std::size_t>& idx) {
    std::ostringstream os;
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? ", " : "") << idx[i];
    return os.str();
}

void enforce(const GateStatus& g, GateMode mode) {
    if (mode == GateMode::force || g.satisfied) return;
    std::string msg = "gate violated: " + g.required_condition;
    if (!g.offending.empty()) msg += " (offending indices: " + index_list(g.offending) + ")";
    throw GateError(msg, g.offending);
}

bool is_unit(double ct) { return ct >= 1.0 - kUnitWeightGap; }

ProjectionProfile ball_profile(const KpBall& ball, const Subspace& h, const Tolerances& tol) {
    return profile(project(ball.decomp(), h, tol));
}

double alpha_of(const KpBall& ball, std::size_t original_index) {
    return ball.alphas()(static_cast<Eigen::Index>(original_index));
}

void require_p1(const KpBall& ball) {
    if (ball.p() != 1.0) throw PreconditionError("K_1 bounds require p = 1 (got p = " + std::to_string(ball.p()) + ")");
}

void require_nondegenerate(const ProjectionProfile& prof) {
    if (static_cast<int>(prof.m0()) <= prof.k)
        throw DomainError("degenerate regime: m0 = k, the lower bound is undefined");
}

}  // namespace

KpBall::KpBall(JohnDecomposition decomp, double p, Vector alphas)
    : decomp_(std::move(decomp)), p_(p), alphas_(std::move(alphas)) {
    if (!(p_ >= 1.0 && p_ <= 2.0)) throw DomainError("K_p ball requires p in [1, 2] (got " + std::to_string(p_) + ")");
    if (static_cast<std::size_t>(alphas_.size()) != decomp_.size())
        throw StructuralError("K_p ball needs one alpha per decomposition vector");
    for (Eigen::Index j = 0; j < alphas_.size(); ++j)
        if (!(alphas_(j) > 0.0) || !std::isfinite(alphas_(j)))
            throw StructuralError("alpha " + std::to_string(j) + " must be positive and finite");
}

double KpBall::norm(const Vector& x) const {
    Vector ip = decomp_.vectors().transpose() * x;
    double s = 0.0;
    for (Eigen::Index j = 0; j < ip.size(); ++j) s += alphas_(j) * std::pow(std::abs(ip(j)), p_);
    return std::pow(s, 1.0 / p_);
}

ProjectionProfile profile(const ProjectedDecomposition& proj) {
    ProjectionProfile prof;
    prof.ambient_dim = proj.ambient_dim;
    prof.k = proj.k;
    prof.indices = proj.support;
    for (std::size_t i = 0; i < proj.m0(); ++i) {
        auto e = static_cast<Eigen::Index>(i);
        prof.c.push_back(proj.weights(e));
        prof.tilde_c.push_back(proj.tilde_weights(e));
        prof.t.push_back(proj.thresholds(e));
    }
    return prof;
}

GateStatus gate_tilde_half(const ProjectionProfile& prof) {
    GateStatus g{"all tilde_c_j >= 1/2", true, {}};
    for (std::size_t i = 0; i < prof.m0(); ++i)
        if (prof.tilde_c[i] < 0.5 - kGateSlack) {
            g.satisfied = false;
            g.offending.push_back(prof.indices.empty() ? i : prof.indices[i]);
        }
    return g;
}

GateStatus gate_case2(const ProjectionProfile& prof) {
    GateStatus g{"n/2 <= k <= n and some tilde_c_j < 1/2", true, {}};
    const int n = prof.ambient_dim, k = prof.k;
    bool some_small = false;
    for (double ct : prof.tilde_c) some_small = some_small || ct < 0.5 - kGateSlack;
    g.satisfied = 2 * k >= n && k <= n && some_small;
    return g;
}

GateStatus gate_kappa_half(const NonsymLift& nl) {
    GateStatus g{"all kappa_j >= 1/2", true, {}};
    const auto& proj = nl.projection;
    for (std::size_t i = 0; i < proj.m0(); ++i)
        if (proj.tilde_weights(static_cast<Eigen::Index>(i)) < 0.5 - kGateSlack) {
            g.satisfied = false;
            g.offending.push_back(proj.support[i]);
        }
    return g;
}

double bound_symmetric_case1(const ProjectionProfile& prof, GateMode mode) {
    enforce(gate_tilde_half(prof), mode);
    double lg = 0.5 * (static_cast<double>(prof.m0()) + prof.k) * kLog2;
    for (std::size_t i = 0; i < prof.m0(); ++i) lg += 0.5 * prof.tilde_c[i] * std::log(prof.c[i]);
    return std::exp(lg);
}

double bound_symmetric_case1_coarse(const ProjectionProfile& prof, GateMode mode) {
    enforce(gate_tilde_half(prof), mode);
    const int n = prof.ambient_dim, k = prof.k;
    const auto m0 = static_cast<int>(prof.m0());
    if (m0 <= k) return std::pow(2.0, k);
    double ratio = static_cast<double>(n - 2 * k + m0) / (m0 - k);
    return std::pow(2.0, k) * std::pow(ratio, 0.5 * (m0 - k));
}

double bound_symmetric_case2(int n, int k, GateMode mode) {
    if (mode == GateMode::enforce && (2 * k < n || k > n))
        throw GateError("out of regime: symmetric case II requires n/2 <= k <= n (n = " + std::to_string(n) +
                        ", k = " + std::to_string(k) + ")");
    return std::pow(2.0, 0.5 * (n + k));
}

double bound_ab_old(const ProjectionProfile& prof) {
    double lg = prof.k * kLog2;
    for (std::size_t i = 0; i < prof.m0(); ++i) lg += 0.5 * prof.tilde_c[i] * std::log(prof.c[i] / prof.tilde_c[i]);
    return std::exp(lg);
}

double bound_volume_via_wills(const ProjectionProfile& prof) {
    const auto m0 = static_cast<double>(prof.m0());
    double lg = prof.k * kLog2 - (m0 - prof.k) * std::log(kPi);
    std::map<double, double> log_ip;
    for (std::size_t i = 0; i < prof.m0(); ++i) {
        const double ct = prof.tilde_c[i];
        lg += ct * std::log(std::sqrt(ct) * prof.t[i]);
        if (is_unit(ct)) continue;
        const double p = 1.0 / (1.0 - ct);
        auto it = log_ip.find(p);
        if (it == log_ip.end()) it = log_ip.emplace(p, std::log(sinc_power_integral(p).value)).first;
        lg += -0.5 * (1.0 - ct) * std::log(1.0 - ct) + (1.0 - ct) * it->second;
    }
    return std::exp(lg);
}

double bound_wills_functional(const ProjectionProfile& prof, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
    const auto m0 = static_cast<double>(prof.m0());
    double lg = -(m0 - prof.k) * std::log(2.0 * kPi);
    for (std::size_t i = 0; i < prof.m0(); ++i) {
        const double ct = prof.tilde_c[i];
        const double alpha = lambda * std::sqrt(ct) * prof.t[i];
        if (is_unit(ct)) {
            lg += std::log(2.0 * alpha + 1.0);
            continue;
        }
        const double p = 1.0 / (1.0 - ct);
        QuadratureResult g = log_wills_g({alpha, p});
        lg += -0.5 * (1.0 - ct) * std::log(1.0 - ct) + g.value / p;
    }
    return std::exp(lg);
}

double bound_mean_width(const ProjectionProfile& prof) {
    double s = 0.0;
    for (std::size_t i = 0; i < prof.m0(); ++i) s += prof.tilde_c[i] * prof.t[i];
    return 2.0 * s;
}

double bound_symmetric_case1(const ProjectedDecomposition& proj, GateMode mode) {
    return bound_symmetric_case1(profile(proj), mode);
}
double bound_symmetric_case1_coarse(const ProjectedDecomposition& proj, GateMode mode) {
    return bound_symmetric_case1_coarse(profile(proj), mode);
}
double bound_ab_old(const ProjectedDecomposition& proj) { return bound_ab_old(profile(proj)); }
double bound_volume_via_wills(const ProjectedDecomposition& proj) { return bound_volume_via_wills(profile(proj)); }
double bound_wills_functional(const ProjectedDecomposition& proj, double lambda) {
    return bound_wills_functional(profile(proj), lambda);
}
double bound_mean_width(const ProjectedDecomposition& proj) { return bound_mean_width(profile(proj)); }

double gamma_karamata_product(const std::vector<double>& tilde_c) {
    double lg = 0.0;
    for (double ct : tilde_c) {
        if (is_unit(ct)) continue;
        lg += (1.0 - ct) * (log_cauchy_power_integral(ct) - 0.5 * std::log(kPi) - 0.5 * std::log(1.0 - ct));
    }
    return std::exp(lg);
}

double bound_k1_upper(const KpBall& ball, const Subspace& h, const Tolerances& tol) {
    require_p1(ball);
    return bound_kp_upper(ball, h, tol);
}

double bound_k1_intermediate(const KpBall& ball, const Subspace& h, const Tolerances& tol) {
    require_p1(ball);
    ProjectionProfile prof = ball_profile(ball, h, tol);
    const auto m0 = static_cast<double>(prof.m0());
    double lg = prof.k * kLog2 - 0.5 * (m0 - prof.k) * std::log(kPi) - log_gamma_fn(prof.k + 1.0);
    for (std::size_t i = 0; i < prof.m0(); ++i)
        lg += prof.tilde_c[i] * std::log(std::sqrt(prof.c[i]) / alpha_of(ball, prof.indices[i]));
    lg += std::log(gamma_karamata_product(prof.tilde_c));
    return std::exp(lg);
}

double bound_k1_lower(const KpBall& ball, const Subspace& h, const Tolerances& tol) {
    require_p1(ball);
    ProjectionProfile prof = ball_profile(ball, h, tol);
    require_nondegenerate(prof);
    const auto m0 = static_cast<double>(prof.m0());
    const int k = prof.k;
    double sum = 0.0, lg_prod = 0.0;
    for (std::size_t i = 0; i < prof.m0(); ++i) {
        double a = alpha_of(ball, prof.indices[i]);
        sum += a * a / prof.c[i];
        lg_prod += std::log(a / std::sqrt(prof.c[i]));
    }
    double lg = m0 * std::log(m0) - 0.5 * (m0 - k) * std::log(kPi) - 0.5 * (m0 + k) * std::log(sum) + lg_prod +
                log_gamma_fn(0.5 * (m0 + k)) - log_gamma_fn(m0) + k * kLog2 - log_gamma_fn(k + 1.0);
    return std::exp(lg);
}

double bound_kp_upper(const KpBall& ball, const Subspace& h, const Tolerances& tol) {
    ProjectionProfile prof = ball_profile(ball, h, tol);
    const double p = ball.p();
    double lg = log_lp_ball_volume(p, prof.k);
    for (std::size_t i = 0; i < prof.m0(); ++i)
        lg += prof.tilde_c[i] *
              (0.5 * std::log(prof.c[i]) - std::log(alpha_of(ball, prof.indices[i])) / p);
    return std::exp(lg);
}

double bound_kp_lower(const KpBall& ball, const Subspace& h, const Tolerances& tol) {
    ProjectionProfile prof = ball_profile(ball, h, tol);
    require_nondegenerate(prof);
    const double p = ball.p();
    const int k = prof.k;
    const int d = static_cast<int>(prof.m0()) - k;

    double lg = 0.0;
    std::vector<double> rates;
    double const_factor_log = 0.0;
    double q_max = 0.0;
    for (std::size_t i = 0; i < prof.m0(); ++i) {
        double a = alpha_of(ball, prof.indices[i]);
        lg += 0.5 * std::log(prof.c[i]) - std::log(a) / p;
        double q = prof.c[i] * std::pow(a, -2.0 / p) * (1.0 - prof.tilde_c[i]);
        if (is_unit(prof.tilde_c[i]) || q <= 0.0) {
            const_factor_log += std::log(gamma_p(p, 0.0));
        } else {
            rates.push_back(std::sqrt(q));
            q_max = std::max(q_max, q);
        }
    }
    // Substituting t = u^2 turns t^{beta-1} dt into 2 u^{d-1} du.
    auto integrand = [&](double u) {
        double v = 2.0 * std::pow(u, d - 1);
        for (double r : rates) {
            v *= gamma_p(p, u * r);
            if (v == 0.0) break;
        }
        return v;
    };
    QuadratureOptions opts;
    opts.abs_tol = 1e-300;
    opts.rel_tol = 1e-9;
    double width = q_max > 0.0 ? 1.0 / std::sqrt(q_max) : 1.0;
    QuadratureResult r = integrate_to_infinity(integrand, 0.0, opts, width);
    if (!(r.value > 0.0)) throw DomainError("K_p lower bound integral is not positive");

    const double beta = 0.5 * d;
    lg += -d * std::log(2.0 * kPi) + beta * std::log(kPi) + beta * std::log(static_cast<double>(d)) -
          log_gamma_fn(beta) + std::log(r.value) + const_factor_log - log_gamma_fn(1.0 + k / p);
    return std::exp(lg);
}

double bound_nonsym_fourier(const NonsymLift& nl, GateMode mode) {
    enforce(gate_kappa_half(nl), mode);
    const int n = nl.n, k = nl.k;
    const auto& proj = nl.projection;
    const auto j_count = static_cast<double>(proj.m0());
    double lg = 0.5 * (k + 1 - j_count) * kLog2 + 0.5 * k * std::log(n) + 0.5 * (k + 1) * std::log(n + 1.0) -
                log_gamma_fn(k + 1.0);
    for (std::size_t i = 0; i < proj.m0(); ++i)
        lg -= 0.5 * proj.tilde_weights(static_cast<Eigen::Index>(i)) * std::log(proj.weights(static_cast<Eigen::Index>(i)));
    return std::exp(lg);
}

double bound_nonsym_hyperplane(int n) {
    if (n < 2) throw DomainError("nonsym_hyperplane requires n >= 2");
    double lg = -0.5 * kLog2 + 0.5 * std::log((n + 1.0) / n) + 0.5 * (n - 1) * std::log((n + 1.0) / (n - 1.0));
    return std::exp(lg) * regular_simplex_volume(n - 1);
}

std::pair<double, double> compare_bl_direct_vs_parseval(const ProjectionProfile& prof) {
    return {bound_symmetric_case1(prof), bound_ab_old(prof)};
}

std::pair<double, double> compare_bl_direct_vs_parseval(const ProjectedDecomposition& proj) {
    return compare_bl_direct_vs_parseval(profile(proj));
}

}  // namespace slicebound
