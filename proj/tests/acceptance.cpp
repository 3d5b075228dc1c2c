#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "slicebound/bodies.hpp"
#include "slicebound/bounds.hpp"
#include "slicebound/errors.hpp"
#include "slicebound/oracle.hpp"
#include "slicebound/report.hpp"
#include "slicebound/specfun.hpp"

using namespace slicebound;
using testutil::kPi;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::uint64_t base_seed() {
    if (const char* env = std::getenv("SLICEBOUND_SEED")) return std::strtoull(env, nullptr, 10);
    return 20240611;
}

double lp_volume(double p, int k) { return std::pow(2.0 * std::tgamma(1.0 + 1.0 / p), k) / std::tgamma(1.0 + k / p); }

std::vector<int> first_k(int k) {
    std::vector<int> idx;
    for (int i = 0; i < k; ++i) idx.push_back(i);
    return idx;
}

JohnDecomposition orthonormal_basis(const Matrix& q) { return JohnDecomposition(q, Vector::Ones(q.cols()), false); }

Outcome hadamard_equality() {
    Outcome o;
    std::ostringstream d;
    const std::vector<std::pair<int, int>> cases{{2, 2}, {2, 3}, {2, 4}, {4, 4}, {4, 6}, {4, 8}};
    std::uint64_t seed = base_seed();
    for (auto [k, n] : cases) {
        const double want = std::pow(static_cast<double>(n) / k, 0.5 * k) * std::pow(2.0, k);
        HPolytopeSection poly = section_polytope(project(hadamard_decomposition(k, n), Subspace::coordinate(n, first_k(k))));
        const double exact = k <= 3 ? exact_volume_smallk(poly) : hadamard_section_exact(k, n).determinant_route;
        McEstimate mc = mc_volume(poly, 1000000, seed++);
        const bool eq = std::abs(exact - want) <= 1e-9 * want;
        const double z = std::abs(mc.mean - want) / mc.std_error;
        o.pass = o.pass && eq && z <= 3.0;
        d << "(" << k << "," << n << ") exact_rel=" << std::abs(exact - want) / want << " mc_z=" << z << "; ";
    }
    o.detail = d.str();
    return o;
}

Outcome cube_sharpness() {
    Outcome o;
    double worst = 0.0;
    for (int k = 1; k <= 6; ++k) {
        ProjectedDecomposition p = project(cube_decomposition(k), Subspace::coordinate(k, first_k(k)));
        worst = std::max(worst, std::abs(bound_symmetric_case1(p) - std::pow(2.0, k)));
        ProjectedDecomposition q = project(cube_decomposition(k + 3), Subspace::coordinate(k + 3, first_k(k)));
        worst = std::max(worst, std::abs(bound_symmetric_case1(q) - std::pow(2.0, k)));
    }
    o.pass = worst <= 1e-12;
    o.detail = "max |bound - 2^k| = " + std::to_string(worst);
    return o;
}

Outcome ball_integral() {
    Outcome o;
    double worst_margin = 1e300;
    for (double p = 2.0; p <= 10.0 + 1e-12; p += 0.5) {
        const double ip = sinc_power_integral(p).value;
        const double rhs = std::sqrt(2.0) * kPi / std::sqrt(p);
        worst_margin = std::min(worst_margin, rhs - ip);
        o.pass = o.pass && ip <= rhs + 1e-8;
    }
    const double i2 = sinc_power_integral(2.0).value;
    o.pass = o.pass && std::abs(i2 - kPi) <= 1e-8;
    std::ostringstream d;
    d << "min(rhs - I_p) = " << worst_margin << ", |I_2 - pi| = " << std::abs(i2 - kPi);
    o.detail = d.str();
    return o;
}

Outcome parseval() {
    Outcome o;
    std::ostringstream d;
    Matrix d2(1, 2), d3(1, 3);
    d2 << 1, 1;
    d3 << 1, 1, 1;
    struct Case {
        std::string name;
        ProjectedDecomposition proj;
    };
    std::vector<Case> cases{{"R2 diagonal line", project(cube_decomposition(2), Subspace::from_basis(d2))},
                            {"R3 diagonal plane", project(cube_decomposition(3), Subspace::orthogonal_to(3, d3))},
                            {"R3 diagonal line", project(cube_decomposition(3), Subspace::from_basis(d3))},
                            {"R3 plane x1 = x2", project(cube_decomposition(3), Subspace::orthogonal_to(3, (Matrix(1, 3) << 1, -1, 0).finished()))},
                            {"R3 plane normal (1,2,3)", project(cube_decomposition(3), Subspace::orthogonal_to(3, (Matrix(1, 3) << 1, 2, 3).finished()))}};
    for (const auto& c : cases) {
        ParsevalResult r = parseval_check(c.proj);
        const double diff = std::abs(r.lhs - r.rhs);
        o.pass = o.pass && r.gates.satisfied() && r.gates.d <= 2 && diff <= 1e-6;
        d << c.name << " d=" << r.gates.d << " |lhs-rhs|=" << diff << "; ";
    }
    o.detail = d.str();
    return o;
}

Outcome k1_chain() {
    Outcome o;
    std::mt19937_64 rng(base_seed() + 5);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 5;
        const int k = 1 + (trial / 5) % std::min(3, n);
        KpBall ball = cross_polytope_ball(n);
        Subspace h = random_subspace(n, k, rng);
        McEstimate mc = mc_kp_section_volume(ball, h, 100000, base_seed() + 1000 + trial);
        const double s3 = 3.0 * mc.std_error;
        const double mid = bound_k1_intermediate(ball, h), up = bound_k1_upper(ball, h);
        const double vol = std::pow(2.0, k) / std::tgamma(k + 1.0);
        if (!(mc.mean <= mid + s3 && mid <= up + s3 && up <= vol + s3)) ++violations;
    }
    o.pass = violations == 0;
    o.detail = "100 sections, violations = " + std::to_string(violations);
    return o;
}

Outcome kp_coordinate() {
    Outcome o;
    std::ostringstream d;
    std::uint64_t seed = base_seed() + 77;
    double worst_rel = 0.0, worst_z = 0.0;
    for (double p : {1.0, 1.5, 2.0})
        for (int k = 1; k <= 3; ++k) {
            KpBall ball = kp_ball(orthonormal_basis(Matrix::Identity(5, 5)), p, Vector::Ones(5));
            Subspace h = Subspace::coordinate(5, first_k(k));
            const double want = lp_volume(p, k);
            const double b = bound_kp_upper(ball, h);
            McEstimate mc = mc_kp_section_volume(ball, h, 400000, seed++);
            worst_rel = std::max(worst_rel, std::abs(b - want) / want);
            // A zero standard error means every sample hit; only rounding separates the two.
            const double diff = std::abs(mc.mean - b);
            worst_z = std::max(worst_z, diff <= 1e-12 * b ? 0.0 : diff / mc.std_error);
        }
    o.pass = worst_rel <= 1e-12 && worst_z <= 3.0;
    d << "max rel |bound - vol(B_p^k)| = " << worst_rel << ", max mc z = " << worst_z;
    o.detail = d.str();
    return o;
}

Outcome mean_width() {
    Outcome o;
    std::ostringstream d;
    std::mt19937_64 rng(base_seed() + 9);
    double worst_excess = -1e300, worst_eq = 0.0;
    for (int k = 1; k <= 3; ++k) {
        ProjectedDecomposition p = project(cube_decomposition(k), Subspace::full(k));
        const double v1 = v1_oracle(section_polytope(p));
        worst_eq = std::max(worst_eq, std::max(std::abs(v1 - 2.0 * k), std::abs(bound_mean_width(p) - 2.0 * k)));
    }
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 4;
        const int k = 1 + trial % std::min(3, n);
        ProjectedDecomposition p = project(cube_decomposition(n), random_subspace(n, k, rng));
        worst_excess = std::max(worst_excess, v1_oracle(section_polytope(p)) - bound_mean_width(p));
    }
    o.pass = worst_excess <= 1e-3 && worst_eq <= 1e-3;
    d << "max(V1 - bound) = " << worst_excess << ", full cube |V1 - 2k| = " << worst_eq;
    o.detail = d.str();
    return o;
}

Outcome wills_expansion() {
    Outcome o;
    std::ostringstream d;
    const double h = 1e-4;
    for (double p : {2.0, 3.0, 4.0}) {
        const double g0 = wills_g({0.0, p}).value;
        const double gh = wills_g({h, p}).value;
        const double slope = (gh - g0) / h;
        const double want = 4.0 * kPi * std::sqrt(p - 1.0);
        const double rel = std::abs(slope - want) / want;
        const double g0_err = std::abs(g0 - 2.0 * kPi / std::sqrt(p));
        o.pass = o.pass && rel <= 1e-2 && g0_err <= 1e-8;
        d << "p=" << p << " slope_rel=" << rel << " |g(0)-2pi/sqrt p|=" << g0_err << "; ";
    }
    o.detail = d.str();
    return o;
}

Outcome karamata() {
    Outcome o;
    std::mt19937_64 rng(base_seed() + 13);
    int gated = 0, order_viol = 0, gamma_viol = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 6;
        const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        JohnDecomposition d;
        switch (trial % 3) {
            case 0: d = orthonormal_basis(random_rotation(n, rng)); break;
            case 1: d = cube_decomposition(n).rotated(random_rotation(n, rng)); break;
            default: d = simplex_decomposition(n).rotated(random_rotation(n, rng)); break;
        }
        ProjectionProfile prof = profile(project(d, random_subspace(n, k, rng)));
        if (gate_tilde_half(prof).satisfied) {
            ++gated;
            if (bound_symmetric_case1(prof) > bound_ab_old(prof) * (1.0 + 1e-12)) ++order_viol;
        }
        const double cap = std::pow(kPi, 0.5 * (static_cast<double>(prof.m0()) - k));
        if (gamma_karamata_product(prof.tilde_c) > cap * (1.0 + 1e-12)) ++gamma_viol;
    }
    o.pass = order_viol == 0 && gamma_viol == 0 && gated > 0;
    o.detail = "1000 configurations (" + std::to_string(gated) + " gated), ordering violations = " +
               std::to_string(order_viol) + ", Gamma product violations = " + std::to_string(gamma_viol);
    return o;
}

double simplex_section_length(const Vector& a, std::uint64_t seed, McEstimate& mc) {
    Vector f(2);
    f << -a(1), a(0);
    NonsymLift nl = lift_nonsymmetric(simplex_decomposition(2), Subspace::from_basis(f.transpose()));
    mc = mc_volume(nonsym_section_polytope(nl), 200000, seed);
    return mc.mean;
}

Outcome nonsym() {
    Outcome o;
    std::ostringstream d;
    const double b = bound_nonsym_hyperplane(2);
    const bool exact = b == 3.0 || std::abs(b - 3.0) <= 4.0 * std::numeric_limits<double>::epsilon();
    std::mt19937_64 rng(base_seed() + 21);
    std::normal_distribution<double> g;
    int over = 0;
    double longest = 0.0;
    for (int i = 0; i < 50; ++i) {
        Vector a(2);
        a << g(rng), g(rng);
        a.normalize();
        McEstimate mc;
        const double len = simplex_section_length(a, base_seed() + 300 + i, mc);
        longest = std::max(longest, len);
        if (len > b + 3.0 * mc.std_error) ++over;
    }
    Vector sharp(2);
    sharp << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    McEstimate mc;
    const double attained = simplex_section_length(sharp, base_seed() + 999, mc) / b;
    o.pass = exact && over == 0 && attained >= 0.95;
    d.precision(17);
    d << "bound(2) = " << b << "; 50 directions, over = " << over << ", longest = " << longest
      << "; sharp direction attains " << attained;
    o.detail = d.str();
    return o;
}

struct Fixture {
    std::string family;
    BoundContext ctx;
};

std::vector<Fixture> fixture_suite(std::mt19937_64& rng) {
    std::vector<Fixture> out;
    auto add = [&](const std::string& fam, JohnDecomposition d, const Subspace& h, double p = 1.0,
                   std::optional<Vector> alphas = std::nullopt, double lambda = 1.0) {
        Fixture f;
        f.family = fam;
        f.ctx.decomp = std::move(d);
        f.ctx.subspace = h;
        f.ctx.p = p;
        f.ctx.alphas = std::move(alphas);
        f.ctx.lambda = lambda;
        out.push_back(std::move(f));
    };
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // Cube: coordinate and random sections.
    for (int n = 2; n <= 6; ++n)
        for (int k = 1; k <= n; ++k) {
            add("cube", cube_decomposition(n), Subspace::coordinate(n, first_k(k)));
            for (int r = 0; r < 3; ++r) add("cube", cube_decomposition(n), random_subspace(n, k, rng), 1.0, std::nullopt, 0.5 + unif(rng));
        }
    // Cross-polytope as K_1.
    for (int n = 2; n <= 6; ++n)
        for (int k = 1; k <= std::min(n, 4); ++k)
            for (int r = 0; r < 3; ++r) {
                KpBall b = cross_polytope_ball(n);
                add("cross", b.decomp(), random_subspace(n, k, rng), 1.0, b.alphas());
            }
    // Hadamard systems, rotated.
    for (auto [k, n] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 2}, {2, 3}, {2, 4}, {4, 4}, {4, 6}, {4, 8}})
        for (int r = 0; r < 4; ++r) {
            Matrix q = r == 0 ? Matrix::Identity(n, n) : random_rotation(n, rng);
            Subspace h = Subspace::coordinate(n, first_k(k)).rotated(q);
            add("hadamard", hadamard_decomposition(k, n).rotated(q), h);
        }
    // K_p with random weights.
    for (int trial = 0; trial < 80; ++trial) {
        const int n = 2 + trial % 4;
        const int k = 1 + trial % std::min(n, 3);
        const double p = 1.0 + unif(rng);
        JohnDecomposition d = trial % 2 ? simplex_decomposition(n).rotated(random_rotation(n, rng))
                                        : orthonormal_basis(random_rotation(n, rng));
        Vector alphas(static_cast<Eigen::Index>(d.size()));
        for (Eigen::Index j = 0; j < alphas.size(); ++j) alphas(j) = 0.5 + 1.5 * unif(rng);
        add("kp", d, random_subspace(n, k, rng), p, alphas);
    }
    // Simplex.
    for (int n = 2; n <= 5; ++n)
        for (int k = 1; k <= n; ++k)
            for (int r = 0; r < 5; ++r) add("simplex", simplex_decomposition(n), random_subspace(n, k, rng));
    return out;
}

Outcome dominance_sweep() {
    Outcome o;
    std::mt19937_64 rng(base_seed() + 31);
    std::vector<Fixture> suite = fixture_suite(rng);
    OracleConfig cfg;
    cfg.mode = OracleMode::both;
    cfg.samples = 40000;
    std::size_t comparisons = 0, violations = 0, gated_out = 0;
    std::ostringstream worst;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const BoundContext& ctx = suite[i].ctx;
        BoundReport r = evaluate_all(ctx);
        std::map<OracleTarget, std::vector<OracleValue>> cache;
        for (const auto& e : r.entries) {
            if (!e.value) {
                ++gated_out;
                continue;
            }
            OracleTarget t = bound_spec(e.name).target;
            if (!cache.count(t)) {
                cfg.seed = base_seed() + 7919 * (i + 1) + static_cast<std::uint64_t>(t);
                cache[t] = oracle_values(t, ctx, cfg);
            }
            for (const auto& ov : cache[t]) {
                ++comparisons;
                DominanceCheck c = check_dominance(e, ov);
                if (!c.holds) {
                    ++violations;
                    worst << suite[i].family << "#" << i << ":" << e.name << " value=" << *e.value << " oracle=" << ov.mean
                          << "+-" << ov.std_error << " (" << ov.method << "); ";
                }
            }
        }
    }
    o.pass = violations == 0 && suite.size() >= 300;
    o.detail = std::to_string(suite.size()) + " configurations, " + std::to_string(comparisons) + " comparisons, " +
               std::to_string(gated_out) + " gated entries, violations = " + std::to_string(violations);
    if (violations) o.detail += ": " + worst.str();
    return o;
}

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "hadamard_equality", 30, hadamard_equality},
        {2, "cube_sharpness", 1, cube_sharpness},
        {3, "sinc_power_inequality", 10, ball_integral},
        {4, "parseval_checker", 20, parseval},
        {5, "k1_chain", 300, k1_chain},
        {6, "kp_coordinate_equality", 120, kp_coordinate},
        {7, "mean_width", 60, mean_width},
        {8, "wills_expansion", 30, wills_expansion},
        {9, "karamata_orderings", 30, karamata},
        {10, "nonsymmetric_bound", 120, nonsym},
        {11, "dominance_sweep", 600, dominance_sweep},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_seconds;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::printf("%s criterion %d %s (%.2fs of %.0fs): %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    c.budget_seconds, o.detail.c_str(), in_time ? "" : " [over time budget]");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
