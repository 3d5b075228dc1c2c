#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "slicebound/decomp.hpp"

namespace slicebound {

/// Unit ball of ||x|| = (sum_j alpha_j |<x, v_j>|^p)^{1/p}.
class KpBall {
public:
    KpBall() = default;
    KpBall(JohnDecomposition decomp, double p, Vector alphas);

    const JohnDecomposition& decomp() const { return decomp_; }
    double p() const { return p_; }
    const Vector& alphas() const { return alphas_; }
    double norm(const Vector& x) const;

private:
    JohnDecomposition decomp_;
    double p_ = 1.0;
    Vector alphas_;
};

/// Scalar data of a projected system: what the closed-form bounds consume.
struct ProjectionProfile {
    int ambient_dim = 0;
    int k = 0;
    std::vector<std::size_t> indices;  // original indices, for gate reports
    std::vector<double> c;
    std::vector<double> tilde_c;
    std::vector<double> t;

    std::size_t m0() const { return tilde_c.size(); }
};

ProjectionProfile profile(const ProjectedDecomposition& proj);

enum class GateMode { enforce, force };

struct GateStatus {
    std::string required_condition;
    bool satisfied = true;
    std::vector<std::size_t> offending;
};

GateStatus gate_tilde_half(const ProjectionProfile& prof);
GateStatus gate_case2(const ProjectionProfile& prof);
GateStatus gate_kappa_half(const NonsymLift& nl);

double bound_symmetric_case1(const ProjectionProfile& prof, GateMode mode = GateMode::enforce);
double bound_symmetric_case1_coarse(const ProjectionProfile& prof, GateMode mode = GateMode::enforce);
double bound_symmetric_case2(int n, int k, GateMode mode = GateMode::enforce);
double bound_ab_old(const ProjectionProfile& prof);
double bound_volume_via_wills(const ProjectionProfile& prof);
double bound_wills_functional(const ProjectionProfile& prof, double lambda);
double bound_mean_width(const ProjectionProfile& prof);

double bound_symmetric_case1(const ProjectedDecomposition& proj, GateMode mode = GateMode::enforce);
double bound_symmetric_case1_coarse(const ProjectedDecomposition& proj, GateMode mode = GateMode::enforce);
double bound_ab_old(const ProjectedDecomposition& proj);
double bound_volume_via_wills(const ProjectedDecomposition& proj);
double bound_wills_functional(const ProjectedDecomposition& proj, double lambda);
double bound_mean_width(const ProjectedDecomposition& proj);

double bound_k1_upper(const KpBall& ball, const Subspace& h, const Tolerances& tol = {});
double bound_k1_intermediate(const KpBall& ball, const Subspace& h, const Tolerances& tol = {});
double bound_k1_lower(const KpBall& ball, const Subspace& h, const Tolerances& tol = {});
double bound_kp_upper(const KpBall& ball, const Subspace& h, const Tolerances& tol = {});
double bound_kp_lower(const KpBall& ball, const Subspace& h, const Tolerances& tol = {});

double bound_nonsym_fourier(const NonsymLift& nl, GateMode mode = GateMode::enforce);
double bound_nonsym_hyperplane(int n);

/// (parseval_route, direct_route) = (symmetric_case1, ab_old).
std::pair<double, double> compare_bl_direct_vs_parseval(const ProjectionProfile& prof);
std::pair<double, double> compare_bl_direct_vs_parseval(const ProjectedDecomposition& proj);

/// prod over c~_j < 1 of (Gamma(p_j - 1/2) / (sqrt(1 - c~_j) Gamma(p_j)))^{1 - c~_j}, p_j = 1/(1 - c~_j).
double gamma_karamata_product(const std::vector<double>& tilde_c);

}  // namespace slicebound
