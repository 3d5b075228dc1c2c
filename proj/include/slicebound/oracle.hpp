#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slicebound/bodies.hpp"
#include "slicebound/bounds.hpp"
#include "slicebound/decomp.hpp"

namespace slicebound {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    double hit_rate = 0.0;
};

/// Uniform rejection sampling from the centered enclosing ball, in H coordinates.
McEstimate mc_volume(const HPolytopeSection& poly, std::int64_t samples, std::uint64_t seed);

/// Vertex enumeration volume; k <= 3.
double exact_volume_smallk(const HPolytopeSection& poly);

/// Vertices of a bounded polytope with k <= 3, deduplicated.
std::vector<Vector> polytope_vertices(const HPolytopeSection& poly);

McEstimate mc_kp_section_volume(const KpBall& ball, const Subspace& h, std::int64_t samples, std::uint64_t seed);

struct ParsevalGates {
    int d = 0;
    int rank = 0;
    std::size_t nontrivial_factors = 0;
    bool rank_ok = true;
    bool count_ok = true;

    bool satisfied() const { return rank_ok && count_ok; }
};

struct ParsevalOptions {
    double quad_tol = 1e-8;
    std::int64_t samples = 1000000;  // lhs MC for k > 3, rhs MC for d >= 3
    std::uint64_t seed = 1;
};

struct ParsevalResult {
    double lhs = 0.0;
    double lhs_std_error = 0.0;  // 0 when exact
    std::string lhs_method;      // "exact" or "mc"
    double rhs = 0.0;
    double rhs_error_estimate = 0.0;
    std::string rhs_method;      // "product", "quadrature" or "mc"
    ParsevalGates gates;
    /// Merged system after combining parallel directions.
    std::size_t m0 = 0;
    bool flagged = false;  // rhs by MC, 1% accuracy target
    double quad_tol = 0.0;

    double tolerance() const;
    bool agrees() const;
};

/// Two sides of the Fourier identity for the section polytope of proj.
/// Throws GateError when the gates fail.
ParsevalResult parseval_check(const ProjectedDecomposition& proj, const ParsevalOptions& opts = {});
/// Gates only; never throws on gate failure.
ParsevalGates parseval_gates(const ProjectedDecomposition& proj);

/// int_H exp(-pi d(x, scale * P)^2) dx.
McEstimate wills_oracle(const HPolytopeSection& poly, std::int64_t samples, std::uint64_t seed,
                        double scale = 1.0);
/// First intrinsic volume from the support function averaged over a sphere grid; k <= 3.
double v1_oracle(const HPolytopeSection& poly);

/// Euclidean projection onto a polytope by Dykstra's cyclic algorithm.
Vector project_onto_polytope(const HPolytopeSection& poly, const Vector& x, double tol = 1e-9,
                             int max_iter = 10000);

}  // namespace slicebound
