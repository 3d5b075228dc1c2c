#pragma once

#include <optional>

#include "slicebound/bounds.hpp"
#include "slicebound/decomp.hpp"

namespace slicebound {

/// {y : <y, a_i> <= b_i} in the coordinates of a subspace H.
struct HPolytopeSection {
    Subspace subspace;
    Matrix normals;  // rows a_i in R^k
    Vector offsets;  // b_i
    bool symmetric = false;
    /// Radius of a centered ball known to contain the polytope.
    std::optional<double> envelope_radius;

    int dim() const { return static_cast<int>(normals.cols()); }
    std::size_t size() const { return static_cast<std::size_t>(normals.rows()); }
    bool contains(const Vector& y, double slack = 0.0) const;
};

/// Envelope radius if stored, otherwise the frame-operator bound for symmetric polytopes.
/// Throws StructuralError when no bound is available.
double bounding_radius(const HPolytopeSection& poly);

Matrix sylvester_hadamard(int order);
JohnDecomposition hadamard_decomposition(int k, int n);

struct HadamardSection {
    double value = 0.0;              // (n/k)^{k/2} 2^k
    double determinant_route = 0.0;  // |det W| (2 sqrt(n/k))^k
};
HadamardSection hadamard_section_exact(int k, int n);

HPolytopeSection section_polytope(const ProjectedDecomposition& proj);
/// C cap F with C = {x : <x, u_j> <= 1}.
HPolytopeSection nonsym_section_polytope(const NonsymLift& nl);

JohnDecomposition cube_decomposition(int n);
KpBall cross_polytope_ball(int n);
JohnDecomposition simplex_decomposition(int n);
KpBall kp_ball(const JohnDecomposition& decomp, double p, const Vector& alphas);

}  // namespace slicebound
