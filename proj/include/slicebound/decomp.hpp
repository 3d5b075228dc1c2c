#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "slicebound/tolerances.hpp"

namespace slicebound {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr std::size_t kMaxVectors = 10000;

/// Weighted unit vectors (c_j, v_j) meant to resolve the identity of R^n.
/// Construction checks shapes only; use validate() for the identity.
class JohnDecomposition {
public:
    JohnDecomposition() = default;
    /// vectors: n x m, one column per v_j.
    JohnDecomposition(Matrix vectors, Vector weights, bool centered);

    static JohnDecomposition from_rows(int dim, const std::vector<std::vector<double>>& vectors,
                                       const std::vector<double>& weights, bool centered);

    int dim() const { return static_cast<int>(vectors_.rows()); }
    std::size_t size() const { return static_cast<std::size_t>(vectors_.cols()); }
    const Matrix& vectors() const { return vectors_; }
    Vector vector(std::size_t j) const { return vectors_.col(static_cast<Eigen::Index>(j)); }
    const Vector& weights() const { return weights_; }
    double weight(std::size_t j) const { return weights_(static_cast<Eigen::Index>(j)); }
    bool centered() const { return centered_; }

    /// Applies an orthogonal map to every v_j.
    JohnDecomposition rotated(const Matrix& q) const;

private:
    Matrix vectors_;
    Vector weights_;
    bool centered_ = false;
};

struct ValidationReport {
    double unit_residual = 0.0;
    double identity_residual = 0.0;
    double trace_residual = 0.0;
    std::optional<double> centering_residual;
    bool unit_ok = true;
    bool identity_ok = true;
    bool trace_ok = true;
    bool centering_ok = true;
    /// Indices whose projected norm lies in (tol_proj, 1e3 * tol_proj].
    std::vector<std::size_t> near_threshold;
    /// Indices with c~_j > 1 + tol_identity (reported, not rejected).
    std::vector<std::size_t> weight_violations;

    bool passed() const { return unit_ok && identity_ok && trace_ok && centering_ok; }
};

ValidationReport validate(const JohnDecomposition& decomp, const Tolerances& tol = {});

/// Spectral norm of a symmetric matrix.
double symmetric_op_norm(const Matrix& a);

class Subspace {
public:
    Subspace() = default;

    /// rows: k x n, linearly independent. Orthonormalized (signs kept so that
    /// an orthonormal input is returned unchanged).
    static Subspace from_basis(const Matrix& rows);
    static Subspace coordinate(int ambient_dim, const std::vector<int>& indices);
    static Subspace orthogonal_to(int ambient_dim, const Matrix& normals);
    static Subspace full(int ambient_dim);

    int ambient_dim() const { return static_cast<int>(basis_.rows()); }
    int dim() const { return static_cast<int>(basis_.cols()); }
    /// n x k, orthonormal columns.
    const Matrix& basis() const { return basis_; }
    /// n x (n - k).
    const Matrix& complement() const { return complement_; }

    Matrix projector() const { return basis_ * basis_.transpose(); }
    Vector coords(const Vector& x) const { return basis_.transpose() * x; }
    Vector embed(const Vector& y) const { return basis_ * y; }
    Subspace rotated(const Matrix& q) const;

private:
    Subspace(Matrix basis, Matrix complement)
        : basis_(std::move(basis)), complement_(std::move(complement)) {}

    Matrix basis_;
    Matrix complement_;
};

/// Orthonormalized standard normal matrix.
Subspace random_subspace(int ambient_dim, int k, std::mt19937_64& rng);
/// Haar-distributed orthogonal matrix.
Matrix random_rotation(int n, std::mt19937_64& rng);

struct ProjectedDecomposition {
    int ambient_dim = 0;
    int k = 0;
    Subspace subspace;
    std::vector<std::size_t> support;  // J
    Matrix directions;                 // k x m0, u_j in H coordinates
    Vector weights;                    // c_j, j in J
    Vector tilde_weights;              // c~_j
    Vector thresholds;                 // t_j
    std::vector<std::size_t> near_threshold;

    std::size_t m0() const { return support.size(); }
    int complement_dim() const { return static_cast<int>(m0()) - k; }
};

ProjectedDecomposition project(const JohnDecomposition& decomp, const Subspace& h,
                               const Tolerances& tol = {});

ValidationReport validate(const ProjectedDecomposition& proj, const Tolerances& tol = {});

struct Lift {
    int k = 0;
    Matrix frame;  // m0 x m0, column j is x_j; first k coordinates span H
    std::vector<std::size_t> complement_indices;  // positions in J with c~_j < 1
    Matrix complement_vectors;                    // d x |J1|, w_j in H^perp coordinates
    Vector defect_weights;                        // 1 - c~_j

    int complement_dim() const { return static_cast<int>(frame.rows()) - k; }
};

Lift lift(const ProjectedDecomposition& proj, const Tolerances& tol = {});

struct LiftResiduals {
    double gram = 0.0;
    double embedding = 0.0;
    double complement_identity = 0.0;
};

LiftResiduals check_lift(const Lift& l, const ProjectedDecomposition& proj);

struct NonsymLift {
    int n = 0;
    int k = 0;
    JohnDecomposition original;
    Subspace f;
    JohnDecomposition lifted;  // (delta_j, v_j) in R^{n+1}
    Subspace lifted_subspace;  // F + e_{n+1}, dimension k + 1
    ProjectedDecomposition projection;  // tilde weights are kappa_j

    const Vector& deltas() const { return lifted.weights(); }
    const Vector& kappa() const { return projection.tilde_weights; }
};

NonsymLift lift_nonsymmetric(const JohnDecomposition& decomp, const Subspace& f,
                             const Tolerances& tol = {});

}  // namespace slicebound
