#include "slicebound/bodies.hpp"

#include <cmath>
#include <string>

#include "slicebound/errors.hpp"

namespace slicebound {

bool HPolytopeSection::contains(const Vector& y, double slack) const {
    for (Eigen::Index i = 0; i < normals.rows(); ++i)
        if (normals.row(i).dot(y) > offsets(i) + slack) return false;
    return true;
}

double bounding_radius(const HPolytopeSection& poly) {
    if (poly.envelope_radius) return *poly.envelope_radius;
    const int k = poly.dim();
    if (poly.symmetric && poly.size() > 0) {
        Matrix frame = poly.normals.transpose() * poly.normals;
        Eigen::SelfAdjointEigenSolver<Matrix> es(frame, Eigen::EigenvaluesOnly);
        double lmin = es.eigenvalues()(0);
        if (lmin > 1e-12 * es.eigenvalues()(k - 1)) return std::sqrt(poly.offsets.squaredNorm() / lmin);
    }
    throw StructuralError("polytope is unbounded or has no known enclosing ball");
}

Matrix sylvester_hadamard(int order) {
    if (order < 1 || (order & (order - 1)) != 0)
        throw DomainError("unsupported Hadamard order " + std::to_string(order) + " (Sylvester powers of 2 only)");
    Matrix h = Matrix::Ones(1, 1);
    while (h.rows() < order) {
        const Eigen::Index q = h.rows();
        Matrix next(2 * q, 2 * q);
        next << h, h, h, -h;
        h = std::move(next);
    }
    return h;
}

JohnDecomposition hadamard_decomposition(int k, int n) {
    if (k < 1 || (k & (k - 1)) != 0)
        throw PreconditionError("Hadamard construction needs k a power of 2 (got " + std::to_string(k) + ")");
    if (n < k || n > 2 * k)
        throw PreconditionError("Hadamard construction needs k <= n <= 2k (got k = " + std::to_string(k) +
                                ", n = " + std::to_string(n) + ")");
    Matrix h = sylvester_hadamard(2 * k);
    Matrix v = h.topRows(n) / std::sqrt(static_cast<double>(n));
    Vector c = Vector::Constant(2 * k, static_cast<double>(n) / (2.0 * k));
    return JohnDecomposition(std::move(v), std::move(c), false);
}

HadamardSection hadamard_section_exact(int k, int n) {
    hadamard_decomposition(k, n);  // precondition checks
    HadamardSection s;
    s.value = std::pow(static_cast<double>(n) / k, 0.5 * k) * std::pow(2.0, k);
    Matrix w = sylvester_hadamard(k) / std::sqrt(static_cast<double>(k));
    s.determinant_route = std::abs(w.determinant()) * std::pow(2.0 * std::sqrt(static_cast<double>(n) / k), k);
    return s;
}

HPolytopeSection section_polytope(const ProjectedDecomposition& proj) {
    const int k = proj.k;
    std::vector<Vector> dirs;
    std::vector<double> offs;
    for (std::size_t i = 0; i < proj.m0(); ++i) {
        Vector u = proj.directions.col(static_cast<Eigen::Index>(i));
        for (Eigen::Index j = 0; j < k; ++j) {
            if (std::abs(u(j)) > 1e-10) {
                if (u(j) < 0) u = -u;
                break;
            }
        }
        double t = proj.thresholds(static_cast<Eigen::Index>(i));
        bool merged = false;
        for (std::size_t q = 0; q < dirs.size(); ++q) {
            if ((dirs[q] - u).lpNorm<Eigen::Infinity>() <= 1e-10) {
                offs[q] = std::min(offs[q], t);
                merged = true;
                break;
            }
        }
        if (!merged) {
            dirs.push_back(u);
            offs.push_back(t);
        }
    }
    HPolytopeSection poly;
    poly.subspace = proj.subspace;
    poly.symmetric = true;
    poly.normals.resize(2 * static_cast<Eigen::Index>(dirs.size()), k);
    poly.offsets.resize(2 * static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t q = 0; q < dirs.size(); ++q) {
        auto r = static_cast<Eigen::Index>(2 * q);
        poly.normals.row(r) = dirs[q].transpose();
        poly.normals.row(r + 1) = -dirs[q].transpose();
        poly.offsets(r) = offs[q];
        poly.offsets(r + 1) = offs[q];
    }
    poly.envelope_radius = std::sqrt(proj.weights.sum());
    return poly;
}

HPolytopeSection nonsym_section_polytope(const NonsymLift& nl) {
    const Subspace& f = nl.f;
    Matrix a = (f.basis().transpose() * nl.original.vectors()).transpose();  // m x k
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < a.rows(); ++j)
        if (a.row(j).norm() > 1e-12) keep.push_back(j);
    HPolytopeSection poly;
    poly.subspace = f;
    poly.symmetric = false;
    poly.normals.resize(static_cast<Eigen::Index>(keep.size()), f.dim());
    poly.offsets = Vector::Ones(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) poly.normals.row(static_cast<Eigen::Index>(i)) = a.row(keep[i]);
    // A body in John position with the Euclidean ball inscribed lies in n B_2^n.
    poly.envelope_radius = static_cast<double>(nl.n);
    return poly;
}

JohnDecomposition cube_decomposition(int n) {
    if (n < 1) throw DomainError("cube dimension must be >= 1");
    Matrix v(n, 2 * n);
    v << Matrix::Identity(n, n), -Matrix::Identity(n, n);
    return JohnDecomposition(std::move(v), Vector::Constant(2 * n, 0.5), true);
}

KpBall cross_polytope_ball(int n) {
    if (n < 1) throw DomainError("cross-polytope dimension must be >= 1");
    JohnDecomposition d(Matrix::Identity(n, n), Vector::Ones(n), false);
    return KpBall(std::move(d), 1.0, Vector::Ones(n));
}

JohnDecomposition simplex_decomposition(int n) {
    if (n < 1) throw DomainError("simplex dimension must be >= 1");
    if (n == 1) {
        Matrix v(1, 2);
        v << 1.0, -1.0;
        return JohnDecomposition(std::move(v), Vector::Constant(2, 0.5), true);
    }
    const int m = n + 1;
    // Orthonormal basis of the sum-zero hyperplane of R^{n+1}; b1 - b2 is parallel to e1 - e2.
    std::vector<Vector> basis;
    Vector e12 = Vector::Zero(m);
    e12(0) = 1.0 / std::sqrt(2.0);
    e12(1) = -1.0 / std::sqrt(2.0);
    Vector f = Vector::Zero(m);
    f(0) = f(1) = 1.0 / std::sqrt(6.0);
    f(2) = -2.0 / std::sqrt(6.0);
    basis.push_back((e12 + f) / std::sqrt(2.0));
    basis.push_back((f - e12) / std::sqrt(2.0));
    const Vector g = Vector::Constant(m, 1.0 / m);
    for (int j = 0; j < m && static_cast<int>(basis.size()) < n; ++j) {
        Vector v = Vector::Unit(m, j) - g;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) v -= b.dot(v) * b;
        if (v.norm() > 1e-8) basis.push_back(v / v.norm());
    }
    Matrix b(m, n);
    for (int i = 0; i < n; ++i) b.col(i) = basis[static_cast<std::size_t>(i)];

    Matrix u(n, m);
    for (int j = 0; j < m; ++j) {
        Vector w = Vector::Unit(m, j) - g;
        u.col(j) = b.transpose() * w / w.norm();
    }
    return JohnDecomposition(std::move(u), Vector::Constant(m, static_cast<double>(n) / m), true);
}

KpBall kp_ball(const JohnDecomposition& decomp, double p, const Vector& alphas) {
    return KpBall(decomp, p, alphas);
}

}  // namespace slicebound
