#include "slicebound/decomp.hpp"

#include <cmath>
#include <string>

#include "slicebound/errors.hpp"

namespace slicebound {

JohnDecomposition::JohnDecomposition(Matrix vectors, Vector weights, bool centered)
    : vectors_(std::move(vectors)), weights_(std::move(weights)), centered_(centered) {
    if (vectors_.rows() < 1) throw StructuralError("decomposition dimension must be >= 1");
    if (vectors_.cols() != weights_.size())
        throw StructuralError("decomposition has " + std::to_string(vectors_.cols()) +
                              " vectors but " + std::to_string(weights_.size()) + " weights");
    if (static_cast<std::size_t>(vectors_.cols()) > kMaxVectors)
        throw StructuralError("decomposition has more than 10000 vectors");
    for (Eigen::Index j = 0; j < weights_.size(); ++j)
        if (!(weights_(j) > 0.0) || !std::isfinite(weights_(j)))
            throw StructuralError("weight " + std::to_string(j) + " is not a positive finite number");
    if (!vectors_.allFinite()) throw StructuralError("decomposition vectors contain non-finite entries");
}

JohnDecomposition JohnDecomposition::from_rows(int dim, const std::vector<std::vector<double>>& vectors,
                                               const std::vector<double>& weights, bool centered) {
    if (dim < 1) throw StructuralError("dim must be >= 1");
    Matrix v(dim, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        if (static_cast<int>(vectors[j].size()) != dim)
            throw StructuralError("vector " + std::to_string(j) + " has length " +
                                  std::to_string(vectors[j].size()) + ", expected dim " +
                                  std::to_string(dim));
        for (int i = 0; i < dim; ++i) v(i, static_cast<Eigen::Index>(j)) = vectors[j][i];
    }
    return JohnDecomposition(std::move(v), Eigen::Map<const Vector>(weights.data(), static_cast<Eigen::Index>(weights.size())),
                             centered);
}

JohnDecomposition JohnDecomposition::rotated(const Matrix& q) const {
    return JohnDecomposition(q * vectors_, weights_, centered_);
}

double symmetric_op_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    const Vector& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

ValidationReport validate(const JohnDecomposition& decomp, const Tolerances& tol) {
    const int n = decomp.dim();
    if (decomp.size() < static_cast<std::size_t>(n))
        throw StructuralError("decomposition needs at least dim = " + std::to_string(n) + " vectors");
    const Matrix& v = decomp.vectors();
    const Vector& c = decomp.weights();

    ValidationReport r;
    r.unit_residual = (v.colwise().norm().array() - 1.0).abs().maxCoeff();
    Matrix frame = v * c.asDiagonal() * v.transpose();
    r.identity_residual = symmetric_op_norm(frame - Matrix::Identity(n, n));
    r.trace_residual = std::abs(c.sum() - n);
    r.unit_ok = r.unit_residual <= tol.unit;
    r.identity_ok = r.identity_residual <= tol.identity;
    r.trace_ok = r.trace_residual <= tol.identity;
    if (decomp.centered()) {
        r.centering_residual = (v * c).norm();
        r.centering_ok = *r.centering_residual <= tol.identity;
    }
    return r;
}

Subspace Subspace::from_basis(const Matrix& rows) {
    const Eigen::Index k = rows.rows();
    const Eigen::Index n = rows.cols();
    if (n < 1) throw StructuralError("subspace ambient dimension must be >= 1");
    if (k > n) throw StructuralError("subspace has more basis vectors than the ambient dimension");
    if (k == 0) return Subspace(Matrix(n, 0), Matrix::Identity(n, n));
    if (!rows.allFinite()) throw StructuralError("subspace basis contains non-finite entries");

    Eigen::HouseholderQR<Matrix> qr(rows.transpose());
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const double scale = rows.rowwise().norm().maxCoeff();
    for (Eigen::Index i = 0; i < k; ++i) {
        if (std::abs(r(i, i)) <= 1e-10 * scale)
            throw StructuralError("subspace basis rows are linearly dependent");
        if (r(i, i) < 0) q.col(i) *= -1.0;
    }
    return Subspace(q.leftCols(k), q.rightCols(n - k));
}

Subspace Subspace::coordinate(int ambient_dim, const std::vector<int>& indices) {
    if (ambient_dim < 1) throw StructuralError("subspace ambient dimension must be >= 1");
    std::vector<bool> used(static_cast<std::size_t>(ambient_dim), false);
    Matrix b = Matrix::Zero(ambient_dim, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i) {
        int idx = indices[i];
        if (idx < 0 || idx >= ambient_dim)
            throw StructuralError("coordinate index " + std::to_string(idx) + " out of range");
        if (used[static_cast<std::size_t>(idx)]) throw StructuralError("repeated coordinate index");
        used[static_cast<std::size_t>(idx)] = true;
        b(idx, static_cast<Eigen::Index>(i)) = 1.0;
    }
    Matrix c = Matrix::Zero(ambient_dim, ambient_dim - static_cast<Eigen::Index>(indices.size()));
    Eigen::Index col = 0;
    for (int i = 0; i < ambient_dim; ++i)
        if (!used[static_cast<std::size_t>(i)]) c(i, col++) = 1.0;
    return Subspace(std::move(b), std::move(c));
}

Subspace Subspace::orthogonal_to(int ambient_dim, const Matrix& normals) {
    if (normals.cols() != ambient_dim)
        throw StructuralError("orthogonal_to normals must have length " + std::to_string(ambient_dim));
    Subspace perp = from_basis(normals);
    return Subspace(perp.complement_, perp.basis_);
}

Subspace Subspace::full(int ambient_dim) {
    if (ambient_dim < 1) throw StructuralError("subspace ambient dimension must be >= 1");
    return Subspace(Matrix::Identity(ambient_dim, ambient_dim), Matrix(ambient_dim, 0));
}

Subspace Subspace::rotated(const Matrix& q) const { return Subspace(q * basis_, q * complement_); }

Subspace random_subspace(int ambient_dim, int k, std::mt19937_64& rng) {
    if (k < 0 || k > ambient_dim) throw DomainError("random subspace dimension out of range");
    std::normal_distribution<double> g;
    Matrix a(k, ambient_dim);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = g(rng);
    return Subspace::from_basis(a);
}

Matrix random_rotation(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = g(rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    for (Eigen::Index i = 0; i < n; ++i)
        if (qr.matrixQR()(i, i) < 0) q.col(i) *= -1.0;
    return q;
}

ProjectedDecomposition project(const JohnDecomposition& decomp, const Subspace& h, const Tolerances& tol) {
    if (h.ambient_dim() != decomp.dim())
        throw StructuralError("subspace ambient dimension " + std::to_string(h.ambient_dim()) +
                              " does not match decomposition dimension " + std::to_string(decomp.dim()));
    ProjectedDecomposition p;
    p.ambient_dim = decomp.dim();
    p.k = h.dim();
    p.subspace = h;

    Matrix coords = h.basis().transpose() * decomp.vectors();
    Vector norms = coords.colwise().norm();
    for (std::size_t j = 0; j < decomp.size(); ++j) {
        double nj = norms(static_cast<Eigen::Index>(j));
        if (nj > tol.proj) {
            p.support.push_back(j);
            if (nj <= 1e3 * tol.proj) p.near_threshold.push_back(j);
        } else if (nj > 1e-3 * tol.proj) {
            p.near_threshold.push_back(j);
        }
    }
    const auto m0 = static_cast<Eigen::Index>(p.support.size());
    p.directions.resize(p.k, m0);
    p.weights.resize(m0);
    p.tilde_weights.resize(m0);
    p.thresholds.resize(m0);
    for (Eigen::Index i = 0; i < m0; ++i) {
        auto j = static_cast<Eigen::Index>(p.support[static_cast<std::size_t>(i)]);
        double nj = norms(j);
        p.directions.col(i) = coords.col(j) / nj;
        p.weights(i) = decomp.weights()(j);
        p.tilde_weights(i) = p.weights(i) * nj * nj;
        p.thresholds(i) = 1.0 / nj;
    }
    return p;
}

ValidationReport validate(const ProjectedDecomposition& proj, const Tolerances& tol) {
    ValidationReport r;
    const int k = proj.k;
    if (proj.m0() > 0) {
        r.unit_residual = (proj.directions.colwise().norm().array() - 1.0).abs().maxCoeff();
        Matrix frame = proj.directions * proj.tilde_weights.asDiagonal() * proj.directions.transpose();
        r.identity_residual = symmetric_op_norm(frame - Matrix::Identity(k, k));
    } else {
        r.identity_residual = k > 0 ? 1.0 : 0.0;
    }
    r.trace_residual = std::abs(proj.tilde_weights.sum() - k);
    r.unit_ok = r.unit_residual <= tol.unit;
    r.identity_ok = r.identity_residual <= tol.identity;
    r.trace_ok = r.trace_residual <= tol.identity;
    r.near_threshold = proj.near_threshold;
    for (std::size_t i = 0; i < proj.m0(); ++i)
        if (proj.tilde_weights(static_cast<Eigen::Index>(i)) > 1.0 + tol.identity)
            r.weight_violations.push_back(proj.support[i]);
    return r;
}

namespace {

// Appends the component of v orthogonal to the rows collected so far, if it is
// not negligible. Two passes of modified Gram-Schmidt.
bool append_orthogonal(std::vector<Vector>& rows, Vector v, double pivot_tol) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : rows) v -= q.dot(v) * q;
    double nv = v.norm();
    if (nv <= pivot_tol) return false;
    rows.push_back(v / nv);
    return true;
}

}  // namespace

Lift lift(const ProjectedDecomposition& proj, const Tolerances& tol) {
    const int k = proj.k;
    const auto m0 = static_cast<Eigen::Index>(proj.m0());
    if (m0 < k) throw StructuralError("lift needs m0 >= k");

    Matrix rows = proj.directions * proj.tilde_weights.cwiseSqrt().asDiagonal();
    Matrix gram = rows * rows.transpose();
    double residual = symmetric_op_norm(gram - Matrix::Identity(k, k));
    if (residual > tol.identity)
        throw StructuralError("projected system does not resolve the identity on H (residual " +
                              std::to_string(residual) + ")");
    // Symmetric orthonormalization removes the residual without changing the span.
    if (k > 0) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
        Vector inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
        rows = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose() * rows;
    }

    std::vector<Vector> basis;
    for (int i = 0; i < k; ++i) basis.push_back(rows.row(i).transpose());
    for (Eigen::Index s = 0; s < m0 && static_cast<Eigen::Index>(basis.size()) < m0; ++s)
        append_orthogonal(basis, Vector::Unit(m0, s), 1e-8);
    if (static_cast<Eigen::Index>(basis.size()) != m0)
        throw StructuralError("basis completion failed in lift");

    Lift l;
    l.k = k;
    l.frame.resize(m0, m0);
    for (Eigen::Index i = 0; i < m0; ++i) l.frame.row(i) = basis[static_cast<std::size_t>(i)].transpose();

    const Eigen::Index d = m0 - k;
    std::vector<Vector> ws;
    std::vector<double> defects;
    for (Eigen::Index j = 0; j < m0; ++j) {
        double ct = proj.tilde_weights(j);
        if (ct >= 1.0 - kUnitWeightGap) continue;
        Vector w = l.frame.col(j).tail(d) / std::sqrt(1.0 - ct);
        for (Eigen::Index i = 0; i < d; ++i) {
            if (std::abs(w(i)) > 1e-12) {
                if (w(i) < 0) w = -w;
                break;
            }
        }
        l.complement_indices.push_back(static_cast<std::size_t>(j));
        ws.push_back(w);
        defects.push_back(1.0 - ct);
    }
    l.complement_vectors.resize(d, static_cast<Eigen::Index>(ws.size()));
    l.defect_weights.resize(static_cast<Eigen::Index>(ws.size()));
    for (std::size_t i = 0; i < ws.size(); ++i) {
        l.complement_vectors.col(static_cast<Eigen::Index>(i)) = ws[i];
        l.defect_weights(static_cast<Eigen::Index>(i)) = defects[i];
    }
    return l;
}

LiftResiduals check_lift(const Lift& l, const ProjectedDecomposition& proj) {
    LiftResiduals r;
    const auto m0 = l.frame.cols();
    r.gram = symmetric_op_norm(l.frame.transpose() * l.frame - Matrix::Identity(m0, m0));
    for (Eigen::Index j = 0; j < m0; ++j) {
        Vector expect = std::sqrt(proj.tilde_weights(j)) * proj.directions.col(j);
        r.embedding = std::max(r.embedding, (l.frame.col(j).head(l.k) - expect).norm());
    }
    const int d = l.complement_dim();
    if (d > 0) {
        Matrix s = l.complement_vectors * l.defect_weights.asDiagonal() * l.complement_vectors.transpose();
        r.complement_identity = symmetric_op_norm(s - Matrix::Identity(d, d));
    }
    return r;
}

NonsymLift lift_nonsymmetric(const JohnDecomposition& decomp, const Subspace& f, const Tolerances& tol) {
    const int n = decomp.dim();
    if (f.ambient_dim() != n)
        throw StructuralError("subspace ambient dimension does not match decomposition");
    double centering = (decomp.vectors() * decomp.weights()).norm();
    if (centering > tol.identity)
        throw PreconditionError("decomposition is not centered: |sum c_j u_j| = " + std::to_string(centering));

    const auto m = static_cast<Eigen::Index>(decomp.size());
    const double scale = std::sqrt(n / (n + 1.0));
    Matrix lv(n + 1, m);
    lv.topRows(n) = -scale * decomp.vectors();
    lv.row(n).setConstant(scale / std::sqrt(static_cast<double>(n)));
    Vector deltas = decomp.weights() * ((n + 1.0) / n);

    NonsymLift nl;
    nl.n = n;
    nl.k = f.dim();
    nl.original = decomp;
    nl.f = f;
    nl.lifted = JohnDecomposition(std::move(lv), std::move(deltas), false);

    Matrix rows = Matrix::Zero(nl.k + 1, n + 1);
    rows.topLeftCorner(nl.k, n) = f.basis().transpose();
    rows(nl.k, n) = 1.0;
    nl.lifted_subspace = Subspace::from_basis(rows);
    nl.projection = project(nl.lifted, nl.lifted_subspace, tol);
    return nl;
}

}  // namespace slicebound
