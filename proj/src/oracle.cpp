#include "slicebound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mc.hpp"
#include "slicebound/errors.hpp"
#include "slicebound/specfun.hpp"

namespace slicebound {

namespace {

constexpr double kPi = std::numbers::pi;

void require_samples(std::int64_t samples) {
    if (samples < 1000) throw PreconditionError("Monte Carlo needs at least 1000 samples");
}

McEstimate hit_estimate(const detail::SampleSums& s, double envelope_volume, std::uint64_t seed) {
    McEstimate e;
    e.samples = s.count;
    e.seed = seed;
    e.hit_rate = s.sum / static_cast<double>(s.count);
    e.mean = e.hit_rate * envelope_volume;
    e.std_error = std::sqrt(e.hit_rate * (1.0 - e.hit_rate) / static_cast<double>(s.count)) * envelope_volume;
    return e;
}

struct Constraints {
    std::vector<Vector> normals;  // unit length
    std::vector<double> offsets;
};

Constraints normalized_constraints(const HPolytopeSection& poly) {
    Constraints c;
    for (Eigen::Index i = 0; i < poly.normals.rows(); ++i) {
        Vector a = poly.normals.row(i).transpose();
        double len = a.norm();
        if (len == 0.0) {
            if (poly.offsets(i) < 0.0) throw DomainError("polytope is empty");
            continue;
        }
        a /= len;
        double b = poly.offsets(i) / len;
        bool merged = false;
        for (std::size_t q = 0; q < c.normals.size(); ++q) {
            if ((c.normals[q] - a).lpNorm<Eigen::Infinity>() <= 1e-10) {
                c.offsets[q] = std::min(c.offsets[q], b);
                merged = true;
                break;
            }
        }
        if (!merged) {
            c.normals.push_back(a);
            c.offsets.push_back(b);
        }
    }
    return c;
}

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    if (k > n) return;
    while (true) {
        f(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

std::vector<Vector> enumerate_vertices(const Constraints& c, int k) {
    std::vector<Vector> verts;
    const int n = static_cast<int>(c.normals.size());
    for_each_subset(n, k, [&](const std::vector<int>& idx) {
        Matrix a(k, k);
        Vector b(k);
        for (int i = 0; i < k; ++i) {
            a.row(i) = c.normals[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])].transpose();
            b(i) = c.offsets[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        }
        Eigen::FullPivLU<Matrix> lu(a);
        lu.setThreshold(1e-12);
        if (lu.rank() < k) return;
        Vector x = lu.solve(b);
        for (int q = 0; q < n; ++q)
            if (c.normals[static_cast<std::size_t>(q)].dot(x) > c.offsets[static_cast<std::size_t>(q)] + 1e-9) return;
        for (const auto& v : verts)
            if ((v - x).norm() <= 1e-9) return;
        verts.push_back(x);
    });
    return verts;
}

double polygon_area(std::vector<Vector> pts) {
    if (pts.size() < 3) return 0.0;
    Vector c = Vector::Zero(2);
    for (const auto& p : pts) c += p;
    c /= static_cast<double>(pts.size());
    std::sort(pts.begin(), pts.end(), [&](const Vector& a, const Vector& b) {
        return std::atan2(a(1) - c(1), a(0) - c(0)) < std::atan2(b(1) - c(1), b(0) - c(0));
    });
    double area = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vector& p = pts[i];
        const Vector& q = pts[(i + 1) % pts.size()];
        area += p(0) * q(1) - p(1) * q(0);
    }
    return 0.5 * std::abs(area);
}

double volume_from_constraints(const Constraints& c, int k) {
    if (k == 1) {
        double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < c.normals.size(); ++i) {
            if (c.normals[i](0) > 0) hi = std::min(hi, c.offsets[i]);
            else lo = std::max(lo, -c.offsets[i]);
        }
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw StructuralError("polytope is unbounded");
        return std::max(0.0, hi - lo);
    }
    std::vector<Vector> verts = enumerate_vertices(c, k);
    if (k == 2) return polygon_area(verts);

    // k == 3: pyramids from the vertex centroid over each facet.
    if (verts.size() < 4) return 0.0;
    Vector centroid = Vector::Zero(3);
    for (const auto& v : verts) centroid += v;
    centroid /= static_cast<double>(verts.size());
    double vol = 0.0;
    for (std::size_t i = 0; i < c.normals.size(); ++i) {
        const Vector& a = c.normals[i];
        std::vector<Vector> face;
        for (const auto& v : verts)
            if (std::abs(a.dot(v) - c.offsets[i]) <= 1e-8) face.push_back(v);
        if (face.size() < 3) continue;
        Vector e1 = (face[1] - face[0]);
        e1 -= a.dot(e1) * a;
        e1.normalize();
        Eigen::Vector3d e2 = Eigen::Vector3d(a).cross(Eigen::Vector3d(e1));
        std::vector<Vector> flat;
        for (const auto& v : face) {
            Vector p(2);
            Vector rel = v - face[0];
            p << e1.dot(rel), e2.dot(Eigen::Vector3d(rel));
            flat.push_back(p);
        }
        double height = c.offsets[i] - a.dot(centroid);
        vol += polygon_area(flat) * height / 3.0;
    }
    return vol;
}

}  // namespace

McEstimate mc_volume(const HPolytopeSection& poly, std::int64_t samples, std::uint64_t seed) {
    require_samples(samples);
    const int k = poly.dim();
    const double r = bounding_radius(poly);
    auto s = detail::sample_ball(k, r, samples, seed, [&](const Vector& y) { return poly.contains(y) ? 1.0 : 0.0; });
    return hit_estimate(s, unit_ball_volume(k) * std::pow(r, k), seed);
}

std::vector<Vector> polytope_vertices(const HPolytopeSection& poly) {
    const int k = poly.dim();
    if (k < 1 || k > 3) throw DomainError("vertex enumeration supports 1 <= k <= 3 (got k = " + std::to_string(k) + ")");
    bounding_radius(poly);
    Constraints c = normalized_constraints(poly);
    if (k == 1) {
        std::vector<Vector> v;
        double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < c.normals.size(); ++i) {
            if (c.normals[i](0) > 0) hi = std::min(hi, c.offsets[i]);
            else lo = std::max(lo, -c.offsets[i]);
        }
        v.push_back(Vector::Constant(1, lo));
        v.push_back(Vector::Constant(1, hi));
        return v;
    }
    return enumerate_vertices(c, k);
}

double exact_volume_smallk(const HPolytopeSection& poly) {
    const int k = poly.dim();
    if (k < 1 || k > 3) throw DomainError("exact volume supports 1 <= k <= 3 (got k = " + std::to_string(k) + ")");
    bounding_radius(poly);
    return volume_from_constraints(normalized_constraints(poly), k);
}

McEstimate mc_kp_section_volume(const KpBall& ball, const Subspace& h, std::int64_t samples, std::uint64_t seed) {
    require_samples(samples);
    const int k = h.dim();
    const JohnDecomposition& d = ball.decomp();
    Matrix proj = h.basis().transpose() * d.vectors();
    // |x|^2 = sum c_j t_j^2 <= max_j (c_j alpha_j^{-2/p}) sum alpha_j |t_j|^p for p <= 2.
    double r2 = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        auto e = static_cast<Eigen::Index>(j);
        if (proj.col(e).norm() <= 1e-12) continue;
        r2 = std::max(r2, d.weight(j) * std::pow(ball.alphas()(e), -2.0 / ball.p()));
    }
    const double r = std::sqrt(r2);
    auto s = detail::sample_ball(k, r, samples, seed, [&](const Vector& y) {
        Vector ip = proj.transpose() * y;
        double acc = 0.0;
        for (Eigen::Index j = 0; j < ip.size(); ++j) acc += ball.alphas()(j) * std::pow(std::abs(ip(j)), ball.p());
        return acc <= 1.0 ? 1.0 : 0.0;
    });
    return hit_estimate(s, unit_ball_volume(k) * std::pow(r, k), seed);
}

Vector project_onto_polytope(const HPolytopeSection& poly, const Vector& x, double tol, int max_iter) {
    if (poly.contains(x)) return x;
    const Eigen::Index m = poly.normals.rows();
    std::vector<double> norms_sq(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) norms_sq[static_cast<std::size_t>(i)] = poly.normals.row(i).squaredNorm();
    Vector y = x;
    Matrix incr = Matrix::Zero(x.size(), m);
    for (int it = 0; it < max_iter; ++it) {
        Vector start = y;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (norms_sq[static_cast<std::size_t>(i)] == 0.0) continue;
            Vector z = y + incr.col(i);
            double excess = poly.normals.row(i).dot(z) - poly.offsets(i);
            y = excess > 0.0 ? Vector(z - (excess / norms_sq[static_cast<std::size_t>(i)]) * poly.normals.row(i).transpose())
                             : z;
            incr.col(i) = z - y;
        }
        if ((y - start).norm() <= tol) break;
    }
    return y;
}

McEstimate wills_oracle(const HPolytopeSection& poly, std::int64_t samples, std::uint64_t seed, double scale) {
    require_samples(samples);
    if (!(scale > 0.0)) throw DomainError("scale must be positive");
    HPolytopeSection scaled = poly;
    scaled.offsets *= scale;
    if (scaled.envelope_radius) *scaled.envelope_radius *= scale;
    const int k = poly.dim();
    const double r = bounding_radius(scaled) + 3.5;
    auto s = detail::sample_ball(k, r, samples, seed, [&](const Vector& y) {
        if (scaled.contains(y)) return 1.0;
        Vector p = project_onto_polytope(scaled, y);
        return std::exp(-kPi * (y - p).squaredNorm());
    });
    const double env = unit_ball_volume(k) * std::pow(r, k);
    const auto n = static_cast<double>(s.count);
    const double mean = s.sum / n;
    const double var = std::max(0.0, (s.sum_sq / n - mean * mean) * n / (n - 1.0));
    McEstimate e;
    e.samples = s.count;
    e.seed = seed;
    e.mean = mean * env;
    e.std_error = std::sqrt(var / n) * env;
    e.hit_rate = mean;
    return e;
}

double v1_oracle(const HPolytopeSection& poly) {
    const int k = poly.dim();
    if (k < 1 || k > 3) throw DomainError("v1_oracle supports 1 <= k <= 3 (got k = " + std::to_string(k) + ")");
    std::vector<Vector> verts = polytope_vertices(poly);
    auto support = [&](const Vector& theta) {
        double h = -std::numeric_limits<double>::infinity();
        for (const auto& v : verts) h = std::max(h, v.dot(theta));
        return h;
    };
    if (k == 1) return support(Vector::Ones(1)) + support(-Vector::Ones(1));

    constexpr int kGrid = 10000;
    double avg = 0.0;
    if (k == 2) {
        for (int i = 0; i < kGrid; ++i) {
            double phi = 2.0 * kPi * (i + 0.5) / kGrid;
            Vector theta(2);
            theta << std::cos(phi), std::sin(phi);
            avg += support(theta);
        }
    } else {
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        for (int i = 0; i < kGrid; ++i) {
            double z = 1.0 - (2.0 * i + 1.0) / kGrid;
            double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            double phi = 2.0 * kPi * i / golden;
            Vector theta(3);
            theta << rho * std::cos(phi), rho * std::sin(phi), z;
            avg += support(theta);
        }
    }
    avg /= kGrid;
    return k * unit_ball_volume(k) / unit_ball_volume(k - 1) * avg;
}

}  // namespace slicebound
