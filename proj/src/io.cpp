#include "slicebound/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slicebound/errors.hpp"

namespace slicebound {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw StructuralError("field '" + field + "': " + what);
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) field_error(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) field_error(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

double number(const Json& j, const std::string& field) {
    if (!j.is_number()) field_error(field, "expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) field_error(field, "not finite");
    return v;
}

Vector vector_of(const Json& j, const std::string& field) {
    if (!j.is_array()) field_error(field, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = number(j[i], field + "[" + std::to_string(i) + "]");
    return v;
}

/// Rows of equal length `cols` (or any length when cols < 0), as a matrix with one row per entry.
Matrix rows_of(const Json& j, const std::string& field, int cols) {
    if (!j.is_array()) field_error(field, "expected an array of rows");
    Matrix m;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string f = field + "[" + std::to_string(i) + "]";
        Vector r = vector_of(j[i], f);
        if (i == 0) {
            if (cols >= 0 && r.size() != cols)
                field_error(f, "expected " + std::to_string(cols) + " entries, got " + std::to_string(r.size()));
            m.resize(static_cast<Eigen::Index>(j.size()), r.size());
        } else if (r.size() != m.cols()) {
            field_error(f, "row length " + std::to_string(r.size()) + " differs from " + std::to_string(m.cols()));
        }
        m.row(static_cast<Eigen::Index>(i)) = r.transpose();
    }
    return m;
}

Json rows_json(const Matrix& m) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
        out.push_back(row);
    }
    return out;
}

Json vec_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

template <class T>
Json list_json(const std::vector<T>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(x);
    return out;
}

}  // namespace

JohnDecomposition decomposition_from_json(const Json& j) {
    const Json& dim_j = require(j, "dim", "");
    if (!dim_j.is_number_integer() || dim_j.get<long long>() < 1) field_error("dim", "expected a positive integer");
    const int n = dim_j.get<int>();
    Matrix rows = rows_of(require(j, "vectors", ""), "vectors", n);
    Vector w = vector_of(require(j, "weights", ""), "weights");
    if (w.size() != rows.rows())
        field_error("weights", "expected " + std::to_string(rows.rows()) + " entries (one per vector), got " +
                                   std::to_string(w.size()));
    if (static_cast<std::size_t>(rows.rows()) > kMaxVectors)
        field_error("vectors", "more than " + std::to_string(kMaxVectors) + " vectors");
    bool centered = false;
    if (auto it = j.find("centered"); it != j.end()) {
        if (!it->is_boolean()) field_error("centered", "expected a boolean");
        centered = it->get<bool>();
    }
    return JohnDecomposition(rows.transpose(), w, centered);
}

Json to_json(const JohnDecomposition& d) {
    return Json{{"dim", d.dim()},
                {"vectors", rows_json(d.vectors().transpose())},
                {"weights", vec_json(d.weights())},
                {"centered", d.centered()}};
}

Subspace subspace_from_json(const Json& j, int n) {
    if (j.is_string()) {
        if (j.get<std::string>() == "full") return Subspace::full(n);
        field_error("subspace", "unknown form '" + j.get<std::string>() + "'");
    }
    if (j.is_array()) return Subspace::from_basis(rows_of(j, "subspace", n));
    if (!j.is_object()) field_error("subspace", "expected basis rows or an object");
    if (auto it = j.find("basis"); it != j.end()) return Subspace::from_basis(rows_of(*it, "subspace.basis", n));
    if (auto it = j.find("orthogonal_to"); it != j.end())
        return Subspace::orthogonal_to(n, rows_of(*it, "subspace.orthogonal_to", n));
    if (auto it = j.find("coordinate"); it != j.end()) {
        if (!it->is_array()) field_error("subspace.coordinate", "expected an array of indices");
        std::vector<int> idx;
        for (std::size_t i = 0; i < it->size(); ++i) {
            const Json& e = (*it)[i];
            if (!e.is_number_integer()) field_error("subspace.coordinate[" + std::to_string(i) + "]", "expected an integer");
            idx.push_back(e.get<int>());
        }
        return Subspace::coordinate(n, idx);
    }
    field_error("subspace", "expected one of 'basis', 'coordinate', 'orthogonal_to'");
}

Json to_json(const Subspace& h) { return Json{{"basis", rows_json(h.basis().transpose())}}; }

ProblemInput problem_from_json(const Json& j) {
    if (!j.is_object()) field_error("(root)", "expected an object");
    ProblemInput in;
    in.source = j;
    const Json& d = j.contains("decomposition") ? j.at("decomposition") : j;
    in.decomp = decomposition_from_json(d);
    const int n = in.decomp.dim();
    if (auto it = j.find("subspace"); it != j.end()) in.subspace = subspace_from_json(*it, n);
    if (auto it = j.find("p"); it != j.end()) in.p = number(*it, "p");
    if (auto it = j.find("alphas"); it != j.end()) {
        in.alphas = vector_of(*it, "alphas");
        if (static_cast<std::size_t>(in.alphas->size()) != in.decomp.size())
            field_error("alphas", "expected " + std::to_string(in.decomp.size()) + " entries");
    }
    if (auto it = j.find("lambda"); it != j.end()) in.lambda = number(*it, "lambda");
    return in;
}

Json to_json(const ProblemInput& in) {
    Json j{{"decomposition", to_json(in.decomp)}};
    if (in.subspace) j["subspace"] = to_json(*in.subspace);
    j["p"] = in.p;
    if (in.alphas) j["alphas"] = vec_json(*in.alphas);
    j["lambda"] = in.lambda;
    return j;
}

Json to_json(const Tolerances& t) {
    return Json{{"unit", t.unit}, {"identity", t.identity}, {"proj", t.proj}};
}

Json to_json(const ValidationReport& r) {
    Json j{{"passed", r.passed()},
           {"unit_residual", r.unit_residual},
           {"identity_residual", r.identity_residual},
           {"trace_residual", r.trace_residual},
           {"unit_ok", r.unit_ok},
           {"identity_ok", r.identity_ok},
           {"trace_ok", r.trace_ok},
           {"centering_ok", r.centering_ok},
           {"near_threshold", list_json(r.near_threshold)},
           {"weight_violations", list_json(r.weight_violations)}};
    j["centering_residual"] = r.centering_residual ? Json(*r.centering_residual) : Json(nullptr);
    return j;
}

Json to_json(const ProjectedDecomposition& p) {
    return Json{{"ambient_dim", p.ambient_dim},
                {"k", p.k},
                {"m0", p.m0()},
                {"subspace", to_json(p.subspace)},
                {"support", list_json(p.support)},
                {"directions", rows_json(p.directions.transpose())},
                {"weights", vec_json(p.weights)},
                {"tilde_weights", vec_json(p.tilde_weights)},
                {"thresholds", vec_json(p.thresholds)},
                {"near_threshold", list_json(p.near_threshold)}};
}

Json to_json(const HPolytopeSection& poly) {
    Json j{{"normals", rows_json(poly.normals)},
           {"offsets", vec_json(poly.offsets)},
           {"basis", rows_json(poly.subspace.basis().transpose())},
           {"symmetric", poly.symmetric}};
    if (poly.envelope_radius) j["envelope_radius"] = *poly.envelope_radius;
    return j;
}

Json to_json(const McEstimate& e) {
    return Json{{"mean", e.mean},
                {"std_error", e.std_error},
                {"samples", e.samples},
                {"seed", e.seed},
                {"hit_rate", e.hit_rate}};
}

Json to_json(const OracleValue& v) {
    Json j{{"mean", v.mean}, {"std_error", v.std_error}, {"method", v.method}};
    if (v.method == "mc") {
        j["samples"] = v.samples;
        j["seed"] = v.seed;
    }
    if (v.slack > 0.0) j["slack"] = v.slack;
    return j;
}

Json to_json(const BoundEntry& e) {
    Json j{{"name", e.name},
           {"value", e.value ? Json(*e.value) : Json(nullptr)},
           {"gate",
            {{"required_condition", e.gate.required_condition},
             {"satisfied", e.gate.satisfied},
             {"offending", list_json(e.gate.offending)}}},
           {"inputs_digest", e.inputs_digest}};
    if (!e.error.empty()) j["error"] = e.error;
    return j;
}

Json to_json(const BoundReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries) entries.push_back(to_json(e));
    Json skipped = Json::array();
    for (const auto& [name, why] : r.skipped) skipped.push_back({{"name", name}, {"reason", why}});
    return Json{{"entries", entries},
                {"skipped", skipped},
                {"metadata", {{"tolerances", to_json(r.tol)}, {"inputs_digest", r.inputs_digest}}}};
}

Json to_json(const DominanceCheck& c) {
    return Json{{"bound", c.bound},
                {"kind", c.kind == BoundKind::upper ? "upper" : "lower"},
                {"value", c.value},
                {"oracle", to_json(c.oracle)},
                {"holds", c.holds}};
}

Json to_json(const ParsevalResult& r) {
    return Json{{"lhs", r.lhs},
                {"lhs_std_error", r.lhs_std_error},
                {"lhs_method", r.lhs_method},
                {"rhs", r.rhs},
                {"rhs_error_estimate", r.rhs_error_estimate},
                {"rhs_method", r.rhs_method},
                {"difference", r.lhs - r.rhs},
                {"tolerance", r.tolerance()},
                {"agrees", r.agrees()},
                {"flagged", r.flagged},
                {"m0", r.m0},
                {"gates",
                 {{"d", r.gates.d},
                  {"rank", r.gates.rank},
                  {"nontrivial_factors", r.gates.nontrivial_factors},
                  {"rank_ok", r.gates.rank_ok},
                  {"count_ok", r.gates.count_ok},
                  {"satisfied", r.gates.satisfied()}}}};
}

std::string digest(const Json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw StructuralError("malformed JSON in " + what + ": " + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path);
}

}  // namespace slicebound
