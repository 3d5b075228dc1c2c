#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "slicebound/oracle.hpp"
#include "slicebound/report.hpp"

namespace slicebound {

using Json = nlohmann::json;

/// {"dim", "vectors", "weights", "centered"}; StructuralError names the offending field.
JohnDecomposition decomposition_from_json(const Json& j);
Json to_json(const JohnDecomposition& d);

/// Accepts basis rows, {"basis": rows}, {"coordinate": [i...]} (0-based),
/// {"orthogonal_to": rows} or "full".
Subspace subspace_from_json(const Json& j, int ambient_dim);
Json to_json(const Subspace& h);

/// A decomposition plus optional subspace, p, alphas and lambda. The decomposition
/// may sit at the top level or under "decomposition".
struct ProblemInput {
    JohnDecomposition decomp;
    std::optional<Subspace> subspace;
    double p = 1.0;
    std::optional<Vector> alphas;
    double lambda = 1.0;
    Json source;  // the parsed document, for digests
};

ProblemInput problem_from_json(const Json& j);
Json to_json(const ProblemInput& in);

Json to_json(const ValidationReport& r);
Json to_json(const ProjectedDecomposition& p);
Json to_json(const HPolytopeSection& poly);
Json to_json(const McEstimate& e);
Json to_json(const OracleValue& v);
Json to_json(const BoundEntry& e);
Json to_json(const BoundReport& r);
Json to_json(const DominanceCheck& c);
Json to_json(const ParsevalResult& r);
Json to_json(const Tolerances& t);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string digest(const Json& j);

/// Parses text, reporting the position on failure.
Json parse_json(const std::string& text, const std::string& what);
Json read_json_file(const std::string& path);

}  // namespace slicebound
