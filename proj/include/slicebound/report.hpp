#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slicebound/bounds.hpp"
#include "slicebound/decomp.hpp"
#include "slicebound/oracle.hpp"

namespace slicebound {

enum class BoundKind { upper, lower };

/// Quantity an entry is compared against.
enum class OracleTarget {
    section_volume,  // vol_k({|<x, v_j>| <= 1} cap H)
    kp_volume,       // vol_k(K_p cap H)
    nonsym_volume,   // vol_k(C cap F)
    wills,           // W(lambda (L cap H))
    first_intrinsic  // V_1(L cap H)
};

struct BoundSpec {
    std::string name;
    BoundKind kind;
    OracleTarget target;
};

/// All bound identifiers in report order.
const std::vector<BoundSpec>& bound_catalog();
/// Throws StructuralError listing the valid names.
const BoundSpec& bound_spec(const std::string& name);
std::string target_name(OracleTarget t);

struct BoundContext {
    JohnDecomposition decomp;
    Subspace subspace;
    double p = 1.0;
    std::optional<Vector> alphas;  // defaults to all ones
    double lambda = 1.0;
    Tolerances tol;
    GateMode mode = GateMode::enforce;

    KpBall ball() const;
};

struct GateRecord {
    std::string required_condition = "none";
    bool satisfied = true;
    std::vector<std::size_t> offending;
};

struct BoundEntry {
    std::string name;
    std::optional<double> value;  // empty when the gate failed and was not forced
    GateRecord gate;
    std::string inputs_digest;
    std::string error;  // message when value is empty
};

/// Reason the bound does not apply to this input at all, if any.
std::optional<std::string> inapplicable(const std::string& name, const BoundContext& ctx);

/// Evaluates one bound. Gate failures under GateMode::enforce throw GateError;
/// under GateMode::force the value is computed and the gate marked unsatisfied.
BoundEntry evaluate_bound(const std::string& name, const BoundContext& ctx, const std::string& digest = "");

struct BoundReport {
    std::vector<BoundEntry> entries;
    std::vector<std::pair<std::string, std::string>> skipped;  // (name, reason)
    Tolerances tol;
    std::string inputs_digest;
};

/// Evaluates every applicable bound; gate failures become entries without a value
/// (or forced values). Other numerical failures are recorded as entry errors.
BoundReport evaluate_all(const BoundContext& ctx, const std::string& digest = "");

struct OracleValue {
    double mean = 0.0;
    double std_error = 0.0;  // 0 for deterministic routes
    std::string method;      // "exact", "mc", "grid"
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    /// Absolute slack for deterministic routes.
    double slack = 0.0;
};

enum class OracleMode { mc, exact, both };

struct OracleConfig {
    OracleMode mode = OracleMode::both;
    std::int64_t samples = 1000000;
    std::uint64_t seed = 0;
};

/// Ground-truth estimates for a target; may return several (exact and MC).
std::vector<OracleValue> oracle_values(OracleTarget target, const BoundContext& ctx, const OracleConfig& cfg);

struct DominanceCheck {
    std::string bound;
    double value = 0.0;
    OracleValue oracle;
    BoundKind kind = BoundKind::upper;
    bool holds = true;
};

/// Upper bound >= oracle - 3 sigma, lower bound <= oracle + 3 sigma.
DominanceCheck check_dominance(const BoundEntry& entry, const OracleValue& oracle);

}  // namespace slicebound
