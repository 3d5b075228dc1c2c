#include "slicebound/report.hpp"

#include <algorithm>
#include <cmath>

#include "slicebound/bodies.hpp"
#include "slicebound/errors.hpp"

namespace slicebound {

namespace {

constexpr std::int64_t kWillsSampleCap = 200000;

bool is_nonsym(const std::string& name) { return name == "nonsym_fourier" || name == "nonsym_hyperplane"; }
bool is_ball_bound(const std::string& name) { return name.rfind("k1_", 0) == 0 || name.rfind("kp_", 0) == 0; }

GateRecord record(const GateStatus& g) { return {g.required_condition, g.satisfied, g.offending}; }

GateRecord gate_for(const std::string& name, const BoundContext& ctx) {
    if (name == "symmetric_case1" || name == "symmetric_case1_coarse" || name == "wills_volume_ball")
        return record(gate_tilde_half(profile(project(ctx.decomp, ctx.subspace, ctx.tol))));
    if (name == "symmetric_case2") return record(gate_case2(profile(project(ctx.decomp, ctx.subspace, ctx.tol))));
    if (is_nonsym(name)) return record(gate_kappa_half(lift_nonsymmetric(ctx.decomp, ctx.subspace, ctx.tol)));
    return {};
}

double compute(const std::string& name, const BoundContext& ctx) {
    const GateMode f = GateMode::force;
    if (name == "symmetric_case2") return bound_symmetric_case2(ctx.decomp.dim(), ctx.subspace.dim(), f);
    if (name == "nonsym_fourier") return bound_nonsym_fourier(lift_nonsymmetric(ctx.decomp, ctx.subspace, ctx.tol), f);
    if (name == "nonsym_hyperplane") return bound_nonsym_hyperplane(ctx.decomp.dim());
    if (is_ball_bound(name)) {
        KpBall ball = ctx.ball();
        if (name == "k1_upper") return bound_k1_upper(ball, ctx.subspace, ctx.tol);
        if (name == "k1_intermediate") return bound_k1_intermediate(ball, ctx.subspace, ctx.tol);
        if (name == "k1_lower") return bound_k1_lower(ball, ctx.subspace, ctx.tol);
        if (name == "kp_upper") return bound_kp_upper(ball, ctx.subspace, ctx.tol);
        return bound_kp_lower(ball, ctx.subspace, ctx.tol);
    }
    ProjectionProfile prof = profile(project(ctx.decomp, ctx.subspace, ctx.tol));
    if (name == "symmetric_case1" || name == "wills_volume_ball") return bound_symmetric_case1(prof, f);
    if (name == "symmetric_case1_coarse") return bound_symmetric_case1_coarse(prof, f);
    if (name == "ab_old") return bound_ab_old(prof);
    if (name == "wills_volume") return bound_volume_via_wills(prof);
    if (name == "wills_functional") return bound_wills_functional(prof, ctx.lambda);
    return bound_mean_width(prof);
}

OracleValue from_mc(const McEstimate& e) {
    OracleValue v;
    v.mean = e.mean;
    v.std_error = e.std_error;
    v.method = "mc";
    v.samples = e.samples;
    v.seed = e.seed;
    return v;
}

std::vector<OracleValue> polytope_volume(const HPolytopeSection& poly, const OracleConfig& cfg) {
    std::vector<OracleValue> out;
    if (cfg.mode != OracleMode::mc && poly.dim() <= 3) {
        OracleValue v;
        v.mean = exact_volume_smallk(poly);
        v.method = "exact";
        v.slack = 1e-9 * std::max(1.0, v.mean);
        out.push_back(v);
    }
    if (cfg.mode != OracleMode::exact || poly.dim() > 3) out.push_back(from_mc(mc_volume(poly, cfg.samples, cfg.seed)));
    return out;
}

}  // namespace

const std::vector<BoundSpec>& bound_catalog() {
    static const std::vector<BoundSpec> catalog{
        {"symmetric_case1", BoundKind::upper, OracleTarget::section_volume},
        {"symmetric_case1_coarse", BoundKind::upper, OracleTarget::section_volume},
        {"symmetric_case2", BoundKind::upper, OracleTarget::section_volume},
        {"ab_old", BoundKind::upper, OracleTarget::section_volume},
        {"wills_volume", BoundKind::upper, OracleTarget::section_volume},
        {"wills_volume_ball", BoundKind::upper, OracleTarget::section_volume},
        {"wills_functional", BoundKind::upper, OracleTarget::wills},
        {"mean_width", BoundKind::upper, OracleTarget::first_intrinsic},
        {"k1_upper", BoundKind::upper, OracleTarget::kp_volume},
        {"k1_intermediate", BoundKind::upper, OracleTarget::kp_volume},
        {"k1_lower", BoundKind::lower, OracleTarget::kp_volume},
        {"kp_upper", BoundKind::upper, OracleTarget::kp_volume},
        {"kp_lower", BoundKind::lower, OracleTarget::kp_volume},
        {"nonsym_fourier", BoundKind::upper, OracleTarget::nonsym_volume},
        {"nonsym_hyperplane", BoundKind::upper, OracleTarget::nonsym_volume},
    };
    return catalog;
}

const BoundSpec& bound_spec(const std::string& name) {
    for (const auto& s : bound_catalog())
        if (s.name == name) return s;
    std::string valid;
    for (const auto& s : bound_catalog()) valid += (valid.empty() ? "" : ", ") + s.name;
    throw StructuralError("unknown bound '" + name + "'; valid names: " + valid);
}

std::string target_name(OracleTarget t) {
    switch (t) {
        case OracleTarget::section_volume: return "section_volume";
        case OracleTarget::kp_volume: return "kp_volume";
        case OracleTarget::nonsym_volume: return "nonsym_volume";
        case OracleTarget::wills: return "wills";
        case OracleTarget::first_intrinsic: return "first_intrinsic_volume";
    }
    return "";
}

KpBall BoundContext::ball() const {
    Vector a = alphas ? *alphas : Vector::Ones(static_cast<Eigen::Index>(decomp.size()));
    return KpBall(decomp, p, a);
}

std::optional<std::string> inapplicable(const std::string& name, const BoundContext& ctx) {
    bound_spec(name);
    const int n = ctx.decomp.dim(), k = ctx.subspace.dim();
    if (name.rfind("k1_", 0) == 0 && ctx.p != 1.0) return "requires p = 1";
    if (name == "k1_lower" || name == "kp_lower") {
        if (project(ctx.decomp, ctx.subspace, ctx.tol).m0() <= static_cast<std::size_t>(k))
            return "degenerate regime m0 = k";
    }
    if (name == "symmetric_case2" && (2 * k < n || k > n)) return "requires n/2 <= k <= n";
    if (is_nonsym(name) && !ctx.decomp.centered()) return "requires a centered decomposition";
    if (name == "nonsym_hyperplane" && k != n - 1) return "requires k = n - 1";
    return std::nullopt;
}

BoundEntry evaluate_bound(const std::string& name, const BoundContext& ctx, const std::string& digest) {
    bound_spec(name);
    BoundEntry e;
    e.name = name;
    e.inputs_digest = digest;
    e.gate = gate_for(name, ctx);
    if (!e.gate.satisfied && ctx.mode == GateMode::enforce) {
        std::string msg = name + ": gate violated: " + e.gate.required_condition;
        if (!e.gate.offending.empty()) {
            msg += " (offending indices:";
            for (auto i : e.gate.offending) msg += " " + std::to_string(i);
            msg += ")";
        }
        throw GateError(msg, e.gate.offending);
    }
    e.value = compute(name, ctx);
    if (!std::isfinite(*e.value) || *e.value <= 0.0)
        throw DomainError(name + " evaluated to a non-positive or non-finite value");
    return e;
}

BoundReport evaluate_all(const BoundContext& ctx, const std::string& digest) {
    BoundReport r;
    r.tol = ctx.tol;
    r.inputs_digest = digest;
    for (const auto& spec : bound_catalog()) {
        if (auto why = inapplicable(spec.name, ctx)) {
            r.skipped.emplace_back(spec.name, *why);
            continue;
        }
        try {
            r.entries.push_back(evaluate_bound(spec.name, ctx, digest));
        } catch (const GateError& ex) {
            BoundEntry e;
            e.name = spec.name;
            e.inputs_digest = digest;
            e.gate = gate_for(spec.name, ctx);
            e.error = ex.what();
            r.entries.push_back(e);
        } catch (const Error& ex) {
            BoundEntry e;
            e.name = spec.name;
            e.inputs_digest = digest;
            e.error = ex.what();
            r.entries.push_back(e);
        }
    }
    return r;
}

std::vector<OracleValue> oracle_values(OracleTarget target, const BoundContext& ctx, const OracleConfig& cfg) {
    switch (target) {
        case OracleTarget::section_volume:
            return polytope_volume(section_polytope(project(ctx.decomp, ctx.subspace, ctx.tol)), cfg);
        case OracleTarget::nonsym_volume:
            return polytope_volume(nonsym_section_polytope(lift_nonsymmetric(ctx.decomp, ctx.subspace, ctx.tol)), cfg);
        case OracleTarget::kp_volume:
            return {from_mc(mc_kp_section_volume(ctx.ball(), ctx.subspace, cfg.samples, cfg.seed))};
        case OracleTarget::wills: {
            HPolytopeSection poly = section_polytope(project(ctx.decomp, ctx.subspace, ctx.tol));
            return {from_mc(wills_oracle(poly, std::min(cfg.samples, kWillsSampleCap), cfg.seed, ctx.lambda))};
        }
        case OracleTarget::first_intrinsic: {
            if (ctx.subspace.dim() > 3) return {};
            OracleValue v;
            v.mean = v1_oracle(section_polytope(project(ctx.decomp, ctx.subspace, ctx.tol)));
            v.method = "grid";
            v.slack = 1e-3;
            return {v};
        }
    }
    return {};
}

DominanceCheck check_dominance(const BoundEntry& entry, const OracleValue& oracle) {
    DominanceCheck c;
    c.bound = entry.name;
    c.value = entry.value.value_or(0.0);
    c.oracle = oracle;
    c.kind = bound_spec(entry.name).kind;
    const double margin = 3.0 * oracle.std_error + oracle.slack + 1e-9 * std::abs(oracle.mean);
    c.holds = c.kind == BoundKind::upper ? c.value >= oracle.mean - margin : c.value <= oracle.mean + margin;
    return c;
}

}  // namespace slicebound
