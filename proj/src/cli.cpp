#include "slicebound/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "mc.hpp"
#include "slicebound/bodies.hpp"
#include "slicebound/errors.hpp"
#include "slicebound/io.hpp"

namespace slicebound {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t require_seed(const RunConfig& cfg) {
    if (cfg.seed) return *cfg.seed;
    if (const char* env = std::getenv("SLICEBOUND_SEED")) {
        try {
            std::size_t pos = 0;
            unsigned long long v = std::stoull(env, &pos);
            if (pos == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw StructuralError("SLICEBOUND_SEED is not an unsigned integer: '" + std::string(env) + "'");
    }
    throw StructuralError("Monte Carlo needs a seed: pass --seed or set SLICEBOUND_SEED");
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output_path.empty() || cfg.output_path == "-") {
        out << text;
        return;
    }
    std::ofstream f(cfg.output_path);
    if (!f) throw StructuralError("cannot write '" + cfg.output_path + "'");
    f << text;
}

void write_json(const RunConfig& cfg, const Json& j, std::ostream& out) { write_output(cfg, j.dump(2) + "\n", out); }

ProblemInput load_problem(const RunConfig& cfg) {
    if (cfg.input_path.empty()) throw StructuralError("--input is required");
    ProblemInput in = problem_from_json(read_json_file(cfg.input_path));
    if (!cfg.subspace_spec.empty()) {
        const char c = cfg.subspace_spec.front();
        Json j = (c == '[' || c == '{' || c == '"') ? parse_json(cfg.subspace_spec, "--subspace")
                                                    : read_json_file(cfg.subspace_spec);
        in.subspace = subspace_from_json(j, in.decomp.dim());
        in.source["subspace"] = j;
    }
    if (cfg.lambda) {
        in.lambda = *cfg.lambda;
        in.source["lambda"] = *cfg.lambda;
    }
    return in;
}

BoundContext context_for(const RunConfig& cfg, const ProblemInput& in) {
    BoundContext ctx;
    ctx.decomp = in.decomp;
    ctx.subspace = in.subspace ? *in.subspace : Subspace::full(in.decomp.dim());
    ctx.p = in.p;
    ctx.alphas = in.alphas;
    ctx.lambda = in.lambda;
    ctx.tol = cfg.tol;
    ctx.mode = cfg.force ? GateMode::force : GateMode::enforce;
    return ctx;
}

/// Evaluates the requested bounds. Returns true when an explicitly named bound failed its gate.
bool evaluate_requested(const RunConfig& cfg, const BoundContext& ctx, const std::string& dig, BoundReport& report,
                        std::ostream& err) {
    if (cfg.bounds.empty()) {
        report = evaluate_all(ctx, dig);
        return false;
    }
    bool gate_failed = false;
    report.tol = ctx.tol;
    report.inputs_digest = dig;
    for (const auto& name : cfg.bounds) bound_spec(name);
    for (const auto& name : cfg.bounds) {
        try {
            BoundEntry e = evaluate_bound(name, ctx, dig);
            if (!e.gate.satisfied) gate_failed = true;
            report.entries.push_back(e);
        } catch (const GateError& ex) {
            err << ex.what() << "\n";
            BoundContext forced = ctx;
            forced.mode = GateMode::force;
            BoundEntry e;
            e.name = name;
            e.inputs_digest = dig;
            e.error = ex.what();
            try {
                e.gate = evaluate_bound(name, forced, dig).gate;
            } catch (const Error&) {
            }
            report.entries.push_back(e);
            gate_failed = true;
        }
    }
    return gate_failed;
}

int cmd_construct(const RunConfig& cfg, std::ostream& out) {
    Json j;
    const std::string& b = cfg.body;
    if (b == "hadamard") {
        j = Json{{"decomposition", to_json(hadamard_decomposition(cfg.k, cfg.n))}};
        Json idx = Json::array();
        for (int i = 0; i < cfg.k; ++i) idx.push_back(i);
        j["subspace"] = Json{{"coordinate", idx}};
    } else if (b == "cube") {
        j = Json{{"decomposition", to_json(cube_decomposition(cfg.n))}};
    } else if (b == "simplex") {
        j = Json{{"decomposition", to_json(simplex_decomposition(cfg.n))}};
    } else if (b == "cross-polytope") {
        KpBall ball = cross_polytope_ball(cfg.n);
        j = Json{{"decomposition", to_json(ball.decomp())}, {"p", ball.p()}};
        j["alphas"] = std::vector<double>(ball.alphas().data(), ball.alphas().data() + ball.alphas().size());
    } else {
        throw StructuralError("unknown body '" + b + "'; valid bodies: hadamard, cube, simplex, cross-polytope");
    }
    if (cfg.k > 0 && b != "hadamard") {
        Json idx = Json::array();
        for (int i = 0; i < cfg.k; ++i) idx.push_back(i);
        j["subspace"] = Json{{"coordinate", idx}};
    }
    write_json(cfg, j, out);
    return exit_code::ok;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    ProblemInput in = load_problem(cfg);
    ValidationReport r = validate(in.decomp, cfg.tol);
    Json j{{"decomposition", to_json(r)}, {"inputs_digest", digest(in.source)}};
    bool ok = r.passed();
    if (in.subspace) {
        ValidationReport pr = validate(project(in.decomp, *in.subspace, cfg.tol), cfg.tol);
        j["projection"] = to_json(pr);
        ok = ok && pr.passed();
    }
    write_json(cfg, j, out);
    return ok ? exit_code::ok : exit_code::structural;
}

int cmd_project(const RunConfig& cfg, std::ostream& out) {
    ProblemInput in = load_problem(cfg);
    Subspace h = in.subspace ? *in.subspace : Subspace::full(in.decomp.dim());
    ProjectedDecomposition p = project(in.decomp, h, cfg.tol);
    Json j{{"projection", to_json(p)}, {"validation", to_json(validate(p, cfg.tol))}, {"inputs_digest", digest(in.source)}};
    write_json(cfg, j, out);
    return exit_code::ok;
}

std::string bound_csv(const BoundReport& r) {
    std::ostringstream os;
    os << "name,value,gate_satisfied,required_condition,inputs_digest\n";
    for (const auto& e : r.entries)
        os << e.name << "," << (e.value ? fmt17(*e.value) : "") << "," << (e.gate.satisfied ? "true" : "false") << ",\""
           << e.gate.required_condition << "\"," << e.inputs_digest << "\n";
    return os.str();
}

int cmd_bound(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    ProblemInput in = load_problem(cfg);
    BoundContext ctx = context_for(cfg, in);
    const std::string dig = digest(in.source);
    BoundReport report;
    bool gate_failed = evaluate_requested(cfg, ctx, dig, report, err);
    if (cfg.format == OutputFormat::csv) write_output(cfg, bound_csv(report), out);
    else write_json(cfg, to_json(report), out);
    return gate_failed ? exit_code::gate : exit_code::ok;
}

int cmd_verify_parseval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    ProblemInput in = load_problem(cfg);
    BoundContext ctx = context_for(cfg, in);
    ProjectedDecomposition p = project(ctx.decomp, ctx.subspace, ctx.tol);
    ParsevalOptions opts;
    opts.quad_tol = cfg.quad_tol;
    opts.samples = cfg.samples;
    const bool needs_mc = ctx.subspace.dim() > 3 || parseval_gates(p).d >= 3;
    opts.seed = needs_mc ? require_seed(cfg) : cfg.seed.value_or(0);
    Json j{{"inputs_digest", digest(in.source)}};
    try {
        ParsevalResult r = parseval_check(p, opts);
        j["parseval"] = to_json(r);
        j["asserted"] = true;
        write_json(cfg, j, out);
        err << "parseval: lhs " << fmt17(r.lhs) << " rhs " << fmt17(r.rhs) << " |diff| "
            << fmt17(std::abs(r.lhs - r.rhs)) << (r.agrees() ? " agree" : " DISAGREE") << "\n";
        return exit_code::ok;
    } catch (const GateError& ex) {
        ParsevalGates g = parseval_gates(p);
        j["asserted"] = false;
        j["gates"] = {{"d", g.d},
                      {"rank", g.rank},
                      {"nontrivial_factors", g.nontrivial_factors},
                      {"rank_ok", g.rank_ok},
                      {"count_ok", g.count_ok}};
        j["error"] = ex.what();
        write_json(cfg, j, out);
        err << ex.what() << "\n";
        return exit_code::gate;
    }
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.parseval) return cmd_verify_parseval(cfg, out, err);
    ProblemInput in = load_problem(cfg);
    BoundContext ctx = context_for(cfg, in);
    const std::string dig = digest(in.source);
    BoundReport report;
    bool gate_failed = evaluate_requested(cfg, ctx, dig, report, err);

    OracleConfig oc;
    oc.mode = cfg.oracle;
    oc.samples = cfg.samples;
    if (cfg.oracle != OracleMode::exact) oc.seed = require_seed(cfg);

    std::map<OracleTarget, std::vector<OracleValue>> oracles;
    Json dominance = Json::array();
    bool all_hold = true;
    for (const auto& e : report.entries) {
        if (!e.value) continue;
        OracleTarget t = bound_spec(e.name).target;
        if (!oracles.count(t)) {
            const bool mc_only = t == OracleTarget::kp_volume || t == OracleTarget::wills;
            oracles[t] = (cfg.oracle == OracleMode::exact && mc_only) ? std::vector<OracleValue>{}
                                                                      : oracle_values(t, ctx, oc);
        }
        for (const auto& o : oracles[t]) {
            DominanceCheck c = check_dominance(e, o);
            all_hold = all_hold && c.holds;
            dominance.push_back(to_json(c));
        }
    }
    Json oj = Json::object();
    for (const auto& [t, vals] : oracles) {
        Json arr = Json::array();
        for (const auto& v : vals) arr.push_back(to_json(v));
        oj[target_name(t)] = arr;
    }
    Json j{{"bounds", to_json(report)},
           {"oracles", oj},
           {"dominance", dominance},
           {"all_hold", all_hold},
           {"samples", cfg.samples},
           {"inputs_digest", dig}};
    j["seed"] = cfg.oracle != OracleMode::exact ? Json(oc.seed) : Json(nullptr);
    write_json(cfg, j, out);
    return gate_failed ? exit_code::gate : exit_code::ok;
}

struct SweepRow {
    std::string digest;
    int n = 0;
    int k = 0;
    std::size_t m0 = 0;
    std::map<std::string, double> values;
    std::optional<OracleValue> volume;
    std::optional<OracleValue> kp_volume;
    std::string error;
};

void parallel_rows(int count, const std::function<void(int)>& body) {
    std::atomic<int> next{0};
    auto worker = [&] {
        detail::SerialScope serial;
        for (int i = next++; i < count; i = next++) body(i);
    };
    const int threads = std::max(1, std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

BoundContext sweep_context(const RunConfig& cfg, const std::optional<ProblemInput>& base, int row,
                           std::uint64_t seed) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(static_cast<std::uint64_t>(row) + 1)));
    BoundContext ctx;
    ctx.tol = cfg.tol;
    ctx.mode = cfg.force ? GateMode::force : GateMode::enforce;
    if (cfg.generator == "subspaces") {
        ctx.decomp = base->decomp;
        ctx.p = base->p;
        ctx.alphas = base->alphas;
        ctx.lambda = base->lambda;
        ctx.subspace = random_subspace(ctx.decomp.dim(), cfg.k, rng);
        return ctx;
    }
    // Orthonormal bases with c = 1 and random subspaces, kept when every nonzero tilde_c_j >= 1/2.
    const int n = cfg.n, k = cfg.k;
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Matrix q = random_rotation(n, rng);
        Subspace h = random_subspace(n, k, rng);
        JohnDecomposition d(q, Vector::Ones(n), false);
        ProjectedDecomposition p = project(d, h, cfg.tol);
        if (p.tilde_weights.minCoeff() >= 0.5) {
            ctx.decomp = d;
            ctx.subspace = h;
            if (cfg.lambda) ctx.lambda = *cfg.lambda;
            return ctx;
        }
    }
    throw PreconditionError("could not draw a system with all tilde_c_j >= 1/2 (needs n < 2k)");
}

SweepRow sweep_row(const RunConfig& cfg, const BoundContext& ctx, const std::vector<std::string>& names,
                   std::uint64_t seed, int row) {
    SweepRow r;
    r.n = ctx.decomp.dim();
    r.k = ctx.subspace.dim();
    r.digest = digest(Json{{"decomposition", to_json(ctx.decomp)}, {"subspace", to_json(ctx.subspace)}});
    r.m0 = project(ctx.decomp, ctx.subspace, ctx.tol).m0();
    bool want_kp = false;
    for (const auto& name : names) {
        if (inapplicable(name, ctx)) continue;
        try {
            BoundEntry e = evaluate_bound(name, ctx, r.digest);
            r.values[name] = *e.value;
            want_kp = want_kp || bound_spec(name).target == OracleTarget::kp_volume;
        } catch (const Error&) {
        }
    }
    OracleConfig oc;
    oc.mode = cfg.oracle;
    oc.samples = cfg.samples;
    oc.seed = detail::splitmix64(seed + static_cast<std::uint64_t>(row));
    std::vector<OracleValue> vol = oracle_values(OracleTarget::section_volume, ctx, oc);
    if (!vol.empty()) r.volume = vol.front();
    if (want_kp && cfg.oracle != OracleMode::exact) r.kp_volume = oracle_values(OracleTarget::kp_volume, ctx, oc).front();
    return r;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    if (cfg.count < 0) throw StructuralError("--count must be >= 0");
    if (cfg.generator != "subspaces" && cfg.generator != "systems")
        throw StructuralError("unknown generator '" + cfg.generator + "'; valid generators: subspaces, systems");
    std::vector<std::string> names = cfg.bounds;
    if (names.empty())
        for (const auto& s : bound_catalog()) names.push_back(s.name);
    for (const auto& name : names) bound_spec(name);

    std::optional<ProblemInput> base;
    std::vector<SweepRow> rows(static_cast<std::size_t>(cfg.count));
    if (cfg.count > 0) {
        if (cfg.generator == "subspaces") {
            base = load_problem(cfg);
            if (cfg.k < 1 || cfg.k > base->decomp.dim()) throw StructuralError("--k must be in [1, n]");
        } else if (cfg.n < 1 || cfg.k < 1 || cfg.k > cfg.n) {
            throw StructuralError("systems generator needs 1 <= k <= n (--n, --k)");
        }
        const std::uint64_t seed = require_seed(cfg);
        std::vector<std::string> errors(rows.size());
        parallel_rows(cfg.count, [&](int i) {
            try {
                rows[static_cast<std::size_t>(i)] = sweep_row(cfg, sweep_context(cfg, base, i, seed), names, seed, i);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(i)] = e.what();
            }
        });
        for (const auto& e : errors)
            if (!e.empty()) throw StructuralError("sweep: " + e);
    }

    if (cfg.format == OutputFormat::csv) {
        std::ostringstream os;
        std::vector<std::string> cols = sweep_columns();
        for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
        os << "\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const SweepRow& r = rows[i];
            os << i << "," << r.digest << "," << r.n << "," << r.k << "," << r.m0;
            for (const auto& s : bound_catalog()) {
                auto it = r.values.find(s.name);
                os << "," << (it != r.values.end() ? fmt17(it->second) : "");
            }
            os << "," << (r.volume ? fmt17(r.volume->mean) : "") << "," << (r.volume ? fmt17(r.volume->std_error) : "");
            os << "," << (r.kp_volume ? fmt17(r.kp_volume->mean) : "") << ","
               << (r.kp_volume ? fmt17(r.kp_volume->std_error) : "");
            for (const auto& s : bound_catalog()) {
                auto it = r.values.find(s.name);
                const std::optional<OracleValue>& o =
                    s.target == OracleTarget::section_volume ? r.volume
                    : s.target == OracleTarget::kp_volume    ? r.kp_volume
                                                             : std::optional<OracleValue>{};
                os << ",";
                if (it != r.values.end() && o && o->mean > 0.0) os << fmt17(it->second / o->mean);
            }
            os << "\n";
        }
        write_output(cfg, os.str(), out);
        return exit_code::ok;
    }
    Json arr = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRow& r = rows[i];
        Json row{{"row", i}, {"digest", r.digest}, {"n", r.n}, {"k", r.k}, {"m0", r.m0}};
        Json vals = Json::object();
        for (const auto& [name, v] : r.values) vals[name] = v;
        row["bounds"] = vals;
        row["oracle"] = r.volume ? to_json(*r.volume) : Json(nullptr);
        row["kp_oracle"] = r.kp_volume ? to_json(*r.kp_volume) : Json(nullptr);
        arr.push_back(row);
    }
    write_json(cfg, Json{{"generator", cfg.generator}, {"rows", arr}}, out);
    return exit_code::ok;
}

std::vector<std::string> split_names(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& r : raw) {
        std::stringstream ss(r);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

std::vector<std::string> sweep_columns() {
    std::vector<std::string> cols{"row", "digest", "n", "k", "m0"};
    for (const auto& s : bound_catalog()) cols.push_back(s.name);
    for (const char* c : {"oracle_mean", "oracle_std_error", "kp_oracle_mean", "kp_oracle_std_error"}) cols.push_back(c);
    for (const auto& s : bound_catalog()) cols.push_back("ratio_" + s.name);
    return cols;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.command) {
            case Command::construct: return cmd_construct(config, out);
            case Command::validate: return cmd_validate(config, out);
            case Command::project: return cmd_project(config, out);
            case Command::bound: return cmd_bound(config, out, err);
            case Command::verify: return cmd_verify(config, out, err);
            case Command::sweep: return cmd_sweep(config, out);
        }
    } catch (const GateError& e) {
        err << "gate error: " << e.what() << "\n";
        return exit_code::gate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::structural;
    }
    return exit_code::structural;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Volume bounds for sections of convex bodies in John position", "slicebound"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::vector<std::string> bound_names;
    bool all = false;
    std::string oracle = "both", format = "json";
    std::uint64_t seed = 0;
    std::string verify_target;

    auto add_io = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input_path, "Problem JSON (decomposition, optional subspace/p/alphas/lambda)");
        sub->add_option("--subspace", cfg.subspace_spec, "Subspace as inline JSON or a file path");
        sub->add_option("--tol-identity", cfg.tol.identity, "Identity residual tolerance");
        sub->add_option("--tol-proj", cfg.tol.proj, "Projection threshold for membership in J");
        sub->add_option("--output", cfg.output_path, "Output file (default stdout)");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };
    auto add_bounds = [&](CLI::App* sub) {
        sub->add_option("--bounds", bound_names, "Bound identifiers (comma separated)");
        sub->add_flag("--all", all, "Evaluate every applicable bound");
        sub->add_flag("--force", cfg.force, "Evaluate gated formulas outside their hypotheses");
        sub->add_option("--lambda", cfg.lambda, "Dilation for the Wills functional");
    };
    auto add_oracle = [&](CLI::App* sub) {
        sub->add_option("--oracle", oracle, "mc, exact or both")->check(CLI::IsMember({"mc", "exact", "both"}));
        sub->add_option("--samples", cfg.samples, "Monte Carlo samples")->check(CLI::Range(std::int64_t{1000}, std::int64_t{1} << 40));
        sub->add_option("--seed", seed, "Monte Carlo seed (fallback: SLICEBOUND_SEED)");
    };

    auto* construct = app.add_subcommand("construct", "Emit a canonical decomposition");
    construct->add_option("body", cfg.body, "hadamard, cube, simplex or cross-polytope")->required();
    construct->add_option("--k", cfg.k, "Section dimension");
    construct->add_option("--n", cfg.n, "Ambient dimension")->required();
    construct->add_option("--output", cfg.output_path, "Output file (default stdout)");

    auto* validate_cmd = app.add_subcommand("validate", "Check the identity decomposition");
    add_io(validate_cmd);
    auto* project_cmd = app.add_subcommand("project", "Project onto a subspace");
    add_io(project_cmd);
    auto* bound = app.add_subcommand("bound", "Evaluate bounds");
    add_io(bound);
    add_bounds(bound);
    auto* verify = app.add_subcommand("verify", "Compare bounds against oracles");
    verify->add_option("target", verify_target, "Optional: parseval");
    add_io(verify);
    add_bounds(verify);
    add_oracle(verify);
    verify->add_option("--quad-tol", cfg.quad_tol, "Quadrature tolerance for the Parseval check");
    auto* sweep = app.add_subcommand("sweep", "Random subspaces or systems, one CSV row each");
    add_io(sweep);
    add_bounds(sweep);
    add_oracle(sweep);
    sweep->add_option("--generator", cfg.generator, "subspaces or systems");
    sweep->add_option("--count", cfg.count, "Number of rows");
    sweep->add_option("--k", cfg.k, "Subspace dimension");
    sweep->add_option("--n", cfg.n, "Ambient dimension (systems)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? exit_code::ok : exit_code::structural;
    }

    if (*construct) cfg.command = Command::construct;
    else if (*validate_cmd) cfg.command = Command::validate;
    else if (*project_cmd) cfg.command = Command::project;
    else if (*bound) cfg.command = Command::bound;
    else if (*verify) cfg.command = Command::verify;
    else cfg.command = Command::sweep;

    for (auto* sub : {verify, sweep})
        if (sub->count("--seed") > 0) cfg.seed = seed;
    if (!verify_target.empty()) {
        if (verify_target != "parseval") {
            err << "error: unknown verify target '" << verify_target << "'; valid: parseval\n";
            return exit_code::structural;
        }
        cfg.parseval = true;
    }
    if (!all) cfg.bounds = split_names(bound_names);
    cfg.oracle = oracle == "mc" ? OracleMode::mc : oracle == "exact" ? OracleMode::exact : OracleMode::both;
    cfg.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (cfg.command == Command::construct && cfg.body == "hadamard" && cfg.k == 0) {
        err << "error: hadamard needs --k\n";
        return exit_code::structural;
    }
    return run(cfg, out, err);
}

}  // namespace slicebound
