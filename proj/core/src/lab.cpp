#include "meissner/lab.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>

#include "meissner/acceptance.hpp"
#include "meissner/io.hpp"
#include "meissner/plot.hpp"

namespace meissner::lab {

namespace {

void check_keys(const json& obj, const std::string& path, std::set<std::string> allowed) {
    require(obj.is_object(), ErrorKind::ConfigInvalid, path + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        require(allowed.count(it.key()) > 0, ErrorKind::ConfigInvalid,
                path + "." + it.key() + ": unknown key");
}

double need_number(const json& obj, const std::string& path, const std::string& key) {
    require(obj.contains(key), ErrorKind::ConfigInvalid, path + "." + key + ": missing");
    require(obj[key].is_number(), ErrorKind::ConfigInvalid, path + "." + key + ": not a number");
    return obj[key].get<double>();
}

double opt_number(const json& obj, const std::string& key, double fallback) {
    return obj.contains(key) ? obj[key].get<double>() : fallback;
}

int need_int(const json& obj, const std::string& path, const std::string& key) {
    require(obj.contains(key) && obj[key].is_number_integer(), ErrorKind::ConfigInvalid,
            path + "." + key + ": missing or not an integer");
    return obj[key].get<int>();
}

double parse_kappa(const json& obj, const std::string& path) {
    if (!obj.contains("kappa")) return std::numeric_limits<double>::infinity();
    if (obj["kappa"].is_string()) {
        require(obj["kappa"] == "inf", ErrorKind::ConfigInvalid,
                path + ".kappa: string value must be \"inf\"");
        return std::numeric_limits<double>::infinity();
    }
    require(obj["kappa"].is_number(), ErrorKind::ConfigInvalid, path + ".kappa: not a number");
    return obj["kappa"].get<double>();
}

std::string timestamp() {
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_artifact(const std::string& out_dir, const std::string& name,
                    const std::string& content) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/" + name, content);
}

}  // namespace

StaggeredGrid parse_geometry(const json& g) {
    check_keys(g, "geometry", {"slab", "box"});
    require(g.contains("slab") != g.contains("box"), ErrorKind::ConfigInvalid,
            "geometry: exactly one of slab/box");
    if (g.contains("slab")) {
        const json& s = g["slab"];
        check_keys(s, "geometry.slab", {"n", "L", "aspect"});
        int n = need_int(s, "geometry.slab", "n");
        double L = need_number(s, "geometry.slab", "L");
        double aspect = opt_number(s, "aspect", 1.0);
        return slab_box(n, L, aspect);
    }
    const json& b = g["box"];
    check_keys(b, "geometry.box", {"nx", "ny", "nz", "Lx", "Ly", "Lz", "periodic"});
    std::array<BoundaryKind, 3> kinds{BoundaryKind::Periodic, BoundaryKind::Periodic,
                                      BoundaryKind::Wall};
    if (b.contains("periodic")) {
        require(b["periodic"].is_array() && b["periodic"].size() == 3, ErrorKind::ConfigInvalid,
                "geometry.box.periodic: expected [bool,bool,bool]");
        for (int a = 0; a < 3; ++a)
            kinds[a] = b["periodic"][a].get<bool>() ? BoundaryKind::Periodic : BoundaryKind::Wall;
    }
    return box_grid(need_int(b, "geometry.box", "nx"), need_int(b, "geometry.box", "ny"),
                    need_int(b, "geometry.box", "nz"), need_number(b, "geometry.box", "Lx"),
                    need_number(b, "geometry.box", "Ly"), need_number(b, "geometry.box", "Lz"),
                    kinds[0], kinds[1], kinds[2]);
}

BoundaryData parse_data(const json& d, const StaggeredGrid& grid) {
    check_keys(d, "data", {"type", "b_lo", "b_hi"});
    require(d.contains("type") && d["type"] == "slab_uniform", ErrorKind::ConfigInvalid,
            "data.type: only slab_uniform is accepted");
    double lo = need_number(d, "data", "b_lo");
    double hi = opt_number(d, "b_hi", 0.0);
    // the solver convention: amplitude b >= 0 imposes tangential value -b
    return BoundaryData::slab_uniform(grid, -lo, -hi);
}

ContinuationSchedule parse_schedule(const json& s) {
    check_keys(s, "schedule",
               {"mu_start", "mu_step", "margin_tol", "mu_tol", "max_steps", "keep_states"});
    ContinuationSchedule out;
    out.mu_start = opt_number(s, "mu_start", out.mu_start);
    out.mu_step = opt_number(s, "mu_step", out.mu_step);
    out.margin_tol = opt_number(s, "margin_tol", out.margin_tol);
    out.mu_tol = opt_number(s, "mu_tol", out.mu_tol);
    if (s.contains("max_steps")) out.max_steps = s["max_steps"].get<int>();
    if (s.contains("keep_states")) out.keep_states = s["keep_states"].get<bool>();
    out.validate();
    return out;
}

RunConfig RunConfig::parse(const json& doc) {
    require(doc.is_object() && doc.contains("kind") && doc["kind"].is_string(),
            ErrorKind::ConfigInvalid, "kind: missing");
    RunConfig out;
    out.kind = doc["kind"].get<std::string>();
    const std::set<std::string> kinds{"ORACLE",       "SOLVE",    "CONTINUATION", "KAPPA_SWEEP",
                                      "LAMBDA_SWEEP", "EXTERIOR", "ACCEPTANCE"};
    require(kinds.count(out.kind) > 0, ErrorKind::ConfigInvalid,
            "kind: unknown experiment " + out.kind);

    std::set<std::string> allowed{"kind", "seed", "out"};
    if (out.kind == "ORACLE") {
        allowed.insert({"lambda", "b", "kappa", "L", "n"});
        check_keys(doc, "config", allowed);
        need_number(doc, "config", "lambda");
        need_number(doc, "config", "b");
    } else if (out.kind == "SOLVE") {
        allowed.insert({"system", "lambda", "kappa", "mu", "geometry", "data", "tol"});
        check_keys(doc, "config", allowed);
        need_number(doc, "config", "lambda");
        parse_geometry(doc.at("geometry"));
    } else if (out.kind == "CONTINUATION") {
        allowed.insert({"system", "lambda", "kappa", "geometry", "data", "schedule"});
        check_keys(doc, "config", allowed);
        need_number(doc, "config", "lambda");
        parse_geometry(doc.at("geometry"));
        parse_schedule(doc.value("schedule", json::object()));
    } else if (out.kind == "KAPPA_SWEEP") {
        allowed.insert({"lambda", "kappas", "geometry", "data"});
        check_keys(doc, "config", allowed);
        need_number(doc, "config", "lambda");
        require(doc.contains("kappas") && doc["kappas"].is_array(), ErrorKind::ConfigInvalid,
                "kappas: missing list");
        parse_geometry(doc.at("geometry"));
    } else if (out.kind == "LAMBDA_SWEEP") {
        allowed.insert({"lambdas", "geometry", "data", "schedule", "kappa_check"});
        check_keys(doc, "config", allowed);
        require(doc.contains("lambdas") && doc["lambdas"].is_array(), ErrorKind::ConfigInvalid,
                "lambdas: missing list");
        parse_geometry(doc.at("geometry"));
    } else if (out.kind == "EXTERIOR") {
        allowed.insert({"l_max", "radius"});
        check_keys(doc, "config", allowed);
    } else {  // ACCEPTANCE
        check_keys(doc, "config", allowed);
    }
    if (doc.contains("seed")) out.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("out")) out.out = doc["out"].get<std::string>();
    out.raw = doc;
    return out;
}

namespace {

RunOutcome run_oracle(const RunConfig& cfg, const std::string& out_dir) {
    const json& doc = cfg.raw;
    SlabProblem p;
    p.lambda = doc["lambda"].get<double>();
    p.b = doc["b"].get<double>();
    p.kappa = parse_kappa(doc, "config");
    p.L = opt_number(doc, "L", 0.0);
    if (doc.contains("n")) p.n = doc["n"].get<int>();
    SlabSolution sol = p.kappa == std::numeric_limits<double>::infinity() ? solve_limit_ode(p)
                                                                          : solve_full_ode(p);
    std::ostringstream csv;
    write_slab_profile_csv(csv, sol);
    write_artifact(out_dir, "profile.csv", csv.str());
    std::string summary = slab_summary_json(sol, p.b);
    write_artifact(out_dir, "summary.json", summary);
    RunOutcome out;
    out.summary = json::parse(summary);
    return out;
}

RunOutcome run_solve(const RunConfig& cfg, const std::string& out_dir) {
    const json& doc = cfg.raw;
    StaggeredGrid grid = parse_geometry(doc.at("geometry"));
    BoundaryData data = parse_data(doc.at("data"), grid);
    GLParameters params;
    params.lambda = doc["lambda"].get<double>();
    params.kappa = parse_kappa(doc, "config");
    params.mu = opt_number(doc, "mu", 1.0);
    std::string system = doc.value("system", params.kappa_finite() ? "FULL" : "LIMIT");
    SolveOptions opts;
    opts.tol = opt_number(doc, "tol", opts.tol);
    BoundaryData scaled = data.scaled(params.mu);
    MeissnerStateFH state = system == "LIMIT" ? solve_limit_H(params, scaled, grid, nullptr, opts)
                                              : solve_full_FH(params, scaled, grid, nullptr, opts);
    std::ostringstream fcsv, hcsv;
    write_field_csv(fcsv, state.f);
    write_field_csv(hcsv, state.H);
    write_artifact(out_dir, "f.csv", fcsv.str());
    write_artifact(out_dir, "H.csv", hcsv.str());
    std::string sidecar = state_sidecar_json(state);
    write_artifact(out_dir, "state.json", sidecar);
    RunOutcome out;
    out.summary = json::parse(sidecar);
    return out;
}

ResultsTable continuation_table(const SuperheatingResult& res) {
    ResultsTable t({"mu", "margin", "curl_bound", "energy", "iterations"});
    for (const auto& r : res.trajectory)
        t.add_row({r.mu, r.margin, r.curl_bound, r.energy, static_cast<double>(r.iterations)});
    return t;
}

RunOutcome run_continuation(const RunConfig& cfg, const std::string& out_dir) {
    const json& doc = cfg.raw;
    StaggeredGrid grid = parse_geometry(doc.at("geometry"));
    BoundaryData data = parse_data(doc.at("data"), grid);
    GLParameters params;
    params.lambda = doc["lambda"].get<double>();
    params.kappa = parse_kappa(doc, "config");
    ContinuationSchedule sched = parse_schedule(doc.value("schedule", json::object()));
    std::string system = doc.value("system", params.kappa_finite() ? "FULL" : "LIMIT");
    auto res = continue_mu(system == "LIMIT" ? SystemKind::Limit : SystemKind::Full, params, data,
                           sched, grid);

    ResultsTable t = continuation_table(res);
    t.set_provenance(stable_hash(cfg.raw.dump()), timestamp());
    write_artifact(out_dir, "continuation.csv", t.to_csv());
    PlotSpec ps;
    ps.x_column = "mu";
    ps.y_columns = {"margin"};
    ps.marker_x = res.mu_star;
    ps.title = "convexity margin along the continuation";
    write_artifact(out_dir, "margin.svg", emit_plot(t, ps));
    json summary;
    summary["mu_star"] = res.mu_star;
    summary["bracket"] = {res.bracket[0], res.bracket[1]};
    summary["upper_bound"] = res.upper_bound;
    summary["mu_star_supA"] = res.mu_star_supA;
    summary["last_margin"] = res.last_margin;
    write_artifact(out_dir, "summary.json", summary.dump(2) + "\n");
    RunOutcome out;
    out.summary = summary;
    return out;
}

RunOutcome run_kappa_sweep(const RunConfig& cfg, const std::string& out_dir) {
    const json& doc = cfg.raw;
    StaggeredGrid grid = parse_geometry(doc.at("geometry"));
    BoundaryData data = parse_data(doc.at("data"), grid);
    double lambda = doc["lambda"].get<double>();
    std::vector<double> kappas;
    for (const auto& k : doc["kappas"]) kappas.push_back(k.get<double>());
    RateFit fit = kappa_sweep(lambda, data, grid, kappas);

    ResultsTable t({"kappa", "l2_f", "l2_A", "l2_H", "h1_f", "h1_A", "h1_H", "h2_f", "h2_A",
                    "h2_H"});
    for (std::size_t i = 0; i < kappas.size(); ++i) {
        std::vector<double> row{kappas[i]};
        for (double v : fit.norms[i]) row.push_back(v);
        t.add_row(row);
    }
    t.set_provenance(stable_hash(cfg.raw.dump()), timestamp());
    write_artifact(out_dir, "sweep.csv", t.to_csv());
    PlotSpec ps;
    ps.x_column = "kappa";
    ps.y_columns = {"l2_f", "l2_A"};
    ps.log_x = ps.log_y = true;
    ps.guide_slope = -1.5;
    ps.title = "kappa convergence";
    write_artifact(out_dir, "rates.svg", emit_plot(t, ps));
    json summary;
    summary["slopes"] = {{"l2", fit.slope_l2}, {"h1", fit.slope_h1}, {"h2", fit.slope_h2}};
    write_artifact(out_dir, "summary.json", summary.dump(2) + "\n");
    RunOutcome out;
    out.summary = summary;
    return out;
}

RunOutcome run_lambda_sweep(const RunConfig& cfg, const std::string& out_dir, int jobs) {
    const json& doc = cfg.raw;
    StaggeredGrid grid = parse_geometry(doc.at("geometry"));
    BoundaryData data = parse_data(doc.at("data"), grid);
    std::vector<double> lambdas;
    for (const auto& l : doc["lambdas"]) lambdas.push_back(l.get<double>());
    ContinuationSchedule sched = parse_schedule(doc.value("schedule", json::object()));
    double kappa_check = opt_number(doc, "kappa_check", 0.0);
    auto res = lambda_sweep(data, grid, lambdas, sched, kappa_check, jobs);

    ResultsTable t({"lambda", "mu_star", "error"});
    for (const auto& r : res.rows) t.add_row({r.lambda, r.mu_star, r.error});
    t.set_provenance(stable_hash(cfg.raw.dump()), timestamp());
    write_artifact(out_dir, "lambda.csv", t.to_csv());
    json summary;
    summary["rows"] = json::array();
    for (const auto& r : res.rows)
        summary["rows"].push_back({{"lambda", r.lambda}, {"mu_star", r.mu_star}, {"error", r.error}});
    if (kappa_check > 0.0) summary["mu_star_full_kappa"] = res.mu_star_full_kappa;
    write_artifact(out_dir, "summary.json", summary.dump(2) + "\n");
    RunOutcome out;
    out.summary = summary;
    return out;
}

RunOutcome run_exterior(const RunConfig& cfg, const std::string& out_dir) {
    const json& doc = cfg.raw;
    int l_max = doc.contains("l_max") ? doc["l_max"].get<int>() : 16;
    double R = opt_number(doc, "radius", 1.0);
    // the Sigma table over the retained band
    SphericalHarmonicCoeffs probe(l_max, R);
    for (int l = 1; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m) probe.at(SphBasis::GradS, l, m) = 1.0;
    auto sig = sigma_dtn(probe);
    std::ostringstream coeffs;
    write_coeffs_csv(coeffs, sig);
    write_artifact(out_dir, "sigma.csv", coeffs.str());
    json summary;
    summary["l_max"] = l_max;
    summary["radius"] = R;
    summary["sigma_ratio_l1"] = sig.at(SphBasis::Y, 1, 0);
    write_artifact(out_dir, "summary.json", summary.dump(2) + "\n");
    RunOutcome out;
    out.summary = summary;
    return out;
}

}  // namespace

RunOutcome run(const RunConfig& cfg, const std::string& out_dir, int jobs) {
    std::string dir = !out_dir.empty() ? out_dir : (!cfg.out.empty() ? cfg.out : ".");
    if (cfg.kind == "ORACLE") return run_oracle(cfg, dir);
    if (cfg.kind == "SOLVE") return run_solve(cfg, dir);
    if (cfg.kind == "CONTINUATION") return run_continuation(cfg, dir);
    if (cfg.kind == "KAPPA_SWEEP") return run_kappa_sweep(cfg, dir);
    if (cfg.kind == "LAMBDA_SWEEP") return run_lambda_sweep(cfg, dir, jobs);
    if (cfg.kind == "EXTERIOR") return run_exterior(cfg, dir);
    // ACCEPTANCE
    acceptance::Options opts;
    opts.out_dir = dir;
    opts.seed = cfg.seed;
    auto results = acceptance::run_all(opts);
    RunOutcome out;
    out.summary["criteria"] = json::array();
    for (const auto& r : results)
        out.summary["criteria"].push_back(
            {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    out.exit_code = acceptance::all_passed(results) ? 0 : 4;
    return out;
}

RunOutcome run_file(const std::string& config_path, const std::string& out_override,
                    std::int64_t seed_override, int jobs) {
    RunOutcome out;
    json doc;
    try {
        std::ifstream is(config_path);
        require(is.good(), ErrorKind::ConfigInvalid, "cannot read " + config_path);
        doc = json::parse(is, nullptr, /*allow_exceptions=*/false);
        require(!doc.is_discarded(), ErrorKind::ConfigInvalid, "config is not valid JSON");
        if (seed_override >= 0) doc["seed"] = static_cast<std::uint64_t>(seed_override);
        RunConfig cfg = RunConfig::parse(doc);
        return run(cfg, out_override, jobs);
    } catch (const Error& e) {
        out.exit_code = e.kind() == ErrorKind::ConfigInvalid ? 2 : 3;
        out.summary["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
        return out;
    } catch (const std::exception& e) {
        out.exit_code = 3;
        out.summary["error"] = {{"kind", "Unexpected"}, {"message", e.what()}};
        return out;
    }
}

}  // namespace meissner::lab
