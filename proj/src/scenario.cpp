#include "hballs/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "hballs/balls.hpp"
#include "hballs/io.hpp"
#include "hballs/subcell.hpp"
#include "hballs/twophase.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hballs {

namespace {

constexpr double two_pi = 6.28318530717958647692;

Point get_point(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("expected a point as [x, y]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

GridSpec parse_grid(const json& g) {
    return make_grid(g.at("x_min").get<double>(), g.at("x_max").get<double>(),
                     g.at("y_min").get<double>(), g.at("y_max").get<double>(),
                     g.at("h").get<double>());
}

DomainSpec parse_domain(const json& d) {
    std::string t = d.at("type").get<std::string>();
    if (t == "whole_plane") return WholePlaneBox{};
    if (t == "half_plane") return HalfPlane{d.value("offset", 0.0)};
    if (t == "disc") return Disc{get_point(d.at("center")), d.at("radius").get<double>()};
    if (t == "rectangle") return Rectangle{get_point(d.at("lo")), get_point(d.at("hi"))};
    if (t == "polygon") {
        Polygon p;
        for (const auto& v : d.at("vertices")) p.vertices.push_back(get_point(v));
        return p;
    }
    throw ConfigError("unknown domain type: " + t);
}

SolverOptions parse_solver(const json& cfg) {
    SolverOptions o;
    if (!cfg.contains("solver")) return o;
    const json& s = cfg["solver"];
    o.relaxation = s.value("relaxation", o.relaxation);
    o.tol_factor = s.value("tol_factor", o.tol_factor);
    o.max_sweeps = s.value("max_sweeps", o.max_sweeps);
    o.residual_interval = s.value("residual_interval", o.residual_interval);
    o.theta_scale = s.value("theta_scale", o.theta_scale);
    std::string m = s.value("mode", "parallel");
    if (m == "serial")
        o.mode = ExecMode::Serial;
    else if (m == "parallel")
        o.mode = ExecMode::Parallel;
    else
        throw ConfigError("solver.mode must be serial or parallel");
    return o;
}

VerifyOptions parse_checks(const json& cfg) {
    VerifyOptions v;
    if (!cfg.contains("checks")) return v;
    const json& c = cfg["checks"];
    v.rel_tol = c.value("rel_tol", v.rel_tol);
    v.neg_tol = c.value("neg_tol", v.neg_tol);
    v.zero_tol = c.value("zero_tol", v.zero_tol);
    v.compl_tol = c.value("compl_tol", v.compl_tol);
    v.probe_margin = c.value("probe_margin", v.probe_margin);
    return v;
}

SchwarzOptions parse_schwarz(const json& cfg) {
    SchwarzOptions s;
    if (!cfg.contains("schwarz")) return s;
    const json& c = cfg["schwarz"];
    s.c = c.value("c", s.c);
    s.kmax = c.value("kmax", s.kmax);
    s.quadrature_rel = c.value("quadrature_rel", s.quadrature_rel);
    s.exclusion_radius = c.value("exclusion_radius", s.exclusion_radius);
    return s;
}

GreenEvaluator make_green(const json& cfg, const DomainSpec& dom, const DomainMask& mask,
                          const SolverOptions& so) {
    std::string mode = cfg.value("green", "auto");
    if (mode == "analytic") return GreenEvaluator::analytic(dom);
    if (mode == "numeric") return GreenEvaluator::numeric(mask, so);
    if (mode == "auto") {
        if (std::holds_alternative<HalfPlane>(dom) || std::holds_alternative<Disc>(dom))
            return GreenEvaluator::analytic(dom);
        return GreenEvaluator::numeric(mask, so);
    }
    throw ConfigError("green must be analytic, numeric or auto");
}

std::vector<Point> make_probes(const json& cfg, const BallResult& ball, const VerifyOptions& vo) {
    if (!cfg.contains("probes")) return place_probes(ball, 16, vo);
    const json& p = cfg["probes"];
    if (p.contains("arc")) {
        const json& a = p["arc"];
        Point c = a.contains("center") ? get_point(a["center"]) : ball.center;
        return arc_probes(c, a.at("radius").get<double>(), a.value("count", 16),
                          a.value("angle0", 0.0), a.value("angle1", two_pi));
    }
    return place_probes(ball, p.value("count", 16), vo);
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << body;
}

struct RunOutcome {
    int code = ExitPass;
    CheckReport report;
    json stats = json::object();
    RegionMask omega;
};

RunOutcome run_ball(const json& cfg, const std::string& out, bool artifacts) {
    GridSpec grid = parse_grid(cfg.at("grid"));
    DomainSpec dom = parse_domain(cfg.at("domain"));
    DomainMask mask = build_domain_mask(grid, dom);
    Point x0 = get_point(cfg.at("x0"));
    double alpha = cfg.at("alpha").get<double>();
    SolverOptions so = parse_solver(cfg);
    VerifyOptions vo = parse_checks(cfg);

    BallResult ball = compute_ball(mask, x0, alpha, so);
    GreenEvaluator green = make_green(cfg, dom, mask, so);
    std::vector<Point> probes = make_probes(cfg, ball, vo);

    CheckReport rep = verify_field_characterization(ball, vo);
    rep.append(check_positivity(ball, vo));
    if (!probes.empty()) {
        rep.append(verify_mean_value(ball, green, probes, vo));
        rep.append(verify_subharmonic_inequality(ball, green, probes, vo));
    }
    rep.append(check_starshaped_ball(ball));
    if (std::holds_alternative<HalfPlane>(dom)) rep.append(check_halfspace_omega_equality(ball));

    RunOutcome r;
    r.report = rep;
    r.omega = ball.omega();
    r.stats = {{"alpha", alpha},
               {"lambda_omega", subcell::area(subcell::fold_level(ball.bal.u, ball.omega()))},
               {"lambda_omega_nodes", integrate(ball.omega())},
               {"nu_total", ball.bal.nu.total()},
               {"omega_nodes", ball.omega().count()},
               {"iterations", ball.bal.iterations},
               {"residual", ball.bal.residual}};
    if (artifacts) {
        write_pgm(ball.omega(), out + "/omega.pgm");
        write_csv(ball.bal.u, out + "/u.csv");
        write_csv(ball.bal.nu, out + "/nu.csv");
        write_points_csv(probes, out + "/probes.csv");
    }
    return r;
}

RunOutcome run_twophase(const json& cfg, const std::string& out, bool artifacts, bool reflection) {
    GridSpec grid = parse_grid(cfg.at("grid"));
    SolverOptions so = parse_solver(cfg);
    SchwarzOptions sch = parse_schwarz(cfg);

    TwoPhaseResult tp;
    if (reflection) {
        tp = reflection_twophase(grid, get_point(cfg.at("x0")), cfg.at("alpha").get<double>(), so);
    } else {
        DomainMask box = build_domain_mask(grid, WholePlaneBox{});
        DomainMask shape = build_domain_mask(grid, parse_domain(cfg.at("d_plus")));
        tp = null_quadrature_pair(box, interior_region(shape), so);
    }
    if (sch.exclusion_radius >= 0.0) {  // non-default exclusion: rebuild the fields
        std::vector<Point> atoms;
        if (reflection) {
            atoms.push_back(tp.z0);
            atoms.push_back({tp.z0.x, -tp.z0.y});
        }
        tp.s_plus = schwarz_field(tp.u, tp.d_plus, tp.beta_plus, +1, atoms, sch.exclusion_radius);
        tp.s_minus = schwarz_field(tp.u, tp.d_minus, tp.beta_minus, -1, atoms, sch.exclusion_radius);
    }

    CheckReport rep = verify_dbar_analytic(tp.s_plus, tp.d_plus, grid.h, sch.c, "dbar_plus");
    rep.append(verify_dbar_analytic(tp.s_minus, tp.d_minus, grid.h, sch.c, "dbar_minus"));
    rep.append(verify_schwarz_boundary(tp, sch));
    rep.append(verify_schwarz_jump(tp, sch));
    rep.append(verify_quadrature_identity(tp, sch));

    RunOutcome r;
    r.report = rep;
    r.omega = tp.bal.omega;
    r.stats = {{"lambda_plus", integrate(tp.d_plus)},
               {"lambda_minus", integrate(tp.d_minus)},
               {"interface_edges", static_cast<int>(tp.interface.size())},
               {"iterations", tp.bal.iterations},
               {"residual", tp.bal.residual}};
    if (artifacts) {
        RegionMask both(grid);
        for (std::size_t k = 0; k < both.member.size(); ++k)
            both.member[k] = tp.d_plus.member[k] || tp.d_minus.member[k];
        write_pgm(both, out + "/omega.pgm");
        write_csv(tp.u, out + "/u.csv");
        write_csv(tp.s_plus.S, tp.s_plus.defined, out + "/S_plus.csv");
        write_csv(tp.s_minus.S, tp.s_minus.defined, out + "/S_minus.csv");
        write_points_csv(tp.gamma(), out + "/gamma.csv");
    }
    return r;
}

RunOutcome execute(const json& cfg, const std::string& out, bool artifacts) {
    fs::create_directories(out);
    std::string kind = cfg.at("kind").get<std::string>();
    RunOutcome r;
    if (kind == "ball")
        r = run_ball(cfg, out, artifacts);
    else if (kind == "twophase_reflection")
        r = run_twophase(cfg, out, artifacts, true);
    else if (kind == "nullqd")
        r = run_twophase(cfg, out, artifacts, false);
    else
        throw ConfigError("unknown kind: " + kind);

    json summary;
    summary["kind"] = kind;
    summary["checks"] = r.report.to_json()["checks"];
    summary["overall"] = r.report.overall();
    summary["stats"] = r.stats;
    write_text(out + "/summary.json", summary.dump(2) + "\n");

    for (const auto& c : r.report.checks)
        std::printf("[%s] %-24s value=%-12.6g tol=%-12.6g %s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.value, c.tol, c.detail.c_str());
    std::fflush(stdout);

    r.code = r.report.overall() ? ExitPass : ExitCheckFailed;
    return r;
}

int classify_error(const std::exception& e) {
    if (dynamic_cast<const NonConvergence*>(&e)) return ExitSolverError;
    return ExitConfigError;
}

void write_error_summary(const std::string& out, const std::string& what, int code) {
    try {
        fs::create_directories(out);
        json j{{"overall", false}, {"error", what}, {"exit_code", code}};
        write_text(out + "/summary.json", j.dump(2) + "\n");
    } catch (...) {
        // the error code still reaches the caller
    }
}

void apply_override(json& cfg, const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value: " + kv);
    std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    json parsed;
    try {
        parsed = json::parse(val);
    } catch (...) {
        parsed = val;  // unquoted strings pass through verbatim
    }
    json* node = &cfg;
    std::size_t pos = 0;
    while (true) {
        auto dot = key.find('.', pos);
        std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (part.empty()) throw ConfigError("bad override key: " + key);
        if (dot == std::string::npos) {
            (*node)[part] = parsed;
            break;
        }
        node = &(*node)[part];
        pos = dot + 1;
    }
}

}  // namespace

json load_config(const RunRequest& req) {
    std::ifstream f(req.config_path);
    if (!f) throw ConfigError("cannot open config: " + req.config_path);
    json cfg;
    try {
        f >> cfg;
    } catch (const std::exception& e) {
        throw ConfigError("bad JSON in " + req.config_path + ": " + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& ov : req.overrides) apply_override(cfg, ov);
    if (!req.green.empty()) cfg["green"] = req.green;
    if (!req.out_dir.empty()) cfg["out"] = req.out_dir;
    return cfg;
}

int run_scenario(const RunRequest& req) {
    json cfg;
    try {
        cfg = load_config(req);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return ExitConfigError;
    }
    std::string out = cfg.value("out", "out");
    try {
        return execute(cfg, out, req.write_artifacts).code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        int code = classify_error(e);
        write_error_summary(out, e.what(), code);
        return code;
    }
}

int run_sweep(const RunRequest& req, const std::string& parameter,
              const std::vector<double>& values) {
    if (values.empty()) {
        std::fprintf(stderr, "error: sweep needs at least one value\n");
        return ExitConfigError;
    }
    json base;
    try {
        base = load_config(req);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return ExitConfigError;
    }
    std::string out_root = base.value("out", "out");

    struct Row {
        double value = 0.0;
        int code = ExitPass;
        bool overall = false;
        json stats = json::object();
        RegionMask omega;
    };
    std::vector<Row> rows;
    int worst = ExitPass;
    for (double v : values) {
        json cfg = base;
        if (parameter == "alpha")
            cfg["alpha"] = v;
        else if (parameter == "h")
            cfg["grid"]["h"] = v;
        else if (parameter == "x0_y")
            cfg["x0"][1] = v;
        else {
            std::fprintf(stderr, "error: unknown sweep parameter: %s\n", parameter.c_str());
            return ExitConfigError;
        }
        char sub[80];
        std::snprintf(sub, sizeof sub, "%s=%.6g", parameter.c_str(), v);
        std::string out = out_root + "/" + sub;
        cfg["out"] = out;
        std::printf("--- %s\n", sub);
        Row row;
        row.value = v;
        try {
            RunOutcome r = execute(cfg, out, req.write_artifacts);
            row.code = r.code;
            row.overall = r.report.overall();
            row.stats = r.stats;
            row.omega = r.omega;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            row.code = classify_error(e);
            write_error_summary(out, e.what(), row.code);
        }
        worst = std::max(worst, row.code);
        rows.push_back(std::move(row));
    }

    // growing the weight grows the swept set; compare consecutive runs
    int escaped_total = -1;
    if (parameter == "alpha") {
        escaped_total = 0;
        for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
            const Row& a = rows[k];
            const Row& b = rows[k + 1];
            if (a.code > ExitCheckFailed || b.code > ExitCheckFailed) continue;
            const Row& small = a.value <= b.value ? a : b;
            const Row& large = a.value <= b.value ? b : a;
            if (!(small.omega.grid == large.omega.grid)) continue;
            escaped_total += count_diff(small.omega, dilate(large.omega, 1));
        }
        if (escaped_total > 0) worst = std::max(worst, static_cast<int>(ExitCheckFailed));
    }

    std::set<std::string> keys;
    for (const Row& r : rows)
        for (const auto& [k, v] : r.stats.items())
            if (v.is_number()) keys.insert(k);
    std::string csv = "value,exit,overall";
    for (const auto& k : keys) csv += "," + k;
    csv += "\n";
    char buf[64];
    for (const Row& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%d", r.value, r.code, r.overall ? 1 : 0);
        csv += buf;
        for (const auto& k : keys) {
            if (r.stats.contains(k) && r.stats[k].is_number()) {
                std::snprintf(buf, sizeof buf, ",%.17g", r.stats[k].get<double>());
                csv += buf;
            } else {
                csv += ",nan";
            }
        }
        csv += "\n";
    }
    try {
        fs::create_directories(out_root);
        write_text(out_root + "/sweep.csv", csv);
        json summary{{"parameter", parameter}, {"values", values}, {"exit_code", worst}};
        if (escaped_total >= 0) {
            summary["nesting"] = {{"escaped_nodes", escaped_total}, {"pass", escaped_total == 0}};
        }
        write_text(out_root + "/sweep_summary.json", summary.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return ExitConfigError;
    }
    return worst;
}

}  // namespace hballs
