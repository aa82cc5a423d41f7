// cmcforge: command-line front end.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmcforge/catalog.hpp"
#include "cmcforge/genus0.hpp"
#include "cmcforge/parallel.hpp"
#include "cmcforge/periodkill.hpp"
#include "cmcforge/surface.hpp"
#include "cmcforge/verify.hpp"

using namespace cmcforge;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kUsage = 1;
constexpr int kVerifyFailed = 2;

struct UsageError : std::runtime_error { using std::runtime_error::runtime_error; };

struct RunConfig {
    std::string surface{"catenoid"};
    double c{0.1};
    double tol{1e-10};
    int nu{32}, nv{32};
    int orbit_depth{0};
    std::string out{"out"};
    bool force{false};
    bool json_out{false};
    std::string suite{"all"};
    int m{0}, n{0};
    std::vector<double> lambda0;
};

void apply_config(RunConfig& r, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw UsageError("cannot read config " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    r.surface = j.value("surface", r.surface);
    r.c = j.value("c", r.c);
    r.tol = j.value("tol", r.tol);
    if (j.contains("grid")) {
        r.nu = j["grid"].at(0).get<int>();
        r.nv = j["grid"].at(1).get<int>();
    }
    r.orbit_depth = j.value("orbit_depth", r.orbit_depth);
    r.out = j.value("out", r.out);
    r.force = j.value("force", r.force);
    r.suite = j.value("suite", r.suite);
    r.m = j.value("m", r.m);
    r.n = j.value("n", r.n);
    r.lambda0 = j.value("lambda0", r.lambda0);
}

// --config is read before the flags so that flags override it.
std::optional<std::string> find_config(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return std::nullopt;
}

bool is_synthetic(const std::string& s) { return s.rfind("synthetic", 0) == 0; }

// Range of c for which the surface is known to exist.
struct Certification {
    bool ok;
    std::string range;
};

Certification certify(const WeierstrassData& d, double c) {
    if (c >= 0.25) return {false, "c < 1/4"};
    if (d.name == "catenoid" || d.name == "enneper") return {true, "c < 1/4, c != 0"};
    if (is_synthetic(d.name)) return {std::abs(c) <= 0.2, "|c| <= 0.2"};
    int m = d.params.count("m") ? static_cast<int>(d.params.at("m")) : 2;
    int n = static_cast<int>(d.params.at("n"));
    auto cr = c_range(m, n);
    std::string text = interval_text(cr.neg) + " U " + interval_text(cr.pos);
    if (m == 2) return {exists_cmc(2, n, c).exists, "|alpha(c)| < 1 (contains " + text + ")"};
    return {cr.neg.contains(c) || cr.pos.contains(c), text};
}

void check_run(const RunConfig& r, const WeierstrassData& d) {
    if (r.c == 0.0) throw UsageError("c must be nonzero");
    if (!(r.tol >= 1e-14 && r.tol <= 1e-6)) throw UsageError("tol must lie in [1e-14, 1e-6]");
    auto cert = certify(d, r.c);
    if (!cert.ok && !r.force)
        throw UsageError("c = " + std::to_string(r.c) + " is outside the certified range " + cert.range +
                         " of " + d.name + " (use --force)");
}

WeierstrassData load_surface(const std::string& name) {
    try {
        return catalog(name);
    } catch (const UnknownSurface& e) {
        throw UsageError(e.what());
    }
}

struct Solved {
    WeierstrassData data;
    FamilySpec fam;
    SolveReport report;
};

Solved solve_surface(const RunConfig& r) {
    Solved s{load_surface(r.surface), {}, {}};
    check_run(r, s.data);
    SolveOptions opt;
    opt.ode_tol = std::min(r.tol, 1e-10);
    opt.force = true; // certification handled above
    if (r.surface == "synthetic") {
        s.fam = synthetic_family();
        opt.lambda0 = r.lambda0;
    } else {
        s.fam = rigid_family(r.surface);
    }
    s.report = solve_lambda(s.fam, r.c, opt);
    s.data = s.fam.data(s.report.lambda);
    return s;
}

json solve_report(const RunConfig& r, const Solved& s) {
    json j = solve_json(s.report, s.fam, r.c);
    j["tol"] = r.tol;
    j["certified_range"] = certify(s.data, r.c).range;
    j["forced"] = r.force && !certify(s.data, r.c).ok;
    j["monodromy"] = json::array();
    for (const auto& [name, loop] : s.data.loops) {
        auto rec = monodromy(s.data, r.c, loop, r.tol);
        rec.loop = name;
        j["monodromy"].push_back(monodromy_json(rec, r.tol));
    }
    j["reducible"] = is_reducible(monodromy_generators(s.data, r.c, s.report.rep, r.tol), 1e-7);
    return j;
}

int cmd_catalog(const RunConfig& r, const std::string& show) {
    if (!show.empty()) {
        std::cout << to_json(load_surface(show)).dump(2) << "\n";
        return 0;
    }
    json list = json::array();
    for (const auto& name : catalog_names()) {
        std::string probe = name == "noid(n)" ? "noid(4)" : name == "synthetic(phi)" ? "synthetic" : name;
        auto d = catalog(probe);
        list.push_back({{"name", name},
                        {"ends", d.ends},
                        {"reflections", d.reflections.size()},
                        {"loops", d.loops.size()},
                        {"domain", d.domain.has_value()}});
    }
    if (r.json_out) {
        std::cout << json{{"schema", "v1"}, {"surfaces", list}}.dump(2) << "\n";
        return 0;
    }
    std::printf("%-16s %5s %12s %6s %7s\n", "surface", "ends", "reflections", "loops", "domain");
    for (const auto& e : list)
        std::printf("%-16s %5d %12d %6d %7s\n", e["name"].get<std::string>().c_str(), e["ends"].get<int>(),
                    e["reflections"].get<int>(), e["loops"].get<int>(), e["domain"].get<bool>() ? "yes" : "no");
    return 0;
}

int cmd_ranges(const RunConfig& r, int kmax) {
    if ((r.m == 0) != (r.n == 0)) throw UsageError("give both --m and --n, or neither");
    if (r.m == 0) {
        auto rows = platonic_table();
        if (r.json_out) std::cout << json{{"schema", "v1"}, {"table", table_json(rows)}}.dump(2) << "\n";
        else std::cout << table_text(rows);
        return 0;
    }
    CRange cr;
    try {
        cr = c_range(r.m, r.n);
    } catch (const Inadmissible& e) {
        throw UsageError(e.what());
    }
    int N = genus0_ends(r.m, r.n);
    if (r.json_out) {
        json j{{"schema", "v1"},
               {"m", r.m},
               {"n", r.n},
               {"ends", N},
               {"c_neg", {to_string(cr.neg.lo), to_string(cr.neg.hi)}},
               {"c_pos", {to_string(cr.pos.lo), to_string(cr.pos.hi)}},
               {"ta_over_pi",
                {to_string(total_abs_curvature_over_pi(N, cr.lambda_pos)), to_string(total_abs_curvature_over_pi(N, 1)),
                 to_string(total_abs_curvature_over_pi(N, cr.lambda_neg))}}};
        if (r.m == 2) {
            auto jm = jm_intervals(r.n, kmax);
            for (const auto& iv : jm.k) j["jm_intervals"].push_back({to_string(iv.lo), to_string(iv.hi)});
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << interval_text(cr.neg) << " U " << interval_text(cr.pos) << "\n";
    if (r.m == 2) {
        auto jm = jm_intervals(r.n, kmax);
        for (std::size_t k = 0; k < jm.k.size(); ++k) std::cout << "I_" << k + 1 << " = " << interval_text(jm.k[k]) << "\n";
    }
    return 0;
}

int cmd_solve(const RunConfig& r) {
    auto s = solve_surface(r);
    auto j = solve_report(r, s);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_mesh(const RunConfig& r) {
    auto s = solve_surface(r);
    const auto& d = s.data;
    MeshOptions mo;
    mo.nu = r.nu;
    mo.nv = r.nv;
    mo.tol = r.tol;
    mo.gauge = s.report.rep.gauge;
    auto piece = build_fundamental_mesh(d, r.c, mo);
    auto mesh = reflect_orbit(piece, d.reflections, r.orbit_depth);
    TAOptions to;
    to.gauge = mo.gauge;
    to.tol = r.tol;
    auto ta = numeric_ta(d, r.c, to);

    fs::create_directories(r.out);
    std::string stem = d.name;
    for (char& ch : stem)
        if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
    fs::path obj = fs::path(r.out) / (stem + ".obj");
    export_obj(mesh, obj.string());

    json rep{{"schema", "v1"},
             {"surface", d.name},
             {"c", r.c},
             {"lambda", lambda_of_c(r.c)},
             {"residuals", s.report.residual},
             {"reflection_rep", rep_json(s.report.rep)},
             {"reducibility", is_reducible(monodromy_generators(d, r.c, s.report.rep, r.tol), 1e-7) ? "reducible" : "irreducible"},
             {"TA_numeric", ta.numeric},
             {"TA_formula", ta.formula},
             {"mesh_stats", mesh_stats(mesh)},
             {"orbit_words", mesh.words},
             {"obj", obj.filename().string()}};
    export_json(rep, (fs::path(r.out) / "report.json").string());
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_verify(const RunConfig& r) {
    std::vector<CheckResult> res;
    try {
        res = run_suites(r.suite);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    bool ok = true;
    for (const auto& c : res) {
        ok = ok && c.pass;
        if (!r.json_out) std::printf("[%s] %2d %s: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), c.detail.c_str());
    }
    if (r.json_out) std::cout << json{{"schema", "v1"}, {"results", results_json(res)}, {"pass", ok}}.dump(2) << "\n";
    return ok ? 0 : kVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        if (auto path = find_config(argc, argv)) apply_config(cfg, *path);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    CLI::App app{"Constant mean curvature surfaces in hyperbolic space"};
    app.require_subcommand(1);
    app.fallthrough(); // --config and --json may follow the subcommand
    std::string config_path;
    app.add_option("--config", config_path, "JSON run configuration; flags override it");
    app.add_flag("--json", cfg.json_out, "machine readable output");

    auto* catalog_cmd = app.add_subcommand("catalog", "list the catalog surfaces");
    std::string show;
    catalog_cmd->add_option("--show", show, "print the Weierstrass data of one surface as JSON");

    auto* ranges_cmd = app.add_subcommand("ranges", "existence ranges in c (the platonic table without --m/--n)");
    int kmax = 2;
    ranges_cmd->add_option("--m", cfg.m, "edges at a vertex");
    ranges_cmd->add_option("--n", cfg.n, "edges of a face");
    ranges_cmd->add_option("--kmax", kmax, "higher intervals listed for m = 2")->check(CLI::Range(0, 50));

    auto add_run = [&](CLI::App* sc) {
        sc->add_option("--surface", cfg.surface, "catalog name");
        sc->add_option("--c", cfg.c, "mean curvature parameter");
        sc->add_option("--tol", cfg.tol, "ODE tolerance in [1e-14, 1e-6]");
        sc->add_flag("--force", cfg.force, "allow c outside the certified range");
    };
    auto* solve_cmd = app.add_subcommand("solve", "normalize the reflection representation and solve the period problem");
    add_run(solve_cmd);
    solve_cmd->add_option("--lambda0", cfg.lambda0, "initial deformation parameter (synthetic family)");

    auto* mesh_cmd = app.add_subcommand("mesh", "export an OBJ mesh and a JSON report");
    add_run(mesh_cmd);
    mesh_cmd->add_option("--out", cfg.out, "output directory");
    mesh_cmd->add_option("--orbit-depth", cfg.orbit_depth, "reflection word length")->check(CLI::Range(0, 64));
    mesh_cmd->add_option("--nu", cfg.nu, "boundary samples")->check(CLI::Range(2, 4096));
    mesh_cmd->add_option("--nv", cfg.nv, "ray samples")->check(CLI::Range(2, 4096));

    auto* verify_cmd = app.add_subcommand("verify", "run invariant suites");
    verify_cmd->add_option("--suite", cfg.suite, "all, a suite number or a suite name");


    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    try {
        if (*catalog_cmd) return cmd_catalog(cfg, show);
        if (*ranges_cmd) return cmd_ranges(cfg, kmax);
        if (*solve_cmd) return cmd_solve(cfg);
        if (*mesh_cmd) return cmd_mesh(cfg);
        if (*verify_cmd) return cmd_verify(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
