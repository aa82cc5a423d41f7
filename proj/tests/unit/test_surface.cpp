#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "cmcforge/catalog.hpp"
#include "cmcforge/periodkill.hpp"
#include "cmcforge/surface.hpp"

using namespace cmcforge;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int count_prefix(const std::string& s, const std::string& pre) {
    std::istringstream is(s);
    std::string line;
    int n = 0;
    while (std::getline(is, line)) n += line.rfind(pre, 0) == 0;
    return n;
}

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / "cmcforge_unit";
    fs::create_directories(d);
    return d / name;
}

} // namespace

TEST_CASE("catenoid fundamental mesh") {
    WeierstrassData cat = catenoid();
    const double c = 0.1;
    SurfaceMesh m = build_fundamental_mesh(cat, c);
    REQUIRE(m.size() > 500);
    double det = 0;
    for (const auto& v : m.vertices) det = std::max(det, std::abs(v.X.det().real() * c * c - 1.0));
    CHECK(det < 1e-8);
    CHECK(m.conformality_error < 0.02);

    // the real axis is fixed by mu11; its image is fixed by the induced isometry
    const Reflection& r = cat.reflection(1, 1);
    double dev = 0;
    int on = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (std::abs(m.uv[i].imag()) > 1e-14 || m.uv[i].real() <= 0) continue;
        ++on;
        HermitianPoint img = reflect_point(r.sigma, m.vertices[i]);
        dev = std::max(dev, (img.X - m.vertices[i].X).norm() / m.vertices[i].X.norm());
    }
    CHECK(on > 10);
    CHECK(dev < 1e-6);
}

TEST_CASE("orbits") {
    WeierstrassData cat = catenoid();
    MeshOptions opt;
    opt.nu = opt.nv = 8;
    SurfaceMesh piece = build_fundamental_mesh(cat, 0.1, opt);
    SurfaceMesh same = reflect_orbit(piece, cat.reflections, 0);
    CHECK(same.size() == piece.size());
    CHECK(same.faces == piece.faces);

    // a reflection repeated twice returns the piece, which is dropped
    std::vector<Reflection> twice{cat.reflection(3, 1), cat.reflection(3, 1)};
    SurfaceMesh two = reflect_orbit(piece, twice, 2);
    CHECK(two.words.size() == 2);

    SurfaceMesh full = reflect_orbit(piece, cat.reflections, 8);
    CHECK(static_cast<int>(full.words.size()) == cat.domain->copies);
}

TEST_CASE("trinoid orbit") {
    WeierstrassData tri = noid(3);
    ReflectionRep rep = normalize_rep(tri, 0.05);
    MeshOptions opt;
    opt.nu = opt.nv = 8;
    opt.gauge = rep.gauge;
    SurfaceMesh piece = build_fundamental_mesh(tri, 0.05, opt);
    SurfaceMesh full = reflect_orbit(piece, tri.reflections, 12);
    // D3 x Z2 acting on the half-domain
    CHECK(full.words.size() == 12);
}

TEST_CASE("numeric total absolute curvature") {
    // d sigma^2 depends on the gauge; only the normalized lift gives the closed surface
    auto ta = [](const WeierstrassData& d, double c) {
        TAOptions opt;
        opt.gauge = normalize_rep(d, c).gauge;
        return numeric_ta(d, c, opt);
    };
    TAResult tri = ta(noid(3), 0.1);
    CHECK(tri.formula == doctest::Approx(2 * kPi * (3 * (std::sqrt(0.6) - 1) + 4)));
    CHECK(tri.rel_error() < 0.02);
    TAResult cat = ta(catenoid(), 0.1);
    CHECK(cat.formula == doctest::Approx(2 * kPi * (2 * (std::sqrt(0.6) - 1) + 2)));
    CHECK(cat.rel_error() < 0.02);
    TAResult small = ta(noid(3), 1e-3);
    CHECK(std::abs(small.numeric - 8 * kPi) < 0.02 * 8 * kPi);
}

TEST_CASE("obj export") {
    SurfaceMesh empty;
    std::string e = obj_string(empty);
    CHECK(count_prefix(e, "v ") == 0);
    CHECK(count_prefix(e, "f ") == 0);

    SurfaceMesh quad;
    quad.surface = "square";
    quad.c = 0.5;
    for (Vec3 y : {Vec3{0, 0, 0}, Vec3{0.5, 0, 0}, Vec3{0.5, 0.5, 0}, Vec3{0, 0.5, 0.1}})
        quad.ball.push_back(BallPoint{y, 2.0});
    quad.faces = {{0, 1, 2}, {0, 2, 3}};
    std::string q = obj_string(quad);
    CHECK(count_prefix(q, "v ") == 4);
    CHECK(count_prefix(q, "f ") == 2);

    SurfaceMesh piece = build_fundamental_mesh(catenoid(), 0.1, MeshOptions{.nu = 6, .nv = 6});
    fs::path a = scratch("a.obj"), b = scratch("b.obj");
    export_obj(piece, a.string());
    SurfaceMesh back = import_obj(a.string());
    CHECK(back.surface == "catenoid");
    CHECK(back.c == 0.1);
    CHECK(back.faces == piece.faces);
    export_obj(back, b.string());
    CHECK(slurp(a) == slurp(b));

    fs::path j = scratch("r.json");
    export_json(mesh_stats(piece), j.string());
    auto parsed = nlohmann::json::parse(slurp(j));
    CHECK(parsed.at("vertices").get<int>() == static_cast<int>(piece.size()));
    CHECK_THROWS(import_obj(scratch("missing.obj").string()));
}
