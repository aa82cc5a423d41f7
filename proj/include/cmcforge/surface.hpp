#pragma once

#include <array>
#include <string>
#include <vector>

#include "cmcforge/nullcurve.hpp"
#include "json.hpp"

namespace cmcforge {

struct SurfaceMesh {
    std::vector<HermitianPoint> vertices;
    std::vector<BallPoint> ball; // cached to_ball(vertices[i]); the only data kept by import_obj
    std::vector<std::array<int, 3>> faces;
    std::vector<cplx> uv;      // source coordinate in the chart
    std::vector<Mat2C> lift;   // F at the vertex (fundamental piece only)
    std::vector<int> parent;   // tree edge parent -> vertex is a straight segment; -1 joins z0
    std::string surface;
    double c{0};
    double lambda{0};
    std::vector<std::string> words; // one per copy in an orbit mesh, "" for the piece
    double conformality_error{0};   // max relative deviation over checked cells

    std::size_t size() const { return ball.size(); }
};

struct MeshOptions {
    int nu{32}, nv{32};
    double tol{kDefaultOdeTol};
    Mat2C gauge;             // right gauge of the lift, from periodkill
    double end_radius{0};    // 0: use the domain's
    double conformal_tol{0.02};
    bool check_conformal{true};
};

struct MeshError : std::runtime_error { using std::runtime_error::runtime_error; };

// Fan mesh of the fundamental domain with vertices (1/|c|) F F*.
SurfaceMesh build_fundamental_mesh(const WeierstrassData& d, double c, const MeshOptions& opt = {});

// Max relative deviation of the pulled back metric from (1 + |g|^2)^2 |q/g'|^2 |dz|^2,
// also counting the failure of conformality, over every `stride`-th interior vertex.
double conformality_error(const WeierstrassData& d, const SurfaceMesh& m, int stride = 7);

// Isometry of H^3 induced by a reflection: X -> s conj(X) s*, s = conj(sigma)^{-1}.
HermitianPoint reflect_point(const Mat2C& sigma, const HermitianPoint& p);

// Orbit of the piece under words in the reflections up to `depth`; coincident copies are dropped.
SurfaceMesh reflect_orbit(const SurfaceMesh& piece, const std::vector<Reflection>& reflections, int depth,
                          double dedup_tol = 1e-8);

// Ball coordinates doubled after the isometry (a a*)^{-1/2} that returns f(z0) to the origin.
// As c -> 0 these approach the minimal immersion.
std::vector<Vec3> rescaled_vertices(const SurfaceMesh& m, const Mat2C& gauge);

// Minimal immersion at the piece's vertices, integrated along the same tree.
std::vector<Vec3> minimal_vertices(const WeierstrassData& d, const SurfaceMesh& piece);

struct TAOptions {
    int nu{20}; // Gauss-Legendre nodes per boundary piece
    int nl{20}; // nodes along each ray
    double tol{kDefaultOdeTol};
    Mat2C gauge;
    double end_radius{0};
};

struct TAResult {
    double numeric{0};  // orbit weighted d sigma^2 area
    double piece{0};    // area of one copy
    double formula{0};  // total_abs_curvature(ends, c)
    int copies{0};
    int nodes{0};
    double rel_error() const { return std::abs(numeric - formula) / std::abs(formula); }
};

TAResult numeric_ta(const WeierstrassData& d, double c, const TAOptions& opt = {});

// ASCII OBJ of the ball coordinates, faces 1-indexed, %.17g.
std::string obj_string(const SurfaceMesh& m);
void export_obj(const SurfaceMesh& m, const std::string& path);
SurfaceMesh import_obj(const std::string& path);
void export_json(const nlohmann::json& report, const std::string& path);

nlohmann::json mesh_stats(const SurfaceMesh& m);

} // namespace cmcforge
