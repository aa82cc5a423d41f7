#include "cmcforge/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "cmcforge/genus0.hpp"
#include "cmcforge/parallel.hpp"

namespace cmcforge {

namespace {

double piece_length(const BoundaryPiece& p) {
    if (p.kind == BoundaryPiece::Kind::Segment) return std::abs(p.b - p.a);
    return std::abs(p.sweep) * std::abs(p.a - p.center);
}

// nu + 1 points spaced uniformly in arc length along the concatenated pieces.
std::vector<cplx> boundary_points(const Domain& dom, int nu) {
    std::vector<double> len;
    double total = 0;
    for (const auto& p : dom.pieces) total += len.emplace_back(piece_length(p));
    std::vector<cplx> out;
    std::size_t k = 0;
    double before = 0;
    for (int i = 0; i <= nu; ++i) {
        double s = total * i / nu;
        while (k + 1 < len.size() && s > before + len[k]) before += len[k++];
        double t = std::clamp((s - before) / len[k], 0.0, 1.0);
        out.push_back(dom.pieces[k].at(t));
    }
    return out;
}

double end_radius(const Domain& dom, double requested) {
    double r = requested > 0 ? requested : dom.end_radius;
    return std::max(r, 1.5 * kMinClearance);
}

// Gauss-Legendre nodes and weights on [0, 1].
template <int N>
void gl_fill(std::vector<double>& x, std::vector<double>& w) {
    using Q = boost::math::quadrature::gauss<double, N>;
    const auto& a = Q::abscissa();
    const auto& wt = Q::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) {
            x.push_back(0.5);
            w.push_back(0.5 * wt[i]);
            continue;
        }
        x.push_back(0.5 - 0.5 * a[i]);
        w.push_back(0.5 * wt[i]);
        x.push_back(0.5 + 0.5 * a[i]);
        w.push_back(0.5 * wt[i]);
    }
    std::vector<std::size_t> idx(x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto p, auto q) { return x[p] < x[q]; });
    std::vector<double> xs, ws;
    for (auto i : idx) {
        xs.push_back(x[i]);
        ws.push_back(w[i]);
    }
    x = xs;
    w = ws;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.clear();
    w.clear();
    switch (n) {
    case 10: gl_fill<10>(x, w); break;
    case 20: gl_fill<20>(x, w); break;
    case 30: gl_fill<30>(x, w); break;
    case 40: gl_fill<40>(x, w); break;
    case 50: gl_fill<50>(x, w); break;
    default: throw std::invalid_argument("Gauss-Legendre order must be 10, 20, 30, 40 or 50");
    }
}

// F along z0 -> pts[0] -> pts[1] -> ..., one value per point.
std::vector<Mat2C> lift_along(std::shared_ptr<const WeierstrassData> d, double c, const std::vector<cplx>& pts,
                              const Mat2C& F0, double tol) {
    std::vector<cplx> path{d->z0};
    for (cplx p : pts)
        if (p != path.back()) path.push_back(p);
    std::vector<Mat2C> out;
    if (path.size() == 1) {
        out.assign(pts.size(), F0);
        return out;
    }
    auto sol = integrate(d, c, PolyPath(path), F0, tol);
    for (cplx p : pts) out.push_back(sol.at(p));
    return out;
}

// F at each of `pts`, walking from `start` where F = Fs.
std::vector<Mat2C> lift_ray(std::shared_ptr<const WeierstrassData> d, double c, cplx start, const Mat2C& Fs,
                            const std::vector<cplx>& pts, double tol) {
    std::vector<cplx> path{start};
    for (cplx p : pts) path.push_back(p);
    auto sol = integrate(d, c, PolyPath(path), Fs, tol);
    std::vector<Mat2C> out;
    for (cplx p : pts) out.push_back(sol.at(p));
    return out;
}

double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]}, v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    Vec3 n{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    return 0.5 * std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
}

// Minkowski product of Hermitian tangent vectors.
double mink(const Mat2C& u, const Mat2C& v) { return -0.5 * (u * v.adj()).trace().real(); }

} // namespace

SurfaceMesh build_fundamental_mesh(const WeierstrassData& d, double c, const MeshOptions& opt) {
    if (c == 0.0) throw MeshError("mesh needs c != 0");
    if (!d.domain) throw MeshError("surface '" + d.name + "' has no fundamental domain");
    if (opt.nu < 2 || opt.nv < 2) throw MeshError("grid must be at least 2x2");
    const Domain& dom = *d.domain;
    auto data = std::make_shared<const WeierstrassData>(d);
    const cplx e = dom.center;
    const double rmin = end_radius(dom, opt.end_radius);
    const int nv = opt.nv;

    std::vector<cplx> outer;
    for (cplx b : boundary_points(dom, opt.nu))
        if (dom.center_is_end ? std::abs(b - e) >= 2 * rmin : std::abs(b - e) > 1e-12) outer.push_back(b);
    if (outer.size() < 2) throw MeshError("fundamental domain is degenerate at this truncation");
    const int K = static_cast<int>(outer.size());

    // node j of ray i, j = nv on the boundary
    auto node = [&](int i, int j) -> cplx {
        cplx b = outer[i];
        if (dom.center_is_end) return e + (b - e) * std::pow(rmin / std::abs(b - e), 1.0 - double(j) / nv);
        return e + (b - e) * (double(j) / nv);
    };
    const int jlo = dom.center_is_end ? 0 : 1;
    const int per_ray = nv + 1 - jlo;
    const int base = dom.center_is_end ? 0 : 1; // apex first when the center is regular
    auto idx = [&](int i, int j) { return j == 0 && !dom.center_is_end ? 0 : base + i * per_ray + (j - jlo); };

    SurfaceMesh m;
    m.surface = d.name;
    m.c = c;
    m.lambda = std::sqrt(std::max(0.0, 1 - 4 * c));
    m.words = {""};
    const int nvert = base + K * per_ray;
    m.uv.resize(nvert);
    m.lift.resize(nvert);
    m.parent.assign(nvert, -1);

    auto Fb = lift_along(data, c, outer, opt.gauge, opt.tol);
    parallel_for(K, [&](std::size_t ii) {
        int i = static_cast<int>(ii);
        std::vector<cplx> inner;
        int jmin = (i == 0 && !dom.center_is_end) ? 0 : jlo;
        for (int j = nv - 1; j >= jmin; --j) inner.push_back(node(i, j));
        auto Fr = lift_ray(data, c, outer[i], Fb[i], inner, opt.tol);
        m.uv[idx(i, nv)] = outer[i];
        m.lift[idx(i, nv)] = Fb[i];
        m.parent[idx(i, nv)] = i == 0 ? -1 : idx(i - 1, nv);
        for (int j = nv - 1, k = 0; j >= jmin; --j, ++k) {
            m.uv[idx(i, j)] = inner[k];
            m.lift[idx(i, j)] = Fr[k];
            m.parent[idx(i, j)] = idx(i, j + 1);
        }
    });

    m.vertices.resize(nvert);
    m.ball.resize(nvert);
    for (int v = 0; v < nvert; ++v) {
        m.vertices[v] = HermitianPoint::from_lift(m.lift[v], c);
        m.ball[v] = to_ball(m.vertices[v]);
    }

    auto add = [&](int a, int b, int cc) {
        if (tri_area(m.ball[a].y, m.ball[b].y, m.ball[cc].y) < 1e-14) return;
        m.faces.push_back({a, b, cc});
    };
    for (int i = 0; i + 1 < K; ++i) {
        if (!dom.center_is_end) add(0, idx(i + 1, 1), idx(i, 1));
        for (int j = jlo; j < nv; ++j) {
            add(idx(i, j), idx(i + 1, j), idx(i + 1, j + 1));
            add(idx(i, j), idx(i + 1, j + 1), idx(i, j + 1));
        }
    }

    if (opt.check_conformal) {
        m.conformality_error = conformality_error(d, m);
        if (m.conformality_error > opt.conformal_tol)
            throw MeshError("conformality check failed: relative error " + std::to_string(m.conformality_error));
    }
    return m;
}

double conformality_error(const WeierstrassData& d, const SurfaceMesh& m, int stride) {
    double worst = 0;
    // interior vertices: not on the boundary chain, parent is a ray vertex
    for (std::size_t v = 0; v < m.lift.size(); v += stride) {
        if (m.parent[v] < 0) continue;
        cplx z = m.uv[v];
        const Mat2C& F = m.lift[v];
        Mat2C P = F * F.dag();
        Mat2C A = d.alpha(z);
        // f = (1/c) F F*, f_z = alpha F F*
        Mat2C fz = A * P, fzb = P * A.dag();
        Mat2C fx = fz + fzb, fy = (fz - fzb) * I_UNIT;
        double E = mink(fx, fx), G = mink(fy, fy), Fm = mink(fx, fy);
        auto g = secondary_gauss_series(d, m.c, Side::Left, Mat2C::identity(), F, z, 2);
        double s = std::norm(g[0]);
        double expect = (1 + s) * (1 + s) * std::norm(d.q.value(z)) / std::norm(g[1]);
        worst = std::max({worst, std::abs(E / expect - 1), std::abs(G / expect - 1), std::abs(Fm) / expect});
    }
    return worst;
}

HermitianPoint reflect_point(const Mat2C& sigma, const HermitianPoint& p) {
    Mat2C s = sigma.conj().inverse();
    HermitianPoint q;
    q.X = s * p.X.conj() * s.dag();
    q.c = p.c;
    return q;
}

namespace {

bool same_vertex_set(const std::vector<BallPoint>& a, const std::vector<BallPoint>& b, double tol) {
    if (a.size() != b.size()) return false;
    std::vector<std::size_t> order(b.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto p, auto q) { return b[p].y[0] < b[q].y[0]; });
    for (const auto& pa : a) {
        auto lo = std::lower_bound(order.begin(), order.end(), pa.y[0] - tol,
                                   [&](std::size_t i, double x) { return b[i].y[0] < x; });
        bool found = false;
        for (auto it = lo; it != order.end() && b[*it].y[0] <= pa.y[0] + tol; ++it) {
            const auto& y = b[*it].y;
            double dd = std::hypot(y[0] - pa.y[0], y[1] - pa.y[1], y[2] - pa.y[2]);
            if (dd <= tol) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

Vec3 centroid(const std::vector<BallPoint>& v) {
    Vec3 s{0, 0, 0};
    for (const auto& p : v)
        for (int k = 0; k < 3; ++k) s[k] += p.y[k];
    for (double& x : s) x /= std::max<std::size_t>(1, v.size());
    return s;
}

} // namespace

SurfaceMesh reflect_orbit(const SurfaceMesh& piece, const std::vector<Reflection>& reflections, int depth,
                          double dedup_tol) {
    if (depth <= 0) return piece;
    struct Copy {
        std::string word;
        int parity;
        std::vector<HermitianPoint> verts;
        std::vector<BallPoint> ball;
        Vec3 center;
    };
    double scale = piece.ball.empty() ? 1.0 : std::max(1.0, piece.ball.front().radius);
    double tol = dedup_tol * scale;
    std::vector<Copy> copies{{"", 0, piece.vertices, piece.ball, centroid(piece.ball)}};
    std::vector<std::size_t> frontier{0};
    for (int level = 0; level < depth && !frontier.empty(); ++level) {
        std::vector<std::size_t> next;
        for (auto ci : frontier)
            for (const auto& r : reflections) {
                Copy nc;
                nc.word = copies[ci].word.empty() ? r.name : r.name + "*" + copies[ci].word;
                nc.parity = 1 - copies[ci].parity;
                for (const auto& v : copies[ci].verts) {
                    nc.verts.push_back(reflect_point(r.sigma, v));
                    nc.ball.push_back(to_ball(nc.verts.back()));
                }
                nc.center = centroid(nc.ball);
                bool dup = false;
                for (const auto& o : copies) {
                    const auto& a = o.center;
                    if (std::hypot(a[0] - nc.center[0], a[1] - nc.center[1], a[2] - nc.center[2]) > tol) continue;
                    if (same_vertex_set(nc.ball, o.ball, tol)) {
                        dup = true;
                        break;
                    }
                }
                if (dup) continue;
                copies.push_back(std::move(nc));
                next.push_back(copies.size() - 1);
            }
        frontier = next;
    }
    SurfaceMesh out;
    out.surface = piece.surface;
    out.c = piece.c;
    out.lambda = piece.lambda;
    out.conformality_error = piece.conformality_error;
    for (const auto& cp : copies) {
        int off = static_cast<int>(out.vertices.size());
        out.words.push_back(cp.word);
        out.vertices.insert(out.vertices.end(), cp.verts.begin(), cp.verts.end());
        out.ball.insert(out.ball.end(), cp.ball.begin(), cp.ball.end());
        out.uv.insert(out.uv.end(), piece.uv.begin(), piece.uv.end());
        for (auto f : piece.faces) {
            if (cp.parity) std::swap(f[1], f[2]); // reflections reverse orientation
            out.faces.push_back({f[0] + off, f[1] + off, f[2] + off});
        }
    }
    return out;
}

std::vector<Vec3> rescaled_vertices(const SurfaceMesh& m, const Mat2C& gauge) {
    Mat2C b = sqrtm_hermitian(gauge * gauge.dag()).inverse();
    std::vector<Vec3> out;
    for (const auto& v : m.vertices) {
        auto y = to_ball(act_on_point(b, v)).y;
        out.push_back({2 * y[0], 2 * y[1], 2 * y[2]});
    }
    return out;
}

std::vector<Vec3> minimal_vertices(const WeierstrassData& d, const SurfaceMesh& piece) {
    const std::size_t n = piece.uv.size();
    if (piece.parent.size() != n) throw MeshError("minimal_vertices needs a fundamental piece");
    std::vector<Vec3> out(n);
    std::vector<char> done(n, 0);
    auto seg = [&](cplx a, cplx b) -> Vec3 {
        if (a == b) return {0, 0, 0};
        return minimal_immerse(d, PolyPath({a, b}));
    };
    std::function<const Vec3&(std::size_t)> get = [&](std::size_t v) -> const Vec3& {
        if (done[v]) return out[v];
        int p = piece.parent[v];
        Vec3 base{0, 0, 0};
        cplx from = d.z0;
        if (p >= 0) {
            base = get(static_cast<std::size_t>(p));
            from = piece.uv[p];
        }
        Vec3 s = seg(from, piece.uv[v]);
        for (int k = 0; k < 3; ++k) out[v][k] = base[k] + s[k];
        done[v] = 1;
        return out[v];
    };
    for (std::size_t v = 0; v < n; ++v) get(v);
    return out;
}

TAResult numeric_ta(const WeierstrassData& d, double c, const TAOptions& opt) {
    if (c == 0.0) throw MeshError("numeric_ta needs c != 0");
    if (!d.domain) throw MeshError("surface '" + d.name + "' has no fundamental domain");
    const Domain& dom = *d.domain;
    auto data = std::make_shared<const WeierstrassData>(d);
    const cplx e = dom.center;
    const double rmin = end_radius(dom, opt.end_radius);

    std::vector<double> xu, wu, xl, wl;
    gauss_legendre(opt.nu, xu, wu);
    gauss_legendre(opt.nl, xl, wl);

    struct Ray {
        cplx b, db; // boundary point and d/dt
        double w;
        double lmin; // log of the inner truncation (end) or 0
    };
    std::vector<Ray> rays;
    for (const auto& p : dom.pieces)
        for (std::size_t a = 0; a < xu.size(); ++a) {
            cplx b = p.at(xu[a]);
            double r = std::abs(b - e);
            if (dom.center_is_end && r < 2 * rmin) continue; // the truncated sliver at the end
            rays.push_back({b, p.tangent(xu[a]), wu[a], dom.center_is_end ? std::log(rmin / r) : 0.0});
        }
    std::vector<cplx> outer;
    for (const auto& r : rays) outer.push_back(r.b);
    auto Fb = lift_along(data, c, outer, opt.gauge, opt.tol);

    std::vector<double> contrib(rays.size(), 0.0);
    parallel_for(rays.size(), [&](std::size_t i) {
        const Ray& ray = rays[i];
        std::vector<cplx> pts;
        std::vector<double> jac;
        double orient = (std::conj(ray.db) * (ray.b - e)).imag();
        // nodes from the boundary inward
        for (std::size_t k = xl.size(); k-- > 0;) {
            double tau, dtau;
            if (dom.center_is_end) {
                double l = ray.lmin * (1 - xl[k]);
                tau = std::exp(l);
                dtau = -ray.lmin * tau * tau; // tau^2 dl/dx
            } else {
                tau = xl[k];
                dtau = tau;
            }
            pts.push_back(e + tau * (ray.b - e));
            jac.push_back(wl[k] * dtau * orient);
        }
        auto F = lift_ray(data, c, ray.b, Fb[i], pts, opt.tol);
        double s = 0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            auto g = secondary_gauss_series(d, c, Side::Left, Mat2C::identity(), F[k], pts[k], 2);
            s += jac[k] * metric_dsigma(g[0], g[1]);
        }
        contrib[i] = ray.w * s;
    });
    TAResult r;
    for (double x : contrib) r.piece += x;
    r.piece = std::abs(r.piece);
    r.copies = dom.copies;
    r.numeric = r.piece * dom.copies;
    r.nodes = static_cast<int>(rays.size() * xl.size());
    r.formula = d.ends >= 2 ? total_abs_curvature(d.ends, c) : 0.0;
    return r;
}

std::string obj_string(const SurfaceMesh& m) {
    std::string s = "# cmcforge " + (m.surface.empty() ? std::string("mesh") : m.surface) + "\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "# c %.17g\n", m.c);
    s += buf;
    for (const auto& b : m.ball) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", b.y[0], b.y[1], b.y[2]);
        s += buf;
    }
    for (const auto& f : m.faces) {
        std::snprintf(buf, sizeof buf, "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
        s += buf;
    }
    return s;
}

void export_obj(const SurfaceMesh& m, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << obj_string(m);
    if (!os) throw std::runtime_error("write failed: " + path);
}

SurfaceMesh import_obj(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    SurfaceMesh m;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            BallPoint b;
            ls >> b.y[0] >> b.y[1] >> b.y[2];
            m.ball.push_back(b);
        } else if (tag == "f") {
            std::array<int, 3> f;
            ls >> f[0] >> f[1] >> f[2];
            for (int& x : f) --x;
            m.faces.push_back(f);
        } else if (tag == "#") {
            std::string key;
            ls >> key;
            if (key == "cmcforge") ls >> m.surface;
            else if (key == "c") ls >> m.c;
        }
        if (!ls && tag != "#" && !tag.empty()) throw std::runtime_error("malformed OBJ line: " + line);
    }
    for (auto& b : m.ball) {
        b.radius = m.c != 0.0 ? 1.0 / std::abs(m.c) : 1.0;
        if (m.c != 0.0) m.vertices.push_back(from_ball(b, m.c));
    }
    for (const auto& f : m.faces)
        for (int x : f)
            if (x < 0 || x >= static_cast<int>(m.ball.size())) throw std::runtime_error("OBJ face index out of range");
    return m;
}

void export_json(const nlohmann::json& report, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << report.dump(2) << "\n";
    if (!os) throw std::runtime_error("write failed: " + path);
}

nlohmann::json mesh_stats(const SurfaceMesh& m) {
    double det_err = 0, tr_min = 1e300;
    for (const auto& v : m.vertices) {
        det_err = std::max(det_err, std::abs(v.X.det().real() * v.c * v.c - 1));
        tr_min = std::min(tr_min, v.X.trace().real());
    }
    return {{"vertices", m.ball.size()},
            {"faces", m.faces.size()},
            {"copies", m.words.size()},
            {"max_det_error", det_err},
            {"min_trace", m.vertices.empty() ? 0.0 : tr_min},
            {"conformality_error", m.conformality_error}};
}

} // namespace cmcforge
