#include "cmcforge/catalog.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <regex>

namespace cmcforge {

namespace {

Reflection make_reflection(std::string name, int j, int k, Mat2C mob, Mat2C sigma,
                           std::vector<cplx> probes, std::optional<Vec3> normal = {},
                           int sign = 1) {
    Reflection r;
    r.name = std::move(name);
    r.j = j;
    r.k = k;
    r.mob = mob;
    r.sigma = sigma;
    r.probes = std::move(probes);
    r.normal = normal;
    r.sigma_sign = sign;
    return r;
}

const Mat2C kSwap{0, I_UNIT, I_UNIT, 0}; // sigma for z -> 1/conj(z)

Poly real_cleanup(const Poly& p) {
    auto c = p.coeffs();
    double scale = 0;
    for (auto x : c) scale = std::max(scale, std::abs(x));
    for (auto& x : c) {
        if (std::abs(x.imag()) < 1e-13 * scale) x = x.real();
        if (std::abs(x.real()) < 1e-13 * scale) x = cplx(0, x.imag());
    }
    return Poly(c);
}

} // namespace

WeierstrassData catenoid() {
    WeierstrassData d;
    d.name = "catenoid";
    d.G = RationalMap::poly(Poly::monomial(1));
    d.q = RationalMap(Poly::constant(1), Poly::monomial(2));
    d.punctures = {ExtComplex(0.0), ExtComplex::infinity()};
    d.z0 = 1.0;
    d.ends = 2;
    d.reflections = {
        make_reflection("mu11", 1, 1, Mat2C::identity(), Mat2C::identity(), {0.6, 1.4, 2.0},
                        Vec3{0, 1, 0}),
        make_reflection("mu21", 2, 1, Mat2C::diag(I_UNIT, -I_UNIT), Mat2C::diag(I_UNIT, -I_UNIT),
                        {0.5 * I_UNIT, 1.0 * I_UNIT, 1.5 * I_UNIT}, Vec3{1, 0, 0}, -1),
        make_reflection("mu31", 3, 1, Mat2C{0, 1, 1, 0}, kSwap,
                        {std::exp(0.3 * I_UNIT), std::exp(0.8 * I_UNIT), std::exp(1.2 * I_UNIT)},
                        Vec3{0, 0, 1}),
    };
    d.loops["end"] = PolyPath::circle(0.0, 1.0, 0.0, 64);
    Domain dom;
    dom.pieces = {BoundaryPiece::arc(0.0, 1.0, I_UNIT)};
    dom.center = 0.0;
    dom.center_is_end = true;
    dom.copies = 8;
    d.domain = dom;
    d.finalize();
    return d;
}

WeierstrassData enneper() {
    WeierstrassData d;
    d.name = "enneper";
    d.G = RationalMap::tanh_map();
    d.q = RationalMap::poly(Poly::constant(1));
    d.punctures = {ExtComplex::infinity()};
    d.z0 = 0.0;
    d.ends = 1;
    d.reflections = {
        make_reflection("mu11", 1, 1, Mat2C::identity(), Mat2C::identity(), {0.3, 0.6, 0.9},
                        Vec3{0, 1, 0}),
        make_reflection("mu21", 2, 1, Mat2C::diag(I_UNIT, -I_UNIT), Mat2C::diag(I_UNIT, -I_UNIT),
                        {0.3 * I_UNIT, 0.6 * I_UNIT, 0.9 * I_UNIT}, Vec3{1, 0, 0}, -1),
    };
    Domain dom;
    dom.pieces = {BoundaryPiece::segment(0.75, cplx(0.75, 0.75)),
                  BoundaryPiece::segment(cplx(0.75, 0.75), cplx(0, 0.75))};
    dom.center = 0.0;
    dom.center_is_end = false;
    dom.copies = 4;
    d.domain = dom;
    d.finalize();
    return d;
}

WeierstrassData noid(int n) {
    if (n < 3) throw UnknownSurface("noid needs n >= 3");
    WeierstrassData d;
    d.name = n == 3 ? "trinoid" : "noid(" + std::to_string(n) + ")";
    d.params["n"] = n;
    d.G = RationalMap::poly(Poly::monomial(n - 1));
    Poly zn1 = Poly::monomial(n) - Poly::constant(1);
    d.q = RationalMap(Poly::monomial(n - 2, double(n * n)), zn1 * zn1);
    for (int k = 0; k < n; ++k) d.punctures.push_back(ExtComplex(std::exp(2 * kPi * I_UNIT * double(k) / double(n))));
    d.ends = n;
    double a = kPi / n;
    double rho = std::min(0.5, std::sin(a));
    d.z0 = 1.0 - rho;
    cplx e = std::exp(-I_UNIT * a);
    Mat2C s2 = Mat2C::diag(std::exp(I_UNIT * a), std::exp(-I_UNIT * a));
    d.reflections = {
        make_reflection("mu11", 1, 1, Mat2C::identity(), Mat2C::identity(),
                        {0.2, d.z0.real() * 0.6, d.z0.real() + 0.4 * rho}, Vec3{0, 1, 0}),
        make_reflection("mu21", 2, 1, Mat2C::diag(std::exp(-I_UNIT * a), std::exp(I_UNIT * a)), s2,
                        {0.3 * e, 0.5 * e, 0.7 * e}, Vec3{-std::sin(a), std::cos(a), 0}),
        make_reflection("mu31", 3, 1, Mat2C{0, 1, 1, 0}, kSwap,
                        {std::exp(-0.4 * a * I_UNIT), std::exp(-0.6 * a * I_UNIT),
                         std::exp(-0.8 * a * I_UNIT)},
                        Vec3{0, 0, 1}),
    };
    d.loops["end"] = PolyPath::circle(1.0, rho, kPi, 64);
    Domain dom;
    dom.pieces = {BoundaryPiece::segment(0.0, e), BoundaryPiece::arc(0.0, e, 1.0)};
    dom.center = 1.0;
    dom.center_is_end = true;
    dom.copies = 4 * n;
    d.domain = dom;
    d.finalize();
    return d;
}

std::pair<int, int> solid_mn(Solid s) {
    switch (s) {
    case Solid::Tetrahedron: return {3, 3};
    case Solid::Octahedron: return {4, 3};
    case Solid::Cube: return {3, 4};
    case Solid::Icosahedron: return {5, 3};
    case Solid::Dodecahedron: return {3, 5};
    }
    return {0, 0};
}

Solid solid_from_name(const std::string& name) {
    static const std::map<std::string, Solid> m{
        {"tetrahedron", Solid::Tetrahedron}, {"octahedron", Solid::Octahedron},
        {"cube", Solid::Cube},               {"icosahedron", Solid::Icosahedron},
        {"dodecahedron", Solid::Dodecahedron}};
    auto it = m.find(name);
    if (it == m.end()) throw UnknownSurface("unknown solid: " + name);
    return it->second;
}

namespace {

using V3 = Eigen::Vector3d;

std::vector<V3> icosa_like(bool dodeca) {
    const double ph = (1 + std::sqrt(5.0)) / 2;
    std::vector<V3> v;
    auto cyc = [&](double a, double b, double c) {
        v.emplace_back(a, b, c);
        v.emplace_back(c, a, b);
        v.emplace_back(b, c, a);
    };
    if (dodeca) {
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) v.emplace_back(sx, sy, sz);
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) cyc(0, s1 * ph, s2 / ph);
    } else {
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) cyc(0, s1, s2 * ph);
    }
    return v;
}

std::vector<V3> solid_vertices(Solid s) {
    std::vector<V3> v;
    switch (s) {
    case Solid::Tetrahedron:
        v = {V3(1, 1, 1), V3(1, -1, -1), V3(-1, 1, -1), V3(-1, -1, 1)};
        break;
    case Solid::Octahedron:
        for (int i = 0; i < 3; ++i)
            for (int sg : {-1, 1}) {
                V3 e = V3::Zero();
                e[i] = sg;
                v.push_back(e);
            }
        break;
    case Solid::Cube:
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) v.emplace_back(sx, sy, sz);
        break;
    case Solid::Icosahedron: v = icosa_like(false); break;
    case Solid::Dodecahedron: v = icosa_like(true); break;
    }
    for (auto& x : v) x.normalize();
    return v;
}

// Face centers are the vertex directions of the dual solid.
V3 a_face_center(Solid s) {
    switch (s) {
    case Solid::Tetrahedron: return -solid_vertices(s)[0];
    case Solid::Octahedron: return solid_vertices(Solid::Cube)[0];
    case Solid::Cube: return solid_vertices(Solid::Octahedron)[0];
    case Solid::Icosahedron: return solid_vertices(Solid::Dodecahedron)[0];
    case Solid::Dodecahedron: return solid_vertices(Solid::Icosahedron)[0];
    }
    return V3::Zero();
}

std::string solid_name(Solid s) {
    switch (s) {
    case Solid::Tetrahedron: return "tetrahedron";
    case Solid::Octahedron: return "octahedron";
    case Solid::Cube: return "cube";
    case Solid::Icosahedron: return "icosahedron";
    case Solid::Dodecahedron: return "dodecahedron";
    }
    return {};
}

ExtComplex stereo3(const V3& x) {
    if (1.0 - x[2] < 1e-9) return ExtComplex::infinity();
    return stereo(Vec3{x[0], x[1], x[2]});
}

cplx circumcenter(cplx a, cplx b, cplx c) {
    cplx bb = b - a, cc = c - a;
    double d = 2 * (bb.real() * cc.imag() - bb.imag() * cc.real());
    double nb = std::norm(bb), nc = std::norm(cc);
    return a + cplx((cc.imag() * nb - bb.imag() * nc) / d, (bb.real() * nc - cc.real() * nb) / d);
}

Mat2C s_inverse(const Vec3& nu) {
    return {cplx(nu[1], nu[0]), cplx(0, -nu[2]), cplx(0, -nu[2]), cplx(nu[1], -nu[0])};
}

} // namespace

WeierstrassData platonic(Solid s) {
    auto [m, n] = solid_mn(s);
    auto verts = solid_vertices(s);
    V3 f = a_face_center(s).normalized();
    // the n vertices nearest f span the face; take one of them
    std::vector<V3> sorted = verts;
    std::sort(sorted.begin(), sorted.end(), [&](const V3& a, const V3& b) { return a.dot(f) > b.dot(f); });
    V3 v1 = sorted[0];
    V3 e3 = -f;
    V3 e1 = (v1 - v1.dot(e3) * e3).normalized();
    V3 e2 = e3.cross(e1);
    Eigen::Matrix3d R;
    R.row(0) = e1;
    R.row(1) = e2;
    R.row(2) = e3;

    WeierstrassData d;
    d.name = solid_name(s);
    d.params["m"] = m;
    d.params["n"] = n;
    const int V = static_cast<int>(verts.size());
    std::vector<cplx> finite;
    for (const auto& x : verts) {
        auto z = stereo3(R * x);
        d.punctures.push_back(z);
        if (z.finite()) finite.push_back(z.z);
    }
    d.ends = V;
    V3 vh = R * v1;
    cplx v = stereo3(vh).z.real();

    Poly phi = real_cleanup(Poly::from_roots(finite));
    Poly p1 = phi.deriv(), p2 = p1.deriv();
    Poly z = Poly::monomial(1);
    Poly Phi_zw = double(V - 1) * p1 - z * p2;
    Poly Phi_w = double(V) * phi - z * p1;
    Poly Phi_ww = double(V - 1) * Phi_w - z * Phi_zw;
    Poly H = p2 * Phi_ww - Phi_zw * Phi_zw;
    cplx kappa = p1(v) * p1(v) / H(v);
    d.G = RationalMap(real_cleanup(z * p1 - double(V) * phi), p1);
    d.q = RationalMap(real_cleanup(kappa * H), phi * phi);

    double a = kPi / n;
    V3 v2h = Eigen::AngleAxisd(2 * a, V3::UnitZ()) * vh;
    V3 mid = (vh + v2h).normalized();
    V3 nu3 = vh.cross(mid).normalized();
    cplx pm = stereo3(mid).z;
    Vec3 n2{-std::sin(a), std::cos(a), 0}, n3{nu3[0], nu3[1], nu3[2]};
    std::vector<cplx> arc_probes;
    for (double t : {0.35, 0.7, 1.0}) arc_probes.push_back(stereo3(((1 - t) * vh + t * mid).normalized()).z);
    d.z0 = 0.5 * v;
    d.reflections = {
        make_reflection("mu11", 1, 1, Mat2C::identity(), Mat2C::identity(),
                        {0.15 * v, 0.3 * v, 0.7 * v}, Vec3{0, 1, 0}),
        make_reflection("mu21", 2, 1, s_inverse(n2).conj(), sigma_from_normal(n2),
                        {0.3 * pm, 0.6 * pm, 0.9 * pm}, n2),
        make_reflection("mu31", 3, 1, s_inverse(n3).conj(), sigma_from_normal(n3), arc_probes, n3),
    };
    d.loops["end"] = PolyPath::circle(v, 0.5 * std::abs(v), kPi, 64);

    cplx third = v * std::exp(2.0 * I_UNIT * a);
    Domain dom;
    dom.pieces = {BoundaryPiece::segment(0.0, pm), BoundaryPiece::arc(circumcenter(v, pm, third), pm, v)};
    dom.center = v;
    dom.center_is_end = true;
    dom.copies = 2 * (s == Solid::Tetrahedron ? 12 : (s == Solid::Octahedron || s == Solid::Cube) ? 24 : 60);
    d.domain = dom;
    d.finalize();
    return d;
}

WeierstrassData synthetic(double phi) {
    WeierstrassData d;
    d.name = "synthetic";
    d.params["phi"] = phi;
    d.G = RationalMap::poly(Poly::monomial(3));
    Poly P({1.0, 0.0, -2 * std::cos(2 * phi), 0.0, 1.0});
    d.q = RationalMap(Poly::monomial(2), P * P);
    cplx e = std::exp(I_UNIT * phi);
    d.punctures = {ExtComplex(e), ExtComplex(-e), ExtComplex(std::conj(e)), ExtComplex(-std::conj(e))};
    d.ends = 4;
    d.z0 = 0.5;
    double mid2 = 0.5 * (phi + kPi / 2);
    d.reflections = {
        make_reflection("mu11", 1, 1, Mat2C::identity(), Mat2C::identity(), {0.2, 0.35, 0.7},
                        Vec3{0, 1, 0}),
        make_reflection("mu21", 2, 1, Mat2C::diag(I_UNIT, -I_UNIT), Mat2C::diag(I_UNIT, -I_UNIT),
                        {0.3 * I_UNIT, 0.5 * I_UNIT, 0.7 * I_UNIT}, Vec3{1, 0, 0}, -1),
        make_reflection("mu31", 3, 1, Mat2C{0, 1, 1, 0}, kSwap,
                        {std::exp(I_UNIT * phi * 0.3), std::exp(I_UNIT * phi * 0.5), std::exp(I_UNIT * phi * 0.7)},
                        Vec3{0, 0, 1}),
        make_reflection("mu32", 3, 2, Mat2C{0, 1, 1, 0}, kSwap,
                        {std::exp(I_UNIT * (mid2 - 0.1)), std::exp(I_UNIT * mid2), std::exp(I_UNIT * (mid2 + 0.1))},
                        Vec3{0, 0, 1}),
    };
    double r = 0.5 * std::min({std::sin(phi), std::cos(phi), 0.6});
    d.loops["l32"] = PolyPath::circle(e, r, 0.0, 64);
    d.finalize();
    return d;
}

std::vector<std::string> catalog_names() {
    return {"catenoid",   "enneper",     "trinoid",     "noid(n)",      "tetrahedron",
            "octahedron", "cube",        "icosahedron", "dodecahedron", "synthetic(phi)"};
}

WeierstrassData catalog(const std::string& name) {
    std::smatch mt;
    if (name == "catenoid") return catenoid();
    if (name == "enneper") return enneper();
    if (name == "trinoid") return noid(3);
    if (std::regex_match(name, mt, std::regex(R"(noid\((\d+)\))"))) return noid(std::stoi(mt[1]));
    if (std::regex_match(name, mt, std::regex(R"(platonic\((\w+)\))"))) return platonic(solid_from_name(mt[1]));
    if (std::regex_match(name, mt, std::regex(R"(synthetic\(([-+0-9.eE]+)\))")))
        return synthetic(std::stod(mt[1]));
    if (name == "synthetic") return synthetic(kPi / 4);
    try {
        return platonic(solid_from_name(name));
    } catch (const UnknownSurface&) {
        throw UnknownSurface("unknown surface: " + name);
    }
}

// ---- JSON ----

using nlohmann::json;

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }
cplx json_cplx(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json mat_json(const Mat2C& a) {
    return json::array({json::array({cplx_json(a.a11), cplx_json(a.a12)}),
                        json::array({cplx_json(a.a21), cplx_json(a.a22)})});
}

Mat2C json_mat(const json& j) {
    return {json_cplx(j.at(0).at(0)), json_cplx(j.at(0).at(1)), json_cplx(j.at(1).at(0)),
            json_cplx(j.at(1).at(1))};
}

namespace {

json ext_json(const ExtComplex& z) { return z.inf ? json("inf") : cplx_json(z.z); }
ExtComplex json_ext(const json& j) {
    return j.is_string() ? ExtComplex::infinity() : ExtComplex(json_cplx(j));
}

json poly_json(const Poly& p) {
    json a = json::array();
    for (auto c : p.coeffs()) a.push_back(cplx_json(c));
    return a;
}

Poly json_poly(const json& j) {
    std::vector<cplx> c;
    for (const auto& x : j) c.push_back(json_cplx(x));
    return Poly(c);
}

json map_json(const RationalMap& m) {
    if (!m.is_rational()) return json{{"tag", m.tag()}};
    return json{{"num", poly_json(m.num().poly())}, {"den", poly_json(m.den().poly())}};
}

RationalMap json_map(const json& j) {
    if (j.contains("tag")) {
        if (j["tag"] == "tanh") return RationalMap::tanh_map();
        throw std::invalid_argument("unknown analytic map tag");
    }
    return RationalMap(json_poly(j.at("num")), json_poly(j.at("den")));
}

json piece_json(const BoundaryPiece& p) {
    json j{{"a", cplx_json(p.a)}, {"b", cplx_json(p.b)}};
    j["kind"] = p.kind == BoundaryPiece::Kind::Arc ? "arc" : "segment";
    if (p.kind == BoundaryPiece::Kind::Arc) j["center"] = cplx_json(p.center);
    return j;
}

BoundaryPiece json_piece(const json& j) {
    if (j.at("kind") == "arc") return BoundaryPiece::arc(json_cplx(j.at("center")), json_cplx(j.at("a")), json_cplx(j.at("b")));
    return BoundaryPiece::segment(json_cplx(j.at("a")), json_cplx(j.at("b")));
}

} // namespace

json to_json(const WeierstrassData& d) {
    json j;
    j["name"] = d.name;
    j["G"] = map_json(d.G);
    j["q"] = map_json(d.q);
    j["punctures"] = json::array();
    for (const auto& p : d.punctures) j["punctures"].push_back(ext_json(p));
    j["reflections"] = json::array();
    for (const auto& r : d.reflections) {
        json jr{{"name", r.name}, {"label", {r.j, r.k}}, {"mobius", mat_json(r.mob)},
                {"sigma", mat_json(r.sigma)}, {"sigma_sign", r.sigma_sign}};
        if (r.normal) jr["normal"] = *r.normal;
        jr["probes"] = json::array();
        for (auto z : r.probes) jr["probes"].push_back(cplx_json(z));
        j["reflections"].push_back(jr);
    }
    j["loops"] = json::object();
    for (const auto& [k, l] : d.loops) {
        json pts = json::array();
        for (auto z : l.pts) pts.push_back(cplx_json(z));
        j["loops"][k] = {{"points", pts}, {"closed", l.closed}};
    }
    j["basepoint"] = cplx_json(d.z0);
    j["ends"] = d.ends;
    j["params"] = d.params;
    if (d.domain) {
        json dj{{"center", cplx_json(d.domain->center)}, {"center_is_end", d.domain->center_is_end},
                {"copies", d.domain->copies}, {"end_radius", d.domain->end_radius}};
        dj["pieces"] = json::array();
        for (const auto& p : d.domain->pieces) dj["pieces"].push_back(piece_json(p));
        j["domain"] = dj;
    }
    return j;
}

WeierstrassData from_json(const json& j) {
    WeierstrassData d;
    d.name = j.value("name", std::string("custom"));
    d.G = json_map(j.at("G"));
    d.q = json_map(j.at("q"));
    for (const auto& p : j.value("punctures", json::array())) d.punctures.push_back(json_ext(p));
    for (const auto& jr : j.value("reflections", json::array())) {
        Reflection r;
        r.name = jr.value("name", std::string());
        if (jr.contains("label")) {
            r.j = jr["label"].at(0);
            r.k = jr["label"].at(1);
        }
        r.mob = json_mat(jr.at("mobius"));
        r.sigma = json_mat(jr.at("sigma"));
        r.sigma_sign = jr.value("sigma_sign", 1);
        if (jr.contains("normal")) r.normal = jr["normal"].get<Vec3>();
        for (const auto& z : jr.value("probes", json::array())) r.probes.push_back(json_cplx(z));
        d.reflections.push_back(r);
    }
    const json loops = j.value("loops", json::object());
    for (const auto& [k, l] : loops.items()) {
        PolyPath p;
        for (const auto& z : l.at("points")) p.pts.push_back(json_cplx(z));
        p.closed = l.value("closed", false);
        d.loops[k] = p;
    }
    d.z0 = json_cplx(j.at("basepoint"));
    d.ends = j.value("ends", 0);
    if (j.contains("params")) d.params = j["params"].get<std::map<std::string, double>>();
    if (j.contains("domain")) {
        const auto& dj = j["domain"];
        Domain dom;
        dom.center = json_cplx(dj.at("center"));
        dom.center_is_end = dj.value("center_is_end", true);
        dom.copies = dj.value("copies", 1);
        dom.end_radius = dj.value("end_radius", 1e-3);
        for (const auto& p : dj.at("pieces")) dom.pieces.push_back(json_piece(p));
        d.domain = dom;
    }
    d.finalize();
    return d;
}

} // namespace cmcforge
