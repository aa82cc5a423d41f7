#include "cmcforge/wdata.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

namespace cmcforge {

// ---- paths ----

void PolyPath::validate() const {
    if (pts.empty()) throw PathError("empty path");
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i] == pts[i - 1]) throw PathError("repeated waypoint");
    if (closed && std::abs(pts.front() - pts.back()) > 1e-12) throw PathError("closed path does not close");
}

PolyPath PolyPath::reversed() const {
    return PolyPath(std::vector<cplx>(pts.rbegin(), pts.rend()), closed);
}

PolyPath PolyPath::then(const PolyPath& o) const {
    if (pts.empty()) return o;
    if (o.pts.empty()) return *this;
    if (std::abs(pts.back() - o.pts.front()) > 1e-12) throw PathError("paths do not join");
    PolyPath r = *this;
    r.pts.insert(r.pts.end(), o.pts.begin() + 1, o.pts.end());
    r.closed = std::abs(r.pts.front() - r.pts.back()) <= 1e-12;
    if (r.closed) r.pts.back() = r.pts.front();
    return r;
}

PolyPath PolyPath::circle(cplx center, double r, double phase0, int n, double turns) {
    PolyPath p;
    for (int k = 0; k <= n; ++k)
        p.pts.push_back(center + r * std::exp(I_UNIT * (phase0 + 2 * kPi * turns * k / n)));
    if (std::abs(std::fmod(turns, 1.0)) < 1e-15) {
        p.pts.back() = p.pts.front();
        p.closed = true;
    }
    return p;
}

// ---- reflections ----

ExtComplex Reflection::apply(const ExtComplex& z) const {
    if (z.inf) return mobius_apply_projective(mob, z);
    return mobius_apply_projective(mob, ExtComplex(std::conj(z.z)));
}

cplx Reflection::apply(cplx z) const {
    auto w = apply(ExtComplex(z));
    if (w.inf) throw SingularPoint("reflection maps point to infinity");
    return w.z;
}

cplx Reflection::dmob(cplx z) const {
    cplx w = std::conj(z);
    cplx den = mob.a21 * w + mob.a22;
    return mob.det() / (den * den);
}

BoundaryPiece BoundaryPiece::segment(cplx a, cplx b) {
    BoundaryPiece p;
    p.kind = Kind::Segment;
    p.a = a;
    p.b = b;
    return p;
}

BoundaryPiece BoundaryPiece::arc(cplx center, cplx a, cplx b) {
    BoundaryPiece p;
    p.kind = Kind::Arc;
    p.center = center;
    p.a = a;
    p.b = b;
    p.sweep = std::arg((b - center) / (a - center));
    return p;
}

cplx BoundaryPiece::at(double t) const {
    if (kind == Kind::Segment) return a + t * (b - a);
    if (t == 1.0) return b;
    return center + (a - center) * std::exp(I_UNIT * (sweep * t));
}

cplx BoundaryPiece::tangent(double t) const {
    if (kind == Kind::Segment) return b - a;
    return I_UNIT * sweep * (a - center) * std::exp(I_UNIT * (sweep * t));
}

// ---- Weierstrass data ----

namespace {

int mult(const EntireFn& f, cplx p) {
    return f.is_polynomial() ? root_multiplicity(f.poly(), p) : 0;
}

std::vector<cplx> roots_of(const EntireFn& f) {
    std::vector<cplx> r;
    if (!f.is_polynomial()) return r;
    for (const auto& x : f.poly().roots()) r.push_back(x.z);
    return r;
}

} // namespace

void WeierstrassData::finalize() {
    const auto& N = G.num();
    const auto& D = G.den();
    W_ = N.deriv() * D - N * D.deriv();
    singular_.clear();
    for (const auto& p : punctures)
        if (p.finite()) singular_.push_back(p.z);
    if (G.is_rational() && q.is_rational() && W_.is_polynomial()) {
        std::vector<cplx> cand = roots_of(q.den());
        auto w = roots_of(W_);
        cand.insert(cand.end(), w.begin(), w.end());
        for (auto p : cand) {
            int oA = mult(q.num(), p), oB = mult(q.den(), p), oW = mult(W_, p);
            int oN = mult(N, p), oD = mult(D, p);
            int ord = oA + std::min({oN + oD, 2 * oN, 2 * oD}) - oB - oW;
            bool known = std::any_of(singular_.begin(), singular_.end(),
                                     [&](cplx s) { return std::abs(s - p) < 1e-8; });
            if (ord < 0 && !known) singular_.push_back(p);
        }
    }
}

Mat2C WeierstrassData::alpha(cplx z) const {
    cplx n = G.num()(z), d = G.den()(z), a = q.num()(z), b = q.den()(z), w = W_(z);
    cplx den = b * w;
    if (std::abs(den) < 1e-10) {
        // removable zero of den (branch point of G cancelled by q): mean over a small circle
        const double r = 5e-4;
        for (auto p : singular_)
            if (std::abs(p - z) < 2 * r) throw SingularPoint("alpha: singular point");
        Mat2C sum = Mat2C::zero();
        const int m = 16;
        for (int k = 0; k < m; ++k) sum += alpha(z + r * std::exp(I_UNIT * (2 * kPi * k / m)));
        return sum * (1.0 / m);
    }
    cplx s = a / den;
    cplx a11 = s * n * d;
    return {a11, -s * n * n, s * d * d, -a11};
}

std::array<Series, 4> WeierstrassData::alpha_series(cplx z, std::size_t n) const {
    auto N = G.num().taylor(z, n), D = G.den().taylor(z, n);
    auto A = q.num().taylor(z, n), B = q.den().taylor(z, n), Wt = W_.taylor(z, n);
    Series den = series_mul(B, Wt, n);
    Series s = series_div(A, den, n);
    Series a11 = series_mul(s, series_mul(N, D, n), n);
    Series a12 = series_scale(series_mul(s, series_mul(N, N, n), n), -1.0);
    Series a21 = series_mul(s, series_mul(D, D, n), n);
    return {a11, a12, a21, series_scale(a11, -1.0)};
}

cplx WeierstrassData::omega(cplx z) const { return alpha(z).a21; }

double WeierstrassData::clearance(cplx a, cplx b) const {
    double best = std::numeric_limits<double>::infinity();
    cplx ab = b - a;
    double L2 = std::norm(ab);
    for (auto s : singular_) {
        double t = L2 > 0 ? std::clamp(((s - a) * std::conj(ab)).real() / L2, 0.0, 1.0) : 0.0;
        best = std::min(best, std::abs(a + t * ab - s));
    }
    return best;
}

const Reflection& WeierstrassData::reflection(int j, int k) const {
    for (const auto& r : reflections)
        if (r.j == j && r.k == k) return r;
    throw std::out_of_range("no reflection (" + std::to_string(j) + "," + std::to_string(k) + ")");
}

bool WeierstrassData::has_reflection(int j, int k) const {
    return std::any_of(reflections.begin(), reflections.end(),
                       [&](const Reflection& r) { return r.j == j && r.k == k; });
}

// ---- regularity ----

namespace {

struct LocalOrders {
    int G, Q, DG;
};

LocalOrders orders_finite(const WeierstrassData& d, const EntireFn& W, cplx p) {
    const auto& N = d.G.num();
    const auto& D = d.G.den();
    LocalOrders o;
    o.G = mult(N, p) - mult(D, p);
    o.DG = mult(W, p) - 2 * mult(D, p);
    o.Q = mult(d.q.num(), p) - mult(d.q.den(), p);
    return o;
}

// Orders at infinity in the chart w = 1/z.
LocalOrders orders_infinity(const WeierstrassData& d) {
    const Poly& N = d.G.num().poly();
    const Poly& D = d.G.den().poly();
    int s = D.degree() - N.degree();
    Poly Nt = N.reversed(), Dt = D.reversed();
    if (s >= 0)
        Nt = Poly::monomial(s) * Nt;
    else
        Dt = Poly::monomial(-s) * Dt;
    Poly Wt = Nt.deriv() * Dt - Nt * Dt.deriv();
    LocalOrders o;
    o.G = s;
    o.DG = root_multiplicity(Wt, 0.0) - 2 * root_multiplicity(Dt, 0.0);
    o.Q = d.q.den().poly().degree() - d.q.num().poly().degree() - 4;
    return o;
}

bool is_puncture(const WeierstrassData& d, const ExtComplex& p) {
    return std::any_of(d.punctures.begin(), d.punctures.end(), [&](const ExtComplex& e) {
        if (e.inf || p.inf) return e.inf == p.inf;
        return std::abs(e.z - p.z) < 1e-6 * std::max(1.0, std::abs(p.z));
    });
}

} // namespace

RegularReport check_regular(const WeierstrassData& d) {
    RegularReport rep;
    if (!d.G.is_rational() || !d.q.is_rational()) {
        // analytic entries: sampled positivity of ds_G^2
        rep.mode = "sampled";
        double lo = std::numeric_limits<double>::infinity();
        for (int i = -10; i <= 10; ++i)
            for (int k = -10; k <= 10; ++k) {
                cplx z(0.2 * i + 0.013, 0.2 * k + 0.007);
                if (is_puncture(d, ExtComplex(z))) continue;
                lo = std::min(lo, metric_dsG(d, z));
            }
        rep.min_sampled_density = lo;
        rep.pass = lo > 0 && std::isfinite(lo);
        return rep;
    }
    rep.mode = "divisor";
    const EntireFn& W = d.dG_num();
    std::vector<cplx> cand;
    for (const EntireFn* f : {&d.G.num(), &d.G.den(), &d.q.num(), &d.q.den(), &W}) {
        auto r = roots_of(*f);
        cand.insert(cand.end(), r.begin(), r.end());
    }
    std::vector<cplx> seen;
    auto judge = [&](const ExtComplex& p, LocalOrders o) {
        int ord_omega = o.Q - o.DG;
        int expected = o.G < 0 ? -2 * o.G : 0;
        if (ord_omega != expected) rep.violations.push_back({p, o.G, o.Q, o.DG, expected});
    };
    for (auto p : cand) {
        if (is_puncture(d, ExtComplex(p))) continue;
        if (std::any_of(seen.begin(), seen.end(), [&](cplx s) { return std::abs(s - p) < 1e-6; }))
            continue;
        seen.push_back(p);
        judge(ExtComplex(p), orders_finite(d, W, p));
    }
    if (!is_puncture(d, ExtComplex::infinity())) judge(ExtComplex::infinity(), orders_infinity(d));
    rep.pass = rep.violations.empty();
    return rep;
}

double metric_dsG(const WeierstrassData& d, cplx z) {
    cplx n = d.G.num()(z), dd = d.G.den()(z), a = d.q.num()(z), b = d.q.den()(z), w = d.dG_num()(z);
    double den = std::norm(b * w);
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    double s = std::norm(dd) + std::norm(n);
    return s * s * std::norm(a) / den;
}

double metric_dsigma(cplx g, cplx gprime) {
    double s = 1.0 + std::norm(g);
    return 4.0 * std::norm(gprime) / (s * s);
}

Mat2C sigma_from_normal(const Vec3& nu) {
    double n2 = nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2];
    if (std::abs(n2 - 1.0) > 1e-12) throw std::invalid_argument("sigma_from_normal: non-unit normal");
    Mat2C sinv{cplx(nu[1], nu[0]), cplx(0, -nu[2]), cplx(0, -nu[2]), cplx(nu[1], -nu[0])};
    return sinv.adj();
}

// ---- Euclidean Weierstrass integrals ----

namespace {

std::array<cplx, 3> weierstrass_integral(const WeierstrassData& d, const PolyPath& path, double tol) {
    using boost::math::quadrature::gauss_kronrod;
    path.validate();
    std::array<cplx, 3> acc{0.0, 0.0, 0.0};
    for (std::size_t s = 0; s + 1 < path.pts.size(); ++s) {
        cplx a = path.pts[s], b = path.pts[s + 1];
        if (d.clearance(a, b) < 1e-9) throw PathError("path hits a singular point");
        cplx dz = b - a;
        for (int comp = 0; comp < 3; ++comp) {
            auto f = [&](double t) {
                Mat2C al = d.alpha(a + t * dz);
                cplx v = comp == 0 ? al.a21 + al.a12
                       : comp == 1 ? I_UNIT * (al.a21 - al.a12)
                                   : 2.0 * al.a11;
                return v * dz;
            };
            double err = 0;
            acc[comp] += gauss_kronrod<double, 15>::integrate(f, 0.0, 1.0, 20, tol, &err);
        }
    }
    return acc;
}

} // namespace

Period euclid_period(const WeierstrassData& d, const PolyPath& loop, double tol) {
    if (!loop.closed) throw PathError("euclid_period needs a closed loop");
    auto v = weierstrass_integral(d, loop, tol);
    Period p;
    for (int i = 0; i < 3; ++i) {
        p.re[i] = v[i].real();
        p.im[i] = v[i].imag();
    }
    return p;
}

Vec3 minimal_immerse(const WeierstrassData& d, const PolyPath& path, double tol) {
    if (path.pts.size() <= 1) return {0, 0, 0};
    auto v = weierstrass_integral(d, path, tol);
    return {v[0].real(), v[1].real(), v[2].real()};
}

// ---- SU(2) equivalence ----

std::optional<Mat2C> su2_equivalent(const WPair& d1, const WPair& d2) {
    std::vector<cplx> fit, check;
    for (int k = 0; fit.size() + check.size() < 14 && k < 200; ++k) {
        cplx z = (0.35 + 0.05 * k) * std::exp(I_UNIT * (0.7 + 1.9 * k));
        try {
            cplx g1 = d1.g.value(z), g2 = d2.g.value(z), w1 = d1.omega.value(z), w2 = d2.omega.value(z);
            if (std::abs(w1) < 1e-12 || !std::isfinite(std::abs(g1 * g2 * w2))) continue;
        } catch (const SingularPoint&) {
            continue;
        }
        (fit.size() < 6 ? fit : check).push_back(z);
    }
    if (fit.size() < 6 || check.size() < 8) return std::nullopt;

    Eigen::MatrixXcd A(fit.size(), 4);
    for (std::size_t i = 0; i < fit.size(); ++i) {
        cplx g = d1.g.value(fit[i]), gt = d2.g.value(fit[i]);
        A(i, 0) = g;
        A(i, 1) = -1.0;
        A(i, 2) = -g * gt;
        A(i, 3) = -gt;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    auto sv = svd.singularValues();
    if (sv(2) < 1e-9 * std::max(1.0, sv(0))) return std::nullopt; // underdetermined
    Eigen::VectorXcd x = svd.matrixV().col(3);
    // x = s (p, conj q, q, conj p); recover the scale s
    cplx phase2 = std::abs(x(0)) >= std::abs(x(2)) ? x(3) / std::conj(x(0)) : x(1) / std::conj(x(2));
    if (std::abs(std::abs(phase2) - 1.0) > 1e-6) return std::nullopt;
    double mod = std::sqrt(std::norm(x(0)) + std::norm(x(2)));
    cplx s = mod * std::sqrt(phase2);
    cplx p = x(0) / s, qq = x(2) / s;
    if (std::abs(x(3) / s - std::conj(p)) > 1e-8 || std::abs(x(1) / s - std::conj(qq)) > 1e-8)
        return std::nullopt;
    Mat2C b{p, -std::conj(qq), qq, std::conj(p)};
    for (auto z : check) {
        cplx g = d1.g.value(z), w = d1.omega.value(z);
        cplx den = qq * g + std::conj(p);
        cplx gt = (p * g - std::conj(qq)) / den;
        cplx wt = den * den * w;
        if (std::abs(gt - d2.g.value(z)) > 1e-8 * std::max(1.0, std::abs(gt))) return std::nullopt;
        if (std::abs(wt - d2.omega.value(z)) > 1e-8 * std::max(1.0, std::abs(wt))) return std::nullopt;
    }
    return b;
}

} // namespace cmcforge
