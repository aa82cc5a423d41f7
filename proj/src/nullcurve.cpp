#include "cmcforge/nullcurve.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "cmcforge/catalog.hpp"

namespace cmcforge {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695, E4 = B4 - 393.0 / 640,
                 E5 = B5 + 92097.0 / 339200, E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;

struct Segment {
    const WeierstrassData& d;
    double c;
    cplx a, dz;
    IntegrationStats& st;

    Mat2C rhs(double t, const Mat2C& F) const {
        ++st.evals;
        return (d.alpha(a + t * dz) * F) * (c * dz);
    }
};

void check_clearance(const WeierstrassData& d, cplx a, cplx b) {
    if (d.clearance(a, b) < kMinClearance)
        throw PathError("path passes within " + std::to_string(kMinClearance) + " of a singular point");
}

// Integrates one segment, appending accepted steps (excluding t = 0) to out.
Mat2C run_segment(const WeierstrassData& d, double c, cplx a, cplx b, Mat2C F, double tol,
                  IntegrationStats& st, std::vector<Sample>* out, double& h) {
    check_clearance(d, a, b);
    Segment seg{d, c, a, b - a, st};
    double t = 0;
    h = std::clamp(h, 1e-6, 1.0);
    Mat2C k1 = seg.rhs(0, F);
    while (t < 1.0) {
        if (t + h > 1.0) h = 1.0 - t;
        Mat2C k2 = seg.rhs(t + C2 * h, F + k1 * (h * A21));
        Mat2C k3 = seg.rhs(t + C3 * h, F + (k1 * A31 + k2 * A32) * h);
        Mat2C k4 = seg.rhs(t + C4 * h, F + (k1 * A41 + k2 * A42 + k3 * A43) * h);
        Mat2C k5 = seg.rhs(t + C5 * h, F + (k1 * A51 + k2 * A52 + k3 * A53 + k4 * A54) * h);
        Mat2C k6 = seg.rhs(t + h, F + (k1 * A61 + k2 * A62 + k3 * A63 + k4 * A64 + k5 * A65) * h);
        Mat2C Fn = F + (k1 * B1 + k3 * B3 + k4 * B4 + k5 * B5 + k6 * B6) * h;
        Mat2C k7 = seg.rhs(t + h, Fn);
        Mat2C dF = (k1 * E1 + k3 * E3 + k4 * E4 + k5 * E5 + k6 * E6 + k7 * E7) * h;
        double err = (dF * F.adj()).norm(); // right-multiplicative error
        if (err <= tol || h < 1e-13) {
            if (err > tol) throw PathError("step-size underflow near a singular point");
            t = (1.0 - t - h < 1e-15) ? 1.0 : t + h;
            F = Fn;
            k1 = k7;
            ++st.accepted;
            if (out) out->push_back({t == 1.0 ? b : a + t * (b - a), F});
        } else {
            ++st.rejected;
        }
        double fac = err == 0.0 ? 5.0 : 0.9 * std::pow(tol / err, 0.2);
        h *= std::clamp(fac, 0.2, 5.0);
    }
    return F;
}

} // namespace

Mat2C NullCurveSolution::at(cplx z) const {
    for (const auto& s : samples)
        if (std::abs(s.z - z) <= 1e-12 * std::max(1.0, std::abs(z))) return s.F;
    throw std::out_of_range("no sample at requested point");
}

NullCurveSolution integrate(std::shared_ptr<const WeierstrassData> d, double c, const PolyPath& path,
                            const Mat2C& F0, double tol) {
    path.validate();
    NullCurveSolution s;
    s.data = d;
    s.c = c;
    s.path = path;
    s.tol = tol;
    s.samples.push_back({path.pts.front(), F0});
    if (c == 0.0) {
        for (std::size_t i = 1; i < path.pts.size(); ++i) {
            check_clearance(*d, path.pts[i - 1], path.pts[i]);
            s.samples.push_back({path.pts[i], F0});
        }
        return s;
    }
    Mat2C F = F0;
    double h = 0.05;
    for (std::size_t i = 1; i < path.pts.size(); ++i)
        F = run_segment(*d, c, path.pts[i - 1], path.pts[i], F, tol, s.stats, &s.samples, h);
    return s;
}

NullCurveSolution integrate(const WeierstrassData& d, double c, const PolyPath& path, const Mat2C& F0,
                            double tol) {
    return integrate(std::make_shared<const WeierstrassData>(d), c, path, F0, tol);
}

Mat2C propagate(const WeierstrassData& d, double c, cplx a, cplx b, const Mat2C& F0, double tol,
                IntegrationStats* stats) {
    if (a == b) return F0;
    if (c == 0.0) {
        check_clearance(d, a, b);
        return F0;
    }
    IntegrationStats local;
    double h = 0.05;
    return run_segment(d, c, a, b, F0, tol, stats ? *stats : local, nullptr, h);
}

Mat2C integrate_rk4(const WeierstrassData& d, double c, const PolyPath& path, int n) {
    path.validate();
    Mat2C F;
    for (std::size_t i = 1; i < path.pts.size(); ++i) {
        cplx a = path.pts[i - 1], dz = path.pts[i] - a;
        check_clearance(d, a, path.pts[i]);
        auto f = [&](double t, const Mat2C& X) { return (d.alpha(a + t * dz) * X) * (c * dz); };
        double h = 1.0 / n;
        for (int k = 0; k < n; ++k) {
            double t = k * h;
            Mat2C k1 = f(t, F), k2 = f(t + h / 2, F + k1 * (h / 2)), k3 = f(t + h / 2, F + k2 * (h / 2)),
                  k4 = f(t + h, F + k3 * h);
            F = F + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6);
        }
    }
    return F;
}

// ---- monodromy ----

PolyPath based_loop(const WeierstrassData& d, const PolyPath& loop) {
    if (!loop.closed) throw PathError("loop is not closed");
    if (std::abs(loop.pts.front() - d.z0) < 1e-12) return loop;
    PolyPath lead({d.z0, loop.pts.front()});
    return lead.then(loop).then(lead.reversed());
}

MonodromyRecord monodromy(const WeierstrassData& d, double c, const PolyPath& loop, double tol) {
    PolyPath p = based_loop(d, loop);
    auto sh = std::make_shared<const WeierstrassData>(d);
    MonodromyRecord r;
    r.rho = integrate(sh, c, p, Mat2C::identity(), tol).end();
    Mat2C fine = integrate(sh, c, p, Mat2C::identity(), tol / 10).end();
    r.residual_constancy = (r.rho - fine).norm();
    return r;
}

MonodromyRecord monodromy(const WeierstrassData& d, double c, const std::string& loop, double tol) {
    auto it = d.loops.find(loop);
    if (it == d.loops.end()) throw std::out_of_range("unknown loop: " + loop);
    auto r = monodromy(d, c, it->second, tol);
    r.loop = loop;
    return r;
}

Mat2C monodromy_c_derivative(const WeierstrassData& d, const PolyPath& loop, double tol) {
    using boost::math::quadrature::gauss_kronrod;
    PolyPath p = based_loop(d, loop);
    p.validate();
    Mat2C acc = Mat2C::zero();
    for (std::size_t s = 1; s < p.pts.size(); ++s) {
        cplx a = p.pts[s - 1], dz = p.pts[s] - a;
        check_clearance(d, a, p.pts[s]);
        for (int e = 0; e < 3; ++e) {
            auto f = [&](double t) { return d.alpha(a + t * dz)(e / 2, e % 2) * dz; };
            double err = 0;
            acc(e / 2, e % 2) += gauss_kronrod<double, 15>::integrate(f, 0.0, 1.0, 20, tol, &err);
        }
    }
    acc.a22 = -acc.a11;
    return acc;
}

Mat2C monodromy_c_derivative(const WeierstrassData& d, const std::string& loop, double tol) {
    auto it = d.loops.find(loop);
    if (it == d.loops.end()) throw std::out_of_range("unknown loop: " + loop);
    return monodromy_c_derivative(d, it->second, tol);
}

// ---- reflections ----

Mat2C reflection_matrix(const Mat2C& Fz, const Mat2C& Fmz, const Reflection& r) {
    return Fz.inverse() * r.sigma * Fmz.conj();
}

Mat2C reflection_matrix(const WeierstrassData& d, double c, const Reflection& r, cplx z, double tol) {
    if (r.probes.empty()) throw std::invalid_argument("reflection without probes");
    cplx p = r.probes.front();
    Mat2C Fp = propagate(d, c, d.z0, p, Mat2C::identity(), tol);
    cplx mz = r.apply(z);
    Mat2C Fz = propagate(d, c, p, z, Fp, tol);
    Mat2C Fmz = propagate(d, c, p, mz, Fp, tol);
    return reflection_matrix(Fz, Fmz, r);
}

ReflectionEstimate reflection_rep(const WeierstrassData& d, double c, const Reflection& r,
                                  const Mat2C& F0, double tol) {
    if (r.probes.empty()) throw std::invalid_argument("reflection without probes");
    auto attempt = [&](double t) {
        ReflectionEstimate e;
        std::vector<Mat2C> vals;
        for (auto p : r.probes) {
            Mat2C Fp = propagate(d, c, d.z0, p, F0, t);
            vals.push_back(reflection_matrix(Fp, Fp, r));
        }
        e.rho_hat = vals.front();
        for (const auto& v : vals) e.spread = std::max(e.spread, (v - e.rho_hat).norm());
        e.involution = (e.rho_hat * e.rho_hat.conj() - Mat2C::identity()).norm();
        return e;
    };
    auto e = attempt(tol);
    if (e.spread > 1e-8) {
        e = attempt(tol / 10);
        e.retried = true;
        if (e.spread > 1e-6) throw AccuracyError("reflection matrix not constant across probes");
    }
    return e;
}

// ---- jets and Gauss maps ----

std::vector<Mat2C> lift_jet(const WeierstrassData& d, double c, Side side, const Mat2C& K,
                            const Mat2C& Fz, cplx z, std::size_t n) {
    auto as = d.alpha_series(z, n);
    Mat2C Ki = K.inverse();
    std::vector<Mat2C> A(n), F(n, Mat2C::zero());
    for (std::size_t i = 0; i < n; ++i) A[i] = K * Mat2C{as[0][i], as[1][i], as[2][i], as[3][i]} * Ki;
    F[0] = Fz;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        Mat2C s = Mat2C::zero();
        for (std::size_t i = 0; i <= k; ++i) s += side == Side::Left ? A[i] * F[k - i] : F[k - i] * A[i];
        F[k + 1] = s * ((side == Side::Left ? c : -c) / double(k + 1));
    }
    return F;
}

std::vector<Mat2C> lift_jet(const NullCurveSolution& s, cplx z, std::size_t n) {
    return lift_jet(*s.data, s.c, s.side, s.K, s.at(z), z, n);
}

Series secondary_gauss_series(const WeierstrassData& d, double c, Side side, const Mat2C& K,
                              const Mat2C& Fz, cplx z, std::size_t n) {
    auto F = lift_jet(d, c, side, K, Fz, z, n + 1);
    // theta = F^{-1} F', with F^{-1} = adj F since det F = 1
    Series t11(n, 0.0), t21(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i <= k; ++i) {
            Mat2C m = F[i].adj() * F[k - i + 1] * double(k - i + 1);
            t11[k] += m.a11;
            t21[k] += m.a21;
        }
    double scale = std::max(std::abs(t11[0]), std::abs(t21[0]));
    if (scale < 1e-300) throw AccuracyError("secondary Gauss map: degenerate derivative");
    // at a pole of g the series of 1/g is returned; Schwarzian and d sigma^2 agree
    if (std::abs(t21[0]) < 1e-12 * scale) return series_div(t21, t11, n);
    return series_div(t11, t21, n);
}

ExtComplex secondary_gauss(const NullCurveSolution& s, cplx z) {
    if (s.c == 0.0) throw AccuracyError("secondary Gauss map: c = 0");
    Mat2C F = s.at(z);
    Mat2C A = s.K * s.data->alpha(z) * s.K.inverse();
    // F^{-1}dF up to the factor c: adj(F) A F on the left side, -A on the right
    Mat2C th = s.side == Side::Left ? F.adj() * A * F : A;
    if (std::abs(th.a11) + std::abs(th.a21) == 0.0)
        throw AccuracyError("secondary Gauss map: degenerate derivative");
    if (th.a21 == 0.0) return ExtComplex::infinity();
    return ExtComplex(th.a11 / th.a21);
}

cplx secondary_schwarzian(const NullCurveSolution& s, cplx z) {
    return schwarzian_from_series(secondary_gauss_series(*s.data, s.c, s.side, s.K, s.at(z), z, 4));
}

ExtComplex hyperbolic_gauss(const NullCurveSolution& s, cplx z, double consistency) {
    Mat2C F = s.at(z);
    Mat2C A = s.K * s.data->alpha(z) * s.K.inverse();
    Mat2C dF = s.side == Side::Left ? A * F : F * A * (-1.0);
    if (s.c == 0.0) throw AccuracyError("hyperbolic Gauss map: c = 0");
    auto r1 = mobius_apply_projective(Mat2C{dF.a11, 0, dF.a21, 0}, ExtComplex(1.0));
    auto r2 = mobius_apply_projective(Mat2C{dF.a12, 0, dF.a22, 0}, ExtComplex(1.0));
    if (std::abs(dF.a11) + std::abs(dF.a21) < std::abs(dF.a12) + std::abs(dF.a22)) std::swap(r1, r2);
    if (chordal(r1, r2) > consistency) throw AccuracyError("hyperbolic Gauss map: inconsistent ratios");
    return r1;
}

NullCurveSolution dualize(const NullCurveSolution& s) {
    NullCurveSolution d = s;
    for (auto& x : d.samples) x.F = x.F.inverse();
    d.side = s.side == Side::Left ? Side::Right : Side::Left;
    return d;
}

NullCurveSolution deform_in_D(const NullCurveSolution& s, const Mat2C& a) {
    NullCurveSolution d = s;
    Mat2C ai = a.inverse();
    for (auto& x : d.samples) x.F = x.F * ai;
    if (s.side == Side::Right) d.K = a * s.K;
    return d;
}

nlohmann::json monodromy_json(const MonodromyRecord& r, double tol) {
    return {{"loop", r.loop},
            {"rho", mat_json(r.rho)},
            {"trace", cplx_json(r.rho.trace())},
            {"sign_flag", r.sign_flag},
            {"residual_constancy", r.residual_constancy},
            {"det_error", std::abs(r.rho.det() - 1.0)},
            {"tol", tol}};
}

} // namespace cmcforge
