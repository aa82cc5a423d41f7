#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"

#include "cmcforge/catalog.hpp"
#include "cmcforge/nullcurve.hpp"

using namespace cmcforge;

TEST_CASE("integrate at c = 0 is constant") {
    WeierstrassData cat = catenoid();
    Mat2C F0{2.0, 1.0, 1.0, 1.0};
    NullCurveSolution s = integrate(cat, 0.0, PolyPath({1.0, cplx(2, 1), cplx(0.5, 2)}), F0);
    for (auto& smp : s.samples) CHECK((smp.F - F0).norm() == 0.0);
}

TEST_CASE("catenoid radial path") {
    WeierstrassData cat = catenoid();
    NullCurveSolution s = integrate(cat, 0.1, PolyPath({1.0, 2.0}));
    CHECK((s.start() - Mat2C::identity()).norm() == 0.0);
    double det_err = 0, alpha_err = 0;
    for (auto& smp : s.samples) {
        det_err = std::max(det_err, std::abs(smp.F.det() - 1.0));
        Mat2C a = cat.alpha(smp.z);
        alpha_err = std::max({alpha_err, std::abs(a.det()), std::abs(a.trace())});
    }
    CHECK(det_err < 1e-9);
    CHECK(alpha_err < 1e-12);

    Mat2C back = propagate(cat, 0.1, 2.0, 1.0, s.end());
    CHECK((back - Mat2C::identity()).norm() < 1e-8);
}

TEST_CASE("monodromy trace law") {
    WeierstrassData cat = catenoid();
    MonodromyRecord r = monodromy(cat, 3.0 / 16.0, "end");
    CHECK(std::abs(r.rho.trace()) < 1e-6);
    CHECK(std::abs(r.rho.det() - 1.0) < 1e-8);
    CHECK((monodromy(cat, 0.0, "end").rho - Mat2C::identity()).norm() == 0.0);

    MonodromyRecord m = monodromy(cat, 0.1, "end");
    double expect = 2 * std::abs(std::cos(kPi * std::sqrt(0.6)));
    CHECK(std::abs(std::abs(m.rho.trace()) - expect) < 1e-6);
    Mat2C rk = integrate_rk4(cat, 0.1, based_loop(cat, cat.loops.at("end")), 400);
    CHECK((rk - m.rho).norm() < 1e-6);
}

TEST_CASE("monodromy c derivative") {
    WeierstrassData cat = catenoid();
    Mat2C d = monodromy_c_derivative(cat, "end");
    CHECK((d - 2.0 * kPi * I_UNIT * Mat2C::diag(1.0, -1.0)).norm() < 1e-9);
    CHECK(monodromy_c_derivative(cat, PolyPath::circle(2.0, 0.5, 0.0, 32)).norm() < 1e-10);

    // (rho_c - I) - c d = O(c^2)
    double e1 = (monodromy(cat, 1e-2, "end").rho - Mat2C::identity() - 1e-2 * d).norm();
    double e2 = (monodromy(cat, 5e-3, "end").rho - Mat2C::identity() - 5e-3 * d).norm();
    CHECK(std::log2(e1 / e2) > 1.9);
}

TEST_CASE("reflection matrices") {
    WeierstrassData cat = catenoid();
    const double c = 0.1;
    ReflectionEstimate e11 = reflection_rep(cat, c, cat.reflection(1, 1));
    CHECK((e11.rho_hat - Mat2C::identity()).norm() < 1e-8);
    for (const Reflection& r : cat.reflections) {
        ReflectionEstimate e = reflection_rep(cat, c, r);
        CHECK(e.spread < 1e-8);
        CHECK(e.involution < 1e-8);
        ReflectionEstimate small = reflection_rep(cat, 1e-6, r);
        CHECK((small.rho_hat - r.sigma).norm() < 1e-4);
    }

    // gauge covariance: rho_hat -> a^{-1} rho_hat conj(a)
    Mat2C a{1.0, cplx(0.3, 0.2), cplx(-0.1, 0.4), 0.0};
    a.a22 = (1.0 + a.a12 * a.a21) / a.a11;
    const Reflection& r3 = cat.reflection(3, 1);
    Mat2C base = reflection_rep(cat, c, r3).rho_hat;
    Mat2C moved = reflection_rep(cat, c, r3, a).rho_hat;
    CHECK((moved - a.inverse() * base * a.conj()).norm() < 1e-8);
}

TEST_CASE("gauss maps and duality") {
    WeierstrassData cat = catenoid();
    const double c = 0.1;
    NullCurveSolution s = integrate(cat, c, PolyPath({1.0, cplx(1, 1), 2.0}));
    for (cplx z : {cplx(1.0), cplx(1, 1), cplx(2.0)}) {
        CAPTURE(z);
        ExtComplex G = hyperbolic_gauss(s, z);
        CHECK(close(G, z, 1e-6));
        cplx dS = secondary_schwarzian(s, z) - schwarzian(cat.G, z);
        cplx expect = 2 * c / (z * z);
        CHECK(std::abs(dS - expect) < 1e-5 * std::abs(expect));
    }
    NullCurveSolution dual = dualize(s);
    NullCurveSolution twice = dualize(dual);
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        CHECK((twice.samples[i].F - s.samples[i].F).norm() < 1e-12);
    for (cplx z : {cplx(1, 1), cplx(2.0)})
        CHECK(close(hyperbolic_gauss(dual, z), secondary_gauss(s, z), 1e-6));

    NullCurveSolution z0 = integrate(cat, 0.0, PolyPath({1.0, 2.0}), Mat2C::diag(2.0, 0.5));
    CHECK((dualize(z0).end() - Mat2C::diag(0.5, 2.0)).norm() < 1e-15);
}

TEST_CASE("deform_in_D") {
    WeierstrassData cat = catenoid();
    const double c = 0.1;
    NullCurveSolution s = integrate(cat, c, PolyPath({1.0, cplx(1.5, 0.5), 2.0}));
    NullCurveSolution same = deform_in_D(s, Mat2C::identity());
    CHECK((same.end() - s.end()).norm() == 0.0);

    Mat2C b{cplx(0.6, 0.0), cplx(0.0, -0.8), cplx(0.0, -0.8), cplx(0.6, 0.0)};
    REQUIRE(is_su2(b));
    NullCurveSolution rot = deform_in_D(s, b);
    double worst = 0, far = 0;
    NullCurveSolution str = deform_in_D(s, Mat2C::diag(2.0, 0.5));
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        HermitianPoint p = HermitianPoint::from_lift(s.samples[i].F, c);
        HermitianPoint q = HermitianPoint::from_lift(rot.samples[i].F, c);
        worst = std::max(worst, (p.X - q.X).norm() / p.X.norm());
        far = std::max(far, hyperbolic_distance(p, HermitianPoint::from_lift(str.samples[i].F, c)));
    }
    CHECK(worst < 1e-9);
    CHECK(far > 0.1);
    for (cplx z : {cplx(1.5, 0.5), cplx(2.0)}) CHECK(close(hyperbolic_gauss(str, z), z, 1e-6));
}

TEST_CASE("singular path is rejected") {
    WeierstrassData cat = catenoid();
    CHECK_THROWS(integrate(cat, 0.1, PolyPath({1.0, -1.0})));
}
