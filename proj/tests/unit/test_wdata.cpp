#include <cmath>
#include <random>

#include "doctest.h"

#include "cmcforge/catalog.hpp"
#include "cmcforge/wdata.hpp"

using namespace cmcforge;

namespace {

RationalMap rmap(std::vector<cplx> num, std::vector<cplx> den) {
    return RationalMap(Poly(std::move(num)), Poly(std::move(den)));
}

double vnorm(const Vec3& v) { return std::hypot(v[0], v[1], v[2]); }

} // namespace

TEST_CASE("poly basics") {
    Poly p = Poly::from_roots({1.0, -2.0, I_UNIT});
    CHECK(p.degree() == 3);
    CHECK(std::abs(p(I_UNIT)) < 1e-14);
    auto roots = Poly::from_roots({0.5, 0.5, 2.0}).roots();
    int total = 0;
    for (auto& r : roots) total += r.mult;
    CHECK(total == 3);
    CHECK(root_multiplicity(Poly::from_roots({0.5, 0.5, 2.0}), 0.5) == 2);
    CHECK(std::abs(p.deriv()(0.3) - (p(0.3 + 1e-6) - p(0.3 - 1e-6)) / 2e-6) < 1e-6);
}

TEST_CASE("schwarzian") {
    RationalMap id = RationalMap::poly(Poly::monomial(1));
    CHECK(std::abs(schwarzian(id, cplx(0.4, 0.1))) < 1e-14);
    RationalMap mob = rmap({1.0, 2.0}, {3.0, I_UNIT});
    CHECK(std::abs(schwarzian(mob, cplx(0.2, 0.7))) < 1e-12);
    RationalMap sq = RationalMap::poly(Poly::monomial(2));
    CHECK(std::abs(schwarzian(sq, 1.0) - (-1.5)) < 1e-13);

    // cocycle: S(m o g) = S(g)
    RationalMap g = rmap({0.0, 1.0, 0.0, 1.0}, {2.0, 0.0, 1.0});
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        cplx z(u(rng), u(rng));
        // m(w) = (2w + 1)/(w + 3)
        Series s = g.taylor(z, 4);
        Series ms(4);
        cplx w0 = s[0];
        // compose through the Taylor series of m at w0
        cplx d1 = 5.0 / ((w0 + 3.0) * (w0 + 3.0));
        cplx d2 = -10.0 / std::pow(w0 + 3.0, 3);
        cplx d3 = 30.0 / std::pow(w0 + 3.0, 4);
        ms[0] = (2.0 * w0 + 1.0) / (w0 + 3.0);
        ms[1] = d1 * s[1];
        ms[2] = d1 * s[2] + 0.5 * d2 * s[1] * s[1];
        ms[3] = d1 * s[3] + d2 * s[1] * s[2] + d3 / 6.0 * s[1] * s[1] * s[1];
        worst = std::max(worst, std::abs(schwarzian_from_series(ms) - schwarzian(g, z)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("check_regular") {
    CHECK(check_regular(catenoid()).pass);
    CHECK(check_regular(noid(3)).pass);
    CHECK(check_regular(enneper()).pass);
    CHECK(check_regular(enneper()).mode == "sampled");

    WeierstrassData bad;
    bad.name = "branch";
    bad.G = RationalMap::poly(Poly::monomial(2));
    bad.q = RationalMap::poly(Poly::constant(1));
    bad.z0 = 1.0;
    bad.finalize();
    RegularReport r = check_regular(bad);
    CHECK_FALSE(r.pass);
    REQUIRE_FALSE(r.violations.empty());
    bool at_zero = false;
    for (auto& v : r.violations) at_zero |= v.p.finite() && std::abs(v.p.z) < 1e-9;
    CHECK(at_zero);
}

TEST_CASE("metrics") {
    WeierstrassData cat = catenoid();
    CHECK(metric_dsG(cat, 1.0) == doctest::Approx(4.0));
    CHECK(metric_dsigma(0.0, 1.0) == doctest::Approx(4.0));

    // ds^2 d sigma^2 = 4|q|^2 for (g, omega = q/g')
    cplx z(0.7, 0.4), g = cat.G.value(z), gp = cat.G.deriv().value(z), q = cat.q.value(z);
    double ds2 = std::pow(1 + std::norm(g), 2) * std::norm(q / gp);
    CHECK(ds2 * metric_dsigma(g, gp) == doctest::Approx(4 * std::norm(q)).epsilon(1e-9));
}

TEST_CASE("sigma_from_normal") {
    CHECK((sigma_from_normal({0, 1, 0}) - Mat2C::identity()).norm() < 1e-15);
    CHECK((sigma_from_normal({0, 0, 1}).inverse() - Mat2C{0, -I_UNIT, -I_UNIT, 0}).norm() < 1e-15);
    CHECK((sigma_from_normal({1, 0, 0}).inverse() - Mat2C::diag(I_UNIT, -I_UNIT)).norm() < 1e-15);
    CHECK(std::abs(delta(sigma_from_normal({0, 0, 1}).inverse())) < 1e-15);
    for (Vec3 n : {Vec3{1, 0, 0}, Vec3{0, 0.6, 0.8}, Vec3{0.48, 0.6, 0.64}}) {
        Mat2C s = sigma_from_normal(n);
        CHECK(is_su2(s));
        CHECK((s * s.conj() - Mat2C::identity()).norm() < 1e-12);
    }
}

TEST_CASE("euclid_period") {
    WeierstrassData cat = catenoid();
    PolyPath loop = PolyPath::circle(0.0, 1.0, 0.0, 64);
    Period p = euclid_period(cat, loop);
    CHECK(vnorm(p.re) < 1e-9);
    CHECK(std::abs(p.im[0]) < 1e-9);
    CHECK(std::abs(p.im[1]) < 1e-9);
    CHECK(std::abs(p.im[2] - 4 * kPi) < 1e-8);

    Period two = euclid_period(cat, PolyPath::circle(0.0, 1.0, 0.0, 64, 2.0));
    CHECK(std::abs(two.im[2] - 8 * kPi) < 1e-8);

    Period none = euclid_period(cat, PolyPath::circle(2.0, 0.5, 0.0, 32));
    CHECK(vnorm(none.re) + vnorm(none.im) < 1e-9);

    // homotopy invariance under a perturbed polygon
    PolyPath wobbly = PolyPath::circle(0.05, 1.1, 0.3, 17);
    Period w = euclid_period(cat, wobbly);
    CHECK(std::abs(w.im[2] - 4 * kPi) < 1e-9);
}

TEST_CASE("n-oid ends have no real period") {
    for (int n : {3, 4, 5}) {
        WeierstrassData d = noid(n);
        Period p = euclid_period(d, d.loops.at("end"));
        CHECK(vnorm(p.re) < 1e-9);
        CHECK(vnorm(p.im) > 1.0);
    }
}

TEST_CASE("minimal_immerse") {
    WeierstrassData cat = catenoid();
    CHECK(vnorm(minimal_immerse(cat, PolyPath({1.0}))) < 1e-15);
    Vec3 closed = minimal_immerse(cat, PolyPath::circle(0.0, 1.0, 0.0, 48));
    CHECK(vnorm(closed) < 1e-9);
    PolyPath path({1.0, cplx(1.5, 0.5), cplx(0.5, 1.5)});
    Vec3 f = minimal_immerse(cat, path), b = minimal_immerse(cat, path.reversed());
    for (int k = 0; k < 3; ++k) CHECK(f[k] == doctest::Approx(-b[k]));
}

TEST_CASE("su2_equivalent") {
    WPair d1{RationalMap::poly(Poly::monomial(1)), rmap({1.0}, {0.0, 0.0, 1.0})};
    auto same = su2_equivalent(d1, d1);
    REQUIRE(same.has_value());
    CHECK(dist_pm(*same, Mat2C::identity()) < 1e-8);

    cplx p = cplx(0.6, 0.0) * std::exp(0.4 * I_UNIT), q = cplx(0.8, 0.0) * std::exp(-1.1 * I_UNIT);
    Mat2C b{p, -std::conj(q), q, std::conj(p)};
    Poly den({std::conj(p), q});
    WPair d2{rmap({-std::conj(q), p}, {std::conj(p), q}),
             RationalMap(den * den, Poly::monomial(2))};
    auto rec = su2_equivalent(d1, d2);
    REQUIRE(rec.has_value());
    CHECK(dist_pm(*rec, b) < 1e-8);

    WPair d3{RationalMap::poly(Poly::monomial(1, 4.0)), rmap({0.25}, {0.0, 0.0, 1.0})};
    CHECK_FALSE(su2_equivalent(d1, d3).has_value());
}

TEST_CASE("catalog reflection invariants") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (std::string name : {"catenoid", "trinoid", "noid(4)", "tetrahedron", "cube", "dodecahedron"}) {
        CAPTURE(name);
        WeierstrassData d = catalog(name);
        for (const Reflection& r : d.reflections) {
            CAPTURE(r.name);
            CHECK((r.sigma * r.sigma.conj() - Mat2C::identity()).norm() < 1e-12);
            CHECK(is_su2(r.sigma));
            int tested = 0;
            for (int i = 0; i < 200 && tested < 50; ++i) {
                cplx z(u(rng), u(rng));
                try {
                    cplx mz = r.apply(z);
                    CHECK(std::abs(r.apply(mz) - z) < 1e-12 * std::max(1.0, std::abs(z)));
                    ExtComplex G = d.G(ExtComplex(mz)), lhs = G.inf ? G : ExtComplex(std::conj(G.z));
                    CHECK(chordal(lhs, mobius_apply(r.sigma.inverse(), d.G(ExtComplex(z)))) < 1e-9);
                    cplx qm = d.q.value(mz), dm = r.dmob(z);
                    cplx lhsq = std::conj(qm * dm * dm);
                    CHECK(std::abs(lhsq - d.q.value(z)) < 1e-9 * std::max(1.0, std::abs(lhsq)));
                    ++tested;
                } catch (const SingularPoint&) {
                }
            }
            CHECK(tested >= 40);
        }
    }
}

TEST_CASE("catalog json round trip") {
    WeierstrassData d = noid(3);
    WeierstrassData e = from_json(to_json(d));
    CHECK(e.name == d.name);
    CHECK(e.reflections.size() == d.reflections.size());
    for (cplx z : {cplx(0.2, 0.1), cplx(-0.4, 0.3)}) {
        CHECK(std::abs(e.G.value(z) - d.G.value(z)) < 1e-14);
        CHECK(std::abs(e.q.value(z) - d.q.value(z)) < 1e-12);
    }
    CHECK(to_json(e) == to_json(d));
    CHECK_THROWS_AS(catalog("torus"), UnknownSurface);
}
