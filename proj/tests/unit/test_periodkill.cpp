#include <cmath>

#include "doctest.h"

#include "cmcforge/catalog.hpp"
#include "cmcforge/periodkill.hpp"

using namespace cmcforge;

namespace {

Mat2C rho_of(cplx p, double g1, double g2) { return {p, I_UNIT * g1, I_UNIT * g2, std::conj(p)}; }

} // namespace

TEST_CASE("step1 base") {
    WeierstrassData cat = catenoid();
    NullCurveSolution s = step1_base(cat, 0.1);
    double im = 0;
    for (auto& smp : s.samples)
        if (std::abs(smp.z.imag()) < 1e-14) im = std::max(im, smp.F.max_imag());
    CHECK(im < 1e-8);
    NullCurveSolution zero = step1_base(cat, 0.0);
    CHECK((zero.end() - Mat2C::identity()).norm() == 0.0);

    WeierstrassData tri = noid(3);
    ReflectionEstimate e = reflection_rep(tri, 0.05, tri.reflection(1, 1));
    CHECK((e.rho_hat - Mat2C::identity()).norm() < 1e-8);
}

TEST_CASE("step2 diagonalize") {
    cplx e = std::exp(I_UNIT * kPi / 3.0);
    Step2Result d = step2_diagonalize(Mat2C::diag(e, std::conj(e)));
    CHECK(std::abs(d.xi - e) < 1e-14);
    CHECK((d.u - Mat2C::identity()).norm() < 1e-12);

    cplx p(0.3, 0.5);
    double g1 = 1.2, g2 = (1 - std::norm(p)) / g1;
    Mat2C r = rho_of(p, g1, g2);
    Step2Result s = step2_diagonalize(r);
    CHECK(s.u.max_imag() < 1e-10);
    CHECK(std::abs(s.u.det() - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(s.xi) - 1.0) < 1e-12);
    CHECK(s.xi.imag() > 0);
    CHECK((s.u.inverse() * r * s.u - Mat2C::diag(s.xi, std::conj(s.xi))).norm() < 1e-10);

    cplx pn = std::exp(I_UNIT * kPi / 5.0);
    CHECK(std::abs(step2_diagonalize(rho_of(pn, 0, 0)).xi - pn) < 1e-14);
    CHECK_THROWS_AS(step2_diagonalize(rho_of(cplx(0.3, -0.5), g1, g2)), OutsideValidity);
    CHECK_THROWS_AS(step2_diagonalize(rho_of(cplx(1.5, 0.1), 1.0, 1.0)), OutsideValidity);
}

TEST_CASE("step3 scale") {
    ReflectionRep rep;
    rep.rho_hat[{3, 1}] = rho_of(0.0, 4.0, 1.0);
    ReflectionRep s = step3_scale(rep);
    CHECK(s.beta == doctest::Approx(2.0));
    CHECK((s.gauge - Mat2C::diag(std::sqrt(2.0), 1 / std::sqrt(2.0))).norm() < 1e-14);
    RhoParams q = s.params({3, 1});
    CHECK(q.gamma1 == doctest::Approx(2.0));
    CHECK(q.gamma2 == doctest::Approx(2.0));

    rep.rho_hat[{3, 1}] = rho_of(0.0, 1.5, 1.5);
    CHECK((step3_scale(rep).gauge - Mat2C::identity()).norm() < 1e-15);
    rep.rho_hat[{3, 1}] = rho_of(0.0, 1.5, -1.5);
    CHECK_THROWS_AS(step3_scale(rep), NoNormalization);
}

TEST_CASE("normalized trinoid") {
    WeierstrassData tri = noid(3);
    ReflectionRep rep = normalize_rep(tri, 0.05);
    CHECK((rep.rho_hat.at({1, 1}) - Mat2C::identity()).norm() < 1e-7);
    Mat2C r2 = rep.rho_hat.at({2, 1});
    CHECK(std::abs(r2.a12) + std::abs(r2.a21) < 1e-7);
    CHECK(std::abs(std::abs(rep.xi) - 1) < 1e-7);
    RhoParams p3 = rep.params({3, 1});
    CHECK(std::abs(p3.gamma1 - p3.gamma2) < 1e-7);
    CHECK(su2_residual(rep, {}).empty());
    CHECK_FALSE(is_reducible(rep));
}

TEST_CASE("solve_lambda") {
    SolveReport rigid = solve_lambda(rigid_family("trinoid"), 0.05);
    CHECK(rigid.lambda.empty());
    CHECK(rigid.converged);

    FamilySpec fam = synthetic_family();
    CHECK(synthetic_period(synthetic_phi(0.01)) == doctest::Approx(0.01));
    SolveReport r = solve_lambda(fam, 0.02);
    REQUIRE(r.converged);
    CHECK(r.iterations <= 20);
    CHECK(std::abs(r.residual.at(0)) <= 1e-8);

    SolveOptions far;
    far.c_limit = 0.01;
    CHECK_THROWS(solve_lambda(fam, 0.02, far));
}

TEST_CASE("rho_from_word") {
    WeierstrassData cat = catenoid();
    const double c = 0.1;
    auto raw = raw_reflection_matrices(cat, c);
    CHECK(dist_pm(rho_from_word(raw, {{3, 1}, {3, 1}}), Mat2C::identity()) < 1e-8);
    CHECK_THROWS(rho_from_word(raw, {{3, 1}}));

    // the end loop of the catenoid is (mu11 mu21)^2 up to sign
    Mat2C word = rho_from_word(raw, {{1, 1}, {2, 1}, {1, 1}, {2, 1}});
    Mat2C direct = monodromy(cat, c, "end").rho;
    CHECK(std::min(dist_pm(word, direct), dist_pm(word, direct.inverse())) < 1e-6);

    auto raw0 = raw_reflection_matrices(cat, 0.0);
    CHECK(dist_pm(rho_from_word(raw0, {{1, 1}, {2, 1}, {1, 1}, {2, 1}}), Mat2C::identity()) < 1e-12);
}

TEST_CASE("commutant classification") {
    using K = CommutantClass::Kind;
    Mat2C I = Mat2C::identity();
    CHECK(classify_commutant({I, -1.0 * I}).kind == K::All);
    CommutantClass g = classify_commutant({Mat2C::diag(I_UNIT, -I_UNIT)});
    CHECK(g.kind == K::Geodesic);
    CHECK((g.axis - Mat2C::diag(I_UNIT, -I_UNIT) * (kPi / 2)).norm() < 1e-9);
    CHECK(classify_commutant({Mat2C::diag(I_UNIT, -I_UNIT), Mat2C{0, 1, -1, 0}}).kind == K::Point);
    CHECK_FALSE(is_reducible({Mat2C::diag(I_UNIT, -I_UNIT), Mat2C{0, 1, -1, 0}}));
    CHECK(is_reducible({I, -1.0 * I}));
    CHECK_THROWS(classify_commutant({Mat2C::diag(2.0, 0.5)}));

    WeierstrassData cat = catenoid();
    CHECK(is_reducible({monodromy(cat, 0.1, "end").rho}));
}

TEST_CASE("reducibility of the monodromy") {
    WeierstrassData cat = catenoid();
    CHECK(is_reducible(monodromy_generators(cat, 0.1, normalize_rep(cat, 0.1)), 1e-7));
    WeierstrassData tri = noid(3);
    auto gens = monodromy_generators(tri, 0.05, normalize_rep(tri, 0.05));
    CHECK_FALSE(is_reducible(gens, 1e-7));
    CHECK(classify_commutant(gens, 1e-7).kind == CommutantClass::Kind::Point);
}
