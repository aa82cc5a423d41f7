#include <cmath>
#include <random>

#include "doctest.h"

#include "cmcforge/algebra.hpp"

using namespace cmcforge;

namespace {

Mat2C random_su2(std::mt19937& rng) {
    std::normal_distribution<double> n;
    double a = n(rng), b = n(rng), c = n(rng), d = n(rng);
    double r = std::sqrt(a * a + b * b + c * c + d * d);
    cplx u(a / r, b / r), v(c / r, d / r);
    return {u, -std::conj(v), v, std::conj(u)};
}

} // namespace

TEST_CASE("predicates") {
    CHECK(is_sl2c(Mat2C::identity()));
    CHECK(is_su2(Mat2C::diag(I_UNIT, -I_UNIT)));
    CHECK_FALSE(is_su2(Mat2C::diag(2.0, 0.5)));
    CHECK(is_sl2r(Mat2C::diag(2.0, 0.5)));
    CHECK_FALSE(is_sl2r(Mat2C::diag(I_UNIT, -I_UNIT)));
    CHECK(is_hermitian_pos(Mat2C::diag(3.0, 1.0 / 3.0)));
    CHECK_FALSE(is_hermitian_pos(Mat2C::diag(-1.0, -1.0)));
}

TEST_CASE("mobius_apply") {
    CHECK(close(mobius_apply(Mat2C::identity(), cplx(0.3, 0.4)), cplx(0.3, 0.4), 1e-15));
    CHECK(mobius_apply(Mat2C{0, 1, -1, 0}, cplx(0)).inf);
    Mat2C r = Mat2C::diag(std::exp(I_UNIT * kPi / 3.0), std::exp(-I_UNIT * kPi / 3.0));
    CHECK(close(mobius_apply(r, cplx(1)), std::exp(2.0 * kPi / 3.0 * I_UNIT), 1e-14));
    CHECK_THROWS_AS(mobius_apply(Mat2C::diag(2.0, 2.0), cplx(1)), InvalidMatrix);

    std::mt19937 rng(3);
    Mat2C a = random_su2(rng) * Mat2C::diag(2.0, 0.5), b = random_su2(rng);
    cplx z(0.2, -0.7);
    CHECK(close(mobius_apply(a * b, z), mobius_apply(a, mobius_apply(b, z)), 1e-10));
}

TEST_CASE("act_on_point and ball coordinates") {
    const double c = 0.25;
    HermitianPoint o{Mat2C::diag(1 / c, 1 / c), c};
    HermitianPoint p = act_on_point(Mat2C::diag(2.0, 0.5), o);
    CHECK(std::abs(p.X.a11 - 4 / c) < 1e-12);
    CHECK(std::abs(p.X.a22 - 0.25 / c) < 1e-12);

    std::mt19937 rng(7);
    Mat2C b = random_su2(rng);
    CHECK(act_on_point(b, o).X.norm() == doctest::Approx(o.X.norm()).epsilon(1e-12));

    BallPoint y0 = to_ball(o);
    CHECK(std::hypot(y0.y[0], y0.y[1], y0.y[2]) < 1e-14);

    // Minkowski (sqrt2, 1, 0, 0)/|c|
    double s2 = std::sqrt(2.0);
    HermitianPoint q{Mat2C{(s2 + 0.0) / c, 1.0 / c, 1.0 / c, (s2 + 0.0) / c}, c};
    auto mk = q.minkowski();
    REQUIRE(mk[0] == doctest::Approx(s2 / c));
    REQUIRE(std::abs(std::abs(mk[1]) + std::abs(mk[2]) + std::abs(mk[3]) - 1 / c) < 1e-12);
    BallPoint yq = to_ball(q);
    CHECK(std::hypot(yq.y[0], yq.y[1], yq.y[2]) == doctest::Approx(1 / (c * (1 + s2))));

    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        double t = u(rng);
        Mat2C a = random_su2(rng) * Mat2C::diag(std::exp(t), std::exp(-t)) * random_su2(rng);
        HermitianPoint h = act_on_point(a, o);
        HermitianPoint back = from_ball(to_ball(h), c);
        worst = std::max(worst, (back.X - h.X).norm() / h.X.norm());
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("act_on_point composes") {
    std::mt19937 rng(11);
    const double c = 0.5;
    HermitianPoint o{Mat2C::diag(1 / c, 1 / c), c};
    Mat2C a = random_su2(rng) * Mat2C::diag(1.5, 1 / 1.5), b = Mat2C{1, 0.3, 0, 1};
    HermitianPoint l = act_on_point(a * b, o), r = act_on_point(a, act_on_point(b, o));
    CHECK((l.X - r.X).norm() < 1e-10);
    CHECK(hyperbolic_distance(o, o) == doctest::Approx(0).epsilon(1e-7));
}

TEST_CASE("delta") {
    CHECK(std::abs(delta(Mat2C::identity())) == 0);
    cplx p(0.3, 0.5);
    Mat2C m{p, I_UNIT * 0.7, I_UNIT * 0.2, std::conj(p)};
    CHECK(std::abs(delta(m) - I_UNIT * 0.5) < 1e-15);
    Mat2C a{1, 2, 3, 4}, b{0.5, -1, I_UNIT, 2};
    CHECK(std::abs(delta(a + b) - delta(a) - delta(b)) < 1e-15);
}

TEST_CASE("su2_log_axis") {
    double phi = kPi / 4;
    LogAxis ax = su2_log_axis(Mat2C::diag(std::exp(I_UNIT * phi), std::exp(-I_UNIT * phi)));
    CHECK((ax.T - Mat2C::diag(I_UNIT * phi, -I_UNIT * phi)).norm() < 1e-12);
    CHECK(ax.theta == doctest::Approx(phi));

    std::mt19937 rng(5);
    double worst = 0, sym = 0;
    for (int i = 0; i < 50; ++i) {
        Mat2C b = random_su2(rng);
        LogAxis l = su2_log_axis(b);
        worst = std::max(worst, (expm_traceless(l.T) - b).norm());
        sym = std::max(sym, (su2_log_axis(b.inverse()).T + l.T).norm());
    }
    CHECK(worst < 1e-10);
    CHECK(sym < 1e-9);
    CHECK_THROWS(su2_log_axis(Mat2C::identity()));
}

TEST_CASE("stereographic projection") {
    Vec3 n{0.6, 0.0, 0.8};
    ExtComplex z = stereo(n);
    CHECK(std::abs(z.z - 3.0) < 1e-12);
    Vec3 back = inv_stereo(z);
    for (int k = 0; k < 3; ++k) CHECK(back[k] == doctest::Approx(n[k]));
    CHECK(stereo(Vec3{0, 0, 1}).inf);
}
