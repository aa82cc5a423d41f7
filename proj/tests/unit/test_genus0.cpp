#include <cmath>

#include "doctest.h"

#include "cmcforge/genus0.hpp"

using namespace cmcforge;

namespace {

bool same(const Interval& i, Rational lo, Rational hi) { return i.lo == lo && i.hi == hi; }

} // namespace

TEST_CASE("lambda and theta") {
    CHECK(lambda_of_c(0.0) == doctest::Approx(1.0));
    CHECK(lambda_of_c(3.0 / 16.0) == doctest::Approx(0.5));
    CHECK(lambda_of_c(-2.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(lambda_of_c(0.25), std::domain_error);

    for (int m : {2, 3, 4, 5}) CHECK(theta_of_c(m, 0.0) == doctest::Approx(kPi / m));
    for (double c : {-0.3, -0.05, 0.05, 0.15})
        CHECK(std::abs(theta_of_c(3, c) - theta_closed(3, c)) < 1e-12);
    // cos(m theta) = cos(pi lambda) on the tracked branch
    double th = theta_of_c(2, 3.0 / 16.0);
    CHECK(std::abs(std::cos(2 * th) - std::cos(kPi * 0.5)) < 1e-12);
}

TEST_CASE("alpha") {
    CHECK(std::abs(alpha_of_c(2, 3, 0.0)) < 1e-15);
    CHECK(alpha_of_c(3, 3, 0.0) == doctest::Approx(1 / std::sqrt(3.0)));
    CRange r = c_range(3, 3);
    for (double t : {0.05, 0.5, 0.95}) {
        CHECK(std::abs(alpha_of_c(3, 3, t * to_double(r.pos.hi))) < 1);
        CHECK(std::abs(alpha_of_c(3, 3, t * to_double(r.neg.lo))) < 1);
    }
    CHECK_THROWS_AS(alpha_of_c(3, 6, 0.1), Inadmissible);
}

TEST_CASE("c_range") {
    CRange t = c_range(3, 3);
    CHECK(same(t.neg, Rational(-5, 16), Rational(0)));
    CHECK(same(t.pos, Rational(0), Rational(3, 16)));
    CRange i = c_range(5, 3);
    CHECK(same(i.neg, Rational(-13, 144), Rational(0)));
    CHECK(same(i.pos, Rational(0), Rational(11, 144)));
    for (int n = 3; n <= 8; ++n) {
        CRange r = c_range(2, n);
        CHECK(same(r.neg, Rational(-(n + 1), n * n), Rational(0)));
        CHECK(same(r.pos, Rational(0), Rational(n - 1, n * n)));
    }
    CHECK_FALSE(admissible(4, 4));
    CHECK_THROWS_AS(c_range(4, 4), Inadmissible);
}

TEST_CASE("jm intervals") {
    JmIntervals j = jm_intervals(3, 2);
    CHECK(same(j.zero_pos, Rational(0), Rational(2, 9)));
    CHECK(same(j.zero_neg, Rational(-4, 9), Rational(0)));
    REQUIRE(j.k.size() == 2);
    CHECK(same(j.k[0], Rational(-28, 9), Rational(-10, 9)));
    for (int n = 3; n <= 7; ++n) {
        JmIntervals jn = jm_intervals(n, 0);
        CRange r = c_range(2, n);
        CHECK(jn.zero_pos.hi == r.pos.hi);
        CHECK(jn.zero_neg.lo == r.neg.lo);
    }
    CHECK(jm_criterion(3, 0.1));
    CHECK_FALSE(jm_criterion(3, 0.23));
    CHECK(jm_criterion(3, -2.0));
}

TEST_CASE("exists_cmc") {
    CHECK(exists_cmc(3, 3, 0.1).exists);
    CHECK_FALSE(exists_cmc(3, 3, 0.2).exists);
    ExistsResult z = exists_cmc(3, 3, 0.0);
    CHECK(z.exists);
    CHECK(z.minimal);
    // c = 0.23 lies beyond (0, 2/9) and in no I_k
    CHECK_FALSE(exists_cmc(2, 3, 0.23).exists);
    CHECK(exists_cmc(2, 3, -2.0).exists);
    CHECK(exists_cmc(2, 3, -1.5).exists);
    CHECK_FALSE(exists_cmc(2, 3, -4.0).exists);
}

TEST_CASE("total absolute curvature") {
    CHECK(genus0_ends(3, 3) == 4);
    CHECK(genus0_ends(3, 4) == 8);
    CHECK(genus0_ends(3, 5) == 20);
    CHECK(genus0_ends(2, 3) == 3);
    CHECK(total_abs_curvature(3, 1e-9) == doctest::Approx(8 * kPi));
    CHECK(total_abs_curvature(3, 0.1) < 8 * kPi);
    CHECK(total_abs_curvature(3, -0.1) > 8 * kPi);
    CRange t = c_range(3, 3);
    CHECK(total_abs_curvature_over_pi(4, t.lambda_pos) == Rational(8));
    CHECK(total_abs_curvature_over_pi(4, t.lambda_neg) == Rational(16));
    CHECK(total_abs_curvature_over_pi(4, Rational(1)) == Rational(12));
}

TEST_CASE("sigma triple") {
    SigmaTriple s23 = sigma_triple(2, 3);
    CHECK(std::abs(s23.alpha0) < 1e-15);
    CHECK((s23.s3 - I_UNIT * Mat2C{0, 1, 1, 0}).norm() < 1e-14);
    for (auto [m, n] : {std::pair{2, 5}, {3, 3}, {3, 4}, {4, 3}, {3, 5}, {5, 3}}) {
        SigmaTriple s = sigma_triple(m, n);
        for (const Mat2C* x : {&s.s1, &s.s2, &s.s3}) {
            CHECK(is_su2(*x));
            CHECK((*x * x->conj() - Mat2C::identity()).norm() < 1e-12);
        }
    }
    // |trace sigma3| = 2 cos(pi/m)
    CHECK(std::abs(std::abs(sigma_triple(3, 3).s3.trace()) - 1.0) < 1e-12);
}

TEST_CASE("table 1") {
    auto rows = platonic_table();
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].name == "Tetrahedra");
    CHECK(rows[0].ends == 4);
    CHECK(rows[0].ta_lo == Rational(8));
    CHECK(rows[0].ta_mid == Rational(12));
    CHECK(rows[0].ta_hi == Rational(16));
    std::string txt = table_text(rows);
    CHECK(txt.find("(-5/16, 0) U (0, 3/16)") != std::string::npos);
    CHECK(table_json(rows).size() == 5);
    CHECK(interval_text(Interval{Rational(-13, 144), Rational(0)}) == "(-13/144, 0)");
}
