#include "cmcforge/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace cmcforge {

Mat2C Mat2C::inverse() const {
    cplx d = det();
    if (std::abs(d) == 0.0) throw InvalidMatrix("singular matrix");
    return adj() * (1.0 / d);
}

double Mat2C::norm() const {
    return std::sqrt(std::norm(a11) + std::norm(a12) + std::norm(a21) + std::norm(a22));
}

double Mat2C::max_imag() const {
    return std::max({std::abs(a11.imag()), std::abs(a12.imag()), std::abs(a21.imag()),
                     std::abs(a22.imag())});
}

cplx& Mat2C::operator()(int i, int j) {
    return i == 0 ? (j == 0 ? a11 : a12) : (j == 0 ? a21 : a22);
}

cplx Mat2C::operator()(int i, int j) const {
    return i == 0 ? (j == 0 ? a11 : a12) : (j == 0 ? a21 : a22);
}

Mat2C& Mat2C::operator+=(const Mat2C& o) {
    a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22;
    return *this;
}

Mat2C& Mat2C::operator-=(const Mat2C& o) {
    a11 -= o.a11; a12 -= o.a12; a21 -= o.a21; a22 -= o.a22;
    return *this;
}

Mat2C& Mat2C::operator*=(cplx s) {
    a11 *= s; a12 *= s; a21 *= s; a22 *= s;
    return *this;
}

Mat2C operator*(const Mat2C& a, const Mat2C& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}
Mat2C operator+(Mat2C a, const Mat2C& b) { return a += b; }
Mat2C operator-(Mat2C a, const Mat2C& b) { return a -= b; }
Mat2C operator-(const Mat2C& a) { return {-a.a11, -a.a12, -a.a21, -a.a22}; }
Mat2C operator*(cplx s, Mat2C a) { return a *= s; }
Mat2C operator*(Mat2C a, cplx s) { return a *= s; }

std::ostream& operator<<(std::ostream& os, const Mat2C& m) {
    return os << "[[" << m.a11 << ", " << m.a12 << "], [" << m.a21 << ", " << m.a22 << "]]";
}

bool is_sl2c(const Mat2C& a, double tol) { return std::abs(a.det() - 1.0) <= tol; }

bool is_su2(const Mat2C& a, double tol) {
    return is_sl2c(a, tol) && (a * a.dag() - Mat2C::identity()).norm() <= tol;
}

bool is_sl2r(const Mat2C& a, double tol) { return is_sl2c(a, tol) && a.max_imag() <= tol; }

bool is_hermitian_pos(const Mat2C& a, double tol) {
    if ((a - a.dag()).norm() > tol * std::max(1.0, a.norm())) return false;
    return a.trace().real() > 0 && a.det().real() > 0;
}

double dist_pm(const Mat2C& a, const Mat2C& b) {
    return std::min((a - b).norm(), (a + b).norm());
}

Mat2C expm_traceless(const Mat2C& t) {
    cplx s = std::sqrt(-t.det()); // t^2 = s^2 I
    cplx shs = std::abs(s) < 1e-8 ? 1.0 + s * s / 6.0 : std::sinh(s) / s;
    return std::cosh(s) * Mat2C::identity() + shs * t;
}

Mat2C sqrtm_hermitian(const Mat2C& h) {
    double sd = std::sqrt(h.det().real());
    double den = std::sqrt(h.trace().real() + 2 * sd);
    return (h + Mat2C::diag(sd, sd)) * (1.0 / den);
}

bool close(const ExtComplex& a, const ExtComplex& b, double tol) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return std::abs(a.z - b.z) <= tol;
}

double chordal(const ExtComplex& a, const ExtComplex& b) {
    auto x = inv_stereo(a), y = inv_stereo(b);
    return std::sqrt((x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]) +
                     (x[2] - y[2]) * (x[2] - y[2]));
}

ExtComplex mobius_apply_projective(const Mat2C& a, const ExtComplex& z) {
    cplx num, den;
    if (z.inf) {
        num = a.a11;
        den = a.a21;
    } else {
        num = a.a11 * z.z + a.a12;
        den = a.a21 * z.z + a.a22;
    }
    if (den == 0.0) return ExtComplex::infinity();
    return ExtComplex(num / den);
}

ExtComplex mobius_apply(const Mat2C& a, const ExtComplex& z, double tol) {
    if (!is_sl2c(a, tol)) throw InvalidMatrix("mobius_apply: det != 1");
    return mobius_apply_projective(a, z);
}

ExtComplex stereo(const Vec3& x) {
    double d = 1.0 - x[2];
    if (std::abs(d) < 1e-300) return ExtComplex::infinity();
    return ExtComplex(cplx(x[0], x[1]) / d);
}

Vec3 inv_stereo(const ExtComplex& z) {
    if (z.inf) return {0, 0, 1};
    double r2 = std::norm(z.z), d = 1 + r2;
    return {2 * z.z.real() / d, 2 * z.z.imag() / d, (r2 - 1) / d};
}

HermitianPoint HermitianPoint::from_lift(const Mat2C& F, double c) {
    if (c == 0.0) throw std::invalid_argument("HermitianPoint needs c != 0");
    HermitianPoint p;
    p.X = (F * F.dag()) * (1.0 / std::abs(c));
    p.c = c;
    return p;
}

void HermitianPoint::validate(double tol) const {
    if ((X - X.dag()).norm() > tol * std::max(1.0, X.norm()))
        throw InvalidMatrix("HermitianPoint: not Hermitian");
    double d = X.det().real() * c * c;
    if (std::abs(d - 1.0) > tol) throw InvalidMatrix("HermitianPoint: det X != 1/c^2");
    if (X.trace().real() <= 0) throw WrongSheet("HermitianPoint: trace <= 0");
}

std::array<double, 4> HermitianPoint::minkowski() const {
    return {0.5 * (X.a11 + X.a22).real(), X.a12.real(), X.a12.imag(),
            0.5 * (X.a11 - X.a22).real()};
}

HermitianPoint act_on_point(const Mat2C& a, const HermitianPoint& p) {
    HermitianPoint q;
    q.X = a * p.X * a.dag();
    q.c = p.c;
    return q;
}

BallPoint to_ball(const HermitianPoint& p) {
    auto x = p.minkowski();
    if (x[0] <= 0) throw WrongSheet("to_ball: x0 <= 0");
    double ac = std::abs(p.c);
    double s = 1.0 / ((1.0 + ac * x[0]) * ac);
    BallPoint b;
    b.radius = 1.0 / ac;
    b.y = {ac * x[1] * s, ac * x[2] * s, ac * x[3] * s};
    return b;
}

HermitianPoint from_ball(const BallPoint& b, double c) {
    double ac = std::abs(c);
    Vec3 u{b.y[0] * ac, b.y[1] * ac, b.y[2] * ac};
    double r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    if (r2 >= 1.0) throw WrongSheet("from_ball: point outside the ball");
    double k = 1.0 / (1.0 - r2);
    double x0 = (1 + r2) * k / ac, x1 = 2 * u[0] * k / ac, x2 = 2 * u[1] * k / ac,
           x3 = 2 * u[2] * k / ac;
    HermitianPoint p;
    p.c = c;
    p.X = {x0 + x3, cplx(x1, x2), cplx(x1, -x2), x0 - x3};
    return p;
}

double hyperbolic_distance(const HermitianPoint& p, const HermitianPoint& q) {
    // c^2/2 tr(X adj Y) is the Minkowski product of the unit-hyperboloid lifts
    double ip = 0.5 * p.c * p.c * (p.X * q.X.adj()).trace().real();
    return std::acosh(std::max(1.0, ip));
}

LogAxis su2_log_axis(const Mat2C& b, double tol) {
    if (!is_su2(b, tol)) throw InvalidMatrix("su2_log_axis: not in SU(2)");
    Mat2C n = (b - b.dag()) * 0.5;
    double ct = 0.5 * b.trace().real();
    double st = std::sqrt(std::max(0.0, n.det().real())); // n anti-Hermitian traceless: det n = sin^2 theta
    if (st <= tol) throw NoAxis("su2_log_axis: central element has no axis");
    double theta = std::atan2(st, ct);
    n.a11 = 0.5 * (n.a11 - n.a22); // drop any trace residue
    n.a22 = -n.a11;
    return {n * (theta / st), theta};
}

} // namespace cmcforge
