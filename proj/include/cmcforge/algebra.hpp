#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace cmcforge {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr cplx I_UNIT{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

struct InvalidMatrix : std::runtime_error { using std::runtime_error::runtime_error; };
struct WrongSheet : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoAxis : std::runtime_error { using std::runtime_error::runtime_error; };

// Complex 2x2 matrix, row major.
struct Mat2C {
    cplx a11{1}, a12{0}, a21{0}, a22{1};

    Mat2C() = default;
    Mat2C(cplx a, cplx b, cplx c, cplx d) : a11(a), a12(b), a21(c), a22(d) {}

    static Mat2C identity() { return {}; }
    static Mat2C zero() { return {0, 0, 0, 0}; }
    static Mat2C diag(cplx a, cplx d) { return {a, 0, 0, d}; }

    cplx det() const { return a11 * a22 - a12 * a21; }
    cplx trace() const { return a11 + a22; }
    Mat2C adj() const { return {a22, -a12, -a21, a11}; }
    Mat2C inverse() const;
    Mat2C conj() const { return {std::conj(a11), std::conj(a12), std::conj(a21), std::conj(a22)}; }
    Mat2C transpose() const { return {a11, a21, a12, a22}; }
    Mat2C dag() const { return conj().transpose(); }
    double norm() const; // Frobenius
    double max_imag() const;

    cplx& operator()(int i, int j);
    cplx operator()(int i, int j) const;

    Mat2C& operator+=(const Mat2C& o);
    Mat2C& operator-=(const Mat2C& o);
    Mat2C& operator*=(cplx s);
};

Mat2C operator*(const Mat2C& a, const Mat2C& b);
Mat2C operator+(Mat2C a, const Mat2C& b);
Mat2C operator-(Mat2C a, const Mat2C& b);
Mat2C operator-(const Mat2C& a);
Mat2C operator*(cplx s, Mat2C a);
Mat2C operator*(Mat2C a, cplx s);
std::ostream& operator<<(std::ostream& os, const Mat2C& m);

inline constexpr double kDefaultTol = 1e-9;

bool is_sl2c(const Mat2C& a, double tol = kDefaultTol);
bool is_su2(const Mat2C& a, double tol = kDefaultTol);
bool is_sl2r(const Mat2C& a, double tol = kDefaultTol);
bool is_hermitian_pos(const Mat2C& a, double tol = kDefaultTol);

// Distance up to overall sign, for PSL comparisons.
double dist_pm(const Mat2C& a, const Mat2C& b);

// exp of a traceless matrix via cosh/sinh of the eigenvalue.
Mat2C expm_traceless(const Mat2C& t);
// Principal sqrt of a Hermitian positive matrix.
Mat2C sqrtm_hermitian(const Mat2C& h);

// Point of the Riemann sphere; infinity kept explicit.
struct ExtComplex {
    cplx z{0};
    bool inf{false};

    ExtComplex() = default;
    ExtComplex(cplx v) : z(v) {}
    ExtComplex(double v) : z(v) {}
    static ExtComplex infinity() { ExtComplex e; e.inf = true; return e; }
    bool finite() const { return !inf; }
};

bool close(const ExtComplex& a, const ExtComplex& b, double tol);
// Chordal distance on the unit sphere.
double chordal(const ExtComplex& a, const ExtComplex& b);

ExtComplex mobius_apply(const Mat2C& a, const ExtComplex& z, double tol = kDefaultTol);
// Projective action without the unimodularity precondition.
ExtComplex mobius_apply_projective(const Mat2C& a, const ExtComplex& z);

// Stereographic projection z = (x1 + i x2)/(1 - x3).
ExtComplex stereo(const Vec3& x);
Vec3 inv_stereo(const ExtComplex& z);

// H^3(-c^2) as {X Hermitian, det X = 1/c^2, tr X > 0}.
// For c < 0 the stored matrix is (1/|c|)FF*, so the sheet stays positive.
struct HermitianPoint {
    Mat2C X;
    double c{1};

    static HermitianPoint from_lift(const Mat2C& F, double c);
    void validate(double tol = 1e-9) const;
    // Minkowski coordinates (x0, x1, x2, x3).
    std::array<double, 4> minkowski() const;
};

struct BallPoint {
    Vec3 y{0, 0, 0};
    double radius{1};
};

HermitianPoint act_on_point(const Mat2C& a, const HermitianPoint& p);
BallPoint to_ball(const HermitianPoint& p);
HermitianPoint from_ball(const BallPoint& b, double c);

// arccosh(c^2/2 tr(X adj Y)): distance measured after rescaling to curvature -1.
double hyperbolic_distance(const HermitianPoint& p, const HermitianPoint& q);

inline cplx delta(const Mat2C& a) { return a.a12 - a.a21; }

struct LogAxis {
    Mat2C T;
    double theta;
};
// b = exp(T), T traceless anti-Hermitian with eigenvalues +-i theta, theta in (0, pi).
LogAxis su2_log_axis(const Mat2C& b, double tol = kDefaultTol);

} // namespace cmcforge
