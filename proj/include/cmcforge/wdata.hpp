#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmcforge/algebra.hpp"
#include "cmcforge/poly.hpp"

namespace cmcforge {

struct PathError : std::runtime_error { using std::runtime_error::runtime_error; };

struct PolyPath {
    std::vector<cplx> pts;
    bool closed{false};

    PolyPath() = default;
    PolyPath(std::vector<cplx> p, bool c = false) : pts(std::move(p)), closed(c) {}
    void validate() const;
    PolyPath reversed() const;
    PolyPath then(const PolyPath& o) const; // concatenation, o must start where this ends
    static PolyPath circle(cplx center, double r, double phase0, int n, double turns = 1.0);
};

// Anti-holomorphic involution z -> m(conj z), with sigma so that
// conj(G o mu) = sigma^{-1} * G.
struct Reflection {
    std::string name;
    int j{1}, k{1};
    Mat2C mob;
    Mat2C sigma;
    std::optional<Vec3> normal;
    int sigma_sign{1}; // sigma = sigma_sign * sigma_from_normal(normal)
    std::vector<cplx> probes; // fixed points reachable from z0 by a straight segment

    ExtComplex apply(const ExtComplex& z) const;
    cplx apply(cplx z) const;
    // derivative of m at conj(z)
    cplx dmob(cplx z) const;
};

struct BoundaryPiece {
    enum class Kind { Segment, Arc };
    Kind kind{Kind::Segment};
    cplx a, b;
    cplx center{0};
    double sweep{0}; // signed angle for arcs

    static BoundaryPiece segment(cplx a, cplx b);
    static BoundaryPiece arc(cplx center, cplx a, cplx b); // short arc from a to b
    cplx at(double t) const;
    cplx tangent(double t) const;
};

// Fundamental piece D, swept as a fan from `center` (an end of the surface when
// center_is_end) over the boundary pieces that do not contain the center.
struct Domain {
    std::vector<BoundaryPiece> pieces;
    cplx center{0};
    bool center_is_end{true};
    int copies{1}; // number of congruent copies of D making up the surface
    double end_radius{1e-3}; // truncation radius of the end for meshes
};

class WeierstrassData {
public:
    std::string name;
    RationalMap G;
    RationalMap q;
    std::vector<ExtComplex> punctures;
    std::vector<Reflection> reflections;
    std::map<std::string, PolyPath> loops;
    cplx z0{0};
    std::optional<Domain> domain;
    int ends{0};
    std::map<std::string, double> params;

    // Call after setting G and q; caches dG numerator and singular set.
    void finalize();

    // alpha = [[G, -G^2], [1, -G]] q/G', evaluated without dividing by G's poles.
    Mat2C alpha(cplx z) const;
    std::array<Series, 4> alpha_series(cplx z, std::size_t n) const;
    cplx omega(cplx z) const;
    const EntireFn& dG_num() const { return W_; }
    const std::vector<cplx>& singular_points() const { return singular_; }
    double clearance(cplx a, cplx b) const; // distance of segment [a,b] to the singular set

    const Reflection& reflection(int j, int k) const;
    bool has_reflection(int j, int k) const;

private:
    EntireFn W_;
    std::vector<cplx> singular_;
};

struct OrderViolation {
    ExtComplex p;
    int ordG, ordQ, ordDG, expected_ord_omega;
};

struct RegularReport {
    bool pass{false};
    std::string mode; // "divisor" or "sampled"
    std::vector<OrderViolation> violations;
    double min_sampled_density{0};
};

RegularReport check_regular(const WeierstrassData& d);

double metric_dsG(const WeierstrassData& d, cplx z);
// 4|g'|^2/(1+|g|^2)^2 from the first two Taylor coefficients of g.
double metric_dsigma(cplx g, cplx gprime);

Mat2C sigma_from_normal(const Vec3& nu);

struct Period {
    Vec3 re{0, 0, 0}, im{0, 0, 0};
};

Period euclid_period(const WeierstrassData& d, const PolyPath& loop, double tol = 1e-11);
Vec3 minimal_immerse(const WeierstrassData& d, const PolyPath& path, double tol = 1e-11);

// Weierstrass pair (g, omega) for SU(2)-equivalence tests.
struct WPair {
    RationalMap g;
    RationalMap omega;
};
std::optional<Mat2C> su2_equivalent(const WPair& d1, const WPair& d2);

} // namespace cmcforge
