#pragma once

#include <string>
#include <vector>

#include "cmcforge/algebra.hpp"

namespace cmcforge {

// Truncated power series sum_k s[k] h^k.
using Series = std::vector<cplx>;

Series series_mul(const Series& a, const Series& b, std::size_t n);
Series series_div(const Series& a, const Series& b, std::size_t n);
Series series_deriv(const Series& a);
Series series_add(const Series& a, const Series& b);
Series series_scale(const Series& a, cplx s);

struct Root {
    cplx z;
    int mult;
};

// Complex polynomial, ascending coefficients.
class Poly {
public:
    Poly() = default;
    Poly(std::vector<cplx> c);
    static Poly constant(cplx v) { return Poly({v}); }
    static Poly monomial(int k, cplx v = 1.0);
    static Poly from_roots(const std::vector<cplx>& roots, cplx lead = 1.0);

    const std::vector<cplx>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    cplx lead() const { return c_.empty() ? cplx(0) : c_.back(); }

    cplx operator()(cplx z) const;
    Poly deriv() const;
    Series taylor(cplx z0, std::size_t n) const;
    // z^n p(1/z) with n = degree().
    Poly reversed() const;
    std::vector<Root> roots(double cluster_tol = 1e-6) const;

    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(cplx s, const Poly& a);

private:
    void trim();
    std::vector<cplx> c_;
};

// Polynomial or finite exponential sum sum a_j exp(k_j z); mixed forms are not closed
// under multiplication and are rejected.
class EntireFn {
public:
    struct Exp {
        cplx coef, rate;
    };

    EntireFn() = default;
    EntireFn(Poly p) : poly_(std::move(p)) {}
    static EntireFn exps(std::vector<Exp> terms);

    bool is_polynomial() const { return exps_.empty(); }
    const Poly& poly() const { return poly_; }
    const std::vector<Exp>& exp_terms() const { return exps_; }

    cplx operator()(cplx z) const;
    EntireFn deriv() const;
    Series taylor(cplx z0, std::size_t n) const;

    friend EntireFn operator*(const EntireFn& a, const EntireFn& b);
    friend EntireFn operator+(const EntireFn& a, const EntireFn& b);
    friend EntireFn operator-(const EntireFn& a, const EntireFn& b);

private:
    void simplify();
    Poly poly_;
    std::vector<Exp> exps_;
};

struct SingularPoint : std::runtime_error { using std::runtime_error::runtime_error; };

// Ratio num/den. With polynomial parts this is a true rational map; the exponential
// variant carries closed-form analytic maps such as tanh.
class RationalMap {
public:
    RationalMap() : num_(Poly::constant(0)), den_(Poly::constant(1)) {}
    RationalMap(EntireFn n, EntireFn d, std::string tag = {});
    static RationalMap poly(Poly p) { return RationalMap(EntireFn(std::move(p)), Poly::constant(1)); }
    static RationalMap tanh_map();

    bool is_rational() const { return num_.is_polynomial() && den_.is_polynomial(); }
    const EntireFn& num() const { return num_; }
    const EntireFn& den() const { return den_; }
    const std::string& tag() const { return tag_; }

    ExtComplex operator()(const ExtComplex& z) const;
    cplx value(cplx z) const; // throws SingularPoint at a pole
    RationalMap deriv() const;
    Series taylor(cplx z0, std::size_t n) const;
    // Order of zero (positive) or pole (negative) at p; rational maps only.
    int order_at(const ExtComplex& p, double tol = 1e-6) const;

private:
    EntireFn num_, den_;
    std::string tag_;
};

// Multiplicity of p as a root of f (0 if not a root). Polynomials only.
int root_multiplicity(const Poly& f, cplx p, double tol = 1e-6);

// Schwarzian (g''/g')' - (g''/g')^2/2 from Taylor coefficients g[0..3].
cplx schwarzian_from_series(const Series& g);
cplx schwarzian(const RationalMap& g, cplx z);

} // namespace cmcforge
