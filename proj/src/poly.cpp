#include "cmcforge/poly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace cmcforge {

Series series_mul(const Series& a, const Series& b, std::size_t n) {
    Series r(n, 0.0);
    for (std::size_t i = 0; i < std::min(n, a.size()); ++i)
        for (std::size_t j = 0; j < std::min(n - i, b.size()); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Series series_div(const Series& a, const Series& b, std::size_t n) {
    if (b.empty() || b[0] == 0.0) throw SingularPoint("series_div: zero leading term");
    Series r(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        cplx s = k < a.size() ? a[k] : 0.0;
        for (std::size_t j = 1; j <= k && j < b.size(); ++j) s -= b[j] * r[k - j];
        r[k] = s / b[0];
    }
    return r;
}

Series series_deriv(const Series& a) {
    if (a.size() <= 1) return Series(1, 0.0);
    Series r(a.size() - 1);
    for (std::size_t k = 1; k < a.size(); ++k) r[k - 1] = double(k) * a[k];
    return r;
}

Series series_add(const Series& a, const Series& b) {
    Series r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Series series_scale(const Series& a, cplx s) {
    Series r(a);
    for (auto& v : r) v *= s;
    return r;
}

// ---- Poly ----

Poly::Poly(std::vector<cplx> c) : c_(std::move(c)) { trim(); }

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Poly Poly::monomial(int k, cplx v) {
    std::vector<cplx> c(k + 1, 0.0);
    c[k] = v;
    return Poly(c);
}

Poly Poly::from_roots(const std::vector<cplx>& roots, cplx lead) {
    Poly p = constant(lead);
    for (auto r : roots) p = p * Poly({-r, 1.0});
    return p;
}

cplx Poly::operator()(cplx z) const {
    cplx s = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * z + *it;
    return s;
}

Poly Poly::deriv() const {
    if (c_.size() <= 1) return Poly();
    std::vector<cplx> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = double(k) * c_[k];
    return Poly(d);
}

Series Poly::taylor(cplx z0, std::size_t n) const {
    // repeated synthetic division gives the shifted coefficients
    std::vector<cplx> a = c_;
    Series r(n, 0.0);
    for (std::size_t k = 0; k < n && !a.empty(); ++k) {
        cplx s = 0;
        std::vector<cplx> q(a.size() > 1 ? a.size() - 1 : 0);
        for (std::size_t i = a.size(); i-- > 0;) {
            cplx next = s * z0 + a[i];
            if (i > 0) q[i - 1] = next;
            s = next;
        }
        r[k] = s;
        a = q;
    }
    return r;
}

Poly Poly::reversed() const {
    std::vector<cplx> r(c_.rbegin(), c_.rend());
    return Poly(r);
}

std::vector<Root> Poly::roots(double cluster_tol) const {
    std::vector<Root> out;
    int n = degree();
    if (n <= 0) return out;
    // exact zero roots first; the companion matrix smears them otherwise
    int z0 = 0;
    while (z0 < n && c_[z0] == 0.0) ++z0;
    if (z0 > 0) out.push_back({0.0, z0});
    int m = n - z0;
    if (m == 0) return out;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) comp(i, m - 1) = -c_[z0 + i] / c_[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + m);
    // polish simple roots with a couple of Newton steps
    Poly d = deriv();
    for (auto& r : ev) {
        for (int it = 0; it < 3; ++it) {
            cplx dv = d(r);
            if (std::abs(dv) < 1e-8 * std::max(1.0, std::abs((*this)(r)))) break;
            cplx step = (*this)(r) / dv;
            if (!std::isfinite(std::abs(step))) break;
            r -= step;
        }
    }
    std::vector<bool> used(m, false);
    for (int i = 0; i < m; ++i) {
        if (used[i]) continue;
        cplx sum = ev[i];
        int cnt = 1;
        used[i] = true;
        double scale = cluster_tol * std::max(1.0, std::abs(ev[i]));
        for (int j = i + 1; j < m; ++j)
            if (!used[j] && std::abs(ev[j] - ev[i]) < 1e3 * scale) {
                used[j] = true;
                sum += ev[j];
                ++cnt;
            }
        out.push_back({sum / double(cnt), cnt});
    }
    return out;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return Poly();
    std::vector<cplx> r(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(r);
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<cplx> r(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly(r);
}

Poly operator-(const Poly& a, const Poly& b) { return a + cplx(-1.0) * b; }

Poly operator*(cplx s, const Poly& a) {
    std::vector<cplx> r(a.c_);
    for (auto& v : r) v *= s;
    return Poly(r);
}

int root_multiplicity(const Poly& f, cplx p, double tol) {
    int m = 0;
    for (const auto& r : f.roots(tol))
        if (std::abs(r.z - p) < 1e3 * tol * std::max(1.0, std::abs(p))) m += r.mult;
    return m;
}

// ---- EntireFn ----

EntireFn EntireFn::exps(std::vector<Exp> terms) {
    EntireFn f;
    f.exps_ = std::move(terms);
    f.simplify();
    return f;
}

void EntireFn::simplify() {
    std::vector<Exp> merged;
    for (const auto& t : exps_) {
        if (t.rate == 0.0) {
            poly_ = poly_ + Poly::constant(t.coef);
            continue;
        }
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const Exp& e) { return std::abs(e.rate - t.rate) < 1e-14; });
        if (it == merged.end())
            merged.push_back(t);
        else
            it->coef += t.coef;
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Exp& e) { return std::abs(e.coef) < 1e-15; }),
                 merged.end());
    exps_ = merged;
}

cplx EntireFn::operator()(cplx z) const {
    cplx s = poly_(z);
    for (const auto& e : exps_) s += e.coef * std::exp(e.rate * z);
    return s;
}

EntireFn EntireFn::deriv() const {
    EntireFn d(poly_.deriv());
    for (const auto& e : exps_) d.exps_.push_back({e.coef * e.rate, e.rate});
    return d;
}

Series EntireFn::taylor(cplx z0, std::size_t n) const {
    Series r = poly_.taylor(z0, n);
    for (const auto& e : exps_) {
        cplx term = e.coef * std::exp(e.rate * z0);
        for (std::size_t k = 0; k < n; ++k) {
            r[k] += term;
            term *= e.rate / double(k + 1);
        }
    }
    return r;
}

EntireFn operator*(const EntireFn& a, const EntireFn& b) {
    if (a.is_polynomial() && b.is_polynomial()) return EntireFn(a.poly_ * b.poly_);
    auto is_const = [](const EntireFn& f) { return f.is_polynomial() && f.poly_.degree() <= 0; };
    if (is_const(a) || is_const(b)) {
        const EntireFn& k = is_const(a) ? a : b;
        const EntireFn& f = is_const(a) ? b : a;
        cplx s = k.poly_.is_zero() ? cplx(0) : k.poly_.coeffs()[0];
        EntireFn r(s * f.poly_);
        for (const auto& e : f.exps_) r.exps_.push_back({s * e.coef, e.rate});
        r.simplify();
        return r;
    }
    if (a.poly_.degree() > 0 || b.poly_.degree() > 0)
        throw std::invalid_argument("EntireFn: polynomial times exponential is not supported");
    // constant + exp sums on both sides
    std::vector<EntireFn::Exp> terms;
    auto expand = [](const EntireFn& f) {
        std::vector<EntireFn::Exp> t = f.exps_;
        if (!f.poly_.is_zero()) t.push_back({f.poly_.coeffs()[0], 0.0});
        return t;
    };
    for (const auto& x : expand(a))
        for (const auto& y : expand(b)) terms.push_back({x.coef * y.coef, x.rate + y.rate});
    return EntireFn::exps(terms);
}

EntireFn operator+(const EntireFn& a, const EntireFn& b) {
    EntireFn r(a.poly_ + b.poly_);
    r.exps_ = a.exps_;
    r.exps_.insert(r.exps_.end(), b.exps_.begin(), b.exps_.end());
    r.simplify();
    return r;
}

EntireFn operator-(const EntireFn& a, const EntireFn& b) {
    EntireFn nb(cplx(-1.0) * b.poly_);
    for (const auto& e : b.exps_) nb.exps_.push_back({-e.coef, e.rate});
    return a + nb;
}

// ---- RationalMap ----

RationalMap::RationalMap(EntireFn n, EntireFn d, std::string tag)
    : num_(std::move(n)), den_(std::move(d)), tag_(std::move(tag)) {
    if (den_.is_polynomial() && den_.poly().is_zero())
        throw std::invalid_argument("RationalMap: zero denominator");
}

RationalMap RationalMap::tanh_map() {
    auto sinh = EntireFn::exps({{0.5, 1.0}, {-0.5, -1.0}});
    auto cosh = EntireFn::exps({{0.5, 1.0}, {0.5, -1.0}});
    return RationalMap(sinh, cosh, "tanh");
}

ExtComplex RationalMap::operator()(const ExtComplex& z) const {
    if (z.inf) {
        if (!is_rational()) throw SingularPoint("analytic map has no value at infinity");
        int dn = num_.poly().degree(), dd = den_.poly().degree();
        if (dn < 0) return ExtComplex(0.0);
        if (dn > dd) return ExtComplex::infinity();
        if (dn < dd) return ExtComplex(0.0);
        return ExtComplex(num_.poly().lead() / den_.poly().lead());
    }
    cplx d = den_(z.z), n = num_(z.z);
    if (d == 0.0) {
        if (n == 0.0) throw SingularPoint("RationalMap: 0/0");
        return ExtComplex::infinity();
    }
    return ExtComplex(n / d);
}

cplx RationalMap::value(cplx z) const {
    auto v = (*this)(ExtComplex(z));
    if (v.inf) throw SingularPoint("RationalMap: pole");
    return v.z;
}

RationalMap RationalMap::deriv() const {
    return RationalMap(num_.deriv() * den_ - num_ * den_.deriv(), den_ * den_);
}

Series RationalMap::taylor(cplx z0, std::size_t n) const {
    return series_div(num_.taylor(z0, n), den_.taylor(z0, n), n);
}

int RationalMap::order_at(const ExtComplex& p, double tol) const {
    if (!is_rational()) throw std::logic_error("order_at: rational maps only");
    const Poly& n = num_.poly();
    const Poly& d = den_.poly();
    if (p.inf) return d.degree() - n.degree();
    return root_multiplicity(n, p.z, tol) - root_multiplicity(d, p.z, tol);
}

cplx schwarzian_from_series(const Series& g) {
    if (g.size() < 4) throw std::invalid_argument("schwarzian needs 4 coefficients");
    if (std::abs(g[1]) == 0.0) throw SingularPoint("schwarzian: critical point");
    cplx d1 = g[1], d2 = 2.0 * g[2], d3 = 6.0 * g[3];
    cplx r = d2 / d1;
    return d3 / d1 - 1.5 * r * r;
}

cplx schwarzian(const RationalMap& g, cplx z) {
    Series s = g.taylor(z, 4);
    if (std::abs(s[1]) < 1e-14 * std::max(1.0, std::abs(s[0])))
        throw SingularPoint("schwarzian: critical point");
    return schwarzian_from_series(s);
}

} // namespace cmcforge
