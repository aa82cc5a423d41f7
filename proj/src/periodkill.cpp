#include "cmcforge/periodkill.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "cmcforge/catalog.hpp"
#include "cmcforge/parallel.hpp"

namespace cmcforge {

RhoParams rho_params(const Mat2C& r) {
    return {r.a11, (r.a12 / I_UNIT).real(), (r.a21 / I_UNIT).real()};
}

NullCurveSolution step1_base(const WeierstrassData& d, double c, double tol) {
    const Reflection& mu = d.reflection(1, 1);
    if (std::abs(mu.apply(d.z0) - d.z0) > 1e-12)
        throw std::invalid_argument("step1: basepoint is not on the fixed curve of mu(1,1)");
    cplx g = d.G.value(d.z0), q = d.q.value(d.z0);
    if (std::abs(g.imag()) > 1e-10 * std::max(1.0, std::abs(g)) ||
        std::abs(q.imag()) > 1e-10 * std::max(1.0, std::abs(q)))
        throw std::invalid_argument("step1: G or q not real at the basepoint");
    PolyPath p;
    p.pts.push_back(d.z0);
    for (auto z : mu.probes)
        if (std::abs(z - p.pts.back()) > 0) p.pts.push_back(z);
    return integrate(d, c, p, Mat2C::identity(), tol);
}

Step2Result step2_diagonalize(const Mat2C& r) {
    auto [p, g1, g2] = rho_params(r);
    double rp = p.real(), ip = p.imag();
    if (std::abs(rp) >= 1.0) throw OutsideValidity("step2: eigenvalues are real");
    if (ip <= 0) throw OutsideValidity("step2: Im p <= 0");
    double s = std::sqrt(1.0 - rp * rp);
    auto eigvec = [&](double sg) {
        Eigen::Vector2d a(g1, sg * s - ip), b(ip + sg * s, g2);
        return a.norm() >= b.norm() ? a : b;
    };
    Eigen::Vector2d vp = eigvec(1.0), vm = eigvec(-1.0);
    double det = vp[0] * vm[1] - vp[1] * vm[0];
    if (det < 0) {
        vm = -vm;
        det = -det;
    }
    double k = 1.0 / std::sqrt(det);
    return {Mat2C{vp[0] * k, vm[0] * k, vp[1] * k, vm[1] * k}, cplx(rp, s)};
}

ReflectionRep apply_gauge(const ReflectionRep& rep, const Mat2C& a) {
    ReflectionRep r = rep;
    Mat2C ai = a.inverse(), ac = a.conj();
    for (auto& [l, m] : r.rho_hat) m = ai * m * ac;
    r.gauge = rep.gauge * a;
    return r;
}

ReflectionRep step3_scale(const ReflectionRep& rep) {
    auto it = rep.rho_hat.find({3, 1});
    if (it == rep.rho_hat.end()) throw std::invalid_argument("step3: no (3,1) reflection");
    auto [p, b1, b2] = rho_params(it->second);
    if (!(b1 * b2 > 0)) throw NoNormalization("step3: beta1 beta2 <= 0");
    double t = std::pow(b1 / b2, 0.25);
    ReflectionRep r = apply_gauge(rep, Mat2C::diag(t, 1.0 / t));
    r.beta = std::copysign(std::sqrt(b1 * b2), b1);
    r.step3 = true;
    return r;
}

std::map<Label, Mat2C> raw_reflection_matrices(const WeierstrassData& d, double c, double tol,
                                               double* spread) {
    std::vector<ReflectionEstimate> est(d.reflections.size());
    parallel_for(d.reflections.size(),
                 [&](std::size_t i) { est[i] = reflection_rep(d, c, d.reflections[i], Mat2C::identity(), tol); });
    std::map<Label, Mat2C> raw;
    double sp = 0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        raw[{d.reflections[i].j, d.reflections[i].k}] = est[i].rho_hat;
        sp = std::max(sp, est[i].spread);
    }
    if (spread) *spread = sp;
    return raw;
}

ReflectionRep normalize_matrices(const std::map<Label, Mat2C>& raw) {
    ReflectionRep rep;
    rep.rho_hat = raw;
    if (auto it = raw.find({2, 1}); it != raw.end()) {
        auto s2 = step2_diagonalize(it->second);
        rep = apply_gauge(rep, s2.u);
        rep.xi = s2.xi;
        rep.step2 = true;
    }
    if (raw.count({3, 1})) rep = step3_scale(rep);
    for (const auto& [l, m] : rep.rho_hat)
        rep.max_involution = std::max(rep.max_involution, (m * m.conj() - Mat2C::identity()).norm());
    return rep;
}

ReflectionRep normalize_rep(const WeierstrassData& d, double c, double tol) {
    double spread = 0;
    auto raw = raw_reflection_matrices(d, c, tol, &spread);
    auto rep = normalize_matrices(raw);
    rep.max_spread = spread;
    return rep;
}

std::vector<double> su2_residual(const ReflectionRep& rep, const std::vector<Label>& labels) {
    std::vector<double> r;
    for (const auto& l : labels) {
        auto p = rep.params(l);
        r.push_back(p.gamma1 - p.gamma2);
    }
    return r;
}

// ---- families ----

double synthetic_period(double phi) {
    double s = std::sin(2 * phi);
    return kPi / 12 * std::cos(2 * phi) / (s * s * s);
}

double synthetic_phi(double lambda) {
    // Per is strictly decreasing on (0, pi/2)
    auto f = [lambda](double phi) { return synthetic_period(phi) - lambda; };
    boost::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(f, 1e-3, kPi / 2 - 1e-3, boost::math::tools::eps_tolerance<double>(52), it);
    return 0.5 * (r.first + r.second);
}

FamilySpec synthetic_family() {
    FamilySpec f;
    f.name = "synthetic";
    f.dim = 1;
    f.per_labels = {{3, 2}};
    f.data = [](const std::vector<double>& l) { return synthetic(synthetic_phi(l.at(0))); };
    f.euclid_period = [](const std::vector<double>& l) {
        auto d = synthetic(synthetic_phi(l.at(0)));
        return std::vector<double>{0.5 * euclid_period(d, d.loops.at("l32")).re[2]};
    };
    return f;
}

FamilySpec rigid_family(const std::string& surface) {
    FamilySpec f;
    f.name = surface;
    f.dim = 0;
    f.data = [surface](const std::vector<double>&) { return catalog(surface); };
    f.euclid_period = [](const std::vector<double>&) { return std::vector<double>{}; };
    return f;
}

SolveReport solve_lambda(const FamilySpec& fam, double c, const SolveOptions& opt) {
    if (std::abs(c) > opt.c_limit && !opt.force)
        throw std::invalid_argument("solve_lambda: |c| exceeds the certified limit");
    SolveReport rep;
    const int n = fam.dim;
    std::vector<double> lam(n, 0.0);
    if (!opt.lambda0.empty()) {
        if (static_cast<int>(opt.lambda0.size()) != n) throw std::invalid_argument("solve_lambda: lambda0 has wrong size");
        lam = opt.lambda0;
    }
    auto eval = [&](const std::vector<double>& l) {
        rep.rep = normalize_rep(fam.data(l), c, opt.ode_tol);
        return su2_residual(rep.rep, fam.per_labels);
    };
    auto norm = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };
    auto r = eval(lam);
    rep.residual_history.push_back(norm(r));
    if (n == 0) {
        rep.converged = true;
        rep.residual = r;
        return rep;
    }
    // seed: 2c dPer/dlambda by central differences
    Eigen::MatrixXd J(n, n);
    const double h = 1e-4;
    for (int k = 0; k < n; ++k) {
        auto lp = lam, lm = lam;
        lp[k] += h;
        lm[k] -= h;
        auto pp = fam.euclid_period(lp), pm = fam.euclid_period(lm);
        for (int i = 0; i < n; ++i) J(i, k) = 2 * c * (pp[i] - pm[i]) / (2 * h);
    }
    if (std::abs(J.determinant()) < 1e-300) throw SolverFailure("singular seeded Jacobian");
    auto vec = [](const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); };
    while (norm(r) > opt.tol) {
        if (rep.iterations >= opt.max_iter) throw SolverFailure("Broyden did not converge");
        Eigen::VectorXd dl = -J.fullPivLu().solve(vec(r));
        std::vector<double> lam2(n);
        for (int k = 0; k < n; ++k) lam2[k] = lam[k] + dl[k];
        auto r2 = eval(lam2);
        Eigen::VectorXd dr = vec(r2) - vec(r);
        J += ((dr - J * dl) * dl.transpose()) / dl.squaredNorm();
        lam = lam2;
        r = r2;
        ++rep.iterations;
        rep.residual_history.push_back(norm(r));
    }
    rep.lambda = lam;
    rep.residual = r;
    rep.converged = true;
    return rep;
}

// ---- words and commutants ----

Mat2C rho_from_word(const std::map<Label, Mat2C>& rho_hat, const std::vector<Label>& word) {
    if (word.size() % 2) throw std::invalid_argument("rho_from_word: odd word length");
    Mat2C acc;
    for (std::size_t i = 0; i < word.size(); ++i) {
        const Mat2C& m = rho_hat.at(word[i]);
        acc = acc * (i % 2 ? m.conj() : m);
    }
    return acc;
}

Mat2C rho_from_word(const ReflectionRep& rep, const std::vector<Label>& word) {
    return rho_from_word(rep.rho_hat, word);
}

namespace {

bool central(const Mat2C& a, double tol) { return dist_pm(a, Mat2C::identity()) <= tol; }

double commutator(const Mat2C& a, const Mat2C& b) { return (a * b - b * a).norm(); }

bool all_commute(const std::vector<Mat2C>& g, double tol) {
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            if (commutator(g[i], g[j]) > tol) return false;
    return true;
}

} // namespace

CommutantClass classify_commutant(const std::vector<Mat2C>& gens, double tol) {
    for (const auto& g : gens)
        if (!is_su2(g, tol)) throw InvalidMatrix("classify_commutant: generator not in SU(2)");
    CommutantClass cls;
    auto it = std::find_if(gens.begin(), gens.end(), [&](const Mat2C& g) { return !central(g, tol); });
    if (it == gens.end()) return cls;
    if (!all_commute(gens, tol)) {
        cls.kind = CommutantClass::Kind::Point;
        return cls;
    }
    cls.kind = CommutantClass::Kind::Geodesic;
    cls.axis = su2_log_axis(*it, tol).T;
    return cls;
}

bool is_reducible(const std::vector<Mat2C>& gens, double tol) { return all_commute(gens, tol); }

std::vector<Mat2C> deck_generators(const ReflectionRep& rep) {
    std::vector<Mat2C> g;
    for (auto a = rep.rho_hat.begin(); a != rep.rho_hat.end(); ++a)
        for (auto b = std::next(a); b != rep.rho_hat.end(); ++b) g.push_back(a->second * b->second.conj());
    return g;
}

bool is_reducible(const ReflectionRep& rep, double tol) { return is_reducible(deck_generators(rep), tol); }

std::vector<Mat2C> monodromy_generators(const WeierstrassData& d, double c, const ReflectionRep& rep, double tol) {
    std::vector<Mat2C> out;
    auto words = deck_generators(rep);
    Mat2C a = rep.gauge, ai = rep.gauge.inverse();
    for (const auto& [name, loop] : d.loops) {
        Mat2C rho = ai * monodromy(d, c, loop, tol).rho * a;
        out.push_back(rho);
        for (const auto& w : words) out.push_back(w * rho * w.inverse());
    }
    return out;
}

std::string kind_name(CommutantClass::Kind k) {
    switch (k) {
    case CommutantClass::Kind::Point: return "point";
    case CommutantClass::Kind::Geodesic: return "geodesic";
    case CommutantClass::Kind::All: return "all";
    }
    return {};
}

nlohmann::json rep_json(const ReflectionRep& rep) {
    nlohmann::json j;
    j["rho_hat"] = nlohmann::json::array();
    for (const auto& [l, m] : rep.rho_hat) {
        auto p = rho_params(m);
        j["rho_hat"].push_back({{"label", {l.first, l.second}},
                                {"matrix", mat_json(m)},
                                {"p", cplx_json(p.p)},
                                {"gamma1", p.gamma1},
                                {"gamma2", p.gamma2},
                                {"su2_defect", (m * m.dag() - Mat2C::identity()).norm()}});
    }
    j["gauge"] = mat_json(rep.gauge);
    j["xi"] = cplx_json(rep.xi);
    j["beta"] = rep.beta;
    j["steps"] = {{"II", rep.step2}, {"III", rep.step3}};
    j["probe_spread"] = rep.max_spread;
    j["involution_defect"] = rep.max_involution;
    return j;
}

nlohmann::json solve_json(const SolveReport& r, const FamilySpec& fam, double c) {
    nlohmann::json j;
    j["schema"] = "v1";
    j["surface"] = fam.name;
    j["c"] = c;
    j["lambda"] = r.lambda;
    j["iterations"] = r.iterations;
    j["residual_history"] = r.residual_history;
    j["su2_residuals"] = r.residual;
    j["converged"] = r.converged;
    j["reflection_rep"] = rep_json(r.rep);
    return j;
}

} // namespace cmcforge
