#include "cmcforge/genus0.hpp"

#include <cmath>
#include <sstream>

namespace cmcforge {

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

bool admissible(int m, int n) { return m >= 2 && n >= 3 && 2 * (m + n) > m * n; }

void require_admissible(int m, int n) {
    if (!admissible(m, n)) throw Inadmissible("(m, n) must satisfy m >= 2, n >= 3, 1/m + 1/n > 1/2");
}

double lambda_of_c(double c) {
    if (c >= 0.25) throw std::domain_error("lambda_of_c: c must be < 1/4");
    return std::sqrt(1.0 - 4.0 * c);
}

double theta_closed(int m, double c) { return kPi * lambda_of_c(c) / m; }

double theta_of_c(int m, double c) {
    lambda_of_c(c); // domain check
    double theta = kPi / m;
    if (c != 0.0) {
        int steps = static_cast<int>(std::ceil(std::abs(c) / std::min(1e-3, std::abs(c) / 50)));
        double dc = c / steps, cc = 0;
        for (int i = 0; i < steps; ++i) {
            // predictor from d(m theta)/dc = d(pi lambda)/dc, then snap to the nearest solution
            double lam = lambda_of_c(cc);
            double pred = theta - 2 * kPi / (m * lam) * dc;
            cc = (i + 1 == steps) ? c : cc + dc;
            double base = std::acos(std::clamp(std::cos(kPi * lambda_of_c(cc)), -1.0, 1.0));
            double best = theta, dist = 1e300;
            for (int k = -2; k <= 2 * m + 2; ++k)
                for (double sg : {1.0, -1.0}) {
                    double cand = (sg * base + 2 * kPi * k) / m;
                    if (std::abs(cand - pred) < dist) {
                        dist = std::abs(cand - pred);
                        best = cand;
                    }
                }
            theta = best;
        }
    }
    if (!(theta > 0 && theta < kPi)) throw BranchFailure("theta left (0, pi)");
    return theta;
}

double alpha_of_c(int m, int n, double c) {
    require_admissible(m, n);
    return std::cos(theta_of_c(m, c)) / std::sin(kPi / n);
}

CRange c_range(int m, int n) {
    require_admissible(m, n);
    Rational M(m), mn(m, n);
    Rational lneg = Rational(2) - M / 2 + mn, lpos = M / 2 - mn;
    CRange r;
    r.lambda_neg = lneg;
    r.lambda_pos = lpos;
    r.neg = {-(lneg * lneg - 1) / 4, 0};
    r.pos = {0, (1 - lpos * lpos) / 4};
    return r;
}

JmIntervals jm_intervals(int n, int kmax) {
    if (n < 3) throw Inadmissible("jm_intervals: n >= 3");
    Rational N(n);
    JmIntervals j;
    j.zero_pos = {0, (N - 1) / (N * N)};
    j.zero_neg = {-(N + 1) / (N * N), 0};
    Rational inv(1, n);
    for (int k = 1; k <= kmax; ++k) {
        Rational K(k);
        j.k.push_back({-(K + inv) * (K + 1 + inv), -(K - inv) * (K + 1 - inv)});
    }
    return j;
}

bool jm_criterion(int n, double c) {
    double s = std::sin(kPi / n);
    return std::cos(kPi * lambda_of_c(c)) + 1 < 2 * s * s;
}

ExistsResult exists_cmc(int m, int n, double c) {
    require_admissible(m, n);
    ExistsResult r;
    if (c == 0.0) {
        r.exists = r.minimal = true;
        return r;
    }
    // for m = 2, |alpha| < 1 is exactly the criterion, and it needs no branch
    if (m == 2) {
        r.exists = jm_criterion(n, c);
        return r;
    }
    double a;
    try {
        a = alpha_of_c(m, n, c);
    } catch (const BranchFailure&) {
        r.undetermined = true;
        return r;
    }
    r.exists = std::abs(a) < 1;
    if (r.exists) {
        auto cr = c_range(m, n);
        r.beyond_theorem = !(cr.neg.contains(c) || cr.pos.contains(c));
    }
    return r;
}

int genus0_ends(int m, int n) {
    require_admissible(m, n);
    return 4 * n / (4 - (m - 2) * (n - 2));
}

double total_abs_curvature(int N, double c) {
    return 2 * kPi * (N * (lambda_of_c(c) - 1) + 2 * N - 2);
}

Rational total_abs_curvature_over_pi(int N, const Rational& lambda) {
    return 2 * (N * (lambda - 1) + 2 * N - 2);
}

SigmaTriple sigma_triple(int m, int n) {
    SigmaTriple t;
    double a = kPi / n;
    t.alpha0 = std::cos(kPi / m) / std::sin(a);
    if (t.alpha0 * t.alpha0 > 1) throw Inadmissible("sigma_triple: alpha0^2 > 1");
    t.beta0 = std::sqrt(1 - t.alpha0 * t.alpha0);
    cplx e = std::exp(I_UNIT * a);
    t.s1 = Mat2C::identity();
    t.s2 = Mat2C::diag(e, std::conj(e));
    t.s3 = Mat2C{t.alpha0 * e, t.beta0, t.beta0, -t.alpha0 * std::conj(e)} * I_UNIT;
    return t;
}

std::vector<TableRow> platonic_table() {
    const std::array<std::tuple<const char*, int, int>, 5> solids{
        {{"Tetrahedra", 3, 3}, {"Hexahedra", 3, 4}, {"Octahedra", 4, 3}, {"Dodecahedra", 3, 5}, {"Icosahedra", 5, 3}}};
    std::vector<TableRow> rows;
    for (auto [name, m, n] : solids) {
        TableRow r{name, genus0_ends(m, n), m, n, c_range(m, n), 0, 0, 0};
        r.ta_lo = total_abs_curvature_over_pi(r.ends, r.range.lambda_pos);
        r.ta_mid = total_abs_curvature_over_pi(r.ends, 1);
        r.ta_hi = total_abs_curvature_over_pi(r.ends, r.range.lambda_neg);
        rows.push_back(r);
    }
    return rows;
}

std::string interval_text(const Interval& i) { return "(" + to_string(i.lo) + ", " + to_string(i.hi) + ")"; }

namespace {
std::string pi_text(const Rational& r) { return to_string(r) + "pi"; }
} // namespace

std::string table_text(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-12s %4s %2s %2s  %-32s %s\n", "symmetry", "ends", "m", "n", "range of c",
                  "range of TA");
    os << buf;
    for (const auto& r : rows) {
        std::string c = interval_text(r.range.neg) + " U " + interval_text(r.range.pos);
        std::string ta = "(" + pi_text(r.ta_lo) + ", " + pi_text(r.ta_mid) + ") U (" + pi_text(r.ta_mid) + ", " +
                         pi_text(r.ta_hi) + ")";
        std::snprintf(buf, sizeof buf, "%-12s %4d %2d %2d  %-32s %s\n", r.name.c_str(), r.ends, r.m, r.n, c.c_str(),
                      ta.c_str());
        os << buf;
    }
    return os.str();
}

nlohmann::json table_json(const std::vector<TableRow>& rows) {
    nlohmann::json a = nlohmann::json::array();
    auto iv = [](const Interval& i) { return nlohmann::json::array({to_string(i.lo), to_string(i.hi)}); };
    for (const auto& r : rows)
        a.push_back({{"symmetry", r.name},
                     {"ends", r.ends},
                     {"m", r.m},
                     {"n", r.n},
                     {"c_neg", iv(r.range.neg)},
                     {"c_pos", iv(r.range.pos)},
                     {"ta_over_pi", {to_string(r.ta_lo), to_string(r.ta_mid), to_string(r.ta_hi)}}});
    return a;
}

} // namespace cmcforge
