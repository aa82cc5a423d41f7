#pragma once

#include <array>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "cmcforge/algebra.hpp"
#include "json.hpp"

namespace cmcforge {

using Rational = boost::rational<long long>;

struct Inadmissible : std::invalid_argument { using std::invalid_argument::invalid_argument; };
struct BranchFailure : std::runtime_error { using std::runtime_error::runtime_error; };

std::string to_string(const Rational& r);
double to_double(const Rational& r);

// Open interval (lo, hi).
struct Interval {
    Rational lo, hi;
    bool contains(double c) const { return to_double(lo) < c && c < to_double(hi); }
};

bool admissible(int m, int n);
void require_admissible(int m, int n);

double lambda_of_c(double c);
// Continuous branch with cos(m theta) = cos(pi lambda) and theta(0) = pi/m, tracked from c = 0.
double theta_of_c(int m, double c);
// The branch in closed form: theta = pi lambda / m.
double theta_closed(int m, double c);
double alpha_of_c(int m, int n, double c);

struct CRange {
    Interval neg, pos;
    Rational lambda_neg, lambda_pos; // lambda at the outer endpoints
};
CRange c_range(int m, int n);

struct JmIntervals {
    Interval zero_pos, zero_neg;
    std::vector<Interval> k; // k = 1..kmax
};
JmIntervals jm_intervals(int n, int kmax);
// cos(pi lambda) + 1 < 2 sin^2(pi/n)
bool jm_criterion(int n, double c);

struct ExistsResult {
    bool exists{false};
    bool minimal{false};        // c = 0
    bool beyond_theorem{false}; // |alpha| < 1 outside the certified range
    bool undetermined{false};   // branch left (0, pi)
};
ExistsResult exists_cmc(int m, int n, double c);

// Number of ends 4n / (4 - (m-2)(n-2)).
int genus0_ends(int m, int n);
double total_abs_curvature(int N, double c);
// TA / pi at a rational lambda.
Rational total_abs_curvature_over_pi(int N, const Rational& lambda);

struct SigmaTriple {
    Mat2C s1, s2, s3;
    double alpha0, beta0;
};
SigmaTriple sigma_triple(int m, int n);

struct TableRow {
    std::string name;
    int ends, m, n;
    CRange range;
    Rational ta_lo, ta_mid, ta_hi; // TA / pi
};
std::vector<TableRow> platonic_table();
std::string table_text(const std::vector<TableRow>& rows);
nlohmann::json table_json(const std::vector<TableRow>& rows);
std::string interval_text(const Interval& i);

} // namespace cmcforge
