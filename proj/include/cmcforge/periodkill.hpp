#pragma once

#include <functional>
#include <map>
#include <vector>

#include "cmcforge/nullcurve.hpp"
#include "json.hpp"

namespace cmcforge {

struct OutsideValidity : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoNormalization : std::runtime_error { using std::runtime_error::runtime_error; };
struct SolverFailure : std::runtime_error { using std::runtime_error::runtime_error; };

using Label = std::pair<int, int>;

// rho_hat = [[p, i g1], [i g2, conj p]]
struct RhoParams {
    cplx p;
    double gamma1, gamma2;
};
RhoParams rho_params(const Mat2C& rho_hat);

struct ReflectionRep {
    std::map<Label, Mat2C> rho_hat;
    Mat2C gauge;   // accumulated a: rho_hat -> a^{-1} rho_hat conj(a), lift F -> F a
    cplx xi{1};    // eigenvalue of rho_hat(2,1) with Im > 0
    double beta{0};
    bool step2{false}, step3{false};
    double max_spread{0};      // probe constancy of the raw matrices
    double max_involution{0};  // max |rho_hat conj(rho_hat) - I|

    RhoParams params(Label l) const { return rho_params(rho_hat.at(l)); }
};

// Lift with F(z0) = I along the fixed curve of mu(1,1) through its probes.
NullCurveSolution step1_base(const WeierstrassData& d, double c, double tol = kDefaultOdeTol);

struct Step2Result {
    Mat2C u; // real, det 1
    cplx xi;
};
Step2Result step2_diagonalize(const Mat2C& rho_hat2);
ReflectionRep step3_scale(const ReflectionRep& rep);

// Gauge every matrix by a.
ReflectionRep apply_gauge(const ReflectionRep& rep, const Mat2C& a);

// Raw rho_hat for every catalog reflection (F(z0) = I).
std::map<Label, Mat2C> raw_reflection_matrices(const WeierstrassData& d, double c,
                                               double tol = kDefaultOdeTol, double* spread = nullptr);
// Steps II and III on raw matrices; Step III only when (3,1) is present.
ReflectionRep normalize_matrices(const std::map<Label, Mat2C>& raw);
ReflectionRep normalize_rep(const WeierstrassData& d, double c, double tol = kDefaultOdeTol);

std::vector<double> su2_residual(const ReflectionRep& rep, const std::vector<Label>& labels);

struct FamilySpec {
    std::string name;
    int dim{0};
    std::function<WeierstrassData(const std::vector<double>&)> data;
    std::vector<Label> per_labels;
    std::function<std::vector<double>(const std::vector<double>&)> euclid_period;
};

// lambda -> synthetic(phi(lambda)) with Per(phi(lambda)) = lambda.
FamilySpec synthetic_family();
// Closed-form period of the synthetic data at angle phi.
double synthetic_period(double phi);
double synthetic_phi(double lambda);
// A d = 0 family around a catalog surface.
FamilySpec rigid_family(const std::string& surface);

struct SolveOptions {
    double tol{1e-8};
    int max_iter{20};
    double c_limit{0.2};
    bool force{false};
    double ode_tol{1e-12};
    std::vector<double> lambda0; // initial guess, zeros when empty
};

struct SolveReport {
    std::vector<double> lambda;
    int iterations{0};
    std::vector<double> residual_history;
    std::vector<double> residual;
    ReflectionRep rep;
    bool converged{false};
};

SolveReport solve_lambda(const FamilySpec& fam, double c, const SolveOptions& opt = {});

// rho_hat(w1) conj(rho_hat(w2)) rho_hat(w3) conj(rho_hat(w4)) ...
Mat2C rho_from_word(const ReflectionRep& rep, const std::vector<Label>& word);
Mat2C rho_from_word(const std::map<Label, Mat2C>& rho_hat, const std::vector<Label>& word);

struct CommutantClass {
    enum class Kind { Point, Geodesic, All } kind{Kind::All};
    Mat2C axis; // for Geodesic
};
CommutantClass classify_commutant(const std::vector<Mat2C>& gens, double tol = 1e-9);
bool is_reducible(const std::vector<Mat2C>& gens, double tol = 1e-9);
// Orientation preserving words rho_hat(a) conj(rho_hat(b)).
std::vector<Mat2C> deck_generators(const ReflectionRep& rep);
bool is_reducible(const ReflectionRep& rep, double tol = 1e-9);
// Monodromy of each catalog loop and its conjugates by the deck words, in the gauge of rep.
// For genus 0 these generate the image of pi_1 when the loops cover one end per symmetry orbit.
std::vector<Mat2C> monodromy_generators(const WeierstrassData& d, double c, const ReflectionRep& rep,
                                        double tol = kDefaultOdeTol);
std::string kind_name(CommutantClass::Kind k);

nlohmann::json rep_json(const ReflectionRep& rep);
nlohmann::json solve_json(const SolveReport& r, const FamilySpec& fam, double c);

} // namespace cmcforge
