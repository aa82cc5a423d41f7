#pragma once

#include <memory>
#include <vector>

#include "cmcforge/wdata.hpp"
#include "json.hpp"

namespace cmcforge {

struct AccuracyError : std::runtime_error { using std::runtime_error::runtime_error; };

// Which side the coefficient acts on.
//   Left:  dF =  c K alpha K^{-1} F dz
//   Right: dF = -c F K alpha K^{-1} dz   (duals of Left solutions)
enum class Side { Left, Right };

struct Sample {
    cplx z;
    Mat2C F;
};

struct IntegrationStats {
    int accepted{0};
    int rejected{0};
    int evals{0};
};

struct NullCurveSolution {
    std::shared_ptr<const WeierstrassData> data;
    double c{0};
    PolyPath path;
    std::vector<Sample> samples; // every accepted step, waypoints included
    double tol{1e-10};
    IntegrationStats stats;
    Side side{Side::Left};
    Mat2C K; // constant gauge of the coefficient

    const Mat2C& end() const { return samples.back().F; }
    const Mat2C& start() const { return samples.front().F; }
    // F at a sampled point (a waypoint or accepted step).
    Mat2C at(cplx z) const;
};

inline constexpr double kDefaultOdeTol = 1e-10;
inline constexpr double kMinClearance = 1e-3;

NullCurveSolution integrate(const WeierstrassData& d, double c, const PolyPath& path,
                            const Mat2C& F0 = Mat2C::identity(), double tol = kDefaultOdeTol);
// Same, sharing an existing data handle.
NullCurveSolution integrate(std::shared_ptr<const WeierstrassData> d, double c, const PolyPath& path,
                            const Mat2C& F0 = Mat2C::identity(), double tol = kDefaultOdeTol);

// F at the end of a straight segment, starting from F0 at a.
Mat2C propagate(const WeierstrassData& d, double c, cplx a, cplx b, const Mat2C& F0,
                double tol = kDefaultOdeTol, IntegrationStats* stats = nullptr);

// Fixed-step classical RK4 with n steps per segment; independent oracle for tests.
Mat2C integrate_rk4(const WeierstrassData& d, double c, const PolyPath& path, int steps_per_segment);

struct MonodromyRecord {
    std::string loop;
    Mat2C rho;
    int sign_flag{1}; // PSL lift is not resolved; +1 means "as integrated"
    double residual_constancy{0}; // |rho(tol) - rho(tol/10)|
};

// Loop based at z0 (joined to z0 by straight segments when it starts elsewhere).
PolyPath based_loop(const WeierstrassData& d, const PolyPath& loop);

MonodromyRecord monodromy(const WeierstrassData& d, double c, const std::string& loop,
                          double tol = kDefaultOdeTol);
MonodromyRecord monodromy(const WeierstrassData& d, double c, const PolyPath& loop,
                          double tol = kDefaultOdeTol);
// Contour integral of alpha around the loop: d rho/dc at c = 0.
Mat2C monodromy_c_derivative(const WeierstrassData& d, const std::string& loop, double tol = 1e-12);
Mat2C monodromy_c_derivative(const WeierstrassData& d, const PolyPath& loop, double tol = 1e-12);

// rho_hat = F(z)^{-1} sigma conj(F(mu(z))) from lifts reaching z and mu(z).
Mat2C reflection_matrix(const Mat2C& Fz, const Mat2C& Fmz, const Reflection& r);
// Same with both lifts integrated from z0 through the first probe of r.
Mat2C reflection_matrix(const WeierstrassData& d, double c, const Reflection& r, cplx z,
                        double tol = kDefaultOdeTol);

struct ReflectionEstimate {
    Mat2C rho_hat;
    double spread{0};     // max deviation across probes
    double involution{0}; // |rho_hat conj(rho_hat) - I|
    bool retried{false};
};
// Evaluates rho_hat at every probe of r; one retry at tol/10 when they disagree by more than 1e-8.
ReflectionEstimate reflection_rep(const WeierstrassData& d, double c, const Reflection& r,
                                  const Mat2C& F0 = Mat2C::identity(), double tol = kDefaultOdeTol);

// Taylor coefficients F_0..F_{n-1} of the lift at a sampled point.
std::vector<Mat2C> lift_jet(const NullCurveSolution& s, cplx z, std::size_t n);
std::vector<Mat2C> lift_jet(const WeierstrassData& d, double c, Side side, const Mat2C& K,
                            const Mat2C& Fz, cplx z, std::size_t n);

// Secondary Gauss map from F^{-1}dF, and its Taylor series (first four coefficients).
ExtComplex secondary_gauss(const NullCurveSolution& s, cplx z);
Series secondary_gauss_series(const WeierstrassData& d, double c, Side side, const Mat2C& K,
                              const Mat2C& Fz, cplx z, std::size_t n = 4);
cplx secondary_schwarzian(const NullCurveSolution& s, cplx z);

// dF11/dF21, checked against dF12/dF22.
ExtComplex hyperbolic_gauss(const NullCurveSolution& s, cplx z, double consistency = 1e-7);

NullCurveSolution dualize(const NullCurveSolution& s);
// F a^{-1}: a point of D(G,Q).
NullCurveSolution deform_in_D(const NullCurveSolution& s, const Mat2C& a);

nlohmann::json monodromy_json(const MonodromyRecord& r, double tol);

} // namespace cmcforge
