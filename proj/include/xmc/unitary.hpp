/**
 * Unitary matrices with the normalized trace: the de la Harpe-Skandalis
 * determinant on sampled paths, its class modulo (1/n)Z, membership in SU,
 * exponential length, and the R x SU splitting of unitary paths.
 */
#ifndef XMC_UNITARY_HPP
#define XMC_UNITARY_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace xmc {

using Mat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

struct UnitaryTolerances {
    double unitarity = 1e-10;  // ||U*U - I||
    double equality = 1e-9;    // operator-norm comparisons
    double branch = 1e-6;      // eigenvalue distance from -1 that triggers a rotation
};

/// Largest singular value.
double op_norm(const Mat& a);
bool is_unitary(const Mat& u, double tol);
bool is_self_adjoint(const Mat& h, double tol);
/// Throws InputError naming the caller.
void require_unitary(const Mat& u, double tol, const std::string& who);
void require_self_adjoint(const Mat& h, double tol, const std::string& who);

/// e^{ih} for self-adjoint h.
Mat exp_i(const Mat& h);
/// Normalized trace.
cplx tau(const Mat& a);

/// L with e^L = u; the principal log of e^{-i shift} u plus i shift, shift = 0 unless the spectrum is near -1.
struct UnitaryLog {
    Mat log;
    double shift = 0;
};

UnitaryLog log_unitary(const Mat& u, const UnitaryTolerances& tol = {});

/// Samples (t_k, U_k), geodesic in log between consecutive samples.
struct UnitaryPath {
    std::vector<double> ts;
    std::vector<Mat> mats;
};

/// Shape, monotone times in [0,1], unitary samples, gamma(0) = I, ||U_{k+1} - U_k|| < 1.
void validate_path(const UnitaryPath& p, const UnitaryTolerances& tol = {});
UnitaryPath pointwise_product(const UnitaryPath& a, const UnitaryPath& b);

struct TraceValue {
    double value = 0;
    double error = 0;  // Richardson estimate; 0 for segment-exact evaluation
};

/// (1/2 pi i) int tau(gamma^-1 gamma'): segment-exact, or composite Simpson with quad_panels per segment.
TraceValue dlhs_path(const UnitaryPath& p, int quad_panels = 0, const UnitaryTolerances& tol = {});

struct CircleValue {
    double value = 0;                            // in [0, 1/n)
    int n = 1;
    std::optional<std::pair<long long, long long>> snap;  // value = p/q when recognized
    double shift = 0;                            // rotation used by the logarithm
    double path_check = 0;                       // circular gap to a randomized multi-segment path
};

/// Signed distance on R/(1/n)Z, in [-1/(2n), 1/(2n)).
double circle_distance(double a, double b, int n);

CircleValue dlhs_delta(const Mat& u, std::uint64_t seed = 0, const UnitaryTolerances& tol = {});

struct SuCertificate {
    std::vector<Mat> h;  // u = e^{ih_1} e^{ih_2}..., tau(h_j) = 0
    double residual = 0;
    double trace_residual = 0;
};

struct SuMembership {
    bool member = false;
    cplx det;
    std::optional<SuCertificate> certificate;
};

SuMembership su_tau_member(const Mat& u, const UnitaryTolerances& tol = {});

struct ExpLength {
    double value = 0;
    bool exact = false;  // false: upper bound from the certificate
};

/// Throws InputError outside SU.
ExpLength el_tau(const Mat& u, const UnitaryTolerances& tol = {});
ExpLength d_tau(const Mat& u, const Mat& v, const UnitaryTolerances& tol = {});

/// f(t) = e^{2 pi i h(t)} g(t) with h(0) = 0 and det g = 1.
struct PathDecomposition {
    std::vector<double> ts;
    std::vector<double> h;
    std::vector<Mat> g;
    double det_residual = 0;
    double reconstruction = 0;
};

PathDecomposition decompose_path(const UnitaryPath& f, const UnitaryTolerances& tol = {});

// Random matrices, all from an explicit generator.
Mat random_unitary(int n, std::mt19937_64& rng);
Mat random_special_unitary(int n, std::mt19937_64& rng);
/// Self-adjoint with operator norm exactly r.
Mat random_self_adjoint(int n, double r, std::mt19937_64& rng, bool traceless = false);
/// Independent stream for trial k of check c under a master seed.
std::mt19937_64 trial_rng(std::uint64_t seed, int check, long long trial);

struct ExpInequalityReport {
    long long trials = 0;
    double min_upper_slack = 0;  // ||h1 - h2|| - ||e^{ih1} - e^{ih2}||
    double min_lower_slack = 0;  // ||e^{ih1} - e^{ih2}|| - ||h1 - h2|| (1 - (||h1|| + ||h2||)/2)
    long long violations = 0;    // slack below -1e-9
};

ExpInequalityReport check_exp_inequalities(int n, long long trials, std::uint64_t seed);

/// One property run: worst deviation against a threshold.
struct PropertyCheck {
    std::string name;
    long long trials = 0;
    double worst = 0;
    double threshold = 0;
    long long violations = 0;
    bool passed() const { return violations == 0; }
};

struct UnitaryCheckOptions {
    long long exp_pairs = 10000;
    long long hom_pairs = 1000;
    long long su_samples = 1000;
    long long sandwich_pairs = 1000;
    long long conj_samples = 1000;
    int max_n = 6;
    double epsilon = 1.0;  // ball radius for the sandwich
};

/// Lemma 2.2 both ways, Delta homomorphism, SU membership vs Delta = 0, d_tau sandwich, el_tau conjugation.
std::vector<PropertyCheck> unitary_property_checks(std::uint64_t seed, const UnitaryCheckOptions& opt = {});

}  // namespace xmc

#endif
