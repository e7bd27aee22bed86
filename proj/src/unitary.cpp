#include "xmc/unitary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "xmc/errors.hpp"

namespace xmc {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0.0, 1.0);

Mat identity(int n) { return Mat::Identity(n, n); }

}  // namespace

double op_norm(const Mat& a)
{
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues()(0);
}

bool is_unitary(const Mat& u, double tol)
{
    return u.rows() == u.cols() && u.rows() > 0 && op_norm(u.adjoint() * u - identity(u.rows())) <= tol;
}

bool is_self_adjoint(const Mat& h, double tol)
{
    return h.rows() == h.cols() && h.rows() > 0 && op_norm(h - h.adjoint()) <= tol;
}

void require_unitary(const Mat& u, double tol, const std::string& who)
{
    if (!is_unitary(u, tol)) throw InputError(who + ": matrix is not unitary within tolerance");
}

void require_self_adjoint(const Mat& h, double tol, const std::string& who)
{
    if (!is_self_adjoint(h, tol)) throw InputError(who + ": matrix is not self-adjoint within tolerance");
}

Mat exp_i(const Mat& h)
{
    Eigen::SelfAdjointEigenSolver<Mat> es((h + h.adjoint()) / 2.0);
    Eigen::VectorXcd d(h.rows());
    for (int j = 0; j < h.rows(); ++j) d(j) = std::exp(kI * es.eigenvalues()(j));
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

cplx tau(const Mat& a) { return a.trace() / static_cast<double>(a.rows()); }

UnitaryLog log_unitary(const Mat& u, const UnitaryTolerances& tol)
{
    const int n = static_cast<int>(u.rows());
    Eigen::ComplexSchur<Mat> cs(u);
    const Mat& T = cs.matrixT();
    std::vector<double> arg(n);
    double nearest = 2;
    for (int j = 0; j < n; ++j) {
        arg[j] = std::arg(T(j, j));
        nearest = std::min(nearest, std::abs(T(j, j) + 1.0));
    }
    UnitaryLog out;
    if (nearest < tol.branch) {
        // Move the cut into the middle of the widest spectral gap.
        std::vector<double> s(arg);
        std::sort(s.begin(), s.end());
        double best = -1, mid = 0;
        for (int j = 0; j < n; ++j) {
            double a = s[j], b = j + 1 < n ? s[j + 1] : s[0] + 2 * kPi;
            if (b - a > best) {
                best = b - a;
                mid = (a + b) / 2;
            }
        }
        if (best / 2 < tol.branch) throw NumericError("log_unitary: spectrum surrounds -1, no branch cut available");
        out.shift = std::remainder(mid - kPi, 2 * kPi);
    }
    Eigen::VectorXcd d(n);
    for (int j = 0; j < n; ++j) {
        double a = std::remainder(arg[j] - out.shift, 2 * kPi);
        d(j) = kI * (a + out.shift);
    }
    out.log = cs.matrixU() * d.asDiagonal() * cs.matrixU().adjoint();
    return out;
}

void validate_path(const UnitaryPath& p, const UnitaryTolerances& tol)
{
    if (p.ts.empty() || p.ts.size() != p.mats.size()) throw InputError("path: need equally many times and matrices");
    if (p.ts.front() != 0.0) throw InputError("path: first sample must be at t = 0");
    const long n = p.mats.front().rows();
    for (size_t k = 0; k < p.ts.size(); ++k) {
        if (p.ts[k] < 0 || p.ts[k] > 1) throw InputError("path: times must lie in [0,1]");
        if (k > 0 && !(p.ts[k] > p.ts[k - 1])) throw InputError("path: times must be strictly increasing");
        if (p.mats[k].rows() != n) throw InputError("path: matrices of different sizes");
        require_unitary(p.mats[k], tol.unitarity, "path sample " + std::to_string(k));
    }
    if (op_norm(p.mats.front() - identity(n)) > tol.equality) throw InputError("path: gamma(0) must be the identity");
    for (size_t k = 0; k + 1 < p.ts.size(); ++k) {
        double step = op_norm(p.mats[k + 1] - p.mats[k]);
        if (step >= 1) {
            std::ostringstream os;
            os << "path: ||U(t" << k + 1 << ") - U(t" << k << ")|| = " << step
               << " >= 1, refine the sampling between t = " << p.ts[k] << " and t = " << p.ts[k + 1];
            throw InputError(os.str());
        }
    }
}

UnitaryPath pointwise_product(const UnitaryPath& a, const UnitaryPath& b)
{
    if (a.ts != b.ts) throw InputError("pointwise_product: paths sampled at different times");
    UnitaryPath p{a.ts, {}};
    for (size_t k = 0; k < a.ts.size(); ++k) p.mats.push_back(a.mats[k] * b.mats[k]);
    return p;
}

namespace {

double segment_value(const Mat& a, const Mat& b)
{
    Mat l = log_unitary(a.adjoint() * b).log;
    return l.trace().imag() / (2 * kPi * static_cast<double>(a.rows()));
}

double simpson_segment(const Mat& u0, const Mat& l, double dt, int panels)
{
    // Integrand tau(gamma^-1 gamma') / (2 pi i) along gamma(s) = u0 e^{s l}, by central differences.
    const double h = 1e-5;
    const int n = static_cast<int>(u0.rows());
    auto gamma = [&](double s) { return Mat(u0 * exp_i(-kI * s * l)); };
    auto f = [&](double s) {
        Mat d = (gamma(s + h) - gamma(s - h)) / (2 * h);
        return (gamma(s).adjoint() * d).trace().imag() / (2 * kPi * n);
    };
    double sum = f(0) + f(1);
    for (int j = 1; j < panels; ++j) sum += (j % 2 ? 4 : 2) * f(static_cast<double>(j) / panels);
    (void)dt;
    return sum / (3.0 * panels);
}

}  // namespace

TraceValue dlhs_path(const UnitaryPath& p, int quad_panels, const UnitaryTolerances& tol)
{
    validate_path(p, tol);
    TraceValue out;
    if (quad_panels <= 0) {
        for (size_t k = 0; k + 1 < p.mats.size(); ++k) out.value += segment_value(p.mats[k], p.mats[k + 1]);
        return out;
    }
    int panels = quad_panels + (quad_panels % 2);
    double fine = 0, coarse = 0;
    for (size_t k = 0; k + 1 < p.mats.size(); ++k) {
        Mat l = log_unitary(p.mats[k].adjoint() * p.mats[k + 1]).log;
        double dt = p.ts[k + 1] - p.ts[k];
        fine += simpson_segment(p.mats[k], l, dt, 2 * panels);
        coarse += simpson_segment(p.mats[k], l, dt, panels);
    }
    out.value = fine + (fine - coarse) / 15.0;
    out.error = std::abs(fine - coarse) / 15.0;
    return out;
}

double circle_distance(double a, double b, int n)
{
    double d = (a - b) * n;
    d -= std::floor(d + 0.5);
    return d / n;
}

namespace {

double reduce(double v, int n)
{
    double r = v - std::floor(v * n) / n;
    if (r >= 1.0 / n || r < 0) r = 0;
    return r;
}

std::optional<std::pair<long long, long long>> snap_rational(double v, double tol)
{
    for (long long q = 1; q <= 100; ++q) {
        long long p = std::llround(v * q);
        if (std::abs(v - static_cast<double>(p) / q) <= tol) {
            long long g = std::gcd(p, q);
            return std::make_pair(p / (g ? g : 1), q / (g ? g : 1));
        }
    }
    return std::nullopt;
}

}  // namespace

CircleValue dlhs_delta(const Mat& u, std::uint64_t seed, const UnitaryTolerances& tol)
{
    require_unitary(u, tol.unitarity, "dlhs_delta");
    const int n = static_cast<int>(u.rows());
    UnitaryLog lg = log_unitary(u, tol);
    double direct = lg.log.trace().imag() / (2 * kPi * n);
    CircleValue out;
    out.n = n;
    out.shift = lg.shift;
    out.value = reduce(direct, n);
    if (std::abs(circle_distance(out.value, 0, n)) <= tol.equality) out.value = 0;
    out.snap = snap_rational(out.value, tol.equality);

    // Independent route: a perturbed multi-segment path from I to u.
    std::mt19937_64 rng = trial_rng(seed, 99, 0);
    const int segs = 8;
    UnitaryPath p;
    for (int j = 0; j <= segs; ++j) {
        p.ts.push_back(static_cast<double>(j) / segs);
        if (j == 0) {
            p.mats.push_back(identity(n));
        } else if (j == segs) {
            p.mats.push_back(u);
        } else {
            Mat base = exp_i(-kI * lg.log * (static_cast<double>(j) / segs));
            p.mats.push_back(base * exp_i(random_self_adjoint(n, 0.05, rng)));
        }
    }
    double along = dlhs_path(p, 0, tol).value;
    out.path_check = std::abs(circle_distance(along, direct, n));
    return out;
}

SuMembership su_tau_member(const Mat& u, const UnitaryTolerances& tol)
{
    require_unitary(u, tol.unitarity, "su_tau_member");
    const int n = static_cast<int>(u.rows());
    SuMembership out;
    out.det = u.determinant();
    if (std::abs(std::abs(out.det) - 1.0) > tol.equality * n) throw InputError("su_tau_member: |det u| != 1");
    out.member = std::abs(out.det - 1.0) <= tol.equality * n;
    if (!out.member) return out;
    UnitaryLog lg = log_unitary(u, tol);
    Mat h = -kI * lg.log;
    h = (h + h.adjoint()) / 2.0;
    long long k = std::llround(h.trace().real() / (2 * kPi));
    SuCertificate cert;
    if (k == 0 && op_norm(h) < kPi - tol.branch) {
        cert.h.push_back(h - tau(h).real() * identity(n));
    } else {
        cert.h.push_back(h - (2 * kPi * k / n) * identity(n));
        Mat d = Mat::Zero(n, n);
        for (int j = 0; j < n; ++j) {
            double a = 2 * kPi * k / n;
            if (j < std::llabs(k)) a -= 2 * kPi * (k > 0 ? 1 : -1);
            d(j, j) = a;
        }
        cert.h.push_back(d);
    }
    Mat r = identity(n);
    for (const auto& hj : cert.h) {
        r = r * exp_i(hj);
        cert.trace_residual = std::max(cert.trace_residual, std::abs(tau(hj)));
    }
    cert.residual = op_norm(r - u);
    if (cert.residual > 100 * tol.equality) throw NumericError("su_tau_member: certificate does not recompose");
    out.certificate = cert;
    return out;
}

ExpLength el_tau(const Mat& u, const UnitaryTolerances& tol)
{
    SuMembership m = su_tau_member(u, tol);
    if (!m.member) throw InputError("el_tau: input is not in SU");
    UnitaryLog lg = log_unitary(u, tol);
    double nl = op_norm(lg.log);
    if (lg.shift == 0 && nl < kPi - tol.branch && std::abs(tau(lg.log)) <= tol.equality) return {nl, true};
    double bound = 0;
    for (const auto& h : m.certificate->h) bound += op_norm(h);
    return {bound, false};
}

ExpLength d_tau(const Mat& u, const Mat& v, const UnitaryTolerances& tol)
{
    require_unitary(u, tol.unitarity, "d_tau");
    require_unitary(v, tol.unitarity, "d_tau");
    return el_tau(u.adjoint() * v, tol);
}

PathDecomposition decompose_path(const UnitaryPath& f, const UnitaryTolerances& tol)
{
    validate_path(f, tol);
    const int n = static_cast<int>(f.mats.front().rows());
    PathDecomposition out;
    out.ts = f.ts;
    double h = 0;
    for (size_t k = 0; k < f.ts.size(); ++k) {
        if (k > 0) h += segment_value(f.mats[k - 1], f.mats[k]);
        out.h.push_back(h);
        Mat g = std::exp(-2 * kPi * kI * h) * f.mats[k];
        out.det_residual = std::max(out.det_residual, std::abs(g.determinant() - 1.0));
        out.reconstruction = std::max(out.reconstruction, op_norm(f.mats[k] - std::exp(2 * kPi * kI * h) * g));
        out.g.push_back(g);
    }
    return out;
}

Mat random_unitary(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    Mat a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    }
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        cplx d = r(j, j);
        q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : cplx(1));
    }
    return q;
}

Mat random_special_unitary(int n, std::mt19937_64& rng)
{
    Mat u = random_unitary(n, rng);
    cplx d = u.determinant();
    return u * std::exp(-kI * std::arg(d) / static_cast<double>(n));
}

Mat random_self_adjoint(int n, double r, std::mt19937_64& rng, bool traceless)
{
    std::normal_distribution<double> nd;
    Mat a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    }
    Mat h = (a + a.adjoint()) / 2.0;
    if (traceless) h -= tau(h).real() * identity(n);
    double norm = op_norm(h);
    return norm > 0 ? Mat(h * (r / norm)) : Mat(Mat::Zero(n, n));
}

std::mt19937_64 trial_rng(std::uint64_t seed, int check, long long trial)
{
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(check), static_cast<std::uint32_t>(trial),
                     static_cast<std::uint32_t>(static_cast<std::uint64_t>(trial) >> 32)};
    return std::mt19937_64(ss);
}

ExpInequalityReport check_exp_inequalities(int n, long long trials, std::uint64_t seed)
{
    if (trials < 1 || n < 1) throw InputError("check_exp_inequalities: need n >= 1 and trials >= 1");
    ExpInequalityReport rep;
    rep.trials = trials;
    rep.min_upper_slack = rep.min_lower_slack = INFINITY;
    for (long long t = 0; t < trials; ++t) {
        std::mt19937_64 rng = trial_rng(seed, 1, t);
        std::uniform_real_distribution<double> ud(0, 1);
        Mat h1 = random_self_adjoint(n, ud(rng), rng);
        Mat h2 = t == 0 ? h1 : random_self_adjoint(n, ud(rng), rng);
        double dh = op_norm(h1 - h2), de = op_norm(exp_i(h1) - exp_i(h2));
        double upper = dh - de;
        double lower = de - dh * (1 - (op_norm(h1) + op_norm(h2)) / 2);
        rep.min_upper_slack = std::min(rep.min_upper_slack, upper);
        rep.min_lower_slack = std::min(rep.min_lower_slack, lower);
        if (upper < -1e-9 || lower < -1e-9) ++rep.violations;
    }
    return rep;
}

std::vector<PropertyCheck> unitary_property_checks(std::uint64_t seed, const UnitaryCheckOptions& opt)
{
    std::vector<PropertyCheck> out;
    const int maxn = std::max(opt.max_n, 2);
    auto dim = [&](long long t, int lo) { return lo + static_cast<int>(t % (maxn - lo + 1)); };

    PropertyCheck exp{"exp-inequalities", opt.exp_pairs, -INFINITY, 1e-9, 0};
    for (int n = 1; n <= maxn; ++n) {
        long long share = opt.exp_pairs / maxn + (n <= opt.exp_pairs % maxn ? 1 : 0);
        if (share == 0) continue;
        ExpInequalityReport r = check_exp_inequalities(n, share, seed + n);
        exp.worst = std::max(exp.worst, -std::min(r.min_upper_slack, r.min_lower_slack));
        exp.violations += r.violations;
    }
    out.push_back(exp);

    PropertyCheck hom{"delta-homomorphism", opt.hom_pairs, 0, 1e-8, 0};
    for (long long t = 0; t < opt.hom_pairs; ++t) {
        std::mt19937_64 rng = trial_rng(seed, 2, t);
        int n = dim(t, 1);
        Mat u = random_unitary(n, rng), v = random_unitary(n, rng);
        double d = std::abs(circle_distance(dlhs_delta(u * v, seed).value,
                                            dlhs_delta(u, seed).value + dlhs_delta(v, seed).value, n));
        hom.worst = std::max(hom.worst, d);
        if (d > hom.threshold) ++hom.violations;
    }
    out.push_back(hom);

    PropertyCheck su{"su-iff-delta-zero", opt.su_samples, 0, 1e-9, 0};
    for (long long t = 0; t < opt.su_samples; ++t) {
        std::mt19937_64 rng = trial_rng(seed, 3, t);
        int n = dim(t / 3, 1);
        Mat u;
        if (t % 3 == 0) {
            u = random_unitary(n, rng);
        } else if (t % 3 == 1) {
            u = random_special_unitary(n, rng);
        } else {
            int j = static_cast<int>(rng() % n);
            u = random_special_unitary(n, rng) * std::exp(2 * kPi * kI * static_cast<double>(j) / static_cast<double>(n));
        }
        SuMembership m = su_tau_member(u);
        CircleValue c = dlhs_delta(u, seed);
        bool zero = std::abs(circle_distance(c.value, 0, n)) <= 1e-8;
        double res = m.certificate ? std::max(m.certificate->residual, m.certificate->trace_residual) : 0;
        su.worst = std::max(su.worst, res);
        if (m.member != zero || res > su.threshold) ++su.violations;
    }
    out.push_back(su);

    PropertyCheck sw{"d-tau-sandwich", opt.sandwich_pairs, -INFINITY, 1e-9, 0};
    for (long long t = 0; t < opt.sandwich_pairs; ++t) {
        std::mt19937_64 rng = trial_rng(seed, 4, t);
        std::uniform_real_distribution<double> ud(0, opt.epsilon);
        int n = dim(t, 2);
        Mat hu = random_self_adjoint(n, ud(rng), rng, true), hv = random_self_adjoint(n, ud(rng), rng, true);
        Mat u = exp_i(hu), v = exp_i(hv);
        ExpLength d = d_tau(u, v);
        double nuv = op_norm(u - v), nlog = op_norm(hu - hv);
        double defect = std::max({(1 - opt.epsilon) * nlog - nuv, nuv - d.value, d.value - kPi / 2 * nuv,
                                  nuv - nlog});
        sw.worst = std::max(sw.worst, defect);
        if (!d.exact || defect > sw.threshold) ++sw.violations;
    }
    out.push_back(sw);

    PropertyCheck conj{"el-tau-conjugation", opt.conj_samples, 0, 1e-9, 0};
    for (long long t = 0; t < opt.conj_samples; ++t) {
        std::mt19937_64 rng = trial_rng(seed, 5, t);
        std::uniform_real_distribution<double> ud(0, 3.0);
        int n = dim(t, 2);
        Mat u = exp_i(random_self_adjoint(n, ud(rng), rng, true));
        Mat v = random_unitary(n, rng);
        ExpLength a = el_tau(u), b = el_tau(v * u * v.adjoint());
        double d = std::abs(a.value - b.value);
        conj.worst = std::max(conj.worst, d);
        if (!a.exact || !b.exact || d > conj.threshold) ++conj.violations;
    }
    out.push_back(conj);
    return out;
}

}  // namespace xmc
