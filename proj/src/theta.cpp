#include "thomae/theta.hpp"

#include <cmath>

namespace thomae {

PeriodMatrix::PeriodMatrix(MatrixXc tau) : tau_(std::move(tau)) {
    if (tau_.rows() != tau_.cols() || tau_.rows() < 1) throw Error("period matrix must be square");
    const double asym = (tau_ - tau_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, tau_.cwiseAbs().maxCoeff())) throw Error("period matrix is not symmetric");
    tau_ = 0.5 * (tau_ + tau_.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tau_.imag());
    lambda_min_ = es.eigenvalues().minCoeff();
    if (!(lambda_min_ > 0.0)) throw Error("imaginary part of the period matrix is not positive definite");
    y_inv_ = tau_.imag().inverse();
}

PeriodMatrix random_period_matrix(int g, std::mt19937_64& rng, double min_imag) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Eigen::MatrixXd x(g, g), b(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            x(i, j) = u(rng);
            b(i, j) = u(rng);
        }
    Eigen::MatrixXd re = 0.5 * (x + x.transpose());
    Eigen::MatrixXd im = min_imag * Eigen::MatrixXd::Identity(g, g) + 0.5 * b * b.transpose();
    MatrixXc tau(g, g);
    tau.real() = re;
    tau.imag() = im;
    return PeriodMatrix(tau);
}

Characteristic::Characteristic(int n_, Eigen::VectorXi a_, Eigen::VectorXi b_)
    : n(n_), a(std::move(a_)), b(std::move(b_)) {
    if (a.size() != b.size()) throw Error("characteristic halves differ in length");
    for (int i = 0; i < a.size(); ++i) {
        a(i) = mod(a(i), n);
        b(i) = mod(b(i), n);
    }
}

Characteristic Characteristic::from_point(const LPoint& p) { return {p.n(), p.a(), p.b()}; }

LPoint Characteristic::to_point() const {
    Eigen::VectorXi c(2 * g());
    c << a, b;
    return {n, g(), c};
}

VectorXc Characteristic::torus_point(const PeriodMatrix& tau) const {
    return tau.tau() * a_real().cast<cplx>() + b_real().cast<cplx>();
}

Eigen::VectorXd lattice_coordinates(const VectorXc& z, const PeriodMatrix& tau) {
    const int g = tau.g();
    Eigen::VectorXd x = tau.imag_inverse() * z.imag();
    Eigen::VectorXd y = z.real() - tau.tau().real() * x;
    Eigen::VectorXd out(2 * g);
    out << x, y;
    return out;
}

TorusPoint reduce(const VectorXc& z, const PeriodMatrix& tau) {
    const int g = tau.g();
    Eigen::VectorXd c = lattice_coordinates(z, tau);
    TorusPoint t;
    t.z = z;
    t.p = c.head(g).array().floor().cast<int>();
    t.q = c.tail(g).array().floor().cast<int>();
    t.z0 = z - tau.tau() * t.p.cast<cplx>() - t.q.cast<cplx>();
    return t;
}

int truncation_radius(const PeriodMatrix& tau, double target, int max_radius) {
    const int g = tau.g();
    const double lam = tau.min_eigenvalue();
    // Points outside the box of radius R have |w|_inf >= R + 1/2; count them in cubic shells.
    auto tail = [&](int r) {
        double s = 0.0;
        for (int k = r;; ++k) {
            const double shell = std::pow(2.0 * k + 3.0, g) - std::pow(2.0 * k + 1.0, g);
            const double t = shell * std::exp(-kPi * lam * (k + 0.5) * (k + 0.5));
            s += t;
            if (t < 1e-30 * s || t == 0.0) break;
        }
        return s;
    };
    for (int r = 1; r <= max_radius; ++r)
        if (tail(r) < target) return r;
    throw ToleranceFailure("theta truncation target not reached within the maximal radius");
}

ThetaSum theta_sum(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const VectorXc& z,
                   const PeriodMatrix& tau, const TruncationParams& trunc) {
    const int g = tau.g();
    if (a.size() != g || b.size() != g || z.size() != g) throw Error("theta arguments have the wrong size");
    const int r = truncation_radius(tau, trunc.target, trunc.max_radius);
    const Eigen::VectorXd centre = -tau.imag_inverse() * z.imag() - a;
    Eigen::VectorXi n0(g);
    for (int i = 0; i < g; ++i) n0(i) = static_cast<int>(std::lround(centre(i)));

    const VectorXc zb = z + b.cast<cplx>();
    Eigen::VectorXi off = Eigen::VectorXi::Constant(g, -r);
    cplx sum = 0.0;
    double mag = 0.0;
    VectorXc v(g);
    while (true) {
        for (int i = 0; i < g; ++i) v(i) = static_cast<double>(n0(i) + off(i)) + a(i);
        const cplx ex = kI * kPi * (v.dot(tau.tau() * v) + 2.0 * v.dot(zb));
        const cplx t = std::exp(ex);
        sum += t;
        mag += std::abs(t);
        int i = 0;
        while (i < g && off(i) == r) off(i++) = -r;
        if (i == g) break;
        ++off(i);
    }
    // the tail bound was computed relative to the Gaussian envelope
    const double env = std::exp(kPi * z.imag().dot(tau.imag_inverse() * z.imag()));
    return {sum, mag, r, trunc.target * env};
}

cplx theta(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const VectorXc& z, const PeriodMatrix& tau,
           const TruncationParams& trunc) {
    return theta_sum(a, b, z, tau, trunc).value;
}

cplx theta(const Characteristic& chi, const VectorXc& z, const PeriodMatrix& tau, const TruncationParams& trunc) {
    return theta(chi.a_real(), chi.b_real(), z, tau, trunc);
}

cplx automorphy_factor(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXi& p,
                       const Eigen::VectorXi& q, const VectorXc& z, const PeriodMatrix& tau) {
    const VectorXc qc = q.cast<cplx>();
    const cplx e1 = 2.0 * kPi * kI * a.dot(p.cast<double>());
    const cplx e2 = -2.0 * kPi * kI * b.dot(q.cast<double>()) - kPi * kI * qc.dot(tau.tau() * qc) -
                    2.0 * kPi * kI * qc.dot(z);
    return std::exp(e1 + e2);
}

double shift_identity_check(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const VectorXc& z,
                            const PeriodMatrix& tau) {
    const int g = tau.g();
    const VectorXc ac = a.cast<cplx>();
    const cplx lhs = theta(a, b, z, tau);
    const cplx pref = std::exp(kI * kPi * ac.dot(tau.tau() * ac) + 2.0 * kPi * kI * ac.dot(z + b.cast<cplx>()));
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(g);
    const cplx rhs = pref * theta(zero, zero, z + tau.tau() * ac + b.cast<cplx>(), tau);
    return std::abs(lhs - rhs);
}

std::vector<Characteristic> torsion_points(int n, int g) {
    if (n < 2) throw Error("torsion level must be at least 2");
    std::vector<Characteristic> out;
    for (const LPoint& p : all_points(n, g)) out.push_back(Characteristic::from_point(p));
    return out;
}

cplx analytic_d(const Characteristic& p, const Characteristic& q) {
    if (p.n != q.n || p.g() != q.g()) throw AmbientMismatch("characteristics of different levels");
    return root_of_unity(mod(static_cast<long long>(q.a.dot(p.b)), p.n), p.n);
}

BilinearPairing analytic_d_pairing(int n, int g) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(2 * g, 2 * g);
    m.bottomLeftCorner(g, g).setIdentity();
    return {n, g, m};
}

BilinearPairing analytic_normal_pairing(int n, int g) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(2 * g, 2 * g);
    m.topRightCorner(g, g) = -Eigen::MatrixXi::Identity(g, g);
    return {n, g, m};
}

cplx analytic_weil_pairing(const Characteristic& p, const Characteristic& q) {
    if (p.n != q.n || p.g() != q.g()) throw AmbientMismatch("characteristics of different levels");
    return root_of_unity(mod(static_cast<long long>(q.a.dot(p.b)) - p.a.dot(q.b), p.n), p.n);
}

AnalyticWeilFamily::AnalyticWeilFamily(int n, PeriodMatrix tau, TruncationParams trunc, double pole_guard)
    : n_(n), tau_(std::move(tau)), trunc_(trunc), pole_guard_(pole_guard) {
    if (n < 2) throw Error("torsion level must be at least 2");
}

cplx AnalyticWeilFamily::quotient(const LPoint& p, const VectorXc& z) const {
    if (p.n() != n_ || p.g() != g()) throw AmbientMismatch("torsion label of another level");
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(g());
    const ThetaSum den = theta_sum(zero, zero, z, tau_, trunc_);
    if (std::abs(den.value) < pole_guard_ * den.magnitude) {
        throw PoleProximity("theta[0;0](z) vanishes to working precision");
    }
    if (p.is_zero()) return 1.0;
    const Characteristic c = Characteristic::from_point(p);
    const cplx num = theta(-c.a_real(), -c.b_real(), z, tau_, trunc_);
    return num / den.value;
}

cplx AnalyticWeilFamily::evaluate(const LPoint& p, const VectorXc& z) const {
    return ipow(quotient(p, z), n_);
}

VectorXc AnalyticWeilFamily::translate(const VectorXc& z, const LPoint& p) const {
    return z - Characteristic::from_point(p).torus_point(tau_);
}

VectorXc AnalyticWeilFamily::sample_point(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd x(g()), y(g());
    for (int i = 0; i < g(); ++i) x(i) = u(rng);
    for (int i = 0; i < g(); ++i) y(i) = u(rng);
    return tau_.tau() * x.cast<cplx>() + y.cast<cplx>();
}

}  // namespace thomae
