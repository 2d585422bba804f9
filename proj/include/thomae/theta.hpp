#pragma once

// Riemann theta functions with characteristics on C^g / (tau Z^g + Z^g).

#include "thomae/weil_family.hpp"

namespace thomae {

class PeriodMatrix {
public:
    explicit PeriodMatrix(MatrixXc tau);

    int g() const { return static_cast<int>(tau_.rows()); }
    const MatrixXc& tau() const { return tau_; }
    Eigen::MatrixXd imag() const { return tau_.imag(); }
    const Eigen::MatrixXd& imag_inverse() const { return y_inv_; }
    /// Smallest eigenvalue of Im tau.
    double min_eigenvalue() const { return lambda_min_; }

private:
    MatrixXc tau_;
    Eigen::MatrixXd y_inv_;
    double lambda_min_;
};

/// Random tau with Re tau uniform in [-1/2, 1/2] and Im tau = min_imag I + B B^T / 2, B uniform.
PeriodMatrix random_period_matrix(int g, std::mt19937_64& rng, double min_imag = 0.5);

/// A rational characteristic (a/n, b/n).
struct Characteristic {
    int n;
    Eigen::VectorXi a;
    Eigen::VectorXi b;

    Characteristic(int n_, Eigen::VectorXi a_, Eigen::VectorXi b_);
    static Characteristic from_point(const LPoint& p);
    LPoint to_point() const;
    int g() const { return static_cast<int>(a.size()); }
    Eigen::VectorXd a_real() const { return a.cast<double>() / n; }
    Eigen::VectorXd b_real() const { return b.cast<double>() / n; }
    /// tau a/n + b/n
    VectorXc torus_point(const PeriodMatrix& tau) const;
    bool operator==(const Characteristic& o) const { return n == o.n && a == o.a && b == o.b; }
};

/// z = z0 + tau p + q with z0 in the fundamental parallelogram.
struct TorusPoint {
    VectorXc z;
    VectorXc z0;
    Eigen::VectorXi p;
    Eigen::VectorXi q;
};
TorusPoint reduce(const VectorXc& z, const PeriodMatrix& tau);
/// Real coordinates (x, y) with z = tau x + y.
Eigen::VectorXd lattice_coordinates(const VectorXc& z, const PeriodMatrix& tau);

struct TruncationParams {
    double target = 1e-12;
    int max_radius = 60;
};

struct ThetaSum {
    cplx value;
    /// Sum of absolute values of the retained terms.
    double magnitude;
    int radius;
    /// Bound on the dropped terms.
    double tail_bound;
};

/// Box radius around the Gaussian centre for which the dropped terms, relative to the
/// envelope exp(pi Im z^T (Im tau)^{-1} Im z), sum to less than `target`.
int truncation_radius(const PeriodMatrix& tau, double target, int max_radius = 60);

ThetaSum theta_sum(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const VectorXc& z,
                   const PeriodMatrix& tau, const TruncationParams& trunc = {});

cplx theta(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const VectorXc& z,
           const PeriodMatrix& tau, const TruncationParams& trunc = {});
cplx theta(const Characteristic& chi, const VectorXc& z, const PeriodMatrix& tau,
           const TruncationParams& trunc = {});

/// lambda with theta[a;b](z + p + tau q) = lambda theta[a;b](z).
cplx automorphy_factor(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXi& p,
                       const Eigen::VectorXi& q, const VectorXc& z, const PeriodMatrix& tau);

/// |theta[a;b](z) - exp(pi i a tau a + 2 pi i a (z + b)) theta[0;0](z + tau a + b)|
double shift_identity_check(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const VectorXc& z,
                            const PeriodMatrix& tau);

/// All N^{2g} characteristics in lexicographic order on (a, b).
std::vector<Characteristic> torsion_points(int n, int g);

/// exp(2 pi i N e.b) for P = tau a + b, Q = tau e + f.
cplx analytic_d(const Characteristic& p, const Characteristic& q);
/// The same form as a pairing on the integer labels: exponent B_P . E_Q.
BilinearPairing analytic_d_pairing(int n, int g);
/// The form for which the analytic family below is normal under x -> x - P:
/// exponent -A_P . B_Q. Its skew part agrees with analytic_d.
BilinearPairing analytic_normal_pairing(int n, int g);
/// exp(2 pi i N (e.b - a.f))
cplx analytic_weil_pairing(const Characteristic& p, const Characteristic& q);

/// phi_P(z) = (theta[-a;-b](z) / theta[0;0](z))^N on C^g, points stored as z.
class AnalyticWeilFamily : public WeilFamily {
public:
    AnalyticWeilFamily(int n, PeriodMatrix tau, TruncationParams trunc = {}, double pole_guard = 1e-10);

    int N() const override { return n_; }
    int g() const override { return tau_.g(); }
    cplx evaluate(const LPoint& p, const VectorXc& z) const override;
    VectorXc translate(const VectorXc& z, const LPoint& p) const override;
    bool has_negation() const override { return true; }
    VectorXc negate(const VectorXc& z) const override { return -z; }
    /// z = tau x + y with x, y uniform in [0, 1)^g.
    VectorXc sample_point(std::mt19937_64& rng) const override;

    const PeriodMatrix& period_matrix() const { return tau_; }
    /// theta[-a;-b](z)/theta[0;0](z) before the N-th power.
    cplx quotient(const LPoint& p, const VectorXc& z) const;

private:
    int n_;
    PeriodMatrix tau_;
    TruncationParams trunc_;
    double pole_guard_;
};

}  // namespace thomae
