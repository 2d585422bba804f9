#pragma once

// Periods, Abel-Jacobi map and 2-torsion characteristics of a genus-2 curve, and the
// cross-check of the determinantal Weil functions against theta quotients.

#include "thomae/hyperelliptic.hpp"
#include "thomae/weil.hpp"

namespace thomae {

struct QuadratureParams {
    /// A piece of path is integrated with one Gauss-Legendre rule once its length is below
    /// step_fraction times its distance to the nearest branch point.
    double step_fraction = 0.1;
    int max_depth = 60;
};

/// Periods of (dx/y, x dx/y) over a symplectic basis built from the chain c_1..c_4 of loops around
/// consecutive branch points: a_1 = c_1, b_1 = c_2, a_2 = c_1 + c_3, b_2 = c_4, with the signs of the
/// computed loops fixed by requiring tau symmetric with positive definite imaginary part.
class JacobianFrame {
public:
    JacobianFrame(const HyperellipticCurve& c, QuadratureParams q = {});

    const HyperellipticCurve& curve() const { return curve_; }
    /// Columns are the periods over a_1, a_2 (resp. b_1, b_2).
    const Eigen::Matrix2cd& a_periods() const { return a_; }
    const Eigen::Matrix2cd& b_periods() const { return b_; }
    const PeriodMatrix& tau() const { return tau_; }
    /// max |tau - tau^T| / max |tau| before symmetrization.
    double symmetry_residual() const { return symmetry_; }
    /// max |A B^T - B A^T| / max |A| |B|
    double riemann_residual() const { return riemann_; }
    /// Change of tau when the quadrature pieces are halved.
    double refinement_change() const { return refinement_; }
    /// Signs applied to c_2, c_3, c_4.
    const std::array<int, 3>& cycle_signs() const { return signs_; }

    /// int_{W_1}^{p} (dx/y, x dx/y) along some path on the curve (defined modulo periods).
    Eigen::Vector2cd raw_integral(const CurvePoint& p) const;
    /// A^{-1} times the sum of raw integrals, for a degree-0 divisor (not reduced).
    VectorXc abel_jacobi_vector(const Divisor& d) const;

private:
    HyperellipticCurve curve_;
    QuadratureParams q_;
    std::array<Eigen::Vector2cd, 5> half_;
    Eigen::Matrix2cd a_, b_, a_inv_;
    PeriodMatrix tau_;
    double symmetry_ = 0.0;
    double riemann_ = 0.0;
    double refinement_ = 0.0;
    std::array<int, 3> signs_{};
    std::array<Eigen::Vector2cd, 6> weierstrass_;
    Eigen::Vector2cd inf_plus_;
};

JacobianFrame period_matrix(const HyperellipticCurve& c, QuadratureParams q = {});

/// AJ(D) reduced into the fundamental parallelogram; D must have degree 0.
TorusPoint abel_jacobi(const JacobianFrame& f, const Divisor& d);

struct TorsionCharacteristic {
    Characteristic chi;
    /// max distance of N x, N y from the integers, where AJ(D) = tau x + y.
    double residual;
};

/// Solves AJ(D) = tau a/N + b/N mod the lattice; throws ToleranceFailure above max_residual.
TorsionCharacteristic torsion_characteristic(const JacobianFrame& f, const Divisor& d, int n,
                                             double max_residual = 1e-5);

/// labels[P.index()] = position in two_torsion_divisors of the divisor with characteristic P.
std::vector<int> analytic_labels(const JacobianFrame& f);

/// The anchor used by the curve family built from a frame.
CurvePoint default_anchor(const HyperellipticCurve& c);

struct ThomaeEntry {
    LPoint label;
    std::string divisor;
    /// mean of f_P(w) / phi_P(z(w)) over the samples
    cplx mean_ratio;
    /// std / |mean| of that ratio, and of its square
    double cov = 0.0;
    double cov_squared = 0.0;
};

struct ThomaeReport {
    /// index into theta_characteristics of the matched delta
    int delta = -1;
    std::string delta_label;
    /// worst coefficient of variation for each even delta, in the order of theta_characteristics
    std::vector<std::pair<std::string, double>> per_delta;
    std::vector<ThomaeEntry> entries;
    std::vector<int> labels;
    double max_cov = 0.0;
    double max_cov_squared = 0.0;
    int samples = 0;
};

/// r(w) = f_P(w) / (theta[-a;-b](z)/theta(z))^2 at z = AJ(w_1 + w_2 + w_3 - K - delta), P the label of D_P
/// by its torsion characteristic, for every nonzero P and `samples` random triples; delta runs over
/// the 10 even theta characteristics and the one with the smallest worst-case variation is kept.
/// Throws ToleranceFailure when even that exceeds fail_threshold.
ThomaeReport thomae_compare(const JacobianFrame& f, std::mt19937_64& rng, int samples = 20,
                            double fail_threshold = 1e-4);

struct CurveModuli {
    /// tf_P(x0)^2 for the normalized curve family at x0 ~ K + delta, canonical order.
    VectorXc squared;
    /// (theta[-a;-b](0)/theta(0))^4
    VectorXc expected;
    double max_error = 0.0;
    /// P whose normalized value is only known up to sign.
    int flagged = 0;
    /// normal-set residual of the normalized curve family
    double normal_residual = 0.0;
};

/// Normalizes the curve family (analytic labels, pairing analytic_normal_pairing) and compares the
/// squared moduli point at the class K + delta with the fourth powers of theta-constant quotients.
CurveModuli curve_moduli(const JacobianFrame& f, int delta_index, std::mt19937_64& rng, int residual_samples = 10);

}  // namespace thomae
