#pragma once

// The residue pairing on E(a)/E(-a) for a theta characteristic E of a genus-2 curve, with
// E(a) = 2K, and the two isotropic subspaces coming from H^0(E(a)) and from sections regular at a.

#include "thomae/hyperelliptic.hpp"

namespace thomae {

/// V has coordinates (h_{-1}, h_0) at each of the three points of a, h written against a local generator
/// t^{-m} of E in the chart parameter t (x - x_P, or y at a branch point);
/// the pairing of two such jets is the sum of residues of h h' psi dx / y, psi the function of E.
struct ResiduePairingSpace {
    ThetaCharacteristicDivisor theta;
    std::vector<CurvePoint> support;
    /// 6 x 6, block diagonal with blocks [[s_1, s_0], [s_0, 0]] where t^{-2m} psi dx / (y dt) = s_0 + s_1 t + ...
    Eigen::MatrixXcd gram;
    /// Unit columns spanning the image of H^0(E(a)), and the jets with vanishing polar part.
    Eigen::MatrixXcd v0;
    Eigen::MatrixXcd v1;
    double symmetry_residual = 0.0;
    /// max |F^T G F| / max |G|
    double v0_defect = 0.0;
    double v1_defect = 0.0;
    /// min |s_0| / max |G|; the form is nondegenerate when this is away from 0.
    double nondegeneracy = 0.0;
    /// Samples drawn until the kept divisor a was found.
    int attempts = 0;
};

/// a is the zero set of a random member of L(2K - E), resampled until it consists of three distinct
/// affine points, off the branch points except where E is supported (for E = W_i the point W_i is a
/// base point of |2K - E|).
ResiduePairingSpace residue_pairing_space(const HyperellipticCurve& c, const ThetaCharacteristicDivisor& e,
                                          std::mt19937_64& rng, int max_attempts = 50);

struct XiCorank {
    int corank = 0;
    /// Singular values of [V0 V1], descending.
    Eigen::VectorXd singular_values;
    /// Smallest nonzero over largest zero singular value (inf when the map is injective).
    double gap = 0.0;
};

/// Corank of V1 -> V / V0, i.e. dim(V0 cap V1); singular values below rel_tol * sigma_max count as zero.
XiCorank xi_corank(const ResiduePairingSpace& s, double rel_tol = 1e-7);

}  // namespace thomae
