#pragma once

// Genus-2 curves y^2 = f(x) with f monic of degree 6: points, divisors, functions
// h = (p + q y) / r, Riemann-Roch spaces, and the determinantal Weil functions of the 2-torsion.

#include <array>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "thomae/weil_family.hpp"

namespace thomae {

/// Polynomial coefficients, constant term first.
using Poly = std::vector<cplx>;

cplx poly_eval(const Poly& p, cplx x);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, cplx c);
Poly poly_from_roots(const std::vector<cplx>& roots);
/// Roots after dropping leading coefficients below `trim` relative to the largest one.
std::vector<cplx> poly_roots(const Poly& p, double trim = 1e-10);

struct CurvePoint {
    enum class Kind { Affine, InfinityPlus, InfinityMinus };
    Kind kind = Kind::Affine;
    cplx x{};
    cplx y{};

    static CurvePoint affine(cplx x, cplx y) { return {Kind::Affine, x, y}; }
    /// sign > 0: y / x^3 -> +1.
    static CurvePoint infinity(int sign) { return {sign > 0 ? Kind::InfinityPlus : Kind::InfinityMinus, {}, {}}; }
    bool is_affine() const { return kind == Kind::Affine; }
    bool is_infinity() const { return kind != Kind::Affine; }
};

/// Same kind and, for affine points, x and y within tol (relative to 1 + |.|).
bool points_coincide(const CurvePoint& a, const CurvePoint& b, double tol = 1e-9);

std::string to_string(const CurvePoint& p);

class HyperellipticCurve {
public:
    /// The six roots of f; stored sorted by (real, imaginary) part, which fixes the labels W_1..W_6.
    explicit HyperellipticCurve(std::vector<cplx> branch_points, double min_separation = 1e-8);
    /// f given by 7 coefficients (constant first), scaled to be monic.
    static HyperellipticCurve from_coefficients(const Poly& f, double min_separation = 1e-8);

    const std::vector<cplx>& branch_points() const { return e_; }
    const Poly& f() const { return f_; }
    int genus() const { return 2; }
    /// 1 + max |e_i|
    double scale() const { return scale_; }
    double min_separation() const { return min_sep_; }

    cplx eval_f(cplx x) const { return poly_eval(f_, x); }
    /// W_{i+1} = (e_i, 0), 0-based.
    CurvePoint weierstrass(int i) const;
    /// (x, s sqrt(f(x))) with the principal root and s = +-1.
    CurvePoint point_over(cplx x, int sign = 1) const;
    /// |y^2 - f(x)| / (1 + |f(x)|); zero at infinity.
    double residual(const CurvePoint& p) const;
    bool on_curve(const CurvePoint& p, double tol = 1e-10) const { return residual(p) < tol; }
    /// Index of the branch point under p, or -1.
    int weierstrass_index(const CurvePoint& p, double tol = 1e-12) const;
    CurvePoint involution(const CurvePoint& p) const;
    /// x = centre + scale * N(0, 1/2) complex, random sheet.
    CurvePoint random_point(std::mt19937_64& rng, double spread = 1.0) const;

private:
    std::vector<cplx> e_;
    Poly f_;
    double scale_;
    double min_sep_;
};

class Divisor {
public:
    Divisor() = default;
    explicit Divisor(const std::vector<std::pair<CurvePoint, int>>& terms);
    static Divisor point(const CurvePoint& p, int m = 1);
    /// oo+ + oo-, the divisor of dx/y.
    static Divisor canonical();

    const std::vector<std::pair<CurvePoint, int>>& terms() const { return terms_; }
    int degree() const;
    int multiplicity(const CurvePoint& p) const;
    bool is_effective() const;
    bool is_zero() const { return terms_.empty(); }
    Divisor positive_part() const;
    /// The negative part, with positive multiplicities.
    Divisor negative_part() const;

    Divisor operator+(const Divisor& o) const;
    Divisor operator-(const Divisor& o) const;
    Divisor operator-() const;
    Divisor operator*(int m) const;

    std::string to_string() const;

private:
    void add(const CurvePoint& p, int m);
    std::vector<std::pair<CurvePoint, int>> terms_;
};

Divisor sum_of_points(const std::vector<CurvePoint>& pts);

/// h = (p + q y) / r with r = prod (x - rho) over `poles` (repeated for multiplicity).
struct CurveFunction {
    Poly p{cplx{1.0}};
    Poly q{};
    std::vector<cplx> poles{};

    cplx denominator(cplx x) const;
    /// Value at an affine point; throws PoleProximity where r nearly vanishes.
    cplx operator()(const CurvePoint& pt) const;
};

/// Local parameter at a point: x - x0 at ordinary affine points, y at branch points, 1/x at infinity.
/// Coefficients of t^lo .. t^{hi-1} of h.
std::vector<cplx> laurent_coefficients(const HyperellipticCurve& c, const CurveFunction& h, const CurvePoint& pt,
                                       int lo, int hi);
/// Order of h at pt: the first exponent >= lo whose coefficient exceeds tol relative to the largest
/// coefficient in the window; returns hi when h vanishes through the window.
int order_at(const HyperellipticCurve& c, const CurveFunction& h, const CurvePoint& pt, int lo = -12, int hi = 12,
             double tol = 1e-8);

/// A basis of L(D) = {h : div h + D >= 0}; the sections it stands for are h (dx/y)^2 when D = 2K + D'.
struct SectionBasis {
    Divisor divisor;
    std::vector<CurveFunction> functions;
    /// Singular values of the (column-scaled) condition matrix, descending.
    Eigen::VectorXd singular_values;
    /// Smallest kept-nonzero over largest treated-as-zero singular value (inf when nothing is dropped).
    double gap = 0.0;
    /// Condition number of the returned basis against an orthonormal one.
    double condition = 1.0;

    int dimension() const { return static_cast<int>(functions.size()); }
};

/// Ansatz (p + q y)/r with r clearing the finite poles allowed by D and pole bounds at oo+-,
/// followed by the vanishing conditions of the Laurent expansions at every point involved.
/// Singular values below rel_tol * sigma_max count as zero. For deg D >= 3 the dimension must be
/// deg D - 1; otherwise ToleranceFailure reports the singular-value gap.
SectionBasis riemann_roch_basis(const HyperellipticCurve& c, const Divisor& d, double rel_tol = 1e-8);

/// sum w_j h_j / rms(h_j) with complex Gaussian w_j, rms taken over fixed sample points of the curve, so
/// that no basis element dominates a random member of L(D).
CurveFunction random_section(const HyperellipticCurve& c, const SectionBasis& b, std::mt19937_64& rng);

/// True when ord_Q(h) >= -mult_D(Q) at every point of the support of D, at oo+- and at the
/// points over the roots of h's denominator.
bool satisfies_pole_bounds(const HyperellipticCurve& c, const CurveFunction& h, const Divisor& d,
                           double tol = 1e-7);

/// Affine zeros of h apart from `known` (zeros h is known to have, with multiplicity), found from the
/// norm p^2 - q^2 f and skipping the fibres over the roots of r; exactly `expected` of them must remain.
std::vector<CurvePoint> residual_zeros(const HyperellipticCurve& c, const CurveFunction& h, const Divisor& known,
                                       int expected);

/// The unique effective divisor linearly equivalent to d, when L(d) is one-dimensional.
std::vector<CurvePoint> effective_representative(const HyperellipticCurve& c, const Divisor& d);

/// An effective triple anchor + E with anchor + E ~ d, deg d = 3.
std::vector<CurvePoint> reduce_to_effective(const HyperellipticCurve& c, const Divisor& d, const CurvePoint& anchor);

/// The 2-torsion class W_i + W_j - oo+ - oo- (i < j), or 0 when i = j = -1.
struct TwoTorsionDivisor {
    int i = -1;
    int j = -1;
    Divisor divisor;
    /// (x - e_i)(x - e_j), whose divisor is twice the above.
    CurveFunction psi;

    bool is_zero() const { return i < 0; }
    std::string label() const;
};

/// D_0 first, then the 15 pairs in lexicographic order.
std::vector<TwoTorsionDivisor> two_torsion_divisors(const HyperellipticCurve& c);

/// A theta characteristic L (2L ~ K): W_i (odd) or W_1 + W_j - W_k (even, for the split {1,j,k} | rest).
struct ThetaCharacteristicDivisor {
    Divisor divisor;
    bool odd = false;
    std::vector<int> indices;
    /// psi with div psi = 2L - K, so that psi dx/y has divisor 2L.
    CurveFunction psi;
    std::string label;
};

/// The 6 odd ones, then the 10 even ones.
std::vector<ThetaCharacteristicDivisor> theta_characteristics(const HyperellipticCurve& c);

/// f_P(z) = psi_P(z_1) psi_P(z_2) psi_P(z_3) (det h^P_i(z_j) / det h_i(z_j))^2 with h^P a basis of
/// L(2K + D_P) and h = {1, x, x^2} a basis of L(2K). Raised to the power N/2 for even N.
class DeterminantWeilFunction {
public:
    DeterminantWeilFunction(const HyperellipticCurve& c, const TwoTorsionDivisor& p);

    cplx operator()(const std::vector<CurvePoint>& z, int n = 2) const;
    cplx det_twisted(const std::vector<CurvePoint>& z) const;
    cplx det_reference(const std::vector<CurvePoint>& z) const;
    /// prod_j |column j| for the twisted and reference matrices (Hadamard bounds).
    double hadamard_twisted(const std::vector<CurvePoint>& z) const;
    double hadamard_reference(const std::vector<CurvePoint>& z) const;

    const SectionBasis& twisted_basis() const { return twisted_; }
    const SectionBasis& reference_basis() const { return reference_; }
    const TwoTorsionDivisor& torsion() const { return p_; }
    const HyperellipticCurve& curve() const { return curve_; }

private:
    void check_triple(const std::vector<CurvePoint>& z) const;
    HyperellipticCurve curve_;
    TwoTorsionDivisor p_;
    SectionBasis twisted_;
    SectionBasis reference_;
};

/// Three of the four zeros z_1..z_4 of a random member of L(2K + D_P). det h^P_i(z_j) vanishes on the triple,
/// whose sum lies in the class 2K + D_P - z_4; the reference determinant does not vanish there in general.
std::vector<CurvePoint> twisted_vanishing_triple(const DeterminantWeilFunction& f, std::mt19937_64& rng,
                                                 int max_attempts = 50);

cplx weil_function_determinant(const HyperellipticCurve& c, const TwoTorsionDivisor& p, int n,
                               const std::vector<CurvePoint>& z);

/// Points of X are effective triples z, packed as (x_1, y_1, x_2, y_2, x_3, y_3); they stand for the
/// class of z_1 + z_2 + z_3 in Pic^3. Labels map P in (Z/2)^4 to an entry of two_torsion_divisors.
class CurveWeilFamily : public WeilFamily {
public:
    CurveWeilFamily(HyperellipticCurve c, std::vector<int> labels, CurvePoint anchor);

    int N() const override { return 2; }
    int g() const override { return 2; }
    cplx evaluate(const LPoint& p, const VectorXc& x) const override;
    /// A triple in the class z - D_P.
    VectorXc translate(const VectorXc& x, const LPoint& p) const override;
    bool has_negation() const override { return true; }
    /// A triple in the class 3K - z, the reflection through K + delta for any theta characteristic delta.
    VectorXc negate(const VectorXc& x) const override;
    VectorXc sample_point(std::mt19937_64& rng) const override;

    const HyperellipticCurve& curve() const { return curve_; }
    const std::vector<TwoTorsionDivisor>& two_torsion() const { return torsion_; }
    const TwoTorsionDivisor& divisor_of(const LPoint& p) const;

    static VectorXc pack(const std::vector<CurvePoint>& z);
    static std::vector<CurvePoint> unpack(const VectorXc& x);

private:
    HyperellipticCurve curve_;
    std::vector<int> labels_;
    CurvePoint anchor_;
    std::vector<TwoTorsionDivisor> torsion_;
    std::vector<DeterminantWeilFunction> functions_;
};

}  // namespace thomae
