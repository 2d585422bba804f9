#pragma once

// Exact arithmetic in the finite Heisenberg (theta) group over
// L = (Z/n)^g x mu_n^g, with mu_n written additively through zeta = exp(2 pi i / n).

#include <optional>
#include <vector>

#include "thomae/common.hpp"

namespace thomae {

/// A point of L = (Z/n)^{2g}; the first g residues are the "a" part, the last g the "b" part.
class LPoint {
public:
    LPoint(int n, int g);
    LPoint(int n, int g, const Eigen::VectorXi& coords);

    static LPoint from_index(int n, int g, long index);
    static LPoint unit(int n, int g, int i);

    int n() const { return n_; }
    int g() const { return g_; }
    const Eigen::VectorXi& coords() const { return coords_; }
    int operator[](int i) const { return coords_(i); }
    Eigen::VectorXi a() const { return coords_.head(g_); }
    Eigen::VectorXi b() const { return coords_.tail(g_); }

    /// Position in the lexicographic order on (a, b); the first coordinate is most significant.
    long index() const;
    bool is_zero() const { return coords_.isZero(); }

    LPoint operator+(const LPoint& o) const;
    LPoint operator-(const LPoint& o) const;
    LPoint operator-() const;
    LPoint operator*(int m) const;
    bool operator==(const LPoint& o) const;
    bool operator!=(const LPoint& o) const { return !(*this == o); }

    void check_same_ambient(const LPoint& o) const;

private:
    int n_;
    int g_;
    Eigen::VectorXi coords_;
};

/// Number of points of (Z/n)^{2g}.
long group_order(int n, int g);

/// All of L in canonical (lexicographic) order.
std::vector<LPoint> all_points(int n, int g);

/// An element of mu_n, stored by its exponent.
struct RootOfUnity {
    int n = 1;
    int exponent = 0;

    RootOfUnity() = default;
    RootOfUnity(int n_, long long e) : n(n_), exponent(mod(e, n_)) {}

    RootOfUnity operator*(const RootOfUnity& o) const;
    RootOfUnity inverse() const { return {n, -exponent}; }
    RootOfUnity pow(long long k) const { return {n, static_cast<long long>(exponent) * k}; }
    cplx value() const { return root_of_unity(exponent, n); }
    bool operator==(const RootOfUnity& o) const { return n == o.n && exponent == o.exponent; }
};

/// A bilinear form d(P, Q) = zeta^{P^T M Q} on L.
class BilinearPairing {
public:
    BilinearPairing(int n, int g, Eigen::MatrixXi matrix);

    int n() const { return n_; }
    int g() const { return g_; }
    const Eigen::MatrixXi& matrix() const { return m_; }

    int exponent(const LPoint& p, const LPoint& q) const;
    RootOfUnity operator()(const LPoint& p, const LPoint& q) const {
        return {n_, exponent(p, q)};
    }

    /// The pairing (P, Q) -> d(P, Q) / d(Q, P).
    BilinearPairing skew() const;
    bool operator==(const BilinearPairing& o) const;

private:
    int n_;
    int g_;
    Eigen::MatrixXi m_;
};

/// e(P, Q) = zeta^{a.b' - a'.b}.
BilinearPairing symplectic_pairing(int n, int g);
/// d(P_i, Q_i) = zeta, d(Q_i, P_i) = 1: exponent a.b'.
BilinearPairing standard_pairing(int n, int g);
/// d = e^{(n+1)/2}; n must be odd.
BilinearPairing canonical_odd_pairing(int n, int g);

RootOfUnity symplectic_e(const LPoint& p, const LPoint& q);
RootOfUnity standard_d(const LPoint& p, const LPoint& q);
RootOfUnity canonical_d_odd(const LPoint& p, const LPoint& q);

/// A central scalar: exact when it is a root of unity, complex otherwise.
class CentralScalar {
public:
    CentralScalar(RootOfUnity r) : exact_(r), value_(r.value()) {}
    CentralScalar(cplx v) : value_(v) {
        if (v == cplx{0.0, 0.0}) throw Error("theta group scalar must be nonzero");
    }

    const std::optional<RootOfUnity>& exact() const { return exact_; }
    cplx value() const { return value_; }

    CentralScalar operator*(const CentralScalar& o) const;
    CentralScalar inverse() const;

private:
    std::optional<RootOfUnity> exact_;
    cplx value_;
};

struct ThetaGroupElement {
    CentralScalar scalar;
    LPoint point;
};

/// The theta group G_L = C^* x L with law (l, P)(m, Q) = (l m d(P, Q), P + Q).
class ThetaGroup {
public:
    explicit ThetaGroup(BilinearPairing d);

    int n() const { return d_.n(); }
    int g() const { return d_.g(); }
    const BilinearPairing& pairing() const { return d_; }

    ThetaGroupElement identity() const;
    ThetaGroupElement element(const LPoint& p, long long exponent = 0) const;
    ThetaGroupElement mul(const ThetaGroupElement& x, const ThetaGroupElement& y) const;
    ThetaGroupElement inverse(const ThetaGroupElement& x) const;
    ThetaGroupElement commutator(const ThetaGroupElement& x, const ThetaGroupElement& y) const;

private:
    void check(const LPoint& p) const;
    BilinearPairing d_;
};

ThetaGroupElement group_mul(const ThetaGroupElement& x, const ThetaGroupElement& y,
                            const BilinearPairing& d);

/// A character of L, chi(R) = zeta^{coords . R}.
class Character {
public:
    Character(int n, int g, Eigen::VectorXi coords);
    static Character trivial(int n, int g);

    RootOfUnity operator()(const LPoint& r) const;
    Character operator*(const Character& o) const;
    const Eigen::VectorXi& coords() const { return coords_; }
    int n() const { return n_; }
    int g() const { return g_; }

private:
    int n_;
    int g_;
    Eigen::VectorXi coords_;
};

/// alpha_chi(l, P) = (l chi(P), P).
ThetaGroupElement quasi_trivial_automorphism(const Character& chi, const ThetaGroupElement& x);

/// iota(l, P) = (l, -P); a set map on G_L.
ThetaGroupElement involution_iota(const ThetaGroupElement& x);

/// A complex function on all of L, stored in canonical order.
struct FunctionOnL {
    int n;
    int g;
    VectorXc values;

    FunctionOnL(int n_, int g_) : n(n_), g(g_), values(VectorXc::Zero(group_order(n_, g_))) {}
    cplx operator()(const LPoint& r) const { return values(r.index()); }
    cplx& operator()(const LPoint& r) { return values(r.index()); }
    static FunctionOnL delta(const LPoint& r0);
};

/// ((l, P) h)(R) = l h(R - P) d(R, P)^{-1}.
FunctionOnL heisenberg_action(const ThetaGroupElement& x, const FunctionOnL& h,
                              const BilinearPairing& d);

/// Index of l in the canonical order on L_1 = (Z/n)^g.
long l1_index(int n, const Eigen::VectorXi& l);

/// Matrix of (l, P) on the standard representation V_0 = C[L_1], basis e_l:
/// translation (m, 0) sends e_l to e_{l-m}, and (0, c) multiplies e_l by zeta^{c.l}.
/// The generators (1, r_i) act through those operators and a general element through
/// its word in the generators, so the matrices respect the law of `group`.
MatrixXc standard_rep_matrix(const ThetaGroup& group, const ThetaGroupElement& x);
/// e_l -> chi(l) e_l for chi in L_1^dual (only the b part of chi's coordinates is used).
MatrixXc standard_rep_character(int n, int g, const Eigen::VectorXi& c);
/// e_l -> e_{-l}
MatrixXc standard_rep_iota(int n, int g);

/// Dimension of the space of matrices commuting with the whole representation.
int standard_rep_commutant_dimension(const ThetaGroup& group);

}  // namespace thomae
