#pragma once

// Quadratic spaces, maximal isotropic frames, Pfaffians and the identity
// det(U -> V/V0) = c * Pf(chart)^2 in the big cell of the spinor variety.

#include <random>

#include "thomae/linalg.hpp"

namespace thomae {

template <typename S>
struct QuadraticSpace {
    Mat<S> gram;

    explicit QuadraticSpace(Mat<S> g, double tol = 1e-10) : gram(std::move(g)) {
        if (gram.rows() != gram.cols() || gram.rows() % 2 != 0) throw Error("quadratic space must be even dimensional");
        const Mat<S> asym = gram - gram.transpose();
        if (max_abs(asym) > tol_scale(tol)) throw Error("Gram matrix is not symmetric");
        if (rank(gram) < gram.rows()) throw Error("Gram matrix is degenerate");
    }

    int n() const { return static_cast<int>(gram.rows() / 2); }

    /// max |F1^T G F2| entry
    static double max_abs(const Mat<S>& m) {
        double r = 0.0;
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                if constexpr (is_exact_v<S>) {
                    if (m(i, j) != 0) return 1.0;
                } else {
                    r = std::max(r, static_cast<double>(std::abs(m(i, j))));
                }
        return r;
    }

    double tol_scale(double tol) const {
        if constexpr (is_exact_v<S>) {
            return 0.5;
        } else {
            return tol * std::max(1.0, max_abs(gram));
        }
    }

    /// Worst entry of F^T G F.
    double isotropy_defect(const Mat<S>& f) const { return max_abs(Mat<S>(f.transpose() * gram * f)); }

    /// Maximal isotropic: n columns, full rank, F^T G F = 0.
    void require_lagrangian(const Mat<S>& f, double tol = 1e-8) const {
        if (f.rows() != gram.rows() || f.cols() != n()) throw Error("frame has the wrong shape");
        if (rank(f) < n()) throw Error("frame is not of full column rank");
        const double scale = is_exact_v<S> ? 1.0 : std::max(1.0, max_abs(f) * max_abs(f));
        if (isotropy_defect(f) > tol_scale(tol) * scale) throw Error("frame is not isotropic");
    }
};

/// The split form [[0, I], [I, 0]] on 2n coordinates.
template <typename S>
Mat<S> split_form(int n) {
    Mat<S> h = Mat<S>::Zero(2 * n, 2 * n);
    h.topRightCorner(n, n) = Mat<S>::Identity(n, n);
    h.bottomLeftCorner(n, n) = Mat<S>::Identity(n, n);
    return h;
}

/// T = [F0 C''] with T^T G T = [[0, I], [I, 0]]; V0 becomes the first n coordinates.
template <typename S>
Mat<S> hyperbolic_coordinates(const QuadraticSpace<S>& space, const Mat<S>& f0) {
    space.require_lagrangian(f0);
    const int n = space.n();
    const Mat<S> c = complete_basis(f0);
    const Mat<S> c1 = c * inverse(Mat<S>(f0.transpose() * space.gram * c));
    const Mat<S> s = c1.transpose() * space.gram * c1;
    const Mat<S> c2 = c1 - f0 * s / S(2);
    Mat<S> t(2 * n, 2 * n);
    t << f0, c2;
    return t;
}

/// A with U = {(v, A v)} in split coordinates (U given as its 2n x n coordinate frame).
template <typename S>
Mat<S> graph_chart(const Mat<S>& u_split, double tol = 1e-8) {
    const int n = static_cast<int>(u_split.cols());
    if (u_split.rows() != 2 * n) throw Error("graph_chart: frame has the wrong shape");
    const Mat<S> x = u_split.topRows(n), y = u_split.bottomRows(n);
    if (rank(x) < n) throw Error("graph_chart: U meets the complementary coordinate space");
    const Mat<S> a = y * inverse(x);
    const Mat<S> sym = a + a.transpose();
    double defect = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) defect = std::max(defect, magnitude(sym(i, j)));
    double scale = 1.0;
    if constexpr (!is_exact_v<S>) scale = std::max(1.0, static_cast<double>(a.cwiseAbs().maxCoeff()));
    if (defect > (is_exact_v<S> ? 0.5 : tol * scale)) throw Error("graph_chart: chart matrix is not skew, U is not isotropic");
    return a;
}

/// Pf(A) by skew Gaussian elimination; 0 for odd size.
template <typename S>
S pfaffian(const Mat<S>& a_in, double tol = 1e-10) {
    const int n = static_cast<int>(a_in.rows());
    if (a_in.cols() != n) throw Error("pfaffian of a non-square matrix");
    {
        const Mat<S> sym = a_in + a_in.transpose();
        double scale = 1.0;
        if constexpr (!is_exact_v<S>) scale = std::max(1.0, static_cast<double>(a_in.cwiseAbs().maxCoeff()));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (magnitude(sym(i, j)) > (is_exact_v<S> ? 0.5 : tol * scale)) throw Error("pfaffian of a non-skew matrix");
    }
    if (n % 2 == 1) return S(0);
    Mat<S> a = a_in;
    S pf(1);
    for (int k = 0; k + 1 < n; k += 2) {
        int kp = k + 1;
        double best = 0.0;
        for (int i = k + 1; i < n; ++i) {
            const double v = magnitude(a(i, k));
            if (v > best) {
                best = v;
                kp = i;
                if constexpr (is_exact_v<S>) break;
            }
        }
        if (kp != k + 1) {
            a.row(k + 1).swap(a.row(kp));
            a.col(k + 1).swap(a.col(kp));
            pf = -pf;
        }
        if (a(k + 1, k) == S(0)) return S(0);
        pf *= a(k, k + 1);
        if (k + 2 < n) {
            const Mat<S> tau = a.row(k).tail(n - k - 2) / a(k, k + 1);
            const Mat<S> col = a.col(k + 1).tail(n - k - 2);
            a.bottomRightCorner(n - k - 2, n - k - 2) += tau.transpose() * col.transpose() - col * tau;
        }
    }
    return pf;
}

template <typename S>
struct SpinorSquare {
    /// det of U -> V/V0 in the hyperbolic coordinates of V0.
    S s;
    /// Pf of the chart matrix.
    S v;
    /// Chart constant, det of the V0-coordinate block after the shear.
    S c;
    /// |s - c v^2| (0 for exact scalars when the identity holds).
    double residual;
    /// U lies in the component opposite to V0 (odd dim U cap V0): no big-cell chart.
    bool opposite_component;
    /// The space was extended by a hyperbolic plane because n is odd.
    bool extended;
    /// Index of the shear x -> x - S_k y that made the chart defined.
    int shear;
};

/// Deterministic skew matrices used to move U off the complementary coordinate space; k = 0 is 0.
template <typename S>
Mat<S> shear_matrix(int n, int k) {
    Mat<S> m = Mat<S>::Zero(n, n);
    if (k == 0) return m;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const int v = ((i + 1) * 7 + (j + 1) * 13 * k + k * k) % 11 - 5;
            m(i, j) = S(v);
            m(j, i) = S(-v);
        }
    return m;
}

template <typename S>
SpinorSquare<S> spinor_square_check(const Mat<S>& u, const Mat<S>& v0, const QuadraticSpace<S>& space,
                                    double tol = 1e-8) {
    space.require_lagrangian(v0, tol);
    space.require_lagrangian(u, tol);
    const Mat<S> t = hyperbolic_coordinates(space, v0);
    Mat<S> us = inverse(t) * u;
    int n = space.n();
    const bool extended = n % 2 == 1;
    if (extended) {
        // U + <e>, V0 + <f> in V + H: the new V0 coordinate is f, the new complement coordinate e
        Mat<S> w = Mat<S>::Zero(2 * n + 2, n + 1);
        w.block(0, 0, n, n) = us.topRows(n);
        w.block(n + 1, 0, n, n) = us.bottomRows(n);
        w(2 * n + 1, n) = S(1);
        us = w;
        ++n;
    }
    const Mat<S> x = us.topRows(n), y = us.bottomRows(n);
    SpinorSquare<S> out{determinant(y), S(0), S(0), 0.0, false, extended, -1};
    for (int k = 0; k < 8; ++k) {
        const Mat<S> xs = x - shear_matrix<S>(n, k) * y;
        if (rank(xs) < n) continue;
        Mat<S> shifted(2 * n, n);
        shifted << xs, y;
        const Mat<S> a = graph_chart(shifted, tol);
        out.v = pfaffian(a, tol);
        out.c = determinant(xs);
        out.shear = k;
        const S diff = out.s - out.c * out.v * out.v;
        if constexpr (is_exact_v<S>) {
            out.residual = diff == 0 ? 0.0 : std::abs(static_cast<double>(diff));
        } else {
            out.residual = static_cast<double>(std::abs(diff));
        }
        return out;
    }
    // no shear gives a chart: U cap W_S is nonzero for every S, the signature of the other component
    out.opposite_component = true;
    out.residual = magnitude(out.s);
    return out;
}

/// dim(U cap V0) mod 2.
template <typename S>
int intersection_parity(const Mat<S>& u, const Mat<S>& v0, const QuadraticSpace<S>& space, double tol = 1e-8) {
    space.require_lagrangian(u, tol);
    space.require_lagrangian(v0, tol);
    Mat<S> both(u.rows(), u.cols() + v0.cols());
    both << u, v0;
    return (2 * space.n() - rank(both, tol)) % 2;
}

/// dim(U cap V0).
template <typename S>
int intersection_dimension(const Mat<S>& u, const Mat<S>& v0, double tol = 1e-8) {
    Mat<S> both(u.rows(), u.cols() + v0.cols());
    both << u, v0;
    return static_cast<int>(u.cols() + v0.cols()) - rank(both, tol);
}

/// Random skew matrix with entries p/q, |p| <= 9, 1 <= q <= 4.
Mat<Rational> random_rational_skew(int n, std::mt19937_64& rng);
/// Random invertible rational matrix.
Mat<Rational> random_rational_invertible(int n, std::mt19937_64& rng);

/// A random exact instance (space, V0, U). U is the graph of a random skew matrix, with rank lowered
/// by `skew_rank_drop`: over V0 for even n (so U cap V0 is its kernel), over the complement for
/// odd n (so U cap V0 = 0).
struct RationalSpinorInstance {
    QuadraticSpace<Rational> space;
    Mat<Rational> v0;
    Mat<Rational> u;
};
RationalSpinorInstance random_spinor_instance(int n, std::mt19937_64& rng, int skew_rank_drop = 0);

}  // namespace thomae
