#pragma once

// Elimination helpers shared by exact (rational) and floating scalars.
// Exact scalars pivot on the first nonzero entry; floating ones on the largest modulus.

#include <type_traits>

#include "thomae/common.hpp"

namespace thomae {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <typename S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

template <typename S>
double magnitude(const S& x) {
    if constexpr (is_exact_v<S>) {
        return x == 0 ? 0.0 : 1.0;
    } else {
        return static_cast<double>(std::abs(x));
    }
}

/// Row echelon reduction in place; returns pivot columns. Entries below `tol * scale` count as zero.
template <typename S>
std::vector<int> row_reduce(Mat<S>& m, double tol = 1e-10) {
    double scale = 0.0;
    if constexpr (!is_exact_v<S>) scale = m.size() ? static_cast<double>(m.cwiseAbs().maxCoeff()) : 0.0;
    const double cut = is_exact_v<S> ? 0.5 : tol * std::max(scale, 1e-300);
    std::vector<int> pivots;
    int row = 0;
    for (int c = 0; c < m.cols() && row < m.rows(); ++c) {
        int best = -1;
        double bestv = 0.0;
        for (int r = row; r < m.rows(); ++r) {
            const double v = magnitude(m(r, c));
            if (v > bestv && v > cut) {
                best = r;
                bestv = v;
                if constexpr (is_exact_v<S>) break;
            }
        }
        if (best < 0) {
            if constexpr (!is_exact_v<S>)
                for (int r = row; r < m.rows(); ++r) m(r, c) = S(0);
            continue;
        }
        m.row(best).swap(m.row(row));
        const S inv = S(1) / m(row, c);
        m.row(row) *= inv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row) continue;
            const S f = m(r, c);
            if (f == S(0)) continue;
            m.row(r) -= f * m.row(row);
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

template <typename S>
int rank(const Mat<S>& m, double tol = 1e-10) {
    if constexpr (is_exact_v<S>) {
        Mat<S> w = m;
        return static_cast<int>(row_reduce(w).size());
    } else {
        if (m.size() == 0) return 0;
        Eigen::JacobiSVD<Mat<S>> svd(m);
        const auto& s = svd.singularValues();
        int r = 0;
        for (int i = 0; i < s.size(); ++i)
            if (s(i) > tol * s(0)) ++r;
        return r;
    }
}

template <typename S>
S determinant(const Mat<S>& m) {
    if (m.rows() != m.cols()) throw Error("determinant of a non-square matrix");
    if constexpr (is_exact_v<S>) {
        Mat<S> w = m;
        S det(1);
        const int n = static_cast<int>(w.rows());
        for (int c = 0; c < n; ++c) {
            int p = c;
            while (p < n && w(p, c) == 0) ++p;
            if (p == n) return S(0);
            if (p != c) {
                w.row(p).swap(w.row(c));
                det = -det;
            }
            det *= w(c, c);
            for (int r = c + 1; r < n; ++r) {
                if (w(r, c) == 0) continue;
                const S f = w(r, c) / w(c, c);
                w.row(r) -= f * w.row(c);
            }
        }
        return det;
    } else {
        return m.partialPivLu().determinant();
    }
}

template <typename S>
Mat<S> inverse(const Mat<S>& m) {
    if constexpr (is_exact_v<S>) {
        const int n = static_cast<int>(m.rows());
        Mat<S> aug(n, 2 * n);
        aug << m, Mat<S>::Identity(n, n);
        const auto piv = row_reduce(aug);
        if (static_cast<int>(piv.size()) < n || piv.back() >= n) throw Error("inverse of a singular matrix");
        return aug.rightCols(n);
    } else {
        Eigen::FullPivLU<Mat<S>> lu(m);
        if (!lu.isInvertible()) throw Error("inverse of a singular matrix");
        return lu.inverse();
    }
}

/// Columns spanning the right kernel.
template <typename S>
Mat<S> null_space(const Mat<S>& m, double tol = 1e-10) {
    if constexpr (is_exact_v<S>) {
        Mat<S> w = m;
        const auto piv = row_reduce(w);
        std::vector<int> free;
        for (int c = 0, k = 0; c < m.cols(); ++c) {
            if (k < static_cast<int>(piv.size()) && piv[k] == c) {
                ++k;
            } else {
                free.push_back(c);
            }
        }
        Mat<S> out = Mat<S>::Zero(m.cols(), static_cast<int>(free.size()));
        for (std::size_t j = 0; j < free.size(); ++j) {
            out(free[j], j) = 1;
            for (std::size_t k = 0; k < piv.size(); ++k) out(piv[k], j) = -w(k, free[j]);
        }
        return out;
    } else {
        Eigen::JacobiSVD<Mat<S>> svd(m, Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        int r = 0;
        for (int i = 0; i < s.size(); ++i)
            if (s(i) > tol * s(0)) ++r;
        return svd.matrixV().rightCols(m.cols() - r);
    }
}

/// Columns that extend the columns of f to a basis.
template <typename S>
Mat<S> complete_basis(const Mat<S>& f) {
    const int dim = static_cast<int>(f.rows());
    if constexpr (is_exact_v<S>) {
        Mat<S> cur = f;
        Mat<S> extra(dim, 0);
        int r = rank(cur);
        for (int j = 0; j < dim && r < dim; ++j) {
            Mat<S> trial(dim, cur.cols() + 1);
            trial << cur, Mat<S>::Identity(dim, dim).col(j);
            const int rt = rank(trial);
            if (rt > r) {
                cur = trial;
                extra.conservativeResize(dim, extra.cols() + 1);
                extra.col(extra.cols() - 1) = Mat<S>::Identity(dim, dim).col(j);
                r = rt;
            }
        }
        return extra;
    } else {
        Eigen::HouseholderQR<Mat<S>> qr(f);
        Mat<S> q = qr.householderQ() * Mat<S>::Identity(dim, dim);
        return q.rightCols(dim - f.cols());
    }
}

}  // namespace thomae
