#include "thomae/spinor.hpp"

namespace thomae {

namespace {

Rational random_entry(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
    return Rational(num(rng), den(rng));
}

}  // namespace

Mat<Rational> random_rational_skew(int n, std::mt19937_64& rng) {
    Mat<Rational> a = Mat<Rational>::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            a(i, j) = random_entry(rng);
            a(j, i) = -a(i, j);
        }
    return a;
}

Mat<Rational> random_rational_invertible(int n, std::mt19937_64& rng) {
    while (true) {
        Mat<Rational> m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = random_entry(rng);
        if (determinant(m) != 0) return m;
    }
}

RationalSpinorInstance random_spinor_instance(int n, std::mt19937_64& rng, int skew_rank_drop) {
    const Mat<Rational> m = random_rational_invertible(2 * n, rng);
    const Mat<Rational> minv = inverse(m);
    Mat<Rational> gram = m.transpose() * split_form<Rational>(n) * m;

    Mat<Rational> a0 = random_rational_skew(n, rng);
    for (int i = n - skew_rank_drop; i < n; ++i) {
        a0.row(i).setZero();
        a0.col(i).setZero();
    }
    const Mat<Rational> p = random_rational_invertible(n, rng);
    const Mat<Rational> a = p.transpose() * a0 * p;
    const Mat<Rational> x = random_rational_invertible(n, rng);
    Mat<Rational> us(2 * n, n), vs = Mat<Rational>::Zero(2 * n, n);
    if (n % 2 == 0) {
        us << x, a * x;
    } else {
        // an odd skew matrix is singular; graph over the complement so that U cap V0 = 0
        us << a * x, x;
    }
    vs.topRows(n) = Mat<Rational>::Identity(n, n);
    return {QuadraticSpace<Rational>(gram), minv * vs, minv * us};
}

}  // namespace thomae
