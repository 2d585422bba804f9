#include <doctest.h>

#include "thomae/spinor.hpp"

using namespace thomae;

namespace {

using Q = Rational;

// Pf by expansion along the first row, (2k-1)!! terms.
Q pf_oracle(const Mat<Q>& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return 1;
    if (n % 2) return 0;
    Q s = 0;
    for (int j = 1; j < n; ++j) {
        if (a(0, j) == 0) continue;
        std::vector<int> keep;
        for (int i = 1; i < n; ++i)
            if (i != j) keep.push_back(i);
        Mat<Q> m(n - 2, n - 2);
        for (int r = 0; r < n - 2; ++r)
            for (int c = 0; c < n - 2; ++c) m(r, c) = a(keep[r], keep[c]);
        s += ((j % 2) ? Q(1) : Q(-1)) * a(0, j) * pf_oracle(m);
    }
    return s;
}

// Laplace expansion.
Q det_oracle(const Mat<Q>& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 1) return a(0, 0);
    Q s = 0;
    for (int j = 0; j < n; ++j) {
        if (a(0, j) == 0) continue;
        Mat<Q> m(n - 1, n - 1);
        for (int r = 1; r < n; ++r)
            for (int c = 0, cc = 0; c < n; ++c)
                if (c != j) m(r - 1, cc++) = a(r, c);
        s += ((j % 2) ? Q(-1) : Q(1)) * a(0, j) * det_oracle(m);
    }
    return s;
}

}  // namespace

TEST_CASE("pfaffian") {
    Mat<Q> two(2, 2);
    two << 0, 5, -5, 0;
    CHECK(pfaffian(two) == 5);

    Mat<Q> four = Mat<Q>::Zero(4, 4);
    int v = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            four(i, j) = v++;
            four(j, i) = -four(i, j);
        }
    CHECK(pfaffian(four) == 8);
    CHECK(det_oracle(four) == 64);
    CHECK(pfaffian(Mat<Q>(Mat<Q>::Zero(3, 3))) == 0);
    Mat<Q> notskew = four;
    notskew(0, 1) = 7;
    CHECK_THROWS_AS(pfaffian(notskew), Error);

    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + 2 * (t % 4);
        Mat<Q> a = random_rational_skew(n, rng);
        if (t % 10 == 9) {  // degenerate ones too
            a.row(0).setZero();
            a.col(0).setZero();
        }
        const Q pf = pfaffian(a);
        REQUIRE(pf == pf_oracle(a));
        REQUIRE(determinant(a) == pf * pf);
        if (n <= 6) REQUIRE(det_oracle(a) == pf * pf);
        if (t % 5 == 0) {
            Mat<Q> b = random_rational_invertible(n, rng);
            REQUIRE(pfaffian(Mat<Q>(b.transpose() * a * b)) == determinant(b) * pf);
        }
    }

    // doubles against the exact value
    for (int t = 0; t < 20; ++t) {
        const int n = 2 * (1 + t % 4);
        Mat<Q> a = random_rational_skew(n, rng);
        Eigen::MatrixXd ad(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ad(i, j) = static_cast<double>(a(i, j));
        const double exact = static_cast<double>(pfaffian(a));
        const double pd = pfaffian<double>(ad);
        CHECK(std::abs(pd - exact) <= 1e-10 * std::max(1.0, std::abs(exact)));
        CHECK(std::abs(pd * pd - ad.determinant()) <= 1e-8 * std::max(1.0, std::abs(ad.determinant())));
    }
}

TEST_CASE("hyperbolic coordinates and graph chart") {
    const int n = 3;
    QuadraticSpace<Q> split(split_form<Q>(n));
    Mat<Q> v0 = Mat<Q>::Zero(2 * n, n);
    v0.topRows(n) = Mat<Q>::Identity(n, n);
    Mat<Q> t = hyperbolic_coordinates(split, v0);
    CHECK(t == Mat<Q>(Mat<Q>::Identity(2 * n, 2 * n)));
    CHECK(graph_chart(v0) == Mat<Q>(Mat<Q>::Zero(n, n)));

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = random_spinor_instance(4, rng);
        Mat<Q> tt = hyperbolic_coordinates(inst.space, inst.v0);
        CHECK(Mat<Q>(tt.transpose() * inst.space.gram * tt) == split_form<Q>(4));
        CHECK(Mat<Q>(inverse(tt) * inst.v0).bottomRows(4) == Mat<Q>(Mat<Q>::Zero(4, 4)));
    }

    // round trip of a skew matrix through its graph
    for (int trial = 0; trial < 10; ++trial) {
        Mat<Q> a = random_rational_skew(4, rng);
        Mat<Q> x = random_rational_invertible(4, rng);
        Mat<Q> u(8, 4);
        u << x, a * x;
        CHECK(graph_chart(u) == a);
    }
    Mat<Q> u_bad(4, 2);
    u_bad << 1, 0, 0, 1, 1, 0, 0, 0;  // graph of a non-skew matrix
    CHECK_THROWS_AS(graph_chart(u_bad), Error);

    // n = 2, A = [[0, a], [-a, 0]]: U cap V0 is 2-dimensional exactly when a = 0
    QuadraticSpace<Q> sp2(split_form<Q>(2));
    Mat<Q> v02 = Mat<Q>::Zero(4, 2);
    v02.topRows(2) = Mat<Q>::Identity(2, 2);
    for (int a : {0, 3}) {
        Mat<Q> am(2, 2);
        am << 0, a, -a, 0;
        Mat<Q> u(4, 2);
        u << Mat<Q>::Identity(2, 2), am;
        CHECK(intersection_dimension(u, v02) == (a == 0 ? 2 : 0));
        CHECK(intersection_parity(u, v02, sp2) == 0);
    }
}

TEST_CASE("spinor square") {
    std::mt19937_64 rng(12);
    int exact_ok = 0;
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 4;  // n = 2..5, odd ones go through the hyperbolic extension
        auto inst = random_spinor_instance(n, rng);
        auto r = spinor_square_check(inst.u, inst.v0, inst.space);
        REQUIRE(!r.opposite_component);
        REQUIRE(r.extended == (n % 2 == 1));
        if (r.s == r.c * r.v * r.v) ++exact_ok;
        REQUIRE(r.residual == 0.0);
        REQUIRE(intersection_parity(inst.u, inst.v0, inst.space) == 0);
    }
    CHECK(exact_ok == 100);

    // skew chart of rank n - 2: U cap V0 has dimension 2 and both s and v vanish
    for (int t = 0; t < 10; ++t) {
        auto inst = random_spinor_instance(4, rng, 2);
        CHECK(intersection_dimension(inst.u, inst.v0) == 2);
        auto r = spinor_square_check(inst.u, inst.v0, inst.space);
        CHECK(r.s == 0);
        CHECK(r.v == 0);
        CHECK(!r.opposite_component);
    }

    // U = V0 gives parity n mod 2
    for (int n : {2, 3, 4}) {
        auto inst = random_spinor_instance(n, rng);
        CHECK(intersection_parity(inst.v0, inst.v0, inst.space) == n % 2);
    }

    // U = <e_1, f_2, ..., f_n> meets V0 in a line: the other component
    const int n = 4;
    QuadraticSpace<Q> sp(split_form<Q>(n));
    Mat<Q> v0 = Mat<Q>::Zero(2 * n, n);
    v0.topRows(n) = Mat<Q>::Identity(n, n);
    Mat<Q> u = Mat<Q>::Zero(2 * n, n);
    u(0, 0) = 1;
    for (int j = 1; j < n; ++j) u(n + j, j) = 1;
    CHECK(intersection_parity(u, v0, sp) == 1);
    auto r = spinor_square_check(u, v0, sp);
    CHECK(r.opposite_component);
    CHECK(r.s == 0);

    // parity is stable under small skew perturbations (doubles)
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
    a(0, 1) = 1e-3;
    a(1, 0) = -1e-3;
    a(2, 3) = 2.0;
    a(3, 2) = -2.0;
    QuadraticSpace<double> spd(split_form<double>(4));
    Eigen::MatrixXd v0d = Eigen::MatrixXd::Zero(8, 4);
    v0d.topRows(4).setIdentity();
    Eigen::MatrixXd ud(8, 4);
    ud << Eigen::MatrixXd::Identity(4, 4), a;
    CHECK(intersection_parity<double>(ud, v0d, spd) == 0);
    auto rd = spinor_square_check<double>(ud, v0d, spd);
    CHECK(rd.residual < 1e-8 * std::max(1.0, std::abs(rd.s)));
}
