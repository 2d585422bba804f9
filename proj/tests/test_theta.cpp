#include <doctest.h>

#include <random>

#include "thomae/theta.hpp"

using namespace thomae;

namespace {

// Plain series for g = 1 over |n| <= 60, no box logic.
cplx theta1_oracle(double a, double b, cplx z, cplx tau) {
    cplx s = 0.0;
    for (int n = -60; n <= 60; ++n) {
        const double v = n + a;
        s += std::exp(kI * kPi * (v * v * tau + 2.0 * v * (z + b)));
    }
    return s;
}

Eigen::VectorXd vd(std::initializer_list<double> c) {
    Eigen::VectorXd v(c.size());
    int i = 0;
    for (double x : c) v(i++) = x;
    return v;
}

VectorXc vc(std::initializer_list<cplx> c) {
    VectorXc v(c.size());
    int i = 0;
    for (cplx x : c) v(i++) = x;
    return v;
}

MatrixXc diag2(cplx a, cplx b) {
    MatrixXc m = MatrixXc::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("theta values against oracles") {
    PeriodMatrix ti(MatrixXc::Constant(1, 1, kI));
    const cplx t = theta(vd({0}), vd({0}), vc({0}), ti);
    // theta_3(0, i) = pi^{1/4} / Gamma(3/4)
    const double closed = std::pow(kPi, 0.25) / std::tgamma(0.75);
    CHECK(std::abs(t - 1.086434811213308) < 1e-12);
    CHECK(std::abs(t - closed) < 1e-12);
    CHECK(std::abs(t - theta1_oracle(0, 0, 0.0, kI)) < 1e-13);

    for (double a : {0.0, 0.5, 1.0 / 3})
        for (double b : {0.0, 0.5, 2.0 / 3}) {
            cplx z(0.31, -0.27), tau(0.2, 0.9);
            PeriodMatrix p(MatrixXc::Constant(1, 1, tau));
            CHECK(std::abs(theta(vd({a}), vd({b}), vc({z}), p) - theta1_oracle(a, b, z, tau)) < 1e-12);
        }

    std::mt19937_64 rng(7);
    // all halves: odd exactly when g is odd
    for (int g : {1, 3}) {
        auto tau = random_period_matrix(g, rng);
        Eigen::VectorXd h = Eigen::VectorXd::Constant(g, 0.5);
        CHECK(std::abs(theta(h, h, VectorXc::Zero(g), tau)) < 1e-12);
    }

    PeriodMatrix d(diag2(kI, 2.0 * kI));
    const cplx prod = theta1_oracle(0, 0, 0.0, kI) * theta1_oracle(0, 0, 0.0, 2.0 * kI);
    CHECK(std::abs(theta(vd({0, 0}), vd({0, 0}), vc({0, 0}), d) - prod) < 1e-12);
    VectorXc z = vc({cplx(0.1, 0.2), cplx(-0.3, 0.05)});
    const cplx prodz = theta1_oracle(0.5, 0, z(0), kI) * theta1_oracle(0, 1.0 / 3, z(1), 2.0 * kI);
    CHECK(std::abs(theta(vd({0.5, 0}), vd({0, 1.0 / 3}), z, d) - prodz) < 1e-12);

    MatrixXc bad = diag2(kI, -kI);
    CHECK_THROWS_AS(PeriodMatrix{bad}, Error);
}

TEST_CASE("automorphy factor and quasi-periodicity") {
    PeriodMatrix ti(MatrixXc::Constant(1, 1, kI));
    Eigen::VectorXi one = Eigen::VectorXi::Ones(1), zero = Eigen::VectorXi::Zero(1);
    CHECK(std::abs(automorphy_factor(vd({0.5}), vd({0}), one, zero, vc({0}), ti) + 1.0) < 1e-15);
    CHECK(std::abs(automorphy_factor(vd({0.3}), vd({0.2}), zero, zero, vc({0.4}), ti) - 1.0) < 1e-15);
    const cplx lam = automorphy_factor(vd({0}), vd({0}), zero, one, vc({0}), ti);
    CHECK(std::abs(lam - std::exp(kPi)) < 1e-12 * std::exp(kPi));
    const cplx th0 = theta(vd({0}), vd({0}), vc({0}), ti);
    const cplx tht = theta(vd({0}), vd({0}), vc({kI}), ti);
    CHECK(std::abs(tht / th0 - std::exp(kPi)) < 1e-10);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> k(-2, 2);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const int g = 1 + trial % 2;
        auto tau = random_period_matrix(g, rng);
        Eigen::VectorXd a(g), b(g);
        VectorXc z(g);
        Eigen::VectorXi p(g), q(g);
        for (int i = 0; i < g; ++i) {
            a(i) = u(rng);
            b(i) = u(rng);
            z(i) = cplx(u(rng), 0.5 * u(rng));
            p(i) = k(rng);
            q(i) = k(rng);
        }
        const cplx lhs = theta(a, b, z + p.cast<cplx>() + tau.tau() * q.cast<cplx>(), tau);
        const cplx rhs = automorphy_factor(a, b, p, q, z, tau) * theta(a, b, z, tau);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("shift identity, parity, heat equation") {
    PeriodMatrix ti(MatrixXc::Constant(1, 1, kI));
    CHECK(shift_identity_check(vd({0}), vd({0}), vc({cplx(0.2, 0.1)}), ti) == 0.0);
    CHECK(shift_identity_check(vd({0.5}), vd({0}), vc({cplx(0.3, 0.1)}), ti) < 1e-9);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::uniform_int_distribution<int> bit(0, 1);
    for (int trial = 0; trial < 10; ++trial) {
        auto tau = random_period_matrix(2, rng);
        Eigen::VectorXd a(2), b(2);
        VectorXc z(2);
        for (int i = 0; i < 2; ++i) {
            a(i) = 0.5 * bit(rng);
            b(i) = 0.5 * bit(rng);
            z(i) = cplx(u(rng), u(rng));
        }
        CHECK(shift_identity_check(a, b, z, tau) < 1e-8);
        const double sign = (static_cast<int>(std::lround(4 * a.dot(b))) % 2) ? -1.0 : 1.0;
        const cplx plus = theta(a, b, z, tau), minus = theta(a, b, -z, tau);
        CHECK(std::abs(minus - sign * plus) < 1e-8);
        Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
        CHECK(std::abs(theta(zero, zero, -z, tau) - theta(zero, zero, z, tau)) < 1e-10);
    }

    // 4 pi i d theta / d tau_jj = d^2 theta / d z_j^2
    auto tau = random_period_matrix(2, rng);
    Eigen::VectorXd a = vd({0.25, 0.0}), b = vd({0.0, 0.5});
    VectorXc z = vc({cplx(0.1, 0.05), cplx(-0.2, 0.1)});
    const double h = 1e-4;
    for (int j = 0; j < 2; ++j) {
        MatrixXc tp = tau.tau(), tm = tau.tau();
        tp(j, j) += h;
        tm(j, j) -= h;
        const cplx dtau = (theta(a, b, z, PeriodMatrix(tp)) - theta(a, b, z, PeriodMatrix(tm))) / (2 * h);
        VectorXc zp = z, zm = z;
        zp(j) += h;
        zm(j) -= h;
        const cplx d2z = (theta(a, b, zp, tau) - 2.0 * theta(a, b, z, tau) + theta(a, b, zm, tau)) / (h * h);
        CHECK(std::abs(4.0 * kPi * kI * dtau - d2z) / std::abs(d2z) < 1e-4);
    }
}

TEST_CASE("torsion points and analytic pairing") {
    auto t22 = torsion_points(2, 2);
    CHECK(t22.size() == 16);
    auto t31 = torsion_points(3, 1);
    CHECK(t31.size() == 9);
    CHECK(t31[0].a(0) == 0);
    CHECK(t31[0].b(0) == 0);
    CHECK(t31[1].b(0) == 1);
    CHECK(t31[3].a(0) == 1);
    CHECK(torsion_points(3, 1)[5] == t31[5]);

    Characteristic p(2, Eigen::VectorXi::Zero(1), Eigen::VectorXi::Ones(1));
    Characteristic q(2, Eigen::VectorXi::Ones(1), Eigen::VectorXi::Zero(1));
    CHECK(std::abs(analytic_d(p, q) + 1.0) < 1e-15);
    CHECK(std::abs(analytic_d(p, Characteristic(2, Eigen::VectorXi::Zero(1), Eigen::VectorXi::Zero(1))) - 1.0) < 1e-15);
    Characteristic p3(3, Eigen::VectorXi::Zero(1), Eigen::VectorXi::Ones(1));
    Characteristic q3(3, Eigen::VectorXi::Ones(1), Eigen::VectorXi::Zero(1));
    CHECK(std::abs(analytic_d(p3, q3) - root_of_unity(1, 3)) < 1e-15);

    for (int n : {2, 3, 4}) {
        auto d = analytic_d_pairing(n, 2), dn = analytic_normal_pairing(n, 2), e = symplectic_pairing(n, 2);
        for (auto& x : all_points(n, 2))
            for (auto& y : all_points(n, 2)) {
                auto cx = Characteristic::from_point(x), cy = Characteristic::from_point(y);
                REQUIRE(std::abs(analytic_d(cx, cy) - d(x, y).value()) < 1e-14);
                REQUIRE((d(x, y) * d(y, x).inverse()) == (dn(x, y) * dn(y, x).inverse()));
                REQUIRE(std::abs(analytic_weil_pairing(cx, cy) - e(x, y).inverse().value()) < 1e-14);
            }
    }
}

TEST_CASE("analytic Weil family") {
    std::mt19937_64 rng(2024);
    for (int n : {2, 3}) {
        auto tau = random_period_matrix(2, rng);
        AnalyticWeilFamily fam(n, tau);
        auto d = analytic_normal_pairing(n, 2);
        auto pts = all_points(n, 2);
        double worst = 0.0, inv = 0.0;
        for (int s = 0; s < 50; ++s) {
            VectorXc z = fam.sample_point(rng);
            CHECK(std::abs(fam.evaluate(LPoint(n, 2), z) - 1.0) == 0.0);
            const auto& p = pts[1 + s % (pts.size() - 1)];
            const auto& q = pts[(7 * s + 3) % pts.size()];
            const cplx lhs = fam.evaluate(p, z) * fam.evaluate(q, fam.translate(z, p));
            const cplx rhs = d(p, q).value() * fam.evaluate(p + q, z);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
            const cplx pm = fam.evaluate(p, z) * fam.evaluate(-p, fam.translate(z, p));
            inv = std::max(inv, std::abs(pm - d(p, -p).value()));
        }
        CHECK(worst < 1e-8);
        CHECK(inv < 1e-8);
    }
    // a zero of theta[0;0]: the odd half period shifted onto the divisor, z = (tau + 1)/2 for g = 1
    PeriodMatrix ti(MatrixXc::Constant(1, 1, kI));
    AnalyticWeilFamily f1(2, ti);
    CHECK_THROWS_AS(f1.evaluate(LPoint::unit(2, 1, 0), vc({0.5 * (kI + 1.0)})), PoleProximity);
}
